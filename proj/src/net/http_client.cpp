#include "darc/net/http_client.hpp"

#include <algorithm>
#include <cctype>

#include "darc/error.hpp"

namespace darc::net {

namespace {

bool iequals(const std::string& a, const std::string& b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

struct BufferedReader {
    TcpStream& stream;
    const HttpLimits& limits;
    std::string buffer;
    std::size_t pos = 0;
    bool eof = false;

    bool fill() {
        if (eof) return false;
        char chunk[16384];
        std::size_t got = stream.read_some(chunk, sizeof chunk, limits.timeout_ms);
        if (got == 0) {
            eof = true;
            return false;
        }
        buffer.append(chunk, got);
        return true;
    }

    // reads through the next CRLF, returning the line without it
    std::string read_line(std::uint64_t cap) {
        while (true) {
            auto eol = buffer.find("\r\n", pos);
            if (eol != std::string::npos) {
                std::string line = buffer.substr(pos, eol - pos);
                pos = eol + 2;
                return line;
            }
            if (buffer.size() - pos > cap) raise(Errc::too_large, "header section too large");
            if (!fill()) raise(Errc::io_failure, "connection closed inside header");
        }
    }

    std::string read_exactly(std::uint64_t n) {
        while (buffer.size() - pos < n) {
            if (!fill()) raise(Errc::io_failure, "connection closed inside body");
        }
        std::string out = buffer.substr(pos, n);
        pos += n;
        return out;
    }

    std::string read_to_eof(std::uint64_t cap) {
        while (fill()) {
            if (buffer.size() - pos > cap) raise(Errc::too_large, "response body over limit");
        }
        std::string out = buffer.substr(pos);
        pos = buffer.size();
        return out;
    }
};

}  // namespace

std::optional<std::string> HttpResponse::header(const std::string& name) const {
    for (const auto& [key, value] : headers) {
        if (iequals(key, name)) return value;
    }
    return std::nullopt;
}

HttpResponse http_get(TcpStream& stream, const std::string& host_header,
                      const std::string& path_and_query, const HttpLimits& limits,
                      const std::string& user_agent, std::string* request_head_out) {
    std::string request = "GET " + path_and_query + " HTTP/1.1\r\n" +
                          "Host: " + host_header + "\r\n" +
                          "User-Agent: " + user_agent + "\r\n" +
                          "Accept: */*\r\n" +
                          "Connection: close\r\n\r\n";
    if (request_head_out) *request_head_out = request;
    stream.write_all(request);

    BufferedReader reader{stream, limits, {}, 0, false};
    HttpResponse response;

    std::string status_line = reader.read_line(limits.max_head_bytes);
    if (status_line.rfind("HTTP/", 0) != 0)
        raise(Errc::unparseable, "bad status line: " + status_line);
    auto sp = status_line.find(' ');
    if (sp == std::string::npos || sp + 4 > status_line.size())
        raise(Errc::unparseable, "bad status line: " + status_line);
    response.status = 0;
    for (int i = 1; i <= 3; ++i) {
        char c = status_line[sp + i];
        if (!std::isdigit(static_cast<unsigned char>(c)))
            raise(Errc::unparseable, "bad status code: " + status_line);
        response.status = response.status * 10 + (c - '0');
    }

    std::string head = status_line + "\r\n";
    bool chunked = false;
    std::optional<std::uint64_t> content_length;
    while (true) {
        std::string line = reader.read_line(limits.max_head_bytes);
        if (line.empty()) break;
        head += line + "\r\n";
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string name = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
            value.erase(value.begin());
        if (iequals(name, "Transfer-Encoding") &&
            value.find("chunked") != std::string::npos)
            chunked = true;
        if (iequals(name, "Content-Length")) {
            std::uint64_t n = 0;
            for (char c : value) {
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    raise(Errc::unparseable, "bad Content-Length: " + value);
                n = n * 10 + (c - '0');
            }
            content_length = n;
        }
        response.headers.emplace_back(std::move(name), std::move(value));
    }

    if (chunked) {
        while (true) {
            std::string size_line = reader.read_line(limits.max_head_bytes);
            std::uint64_t chunk_size = 0;
            for (char c : size_line) {
                if (c == ';') break;  // chunk extensions ignored
                int digit;
                if (c >= '0' && c <= '9') digit = c - '0';
                else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
                else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
                else raise(Errc::unparseable, "bad chunk size: " + size_line);
                chunk_size = chunk_size * 16 + digit;
            }
            if (chunk_size == 0) break;
            if (response.body.size() + chunk_size > limits.max_body_bytes)
                raise(Errc::too_large, "response body over limit");
            response.body += reader.read_exactly(chunk_size);
            reader.read_exactly(2);  // chunk CRLF
        }
        // trailers until blank line
        while (!reader.read_line(limits.max_head_bytes).empty()) {
        }
        // Re-frame for storage: the archived response carries the decoded
        // body, so Transfer-Encoding goes and Content-Length comes in.
        std::string reframed;
        std::size_t line_start = 0;
        while (line_start < head.size()) {
            auto eol = head.find("\r\n", line_start);
            std::string line = head.substr(line_start, eol - line_start);
            line_start = eol + 2;
            std::string lower = line;
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            if (lower.rfind("transfer-encoding:", 0) == 0) continue;
            reframed += line + "\r\n";
        }
        reframed += "Content-Length: " + std::to_string(response.body.size()) + "\r\n";
        response.head = reframed + "\r\n";
        return response;
    }

    if (content_length) {
        if (*content_length > limits.max_body_bytes)
            raise(Errc::too_large, "declared Content-Length over limit");
        response.body = reader.read_exactly(*content_length);
    } else {
        response.body = reader.read_to_eof(limits.max_body_bytes);
    }
    response.head = head + "\r\n";
    return response;
}

}  // namespace darc::net
