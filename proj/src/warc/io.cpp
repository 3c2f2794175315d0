#include "darc/warc/io.hpp"

#include <zlib.h>

#include <array>
#include <cctype>
#include <cstring>

#include "darc/error.hpp"
#include "darc/warc/digest.hpp"

namespace darc::warc {

namespace {

std::string frame_record(WarcRecord& record) {
    record.set_header("Content-Length", std::to_string(record.block.size()));
    std::string out = record.version + "\r\n";
    for (const auto& [name, value] : record.headers) out += name + ": " + value + "\r\n";
    out += "\r\n";
    out += record.block;
    out += "\r\n\r\n";
    return out;
}

std::string gzip_member(const std::string& data) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 31, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        raise(Errc::io_failure, "deflateInit2 failed");
    std::string out;
    out.resize(deflateBound(&zs, data.size()));
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    if (rc != Z_STREAM_END) {
        deflateEnd(&zs);
        raise(Errc::io_failure, "deflate failed");
    }
    out.resize(zs.total_out);
    deflateEnd(&zs);
    return out;
}

void verify_digests(const WarcRecord& record, std::uint64_t offset) {
    if (auto block_digest = record.header("WARC-Block-Digest")) {
        if (*block_digest != warc_digest_label(record.block))
            raise(Errc::digest_mismatch, "block digest mismatch in record at offset " +
                                             std::to_string(offset));
    }
    if (record.is_http()) {
        if (auto payload_digest = record.header("WARC-Payload-Digest")) {
            if (*payload_digest != warc_digest_label(record.payload()))
                raise(Errc::digest_mismatch, "payload digest mismatch in record at offset " +
                                                 std::to_string(offset));
        }
    }
}

// Parses one framed record out of `data` starting at `pos`. `file_offset` is
// where data[pos] sits in the underlying file, for error messages.
WarcRecord parse_framed(const std::string& data, std::size_t& pos, std::uint64_t file_offset) {
    auto fail = [&](const std::string& what, std::size_t at) -> void {
        raise(Errc::malformed_record,
              what + " at offset " + std::to_string(file_offset + at));
    };

    auto read_line = [&](std::string& line) {
        auto eol = data.find("\r\n", pos);
        if (eol == std::string::npos) fail("unterminated header line", data.size());
        line = data.substr(pos, eol - pos);
        pos = eol + 2;
    };

    WarcRecord record;
    std::string line;
    read_line(line);
    if (line.rfind("WARC/", 0) != 0) fail("missing WARC version line", pos - line.size() - 2);
    record.version = line;

    while (true) {
        read_line(line);
        if (line.empty()) break;
        if ((line[0] == ' ' || line[0] == '\t') && !record.headers.empty()) {
            // obs-fold continuation
            record.headers.back().second += " " + std::string(line.begin() + 1, line.end());
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) fail("header without colon", pos - line.size() - 2);
        std::string name = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
            value.erase(value.begin());
        record.headers.emplace_back(std::move(name), std::move(value));
    }

    auto length_text = record.header("Content-Length");
    if (!length_text) fail("missing Content-Length", pos);
    std::uint64_t content_length = 0;
    for (char c : *length_text) {
        if (!std::isdigit(static_cast<unsigned char>(c))) fail("bad Content-Length", pos);
        content_length = content_length * 10 + (c - '0');
    }

    if (pos + content_length > data.size()) fail("truncated record block", data.size());
    record.block = data.substr(pos, content_length);
    pos += content_length;
    if (data.compare(pos, 4, "\r\n\r\n") != 0) fail("missing record terminator", pos);
    pos += 4;
    return record;
}

}  // namespace

WarcWriter::WarcWriter(const std::filesystem::path& path, Options options)
    : path_(path), options_(options) {
    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) raise(Errc::io_failure, "cannot open for append: " + path.string());
    out_.seekp(0, std::ios::end);
    bytes_written_ = static_cast<std::uint64_t>(out_.tellp());
}

WarcWriter::~WarcWriter() = default;

Placement WarcWriter::write(WarcRecord record) {
    std::string framed = frame_record(record);
    if (options_.gzip) framed = gzip_member(framed);
    Placement placement{bytes_written_, framed.size()};
    out_.write(framed.data(), static_cast<std::streamsize>(framed.size()));
    out_.flush();
    if (!out_) raise(Errc::io_failure, "write failed: " + path_.string());
    bytes_written_ += framed.size();
    return placement;
}

struct WarcReader::Impl {
    std::string data;  // whole file; desk-scale archives are small
    std::size_t pos = 0;
    bool gzipped = false;
};

WarcReader::WarcReader(const std::filesystem::path& path) : impl_(new Impl) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_failure, "cannot open: " + path.string());
    impl_->data.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    impl_->gzipped = impl_->data.size() >= 2 &&
                     static_cast<unsigned char>(impl_->data[0]) == 0x1f &&
                     static_cast<unsigned char>(impl_->data[1]) == 0x8b;
}

WarcReader::~WarcReader() = default;

std::optional<ReadRecord> WarcReader::next() {
    Impl& st = *impl_;
    // skip inter-record padding some writers leave
    while (st.pos < st.data.size() &&
           (st.data[st.pos] == '\r' || st.data[st.pos] == '\n'))
        ++st.pos;
    if (st.pos >= st.data.size()) return std::nullopt;

    if (!st.gzipped) {
        std::uint64_t start = st.pos;
        WarcRecord record = parse_framed(st.data, st.pos, 0);
        verify_digests(record, start);
        return ReadRecord{std::move(record), {start, st.pos - start}};
    }

    // one gzip member per record
    std::uint64_t member_start = st.pos;
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) raise(Errc::io_failure, "inflateInit2 failed");
    std::string plain;
    std::array<char, 65536> chunk;
    zs.next_in = reinterpret_cast<Bytef*>(st.data.data() + st.pos);
    zs.avail_in = static_cast<uInt>(st.data.size() - st.pos);
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = reinterpret_cast<Bytef*>(chunk.data());
        zs.avail_out = static_cast<uInt>(chunk.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            raise(Errc::malformed_record,
                  "bad gzip member at offset " + std::to_string(member_start));
        }
        plain.append(chunk.data(), chunk.size() - zs.avail_out);
    }
    std::uint64_t member_length = zs.total_in;
    inflateEnd(&zs);
    st.pos += member_length;

    std::size_t inner = 0;
    WarcRecord record = parse_framed(plain, inner, member_start);
    if (inner != plain.size())
        raise(Errc::malformed_record,
              "trailing bytes inside gzip member at offset " + std::to_string(member_start));
    verify_digests(record, member_start);
    return ReadRecord{std::move(record), {member_start, member_length}};
}

std::vector<ReadRecord> read_records(const std::filesystem::path& path) {
    WarcReader reader(path);
    std::vector<ReadRecord> out;
    while (auto record = reader.next()) out.push_back(std::move(*record));
    return out;
}

WarcRecord read_record_at(const std::filesystem::path& path, const Placement& placement) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_failure, "cannot open: " + path.string());
    in.seekg(static_cast<std::streamoff>(placement.offset));
    std::string framed(placement.length, '\0');
    in.read(framed.data(), static_cast<std::streamsize>(framed.size()));
    if (in.gcount() != static_cast<std::streamsize>(framed.size()))
        raise(Errc::malformed_record,
              "short read at offset " + std::to_string(placement.offset));

    if (framed.size() >= 2 && static_cast<unsigned char>(framed[0]) == 0x1f &&
        static_cast<unsigned char>(framed[1]) == 0x8b) {
        z_stream zs{};
        if (inflateInit2(&zs, 15 + 16) != Z_OK) raise(Errc::io_failure, "inflateInit2 failed");
        std::string plain;
        std::array<char, 65536> chunk;
        zs.next_in = reinterpret_cast<Bytef*>(framed.data());
        zs.avail_in = static_cast<uInt>(framed.size());
        int rc = Z_OK;
        while (rc != Z_STREAM_END) {
            zs.next_out = reinterpret_cast<Bytef*>(chunk.data());
            zs.avail_out = static_cast<uInt>(chunk.size());
            rc = inflate(&zs, Z_NO_FLUSH);
            if (rc != Z_OK && rc != Z_STREAM_END) {
                inflateEnd(&zs);
                raise(Errc::malformed_record,
                      "bad gzip member at offset " + std::to_string(placement.offset));
            }
            plain.append(chunk.data(), chunk.size() - zs.avail_out);
        }
        inflateEnd(&zs);
        std::size_t pos = 0;
        WarcRecord record = parse_framed(plain, pos, placement.offset);
        verify_digests(record, placement.offset);
        return record;
    }

    std::size_t pos = 0;
    WarcRecord record = parse_framed(framed, pos, placement.offset);
    verify_digests(record, placement.offset);
    return record;
}

}  // namespace darc::warc
