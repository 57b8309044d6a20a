#include "gazekit/zip.hpp"

#include <zlib.h>

#include <cstdint>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;  // 1980-01-01
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kUtf8Flag = 0x0800;

void put16(std::string& out, std::uint16_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
}

void put32(std::string& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v & 0xffff));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint32_t crc_of(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

class Reader {
 public:
  Reader(std::string_view bytes, const std::string& label) : bytes_(bytes), label_(label) {}

  std::uint16_t u16(std::size_t at) const {
    need(at, 2);
    return static_cast<std::uint16_t>(byte(at) | (byte(at + 1) << 8));
  }
  std::uint32_t u32(std::size_t at) const {
    return static_cast<std::uint32_t>(u16(at)) | (static_cast<std::uint32_t>(u16(at + 2)) << 16);
  }
  std::string_view slice(std::size_t at, std::size_t n) const {
    need(at, n);
    return bytes_.substr(at, n);
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SchemaMismatch, label_ + ": " + what);
  }

 private:
  unsigned byte(std::size_t at) const { return static_cast<unsigned char>(bytes_[at]); }
  void need(std::size_t at, std::size_t n) const {
    if (at > bytes_.size() || n > bytes_.size() - at) fail("truncated zip");
  }
  std::string_view bytes_;
  const std::string& label_;
};

std::string inflate_raw(std::string_view in, std::size_t expected, const Reader& r) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) r.fail("inflate init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) r.fail("corrupt deflate stream");
  return out;
}

}  // namespace

std::string write_zip(const std::vector<ZipEntry>& entries) {
  std::string out;
  std::string central;
  for (const auto& e : entries) {
    const auto offset = static_cast<std::uint32_t>(out.size());
    const auto crc = crc_of(e.data);
    const auto size = static_cast<std::uint32_t>(e.data.size());
    const auto name_len = static_cast<std::uint16_t>(e.name.size());

    put32(out, kLocalSig);
    put16(out, 20);
    put16(out, kUtf8Flag);
    put16(out, 0);  // stored
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, name_len);
    put16(out, 0);
    out += e.name;
    out += e.data;

    put32(central, kCentralSig);
    put16(central, 20);
    put16(central, 20);
    put16(central, kUtf8Flag);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, name_len);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, !e.name.empty() && e.name.back() == '/' ? 0x10 : 0);
    put32(central, offset);
    central += e.name;
  }
  const auto central_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, central_offset);
  put16(out, 0);
  return out;
}

std::vector<ZipEntry> read_zip(std::string_view bytes, const std::string& label) {
  Reader r(bytes, label);
  if (bytes.size() < 22) r.fail("not a zip archive");
  std::size_t end = std::string_view::npos;
  const std::size_t lowest = bytes.size() >= 22 + 0xffff ? bytes.size() - 22 - 0xffff : 0;
  for (std::size_t at = bytes.size() - 22 + 1; at-- > lowest;) {
    if (r.u32(at) == kEndSig) {
      end = at;
      break;
    }
  }
  if (end == std::string_view::npos) r.fail("end of central directory not found");

  const std::size_t count = r.u16(end + 10);
  std::size_t at = r.u32(end + 16);
  std::vector<ZipEntry> entries;
  for (std::size_t i = 0; i < count; ++i) {
    if (r.u32(at) != kCentralSig) r.fail("bad central directory entry");
    const auto flags = r.u16(at + 8);
    const auto method = r.u16(at + 10);
    const auto crc = r.u32(at + 16);
    const auto packed = r.u32(at + 20);
    const auto size = r.u32(at + 24);
    const auto name_len = r.u16(at + 28);
    const auto extra_len = r.u16(at + 30);
    const auto comment_len = r.u16(at + 32);
    const auto local = r.u32(at + 42);
    ZipEntry entry;
    entry.name = std::string(r.slice(at + 46, name_len));
    at += 46 + name_len + extra_len + comment_len;

    if (flags & 0x1) r.fail(entry.name + ": encrypted entries are not supported");
    if (r.u32(local) != kLocalSig) r.fail(entry.name + ": bad local header");
    const std::size_t data_at = local + 30 + r.u16(local + 26) + r.u16(local + 28);
    const auto raw = r.slice(data_at, packed);
    if (method == 0) {
      if (packed != size) r.fail(entry.name + ": size mismatch");
      entry.data = std::string(raw);
    } else if (method == 8) {
      entry.data = inflate_raw(raw, size, r);
    } else {
      r.fail(entry.name + ": unsupported compression method " + std::to_string(method));
    }
    if (crc_of(entry.data) != crc) r.fail(entry.name + ": CRC mismatch");
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace gazekit
