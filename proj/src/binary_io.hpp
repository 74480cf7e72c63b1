#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <utility>

#include "ptycho/errors.hpp"

namespace ptycho::detail {

// Explicit little-endian byte assembly, independent of host order.

inline void put_bytes(std::string& out, std::uint64_t v, int n) {
  for (int i = 0; i < n; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u16(std::string& out, std::uint16_t v) { put_bytes(out, v, 2); }
inline void put_u32(std::string& out, std::uint32_t v) { put_bytes(out, v, 4); }
inline void put_u64(std::string& out, std::uint64_t v) { put_bytes(out, v, 8); }

inline void put_i32(std::string& out, std::int32_t v) {
  put_bytes(out, static_cast<std::uint32_t>(v), 4);
}

inline void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  f.flush();
  if (!f) throw IoError("failed writing " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw IoError("cannot open " + path);
  const std::streamsize size = f.tellg();
  f.seekg(0);
  std::string bytes(static_cast<std::size_t>(size), '\0');
  f.read(bytes.data(), size);
  if (!f) throw IoError("failed reading " + path);
  return bytes;
}

class Reader {
 public:
  Reader(std::string bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::uint64_t get_bytes(int n) {
    if (pos_ + static_cast<std::size_t>(n) > bytes_.size()) fail("truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::uint8_t get_u8() { return static_cast<std::uint8_t>(get_bytes(1)); }
  std::uint16_t get_u16() { return static_cast<std::uint16_t>(get_bytes(2)); }
  std::uint32_t get_u32() { return static_cast<std::uint32_t>(get_bytes(4)); }
  std::uint64_t get_u64() { return get_bytes(8); }
  std::int32_t get_i32() { return static_cast<std::int32_t>(get_u32()); }
  double get_f64() { return std::bit_cast<double>(get_bytes(8)); }

  void expect_magic(const char* magic4) {
    if (pos_ + 4 > bytes_.size() || std::memcmp(bytes_.data() + pos_, magic4, 4) != 0) {
      fail(std::string("bad magic, expected \"") + magic4 + "\"");
    }
    pos_ += 4;
  }

  void expect_end() {
    if (pos_ != bytes_.size()) fail("trailing bytes after payload");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw IoError(path_ + ": " + msg); }

  const std::string& path() const { return path_; }

 private:
  std::string bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace ptycho::detail
