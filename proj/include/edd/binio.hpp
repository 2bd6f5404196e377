#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "edd/common.hpp"

namespace edd {

// Little-endian binary file helpers shared by the EDW1/EDR1/EDN1 formats.
// Bytes are packed explicitly so the formats do not depend on host order.

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::string& path)
      : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) throw DataError("cannot open for writing: " + path);
  }

  void magic(const char tag[4]) { out_.write(tag, 4); }

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }

  void u32(std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out_.write(b, 4);
  }

  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out_.write(b, 8);
  }

  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void f64_array(const double* data, std::size_t n) {
    std::vector<char> buf(n * 8);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t v = std::bit_cast<std::uint64_t>(data[i]);
      for (int j = 0; j < 8; ++j)
        buf[i * 8 + j] = static_cast<char>((v >> (8 * j)) & 0xFF);
    }
    out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }

  void f64_array(const std::vector<double>& v) { f64_array(v.data(), v.size()); }

  void close() {
    out_.close();
    if (!out_) throw DataError("write failed: " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::string& path)
      : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw DataError("cannot open: " + path);
  }

  void expect_magic(const char tag[4]) {
    char b[4];
    in_.read(b, 4);
    check();
    if (std::memcmp(b, tag, 4) != 0)
      throw DataError(path_ + ": bad magic, expected " + std::string(tag, 4));
  }

  std::uint8_t u8() {
    int c = in_.get();
    check();
    return static_cast<std::uint8_t>(c);
  }

  std::uint32_t u32() {
    unsigned char b[4];
    in_.read(reinterpret_cast<char*>(b), 4);
    check();
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    unsigned char b[8];
    in_.read(reinterpret_cast<char*>(b), 8);
    check();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  void f64_array(double* data, std::size_t n) {
    std::vector<unsigned char> buf(n * 8);
    in_.read(reinterpret_cast<char*>(buf.data()),
             static_cast<std::streamsize>(buf.size()));
    check();
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t v = 0;
      for (int j = 0; j < 8; ++j) v |= std::uint64_t(buf[i * 8 + j]) << (8 * j);
      data[i] = std::bit_cast<double>(v);
    }
  }

  std::vector<double> f64_vector(std::size_t n) {
    std::vector<double> v(n);
    f64_array(v.data(), n);
    return v;
  }

 private:
  void check() {
    if (!in_) throw DataError(path_ + ": truncated or unreadable");
  }

  std::ifstream in_;
  std::string path_;
};

}  // namespace edd
