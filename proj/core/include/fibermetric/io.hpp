// Result persistence: FLD1 binary fields, RFC-4180 CSV tables, SHA-256
// checksums.
//
// FLD1 layout (little-endian throughout):
//   bytes 0..7   magic "FLD1\0\0\0\0"
//   bytes 8..11  u32 n_side
//   byte  12     u8 field kind (field.hpp FieldKind)
//   byte  13     u8 complex flag (0 real, 1 complex)
//   bytes 14..15 reserved (zero)
//   payload      row-major f64 samples; complex fields interleave re, im.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fibermetric/field.hpp"

namespace fm {

struct FldData {
  std::uint32_t n_side = 0;
  FieldKind kind = FieldKind::generic;
  bool is_complex = false;
  std::vector<double> re, im;  // row-major; im empty for real fields
};

void write_fld(const std::filesystem::path& path, const Field& f);
void write_fld(const std::filesystem::path& path, const CField& f);
FldData read_fld(const std::filesystem::path& path);

// RFC-4180 CSV: CRLF row terminators, fields quoted when they contain a
// comma, quote, or newline; doubles rendered with round-trip precision.
std::string csv_escape(const std::string& s);
std::string csv_number(double v);
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// SHA-256 hex digests (OpenSSL-backed)
std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_hex(const std::string& s);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace fm
