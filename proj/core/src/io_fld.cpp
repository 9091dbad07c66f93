#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "fibermetric/io.hpp"

static_assert(std::endian::native == std::endian::little,
              "FLD1 writer assumes a little-endian host");

namespace fm {

namespace {

constexpr char kMagic[8] = {'F', 'L', 'D', '1', 0, 0, 0, 0};

void write_header(std::ofstream& out, std::uint32_t n, FieldKind kind,
                  bool is_complex) {
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char*>(&n), 4);
  const unsigned char k = static_cast<unsigned char>(kind);
  const unsigned char c = is_complex ? 1 : 0;
  const unsigned char reserved[2] = {0, 0};
  out.write(reinterpret_cast<const char*>(&k), 1);
  out.write(reinterpret_cast<const char*>(&c), 1);
  out.write(reinterpret_cast<const char*>(reserved), 2);
}

std::ofstream open_binary(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_fld(const std::filesystem::path& path, const Field& f) {
  std::ofstream out = open_binary(path);
  write_header(out, static_cast<std::uint32_t>(f.grid.n_side), f.kind, false);
  out.write(reinterpret_cast<const char*>(f.v.data()),
            std::streamsize(f.v.size() * sizeof(double)));
  if (!out) throw std::runtime_error("short write: " + path.string());
}

void write_fld(const std::filesystem::path& path, const CField& f) {
  std::ofstream out = open_binary(path);
  write_header(out, static_cast<std::uint32_t>(f.grid.n_side), f.kind, true);
  // std::complex<double> is layout-compatible with double[2] (re, im)
  out.write(reinterpret_cast<const char*>(f.v.data()),
            std::streamsize(f.v.size() * sizeof(cplx)));
  if (!out) throw std::runtime_error("short write: " + path.string());
}

FldData read_fld(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("not an FLD1 file: " + path.string());
  FldData d;
  unsigned char kind = 0, is_complex = 0, reserved[2];
  in.read(reinterpret_cast<char*>(&d.n_side), 4);
  in.read(reinterpret_cast<char*>(&kind), 1);
  in.read(reinterpret_cast<char*>(&is_complex), 1);
  in.read(reinterpret_cast<char*>(reserved), 2);
  if (!in) throw std::runtime_error("truncated FLD1 header: " + path.string());
  if (kind > 3) throw std::runtime_error("bad field kind: " + path.string());
  d.kind = static_cast<FieldKind>(kind);
  d.is_complex = is_complex != 0;
  const std::size_t count = std::size_t(d.n_side) * d.n_side;
  d.re.resize(count);
  if (d.is_complex) {
    d.im.resize(count);
    std::vector<double> inter(2 * count);
    in.read(reinterpret_cast<char*>(inter.data()),
            std::streamsize(inter.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated FLD1 payload: " + path.string());
    for (std::size_t k = 0; k < count; ++k) {
      d.re[k] = inter[2 * k];
      d.im[k] = inter[2 * k + 1];
    }
  } else {
    in.read(reinterpret_cast<char*>(d.re.data()),
            std::streamsize(count * sizeof(double)));
    if (!in) throw std::runtime_error("truncated FLD1 payload: " + path.string());
  }
  return d;
}

}  // namespace fm
