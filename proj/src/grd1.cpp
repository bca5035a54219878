#include "wnl/grd1.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace wnl {

namespace {

static_assert(std::endian::native == std::endian::little,
              "GRD1 writer assumes a little endian host");

constexpr char kMagic[8] = {'G', 'R', 'D', 'F', '0', '0', '0', '1'};

struct Header {
  std::uint32_t kind = 0;
  std::uint32_t nx = 0, ny = 0;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};

void write_header(std::ofstream& os, const Header& h) {
  os.write(kMagic, 8);
  os.write(reinterpret_cast<const char*>(&h.kind), 4);
  os.write(reinterpret_cast<const char*>(&h.nx), 4);
  os.write(reinterpret_cast<const char*>(&h.ny), 4);
  os.write(reinterpret_cast<const char*>(&h.xmin), 8);
  os.write(reinterpret_cast<const char*>(&h.xmax), 8);
  os.write(reinterpret_cast<const char*>(&h.ymin), 8);
  os.write(reinterpret_cast<const char*>(&h.ymax), 8);
}

Header read_header(std::ifstream& is, const std::string& path) {
  char magic[8];
  Header h;
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("GRD1: bad magic in " + path);
  is.read(reinterpret_cast<char*>(&h.kind), 4);
  is.read(reinterpret_cast<char*>(&h.nx), 4);
  is.read(reinterpret_cast<char*>(&h.ny), 4);
  is.read(reinterpret_cast<char*>(&h.xmin), 8);
  is.read(reinterpret_cast<char*>(&h.xmax), 8);
  is.read(reinterpret_cast<char*>(&h.ymin), 8);
  is.read(reinterpret_cast<char*>(&h.ymax), 8);
  if (!is) throw IoError("GRD1: truncated header in " + path);
  if (h.kind > 1) throw IoError("GRD1: unknown kind in " + path);
  return h;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("GRD1: cannot open " + path);
  return is;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("GRD1: cannot create " + path);
  return os;
}

}  // namespace

void write_grd1(const std::string& path, const RealField& f) {
  auto os = open_out(path);
  write_header(os, {0, static_cast<std::uint32_t>(f.grid.nx), static_cast<std::uint32_t>(f.grid.ny),
                    f.grid.xmin, f.grid.xmax, f.grid.ymin, f.grid.ymax});
  std::vector<double> row(f.grid.ny);
  for (int ix = 0; ix < f.grid.nx; ++ix) {
    for (int iy = 0; iy < f.grid.ny; ++iy) row[iy] = f.values(ix, iy);
    os.write(reinterpret_cast<const char*>(row.data()), 8 * row.size());
  }
  if (!os) throw IoError("GRD1: write failed for " + path);
}

void write_grd1(const std::string& path, const ComplexField& f) {
  auto os = open_out(path);
  write_header(os, {1, static_cast<std::uint32_t>(f.grid.nx), static_cast<std::uint32_t>(f.grid.ny),
                    f.grid.xmin, f.grid.xmax, f.grid.ymin, f.grid.ymax});
  std::vector<double> row(2 * f.grid.ny);
  for (int ix = 0; ix < f.grid.nx; ++ix) {
    for (int iy = 0; iy < f.grid.ny; ++iy) {
      row[2 * iy] = f.values(ix, iy).real();
      row[2 * iy + 1] = f.values(ix, iy).imag();
    }
    os.write(reinterpret_cast<const char*>(row.data()), 8 * row.size());
  }
  if (!os) throw IoError("GRD1: write failed for " + path);
}

RealField read_grd1_real(const std::string& path) {
  auto is = open_in(path);
  const Header h = read_header(is, path);
  if (h.kind != 0) throw IoError("GRD1: expected a real field in " + path);
  RealField f(Grid2D(h.nx, h.ny, h.xmin, h.xmax, h.ymin, h.ymax));
  std::vector<double> row(h.ny);
  for (std::uint32_t ix = 0; ix < h.nx; ++ix) {
    is.read(reinterpret_cast<char*>(row.data()), 8 * row.size());
    if (!is) throw IoError("GRD1: truncated payload in " + path);
    for (std::uint32_t iy = 0; iy < h.ny; ++iy) f.values(ix, iy) = row[iy];
  }
  return f;
}

ComplexField read_grd1_complex(const std::string& path) {
  auto is = open_in(path);
  const Header h = read_header(is, path);
  if (h.kind != 1) throw IoError("GRD1: expected a complex field in " + path);
  ComplexField f(Grid2D(h.nx, h.ny, h.xmin, h.xmax, h.ymin, h.ymax));
  std::vector<double> row(2 * h.ny);
  for (std::uint32_t ix = 0; ix < h.nx; ++ix) {
    is.read(reinterpret_cast<char*>(row.data()), 8 * row.size());
    if (!is) throw IoError("GRD1: truncated payload in " + path);
    for (std::uint32_t iy = 0; iy < h.ny; ++iy)
      f.values(ix, iy) = Complex(row[2 * iy], row[2 * iy + 1]);
  }
  return f;
}

unsigned read_grd1_kind(const std::string& path) {
  auto is = open_in(path);
  return read_header(is, path).kind;
}

}  // namespace wnl
