#include "diraclab/field_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace diraclab {

namespace {

constexpr std::array<char, 4> kMagic{'D', 'L', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
  std::array<char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  os.write(b.data(), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  std::array<char, sizeof(T)> b;
  if (!is.read(b.data(), sizeof(T))) throw std::runtime_error("field file is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
  T v;
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

}  // namespace

void write_field(const SpinorField& field, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  const GridSpec& g = field.grid();
  os.write(kMagic.data(), 4);
  put<std::uint32_t>(os, kVersion);
  put<double>(os, g.half_width);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.points));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(field.mask().kind()));
  put<double>(os, field.mask().parameter());
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const Spinor4c v = field.value(c);
    for (int j = 0; j < 4; ++j) {
      put<double>(os, v(j).real());
      put<double>(os, v(j).imag());
    }
  }
  for (std::size_t c = 0; c < g.cell_count(); ++c) put<std::uint8_t>(os, field.mask().contains(c) ? 1 : 0);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

SpinorField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::array<char, 4> magic;
  if (!is.read(magic.data(), 4) || magic != kMagic) throw std::runtime_error("'" + path + "' is not a spinor field file");
  if (const auto v = get<std::uint32_t>(is); v != kVersion)
    throw std::runtime_error("unsupported field file version " + std::to_string(v));
  const double half_width = get<double>(is);
  const auto points = get<std::uint32_t>(is);
  const auto kind = get<std::uint32_t>(is);
  const double parameter = get<double>(is);
  if (kind > static_cast<std::uint32_t>(MaskKind::custom)) throw std::runtime_error("unknown mask kind in field file");
  if (points > 4096) throw std::runtime_error("field file grid is implausibly large");
  const GridSpec grid = make_grid(half_width, static_cast<int>(points));
  SpinorValues values(4, static_cast<Eigen::Index>(grid.cell_count()));
  for (std::size_t c = 0; c < grid.cell_count(); ++c)
    for (int j = 0; j < 4; ++j) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      values(j, static_cast<Eigen::Index>(c)) = {re, im};
    }
  std::vector<std::uint8_t> cells(grid.cell_count());
  for (auto& b : cells) {
    b = get<std::uint8_t>(is);
    if (b > 1) throw std::runtime_error("field file mask flags must be 0 or 1");
  }
  if (is.peek() != std::char_traits<char>::eof()) throw std::runtime_error("field file has trailing bytes");
  return SpinorField(DomainMask::from_cells(grid, std::move(cells), static_cast<MaskKind>(kind), parameter),
                     std::move(values));
}

std::string field_sidecar_json(const SpinorField& field) {
  const GridSpec& g = field.grid();
  nlohmann::json j;
  j["format"] = "DLSF";
  j["version"] = kVersion;
  j["half_width"] = g.half_width;
  j["points"] = g.points;
  j["spacing"] = g.spacing();
  j["mask_kind"] = to_string(field.mask().kind());
  j["mask_parameter"] = field.mask().parameter();
  j["mask_cells"] = field.mask().count();
  j["layout"] = "x-fastest cells, 4 complex components as (re, im) f64 pairs, then u8 mask flags";
  return j.dump(2) + "\n";
}

void export_field(const SpinorField& field, const std::string& path) {
  write_field(field, path);
  std::ofstream os(path + ".json", std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + ".json' for writing");
  os << field_sidecar_json(field);
}

}  // namespace diraclab
