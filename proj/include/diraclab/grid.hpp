#pragma once

#include "diraclab/clifford.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace diraclab {

/// Cell-centered cubic grid on [-L, L]^3 with N cells per axis.
/// Centers sit at -L + (i + 1/2) h, so no center lies on a coordinate plane.
struct GridSpec {
  double half_width = 1.0;
  int points = 8;

  double spacing() const { return 2.0 * half_width / points; }
  double cell_volume() const {
    const double h = spacing();
    return h * h * h;
  }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(points) * points * points;
  }
  double center(int i) const { return -half_width + (i + 0.5) * spacing(); }

  /// x-fastest linear index.
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(points) * (j + static_cast<std::size_t>(points) * k);
  }
  void unpack(std::size_t c, int& i, int& j, int& k) const {
    i = static_cast<int>(c % points);
    j = static_cast<int>((c / points) % points);
    k = static_cast<int>(c / (static_cast<std::size_t>(points) * points));
  }
  Vec3 position(std::size_t c) const {
    int i, j, k;
    unpack(c, i, j, k);
    return {center(i), center(j), center(k)};
  }

  bool operator==(const GridSpec& o) const { return half_width == o.half_width && points == o.points; }
};

/// Throws std::invalid_argument unless L > 0, N >= 8 and N even.
GridSpec make_grid(double half_width, int points);

enum class MaskKind : std::uint32_t {
  unit_ball = 0,         // |x| < 1
  exterior_annulus = 1,  // 1 < |x| < R
  full_box = 2,
  punctured_ball = 3,    // eps < |x| < 1
  custom = 4,            // derived (eroded, intersected, stencil-shrunk) masks
};

std::string to_string(MaskKind kind);

class DomainMask {
 public:
  static DomainMask unit_ball(const GridSpec& grid);
  static DomainMask exterior_annulus(const GridSpec& grid, double outer_radius);
  static DomainMask full_box(const GridSpec& grid);
  static DomainMask punctured_ball(const GridSpec& grid, double inner_radius);
  /// Open spherical shell r_in < |x| < r_out, reported as a custom mask.
  static DomainMask shell(const GridSpec& grid, double r_in, double r_out);
  /// Arbitrary cell set; `kind`/`parameter` label it when it is a (partially covered) named domain.
  static DomainMask from_cells(const GridSpec& grid, std::vector<std::uint8_t> cells,
                               MaskKind kind = MaskKind::custom, double parameter = 0.0);

  MaskKind kind() const { return kind_; }
  /// R_outer for exterior_annulus, eps_in for punctured_ball, 0 otherwise.
  double parameter() const { return parameter_; }
  const GridSpec& grid() const { return grid_; }
  bool contains(std::size_t c) const { return cells_[c] != 0; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }
  std::size_t count() const { return count_; }
  bool empty() const { return count_ == 0; }

  DomainMask intersect(const DomainMask& other) const;
  /// Removes cells within `layers` face-neighbour steps of the complement or the box edge.
  DomainMask eroded(int layers) const;

  bool operator==(const DomainMask& o) const { return grid_ == o.grid_ && cells_ == o.cells_; }

 private:
  DomainMask(GridSpec grid, MaskKind kind, double parameter, std::vector<std::uint8_t> cells);

  GridSpec grid_;
  MaskKind kind_;
  double parameter_;
  std::vector<std::uint8_t> cells_;
  std::size_t count_ = 0;
};

}  // namespace diraclab
