#include "diraclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diraclab {

GridSpec make_grid(double half_width, int points) {
  if (!(half_width > 0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half-width must be positive and finite");
  if (points < 8 || points % 2 != 0)
    throw std::invalid_argument("grid needs an even number of points per axis, at least 8; got " +
                                std::to_string(points));
  return GridSpec{half_width, points};
}

std::string to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::unit_ball: return "unit_ball";
    case MaskKind::exterior_annulus: return "exterior_annulus";
    case MaskKind::full_box: return "full_box";
    case MaskKind::punctured_ball: return "punctured_ball";
    case MaskKind::custom: return "custom";
  }
  return "unknown";
}

namespace {

template <typename Pred>
std::vector<std::uint8_t> select(const GridSpec& grid, Pred pred) {
  std::vector<std::uint8_t> cells(grid.cell_count());
  for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = pred(grid.position(c).norm()) ? 1 : 0;
  return cells;
}

}  // namespace

DomainMask::DomainMask(GridSpec grid, MaskKind kind, double parameter, std::vector<std::uint8_t> cells)
    : grid_(grid), kind_(kind), parameter_(parameter), cells_(std::move(cells)) {
  if (cells_.size() != grid_.cell_count()) throw std::invalid_argument("mask size does not match grid");
  count_ = static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

DomainMask DomainMask::unit_ball(const GridSpec& grid) {
  return {grid, MaskKind::unit_ball, 0.0, select(grid, [](double r) { return r < 1.0; })};
}

DomainMask DomainMask::exterior_annulus(const GridSpec& grid, double outer_radius) {
  if (!(outer_radius > 1.0)) throw std::invalid_argument("exterior annulus needs R_outer > 1");
  return {grid, MaskKind::exterior_annulus, outer_radius,
          select(grid, [=](double r) { return r > 1.0 && r < outer_radius; })};
}

DomainMask DomainMask::full_box(const GridSpec& grid) {
  return {grid, MaskKind::full_box, 0.0, std::vector<std::uint8_t>(grid.cell_count(), 1)};
}

DomainMask DomainMask::punctured_ball(const GridSpec& grid, double inner_radius) {
  if (!(inner_radius > 0.0 && inner_radius < 1.0))
    throw std::invalid_argument("punctured ball needs 0 < eps_in < 1");
  return {grid, MaskKind::punctured_ball, inner_radius,
          select(grid, [=](double r) { return r > inner_radius && r < 1.0; })};
}

DomainMask DomainMask::shell(const GridSpec& grid, double r_in, double r_out) {
  if (!(r_out > r_in)) throw std::invalid_argument("shell needs r_out > r_in");
  return {grid, MaskKind::custom, 0.0, select(grid, [=](double r) { return r > r_in && r < r_out; })};
}

DomainMask DomainMask::from_cells(const GridSpec& grid, std::vector<std::uint8_t> cells, MaskKind kind,
                                  double parameter) {
  for (auto& c : cells) c = c ? 1 : 0;
  return {grid, kind, parameter, std::move(cells)};
}

DomainMask DomainMask::intersect(const DomainMask& other) const {
  if (!(grid_ == other.grid_)) throw std::invalid_argument("cannot intersect masks on different grids");
  std::vector<std::uint8_t> cells(cells_.size());
  for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = cells_[c] & other.cells_[c];
  return {grid_, MaskKind::custom, 0.0, std::move(cells)};
}

DomainMask DomainMask::eroded(int layers) const {
  const int n = grid_.points;
  std::vector<std::uint8_t> cur = cells_;
  for (int l = 0; l < layers; ++l) {
    std::vector<std::uint8_t> next(cur.size(), 0);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const std::size_t c = grid_.index(i, j, k);
          if (!cur[c]) continue;
          if (i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1) continue;
          if (cur[c - 1] && cur[c + 1] && cur[grid_.index(i, j - 1, k)] && cur[grid_.index(i, j + 1, k)] &&
              cur[grid_.index(i, j, k - 1)] && cur[grid_.index(i, j, k + 1)])
            next[c] = 1;
        }
    cur.swap(next);
  }
  return {grid_, MaskKind::custom, 0.0, std::move(cur)};
}

}  // namespace diraclab
