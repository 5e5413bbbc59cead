#pragma once

// Dyadic grids, cubes, lattice boxes and piecewise-constant grid functions.
//
// A grid is a half-open root box [origin, origin + side)^d refined `depth`
// times. Functions live on the finest cells (row-major, x fastest). Every
// integral below is an exact sum over cells, accumulated with compensation.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wbmo/errors.hpp"
#include "wbmo/summation.hpp"

namespace wbmo {

using Index = std::int64_t;

/// Half-open product of lattice intervals at finest resolution,
/// [lo[0], hi[0]) x [lo[1], hi[1]). In one dimension the second axis is [0, 1).
struct LatticeBox {
  std::array<Index, 2> lo{0, 0};
  std::array<Index, 2> hi{1, 1};

  static constexpr LatticeBox interval(Index first, Index last) { return {{first, 0}, {last, 1}}; }

  [[nodiscard]] constexpr Index extent(int axis) const { return hi[axis] - lo[axis]; }
  [[nodiscard]] constexpr std::size_t cell_count() const {
    return static_cast<std::size_t>(extent(0) * extent(1));
  }
  [[nodiscard]] constexpr bool empty() const { return hi[0] <= lo[0] || hi[1] <= lo[1]; }
  [[nodiscard]] constexpr bool contains(const LatticeBox& o) const {
    return lo[0] <= o.lo[0] && o.hi[0] <= hi[0] && lo[1] <= o.lo[1] && o.hi[1] <= hi[1];
  }
  [[nodiscard]] constexpr bool contains_cell(Index ix, Index iy) const {
    return lo[0] <= ix && ix < hi[0] && lo[1] <= iy && iy < hi[1];
  }
  [[nodiscard]] constexpr bool intersects(const LatticeBox& o) const {
    return lo[0] < o.hi[0] && o.lo[0] < hi[0] && lo[1] < o.hi[1] && o.lo[1] < hi[1];
  }
  friend constexpr bool operator==(const LatticeBox&, const LatticeBox&) = default;
  friend constexpr auto operator<=>(const LatticeBox&, const LatticeBox&) = default;
};

/// Axis-aligned half-open box with real corners. Used for sets that are not
/// resolved by the grid (sub-cell sparse members, clipped dilates).
struct RealBox {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};

  static constexpr RealBox interval(double a, double b) { return {{a, 0.0}, {b, 1.0}}; }

  [[nodiscard]] double volume(int dimension) const {
    double v = hi[0] - lo[0];
    if (dimension == 2) v *= hi[1] - lo[1];
    return v;
  }
  [[nodiscard]] bool contains(const RealBox& o, int dimension) const {
    for (int a = 0; a < dimension; ++a)
      if (o.lo[a] < lo[a] || o.hi[a] > hi[a]) return false;
    return true;
  }
  /// Volume of the intersection (zero when disjoint).
  [[nodiscard]] double overlap(const RealBox& o, int dimension) const {
    double v = 1.0;
    for (int a = 0; a < dimension; ++a) {
      const double len = std::min(hi[a], o.hi[a]) - std::max(lo[a], o.lo[a]);
      if (len <= 0.0) return 0.0;
      v *= len;
    }
    return v;
  }
  friend bool operator==(const RealBox&, const RealBox&) = default;
};

struct DyadicGrid {
  std::array<double, 2> origin{0.0, 0.0};
  double side = 1.0;
  int dimension = 1;
  int depth = 1;

  static constexpr int kMaxDepth1D = 26;
  static constexpr int kMaxDepth2D = 13;

  static DyadicGrid interval(double lo, double hi, int depth) {
    DyadicGrid g{{lo, 0.0}, hi - lo, 1, depth};
    g.validate();
    return g;
  }
  static DyadicGrid square(double x0, double y0, double side, int depth) {
    DyadicGrid g{{x0, y0}, side, 2, depth};
    g.validate();
    return g;
  }

  void validate() const {
    require(dimension == 1 || dimension == 2, "grid dimension must be 1 or 2");
    require(std::isfinite(side) && side > 0.0, "grid side must be positive");
    require(std::isfinite(origin[0]) && std::isfinite(origin[1]), "grid origin must be finite");
    require(depth >= 0, "grid depth must be non-negative");
    require(depth <= (dimension == 1 ? kMaxDepth1D : kMaxDepth2D), "grid depth exceeds memory guard");
  }

  [[nodiscard]] Index cells_per_axis() const { return Index{1} << depth; }
  [[nodiscard]] std::size_t cell_count() const {
    const auto n = static_cast<std::size_t>(cells_per_axis());
    return dimension == 1 ? n : n * n;
  }
  [[nodiscard]] double cell_side() const { return std::ldexp(side, -depth); }
  [[nodiscard]] double cell_volume() const {
    const double h = cell_side();
    return dimension == 1 ? h : h * h;
  }
  [[nodiscard]] double volume() const { return dimension == 1 ? side : side * side; }
  [[nodiscard]] LatticeBox root_box() const {
    const Index n = cells_per_axis();
    return {{0, 0}, {n, dimension == 1 ? 1 : n}};
  }
  [[nodiscard]] RealBox root_real_box() const { return to_real(root_box()); }
  [[nodiscard]] double cell_center(int axis, Index i) const {
    return origin[axis] + (static_cast<double>(i) + 0.5) * cell_side();
  }
  [[nodiscard]] std::size_t flat(Index ix, Index iy = 0) const {
    return static_cast<std::size_t>(iy * cells_per_axis() + ix);
  }
  [[nodiscard]] std::array<Index, 2> unflat(std::size_t k) const {
    const Index n = cells_per_axis();
    const auto i = static_cast<Index>(k);
    return dimension == 1 ? std::array<Index, 2>{i, 0} : std::array<Index, 2>{i % n, i / n};
  }
  [[nodiscard]] RealBox to_real(const LatticeBox& b) const {
    const double h = cell_side();
    RealBox r;
    for (int a = 0; a < 2; ++a) {
      if (a < dimension) {
        r.lo[a] = origin[a] + static_cast<double>(b.lo[a]) * h;
        r.hi[a] = origin[a] + static_cast<double>(b.hi[a]) * h;
      } else {
        r.lo[a] = 0.0;
        r.hi[a] = 1.0;
      }
    }
    return r;
  }
  [[nodiscard]] double volume_of(const LatticeBox& b) const {
    return static_cast<double>(b.cell_count()) * cell_volume();
  }
  [[nodiscard]] bool contains(const LatticeBox& b) const { return !b.empty() && root_box().contains(b); }

  friend bool operator==(const DyadicGrid&, const DyadicGrid&) = default;
};

/// Dyadic cube of a grid, addressed by refinement level and integer index.
struct Cube {
  int level = 0;
  std::array<Index, 2> index{0, 0};

  [[nodiscard]] double side(const DyadicGrid& g) const { return std::ldexp(g.side, -level); }
  [[nodiscard]] double volume(const DyadicGrid& g) const {
    const double s = side(g);
    return g.dimension == 1 ? s : s * s;
  }
  [[nodiscard]] double center(const DyadicGrid& g, int axis) const {
    return g.origin[axis] + (static_cast<double>(index[axis]) + 0.5) * side(g);
  }
  [[nodiscard]] LatticeBox box(const DyadicGrid& g) const {
    if (level < 0 || level > g.depth) throw std::domain_error("cube level outside grid");
    const Index span = Index{1} << (g.depth - level);
    LatticeBox b{{index[0] * span, 0}, {(index[0] + 1) * span, 1}};
    if (g.dimension == 2) {
      b.lo[1] = index[1] * span;
      b.hi[1] = (index[1] + 1) * span;
    }
    if (!g.contains(b)) throw std::domain_error("cube outside grid");
    return b;
  }
  [[nodiscard]] RealBox real_box(const DyadicGrid& g) const {
    const double s = side(g);
    RealBox r;
    for (int a = 0; a < g.dimension; ++a) {
      r.lo[a] = g.origin[a] + static_cast<double>(index[a]) * s;
      r.hi[a] = r.lo[a] + s;
    }
    return r;
  }
  [[nodiscard]] Cube parent() const {
    return {level - 1, {index[0] >> 1, index[1] >> 1}};
  }
  [[nodiscard]] std::vector<Cube> children(int dimension) const {
    std::vector<Cube> out;
    const int ny = dimension == 2 ? 2 : 1;
    for (int dy = 0; dy < ny; ++dy)
      for (int dx = 0; dx < 2; ++dx)
        out.push_back({level + 1, {2 * index[0] + dx, dimension == 2 ? 2 * index[1] + dy : 0}});
    return out;
  }
  /// Dyadic containment: `other` is this cube or one of its descendants.
  [[nodiscard]] bool contains(const Cube& other) const {
    if (other.level < level) return false;
    const int shift = other.level - level;
    return (other.index[0] >> shift) == index[0] && (other.index[1] >> shift) == index[1];
  }
  friend constexpr bool operator==(const Cube&, const Cube&) = default;
  friend constexpr auto operator<=>(const Cube&, const Cube&) = default;
};

/// All dyadic cubes of `g` at one level.
inline std::vector<Cube> cubes_at_level(const DyadicGrid& g, int level) {
  require(level >= 0 && level <= g.depth, "level outside grid");
  const Index n = Index{1} << level;
  std::vector<Cube> out;
  out.reserve(static_cast<std::size_t>(g.dimension == 1 ? n : n * n));
  const Index ny = g.dimension == 2 ? n : 1;
  for (Index iy = 0; iy < ny; ++iy)
    for (Index ix = 0; ix < n; ++ix) out.push_back({level, {ix, iy}});
  return out;
}

/// All dyadic cubes of `g`, coarsest level first.
inline std::vector<Cube> dyadic_cubes(const DyadicGrid& g) {
  std::vector<Cube> out;
  for (int k = 0; k <= g.depth; ++k) {
    auto level = cubes_at_level(g, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Every half-open lattice interval [i h, j h), i < j, of a one-dimensional
/// grid: n(n+1)/2 intervals for n cells.
inline std::vector<LatticeBox> enumerate_boxes_1d(const DyadicGrid& g) {
  if (g.dimension != 1) throw unsupported_error("exhaustive interval enumeration needs d = 1");
  const Index n = g.cells_per_axis();
  std::vector<LatticeBox> out;
  out.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
  for (Index len = 1; len <= n; ++len)
    for (Index i = 0; i + len <= n; ++i) out.push_back(LatticeBox::interval(i, i + len));
  return out;
}

inline void check_box(const DyadicGrid& g, const LatticeBox& b) {
  if (!g.contains(b)) throw std::domain_error("box outside grid");
}

template <class Fn>
  requires std::invocable<Fn&, std::size_t>
void for_each_cell(const DyadicGrid& g, const LatticeBox& b, Fn&& fn) {
  check_box(g, b);
  for (Index iy = b.lo[1]; iy < b.hi[1]; ++iy) {
    std::size_t k = g.flat(b.lo[0], iy);
    for (Index ix = b.lo[0]; ix < b.hi[0]; ++ix, ++k) fn(k);
  }
}

/// Calls fn(cell, fraction) for every cell meeting `r`, where fraction is the
/// share of the cell's volume covered by `r`. Exact for dyadic-rational corners.
template <class Fn>
void for_each_overlap(const DyadicGrid& g, const RealBox& r, Fn&& fn) {
  const double h = g.cell_side();
  const Index n = g.cells_per_axis();
  std::array<Index, 2> first{0, 0};
  std::array<Index, 2> last{1, 1};
  for (int a = 0; a < g.dimension; ++a) {
    const double lo = (r.lo[a] - g.origin[a]) / h;
    const double hi = (r.hi[a] - g.origin[a]) / h;
    // One cell of slack per side: boxes far below the cell width can round to
    // an empty index range. The exact overlap below filters the extras.
    first[a] = std::clamp<Index>(static_cast<Index>(std::floor(lo)) - 1, 0, n);
    last[a] = std::clamp<Index>(static_cast<Index>(std::ceil(hi)) + 1, 0, n);
  }
  for (Index iy = first[1]; iy < last[1]; ++iy) {
    for (Index ix = first[0]; ix < last[0]; ++ix) {
      const RealBox cell = g.to_real(LatticeBox{{ix, iy}, {ix + 1, iy + 1}});
      const double ov = cell.overlap(r, g.dimension);
      if (ov > 0.0) fn(g.flat(ix, iy), ov / g.cell_volume());
    }
  }
}

class GridFunction {
public:
  GridFunction() = default;
  GridFunction(DyadicGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    require(values_.size() == grid_.cell_count(), "value count does not match grid");
    for (double v : values_) require(std::isfinite(v), "grid function values must be finite");
  }

  static GridFunction constant(const DyadicGrid& g, double c) {
    return GridFunction(g, std::vector<double>(g.cell_count(), c));
  }

  /// Midpoint sampling of a continuous function.
  template <class Fn>
  static GridFunction sample(const DyadicGrid& g, Fn&& fn) {
    std::vector<double> v(g.cell_count());
    for (std::size_t k = 0; k < v.size(); ++k) {
      const auto [ix, iy] = g.unflat(k);
      if constexpr (std::invocable<Fn&, double>) {
        v[k] = fn(g.cell_center(0, ix));
      } else {
        v[k] = fn(g.cell_center(0, ix), g.cell_center(1, iy));
      }
    }
    return GridFunction(g, std::move(v));
  }

  /// Cell-average projection of the indicator of `r` (0/1 when r is lattice aligned).
  static GridFunction indicator(const DyadicGrid& g, const RealBox& r) {
    std::vector<double> v(g.cell_count(), 0.0);
    for_each_overlap(g, r, [&](std::size_t k, double frac) { v[k] += frac; });
    return GridFunction(g, std::move(v));
  }

  [[nodiscard]] const DyadicGrid& grid() const { return grid_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
  [[nodiscard]] double at(Index ix, Index iy = 0) const { return values_[grid_.flat(ix, iy)]; }

  [[nodiscard]] double max_value() const { return *std::max_element(values_.begin(), values_.end()); }
  [[nodiscard]] double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  template <class Op>
  [[nodiscard]] GridFunction map(Op&& op) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), op);
    return GridFunction(grid_, std::move(v));
  }

  template <class Op>
  [[nodiscard]] GridFunction zip(const GridFunction& other, Op&& op) const {
    require(grid_ == other.grid_, "grid functions live on different grids");
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), other.values_.begin(), v.begin(), op);
    return GridFunction(grid_, std::move(v));
  }

  [[nodiscard]] GridFunction abs() const {
    return map([](double x) { return std::abs(x); });
  }
  [[nodiscard]] GridFunction reciprocal() const {
    return map([](double x) { return 1.0 / x; });
  }
  [[nodiscard]] GridFunction scaled(double c) const {
    return map([c](double x) { return c * x; });
  }
  [[nodiscard]] GridFunction shifted(double c) const {
    return map([c](double x) { return x + c; });
  }
  friend GridFunction operator+(const GridFunction& a, const GridFunction& b) { return a.zip(b, std::plus<>{}); }
  friend GridFunction operator-(const GridFunction& a, const GridFunction& b) { return a.zip(b, std::minus<>{}); }
  friend GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    return a.zip(b, std::multiplies<>{});
  }

private:
  DyadicGrid grid_{};
  std::vector<double> values_{};
};

/// Values of f on the cells of a box, row-major.
inline std::vector<double> gather(const GridFunction& f, const LatticeBox& b) {
  std::vector<double> out;
  out.reserve(b.cell_count());
  for_each_cell(f.grid(), b, [&](std::size_t k) { out.push_back(f[k]); });
  return out;
}

inline double integral(const GridFunction& f, const LatticeBox& b) {
  CompensatedSum acc;
  for_each_cell(f.grid(), b, [&](std::size_t k) { acc.add(f[k]); });
  return acc.value() * f.grid().cell_volume();
}

inline double integral(const GridFunction& f) { return integral(f, f.grid().root_box()); }

inline double integral_over(const GridFunction& f, const RealBox& r) {
  CompensatedSum acc;
  for_each_overlap(f.grid(), r, [&](std::size_t k, double frac) { acc.add(f[k] * frac); });
  return acc.value() * f.grid().cell_volume();
}

/// Signed mean <f>_E.
inline double mean(const GridFunction& f, const LatticeBox& b) {
  check_box(f.grid(), b);
  CompensatedSum acc;
  for_each_cell(f.grid(), b, [&](std::size_t k) { acc.add(f[k]); });
  return acc.value() / static_cast<double>(b.cell_count());
}

/// Which average <f>_{q,E} to take.
struct AverageOrder {
  enum class Kind { Linear, Finite, Infinity };
  Kind kind = Kind::Linear;
  double q = 1.0;

  static constexpr AverageOrder linear() { return {Kind::Linear, 1.0}; }
  static constexpr AverageOrder of(double q) { return {Kind::Finite, q}; }
  static constexpr AverageOrder infinity() { return {Kind::Infinity, 0.0}; }
};

/// (|E|^{-1} int_E |f|^q)^{1/q}; the signed mean for Linear; max |f| for Infinity.
inline double average(const GridFunction& f, const LatticeBox& b, AverageOrder order) {
  switch (order.kind) {
    case AverageOrder::Kind::Linear:
      return mean(f, b);
    case AverageOrder::Kind::Infinity: {
      double m = 0.0;
      for_each_cell(f.grid(), b, [&](std::size_t k) { m = std::max(m, std::abs(f[k])); });
      return m;
    }
    case AverageOrder::Kind::Finite: {
      require(order.q > 0.0 && std::isfinite(order.q), "average exponent must lie in (0, inf)");
      CompensatedSum acc;
      if (order.q == 1.0) {
        for_each_cell(f.grid(), b, [&](std::size_t k) { acc.add(std::abs(f[k])); });
        return acc.value() / static_cast<double>(b.cell_count());
      }
      for_each_cell(f.grid(), b, [&](std::size_t k) { acc.add(std::pow(std::abs(f[k]), order.q)); });
      return std::pow(acc.value() / static_cast<double>(b.cell_count()), 1.0 / order.q);
    }
  }
  return 0.0;
}

inline double average(const GridFunction& f, const Cube& q, AverageOrder order) {
  return average(f, q.box(f.grid()), order);
}

/// w(E) = int_E w dx. Rejects negative weights.
inline double weight_mass(const GridFunction& w, const LatticeBox& b) {
  CompensatedSum acc;
  for_each_cell(w.grid(), b, [&](std::size_t k) {
    if (w[k] < 0.0) throw contract_violation("weight has a negative value");
    acc.add(w[k]);
  });
  return acc.value() * w.grid().cell_volume();
}

inline double weight_mass(const GridFunction& w, const Cube& q) { return weight_mass(w, q.box(w.grid())); }

}  // namespace wbmo
