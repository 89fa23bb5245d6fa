#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsyz/polytope.hpp"
#include "torsyz/rational.hpp"

namespace torsyz {

/// Lattice points of a bounded rational polytope, lexicographically sorted,
/// together with where they came from.
struct LatticePointSet {
  int dim = 0;
  std::string source;
  std::vector<IntVec> points;

  std::size_t size() const { return points.size(); }
};

/// Enumerates integer points by sweeping the bounding box and filtering with
/// the facet inequalities. The sweep order is lexicographic by construction.
inline LatticePointSet lattice_points(const Polytope& p, const std::string& source = "",
                                      std::int64_t cell_guard = 100000000) {
  if (p.unbounded) throw std::domain_error("unbounded polytope");
  LatticePointSet out;
  out.dim = p.dim;
  out.source = source;
  if (p.vertices.empty()) return out;
  std::vector<std::int64_t> lo(p.dim), hi(p.dim);
  for (int k = 0; k < p.dim; ++k) {
    Rat mn = p.vertices[0][k], mx = p.vertices[0][k];
    for (const auto& v : p.vertices) {
      if (v[k] < mn) mn = v[k];
      if (v[k] > mx) mx = v[k];
    }
    lo[k] = rat_ceil(mn).convert_to<std::int64_t>();
    hi[k] = rat_floor(mx).convert_to<std::int64_t>();
    if (lo[k] > hi[k]) return out;
  }
  std::int64_t cells = 1;
  for (int k = 0; k < p.dim; ++k) {
    std::int64_t w = hi[k] - lo[k] + 1;
    if (cells > cell_guard / w) throw std::length_error("lattice sweep exceeds cell guard");
    cells *= w;
  }
  IntVec x(lo.begin(), lo.end());
  Point xr(p.dim);
  while (true) {
    for (int k = 0; k < p.dim; ++k) xr[k] = x[k];
    bool inside = true;
    for (const auto& h : p.facets)
      if (dot(h.normal, xr) > h.offset) { inside = false; break; }
    if (p.degenerate) inside = false;
    if (inside) out.points.push_back(x);
    int k = p.dim - 1;
    while (k >= 0 && x[k] == hi[k]) {
      x[k] = lo[k];
      --k;
    }
    if (k < 0) break;
    ++x[k];
  }
  return out;
}

/// Brute-force membership count over an explicit box; used as an independent
/// oracle against the sweep above.
inline std::size_t count_lattice_points_brute(const Polytope& p, std::int64_t lo,
                                              std::int64_t hi) {
  std::size_t count = 0;
  if (p.dim == 1) {
    for (std::int64_t x = lo; x <= hi; ++x)
      if (contains(p, Point{Rat(x)})) ++count;
  } else if (p.dim == 2) {
    for (std::int64_t x = lo; x <= hi; ++x)
      for (std::int64_t y = lo; y <= hi; ++y)
        if (contains(p, Point{Rat(x), Rat(y)})) ++count;
  } else {
    for (std::int64_t x = lo; x <= hi; ++x)
      for (std::int64_t y = lo; y <= hi; ++y)
        for (std::int64_t z = lo; z <= hi; ++z)
          if (contains(p, Point{Rat(x), Rat(y), Rat(z)})) ++count;
  }
  return count;
}

}  // namespace torsyz
