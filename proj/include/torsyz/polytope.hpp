#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "torsyz/rational.hpp"

namespace torsyz {

/// Closed halfspace { x : normal . x <= offset }.
struct HalfSpace {
  Point normal;
  Rat offset;
};

/// Bounded convex rational polytope in dimension 1..3, carried in both
/// representations. For dim == 2 the vertices are stored as a CCW cycle
/// starting at the lexicographically smallest vertex. A degenerate polytope
/// (affine dimension below the ambient one, possibly empty) keeps its
/// deduplicated point set and whatever enclosing halfspaces produced it.
struct Polytope {
  int dim = 0;
  std::vector<Point> vertices;
  std::vector<HalfSpace> facets;
  bool degenerate = false;
  bool unbounded = false;

  bool empty() const { return vertices.empty(); }
};

namespace detail {

inline int cmp_points(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

inline std::vector<Point> dedup_points(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return cmp_points(a, b) < 0; });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) { return cmp_points(a, b) == 0; }),
            pts.end());
  return pts;
}

// Rank of the span of (pts[i] - pts[0]).
inline int affine_rank(const std::vector<Point>& pts) {
  if (pts.size() <= 1) return 0;
  std::vector<Point> rows;
  for (std::size_t i = 1; i < pts.size(); ++i) rows.push_back(sub(pts[i], pts[0]));
  std::size_t n = pts[0].size();
  int rank = 0;
  for (std::size_t col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t piv = rows.size();
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (rows[r][col] != 0) { piv = r; break; }
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) == rank || rows[r][col] == 0) continue;
      Rat f = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < n; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

inline int matrix_rank(std::vector<Point> rows) {
  if (rows.empty()) return 0;
  std::size_t n = rows[0].size();
  int rank = 0;
  for (std::size_t col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t piv = rows.size();
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (rows[r][col] != 0) { piv = r; break; }
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) == rank || rows[r][col] == 0) continue;
      Rat f = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < n; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

// Solves A x = b for square exact systems; returns false when singular.
inline bool solve_square(std::vector<Point> a, Point b, Point& out) {
  std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv == n) return false;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) out[i] = b[i] / a[i][i];
  return true;
}

inline Rat cross2(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone chain; input deduplicated+sorted; returns CCW cycle from lex-min.
inline std::vector<Point> hull2(const std::vector<Point>& pts) {
  std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Point> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross2(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

inline HalfSpace canonical_halfspace(Point n, Rat c) {
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] != 0) {
      Rat f = boost::multiprecision::abs(n[i]);
      for (auto& x : n) x /= f;
      c /= f;
      break;
    }
  }
  return HalfSpace{std::move(n), std::move(c)};
}

inline bool halfspace_eq(const HalfSpace& a, const HalfSpace& b) {
  if (a.offset != b.offset) return false;
  for (std::size_t i = 0; i < a.normal.size(); ++i)
    if (a.normal[i] != b.normal[i]) return false;
  return true;
}

inline Point cross3(const Point& a, const Point& b) {
  return Point{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
               a[0] * b[1] - a[1] * b[0]};
}

// Supporting planes of a full-dimensional 3D point set, by exhaustive triples.
inline std::vector<HalfSpace> facets3(const std::vector<Point>& pts) {
  std::vector<HalfSpace> out;
  std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Point nrm = cross3(sub(pts[j], pts[i]), sub(pts[k], pts[i]));
        if (nrm[0] == 0 && nrm[1] == 0 && nrm[2] == 0) continue;
        Rat off = dot(nrm, pts[i]);
        bool le = true, ge = true;
        for (std::size_t t = 0; t < n && (le || ge); ++t) {
          Rat v = dot(nrm, pts[t]);
          if (v > off) le = false;
          if (v < off) ge = false;
        }
        HalfSpace hs{Point{}, 0};
        if (le)
          hs = canonical_halfspace(nrm, off);
        else if (ge)
          hs = canonical_halfspace(scaled(nrm, Rat(-1)), -off);
        else
          continue;
        bool seen = false;
        for (const auto& e : out)
          if (halfspace_eq(e, hs)) { seen = true; break; }
        if (!seen) out.push_back(std::move(hs));
      }
  return out;
}

inline std::vector<std::size_t> tight_facets(const Polytope& p, const Point& x) {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < p.facets.size(); ++f)
    if (dot(p.facets[f].normal, x) == p.facets[f].offset) out.push_back(f);
  return out;
}

}  // namespace detail

/// Builds a polytope from a point set (convex hull, dims 1..3). Lower
/// dimensional input is flagged degenerate and kept as a deduplicated set.
inline Polytope make_polytope(int dim, std::vector<Point> pts) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("supported dimensions are 1..3");
  for (const auto& p : pts)
    if (static_cast<int>(p.size()) != dim)
      throw std::invalid_argument("point dimension mismatch");
  Polytope out;
  out.dim = dim;
  pts = detail::dedup_points(std::move(pts));
  if (pts.empty()) {
    out.degenerate = true;
    return out;
  }
  if (detail::affine_rank(pts) < dim) {
    out.degenerate = true;
    out.vertices = std::move(pts);
    return out;
  }
  if (dim == 1) {
    out.vertices = {pts.front(), pts.back()};
    out.facets = {HalfSpace{Point{Rat(-1)}, -pts.front()[0]},
                  HalfSpace{Point{Rat(1)}, pts.back()[0]}};
    return out;
  }
  if (dim == 2) {
    out.vertices = detail::hull2(pts);
    std::size_t m = out.vertices.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Point& a = out.vertices[i];
      const Point& b = out.vertices[(i + 1) % m];
      Point nrm{b[1] - a[1], a[0] - b[0]};
      out.facets.push_back(detail::canonical_halfspace(std::move(nrm), 0));
      out.facets.back().offset = dot(out.facets.back().normal, a);
    }
    return out;
  }
  out.facets = detail::facets3(pts);
  for (const auto& p : pts) {
    std::vector<Point> tight;
    for (const auto& f : out.facets)
      if (dot(f.normal, p) == f.offset) tight.push_back(f.normal);
    if (detail::matrix_rank(tight) == 3) out.vertices.push_back(p);
  }
  return out;
}

/// Builds a polytope from halfspaces by exact vertex enumeration. Unbounded
/// intersections are flagged; empty ones come back degenerate with no
/// vertices.
inline Polytope polytope_from_facets(int dim, std::vector<HalfSpace> hs) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("supported dimensions are 1..3");
  Polytope out;
  out.dim = dim;
  out.facets = hs;
  if (dim == 1) {
    bool has_lo = false, has_hi = false;
    Rat lo = 0, hi = 0;
    for (const auto& h : hs) {
      if (h.normal[0] > 0) {
        Rat b = h.offset / h.normal[0];
        if (!has_hi || b < hi) hi = b;
        has_hi = true;
      } else if (h.normal[0] < 0) {
        Rat b = h.offset / h.normal[0];
        if (!has_lo || b > lo) lo = b;
        has_lo = true;
      }
    }
    if (!has_lo || !has_hi) {
      out.unbounded = true;
      return out;
    }
    if (lo > hi) {
      out.degenerate = true;
      return out;
    }
    return make_polytope(1, {Point{lo}, Point{hi}});
  }
  std::vector<Point> normals;
  for (const auto& h : hs) normals.push_back(h.normal);
  if (detail::matrix_rank(normals) < dim) {
    out.unbounded = true;
    return out;
  }
  // recession ray check over (dim-1)-subsets of facet normals
  std::size_t m = hs.size();
  std::vector<std::size_t> idx(dim - 1);
  std::vector<bool> sel(m, false);
  std::function<bool(std::size_t, std::size_t)> ray_scan = [&](std::size_t start,
                                                               std::size_t k) -> bool {
    if (k == static_cast<std::size_t>(dim - 1)) {
      std::vector<Point> rows;
      for (std::size_t i = 0; i < m; ++i)
        if (sel[i]) rows.push_back(hs[i].normal);
      if (detail::matrix_rank(rows) != dim - 1) return false;
      // null direction of the selected normals
      Point r;
      if (dim == 2) {
        r = Point{-rows[0][1], rows[0][0]};
      } else {
        r = detail::cross3(rows[0], rows.size() > 1 ? rows[1] : rows[0]);
        if (rows.size() > 1 && r[0] == 0 && r[1] == 0 && r[2] == 0) return false;
        if (rows.size() == 1) return false;
      }
      bool le = true, ge = true;
      for (const auto& h : hs) {
        Rat v = dot(h.normal, r);
        if (v > 0) le = false;
        if (v < 0) ge = false;
      }
      return le || ge;
    }
    for (std::size_t i = start; i < m; ++i) {
      sel[i] = true;
      if (ray_scan(i + 1, k + 1)) { sel[i] = false; return true; }
      sel[i] = false;
    }
    return false;
  };
  if (dim == 3 && m >= 2 && ray_scan(0, 0)) {
    out.unbounded = true;
    return out;
  }
  if (dim == 2) {
    for (std::size_t i = 0; i < m; ++i) {
      Point r{-hs[i].normal[1], hs[i].normal[0]};
      for (int s = 0; s < 2; ++s) {
        bool ok = true;
        for (const auto& h : hs)
          if (dot(h.normal, r) > 0) { ok = false; break; }
        if (ok) {
          out.unbounded = true;
          return out;
        }
        r = scaled(r, Rat(-1));
      }
    }
  }
  // vertex enumeration over dim-subsets
  std::vector<Point> verts;
  std::vector<std::size_t> comb(dim);
  std::function<void(std::size_t, std::size_t)> enumerate = [&](std::size_t start,
                                                                std::size_t k) {
    if (k == static_cast<std::size_t>(dim)) {
      std::vector<Point> a;
      Point b;
      for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) {
        a.push_back(hs[comb[i]].normal);
        b.push_back(hs[comb[i]].offset);
      }
      Point x;
      if (!detail::solve_square(a, b, x)) return;
      for (const auto& h : hs)
        if (dot(h.normal, x) > h.offset) return;
      verts.push_back(std::move(x));
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      comb[k] = i;
      enumerate(i + 1, k + 1);
    }
  };
  enumerate(0, 0);
  verts = detail::dedup_points(std::move(verts));
  if (verts.empty()) {
    out.degenerate = true;
    return out;
  }
  Polytope built = make_polytope(dim, std::move(verts));
  return built;
}

/// Scales a polytope by a positive integer factor about the origin.
inline Polytope dilate(const Polytope& p, long factor) {
  if (factor < 1) throw std::invalid_argument("dilation factor must be a positive integer");
  if (p.unbounded) throw std::domain_error("unbounded polytope");
  Polytope out = p;
  Rat f(factor);
  for (auto& v : out.vertices)
    for (auto& c : v) c *= f;
  for (auto& h : out.facets) h.offset *= f;
  return out;
}

/// Exact membership; boundary points count as inside.
inline bool contains(const Polytope& p, const Point& x) {
  if (p.unbounded) throw std::domain_error("unbounded polytope");
  if (p.facets.empty() && !p.vertices.empty()) {
    // degenerate single point
    return p.vertices.size() == 1 && detail::cmp_points(p.vertices[0], x) == 0;
  }
  for (const auto& h : p.facets)
    if (dot(h.normal, x) > h.offset) return false;
  return true;
}

/// Simplex decomposition as vertex index tuples (dim+1 each); the fan is
/// rooted at vertex 0 and covers the polytope exactly once.
inline std::vector<std::vector<int>> simplex_indices(const Polytope& p) {
  if (p.unbounded) throw std::domain_error("unbounded polytope");
  if (p.degenerate || p.vertices.empty()) return {};
  if (p.dim == 1) return {{0, 1}};
  if (p.dim == 2) {
    std::vector<std::vector<int>> out;
    for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i)
      out.push_back({0, static_cast<int>(i), static_cast<int>(i + 1)});
    return out;
  }
  std::vector<std::vector<int>> out;
  const Point& base = p.vertices[0];
  for (const auto& f : p.facets) {
    if (dot(f.normal, base) == f.offset) continue;
    std::vector<int> cyc;
    for (std::size_t i = 0; i < p.vertices.size(); ++i)
      if (dot(f.normal, p.vertices[i]) == f.offset) cyc.push_back(static_cast<int>(i));
    // order the facet polygon by exact angular sweep in its own plane
    std::size_t drop = 0;
    Rat best = boost::multiprecision::abs(f.normal[0]);
    for (std::size_t k = 1; k < 3; ++k) {
      Rat a = boost::multiprecision::abs(f.normal[k]);
      if (a > best) { best = a; drop = k; }
    }
    std::size_t u = (drop == 0) ? 1 : 0;
    std::size_t w = (drop == 2) ? 1 : 2;
    Point mean(2, Rat(0));
    for (int i : cyc) {
      mean[0] += p.vertices[i][u];
      mean[1] += p.vertices[i][w];
    }
    mean[0] /= static_cast<int>(cyc.size());
    mean[1] /= static_cast<int>(cyc.size());
    auto half = [&](int i) {
      Rat y = p.vertices[i][w] - mean[1];
      Rat x = p.vertices[i][u] - mean[0];
      return (y > 0 || (y == 0 && x > 0)) ? 0 : 1;
    };
    std::sort(cyc.begin(), cyc.end(), [&](int a, int b) {
      int ha = half(a), hb = half(b);
      if (ha != hb) return ha < hb;
      Rat ax = p.vertices[a][u] - mean[0], ay = p.vertices[a][w] - mean[1];
      Rat bx = p.vertices[b][u] - mean[0], by = p.vertices[b][w] - mean[1];
      return ax * by - ay * bx > 0;
    });
    for (std::size_t i = 1; i + 1 < cyc.size(); ++i)
      out.push_back({-1, cyc[0], cyc[static_cast<int>(i)], cyc[i + 1]});
  }
  for (auto& s : out)
    if (s[0] == -1) s[0] = 0;
  return out;
}

namespace detail {

inline Rat simplex_volume(const std::vector<Point>& verts) {
  std::size_t n = verts[0].size();
  std::vector<Point> rows;
  for (std::size_t i = 1; i < verts.size(); ++i) rows.push_back(sub(verts[i], verts[0]));
  // |det| / n!
  Rat det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r)
      if (rows[r][col] != 0) { piv = r; break; }
    if (piv == n) return Rat(0);
    if (piv != col) std::swap(rows[col], rows[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (rows[r][col] == 0) continue;
      Rat f = rows[r][col] / rows[col][col];
      for (std::size_t c = col; c < n; ++c) rows[r][c] -= f * rows[col][c];
    }
    det *= rows[col][col];
  }
  det = boost::multiprecision::abs(det);
  long fact = 1;
  for (std::size_t k = 2; k <= n; ++k) fact *= static_cast<long>(k);
  return det / fact;
}

}  // namespace detail

/// Exact volume; degenerate polytopes have volume exactly 0.
inline Rat volume(const Polytope& p) {
  if (p.unbounded) throw std::domain_error("unbounded polytope");
  if (p.degenerate || p.vertices.empty()) return Rat(0);
  Rat total = 0;
  for (const auto& s : simplex_indices(p)) {
    std::vector<Point> verts;
    for (int i : s) verts.push_back(p.vertices[i]);
    total += detail::simplex_volume(verts);
  }
  return total;
}

/// Exact centroid; requires positive volume.
inline Point centroid(const Polytope& p) {
  if (p.unbounded) throw std::domain_error("unbounded polytope");
  Rat vol = volume(p);
  if (vol == 0) throw std::domain_error("degenerate centroid");
  Point acc(p.dim, Rat(0));
  for (const auto& s : simplex_indices(p)) {
    std::vector<Point> verts;
    for (int i : s) verts.push_back(p.vertices[i]);
    Rat v = detail::simplex_volume(verts);
    if (v == 0) continue;
    Point c(p.dim, Rat(0));
    for (const auto& vv : verts) c = add(c, vv);
    for (auto& x : c) x /= static_cast<int>(verts.size());
    acc = add(acc, scaled(c, v));
  }
  for (auto& x : acc) x /= vol;
  return acc;
}

/// Intersection with a halfspace. Results of lower dimension (or empty) are
/// flagged degenerate rather than raising.
inline Polytope clip(const Polytope& p, const HalfSpace& h) {
  if (p.unbounded) throw std::domain_error("unbounded polytope");
  if (p.degenerate) throw std::invalid_argument("clip on degenerate polytope");
  std::vector<Rat> slack(p.vertices.size());
  bool all_in = true, all_out = true;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    slack[i] = h.offset - dot(h.normal, p.vertices[i]);
    if (slack[i] < 0) all_in = false;
    if (slack[i] >= 0) all_out = false;
  }
  if (all_in) return p;
  if (all_out) {
    Polytope out;
    out.dim = p.dim;
    out.degenerate = true;
    out.facets = p.facets;
    out.facets.push_back(h);
    return out;
  }
  std::vector<Point> pts;
  for (std::size_t i = 0; i < p.vertices.size(); ++i)
    if (slack[i] >= 0) pts.push_back(p.vertices[i]);
  auto crossing = [&](std::size_t i, std::size_t j) {
    Rat t = slack[i] / (slack[i] - slack[j]);
    return add(p.vertices[i], scaled(sub(p.vertices[j], p.vertices[i]), t));
  };
  if (p.dim == 1) {
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        if (slack[i] >= 0 && slack[j] < 0) pts.push_back(crossing(i, j));
  } else if (p.dim == 2) {
    std::size_t m = p.vertices.size();
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = (i + 1) % m;
      if ((slack[i] >= 0) != (slack[j] >= 0)) pts.push_back(crossing(i, j));
    }
  } else {
    std::size_t m = p.vertices.size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        bool in_i = slack[i] >= 0, in_j = slack[j] >= 0;
        if (in_i == in_j) continue;
        std::vector<Point> common;
        for (const auto& f : p.facets)
          if (dot(f.normal, p.vertices[i]) == f.offset &&
              dot(f.normal, p.vertices[j]) == f.offset)
            common.push_back(f.normal);
        if (detail::matrix_rank(common) == p.dim - 1) pts.push_back(crossing(i, j));
      }
  }
  Polytope out = make_polytope(p.dim, std::move(pts));
  if (out.degenerate) {
    out.facets = p.facets;
    out.facets.push_back(h);
  }
  return out;
}

/// Consistency check: every vertex satisfies every facet and every facet is
/// tight at no fewer than dim vertices. Throws std::logic_error on violation.
inline void validate(const Polytope& p) {
  if (p.degenerate || p.unbounded) return;
  for (const auto& v : p.vertices)
    for (const auto& f : p.facets)
      if (dot(f.normal, v) > f.offset) throw std::logic_error("vertex violates facet");
  for (const auto& f : p.facets) {
    int tight = 0;
    for (const auto& v : p.vertices)
      if (dot(f.normal, v) == f.offset) ++tight;
    if (tight < p.dim) throw std::logic_error("facet supported by too few vertices");
  }
}

// -- builtins ----------------------------------------------------------------

inline Polytope builtin_segment() {
  return make_polytope(1, {Point{Rat(0)}, Point{Rat(1)}});
}

inline Polytope builtin_square() {
  return make_polytope(2, {Point{Rat(0), Rat(0)}, Point{Rat(1), Rat(0)},
                           Point{Rat(0), Rat(1)}, Point{Rat(1), Rat(1)}});
}

inline Polytope builtin_simplex2() {
  return make_polytope(2, {Point{Rat(0), Rat(0)}, Point{Rat(1), Rat(0)},
                           Point{Rat(0), Rat(1)}});
}

inline Polytope builtin_simplex3() {
  return make_polytope(3, {Point{Rat(0), Rat(0), Rat(0)}, Point{Rat(1), Rat(0), Rat(0)},
                           Point{Rat(0), Rat(1), Rat(0)}, Point{Rat(0), Rat(0), Rat(1)}});
}

}  // namespace torsyz
