#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "torsyz/polytope.hpp"

namespace torsyz {

struct CapOptions {
  double tol = 1e-9;
  int max_iter = 256;
};

struct CapCut {
  Point direction;
  Rat level = 0;
  Rat fraction = 0;  // achieved volume fraction at the returned level
  Point centroid;
};

/// Exact volume and first moment of P intersected with {x : v.x <= c}. The
/// body is triangulated once; each cut is resolved per simplex by one of the
/// closed-form cases (whole, empty, corner piece, complement of a corner
/// piece, or a prism wedge in 3d).
class CapEvaluator {
 public:
  explicit CapEvaluator(const Polytope& p) : dim_(p.dim), vertices_(p.vertices) {
    if (p.degenerate || p.empty() || p.unbounded)
      throw std::invalid_argument("cap evaluation needs a bounded full-dimensional body");
    moment_ = Point(static_cast<std::size_t>(dim_), Rat(0));
    for (const auto& ix : simplex_indices(p)) {
      Simplex s;
      for (int i : ix) s.v.push_back(p.vertices[static_cast<std::size_t>(i)]);
      s.volume = detail::simplex_volume(s.v);
      if (s.volume == 0) continue;
      Point sum(static_cast<std::size_t>(dim_), Rat(0));
      for (const auto& q : s.v) sum = add(sum, q);
      s.moment = scaled(sum, s.volume / (dim_ + 1));
      total_ += s.volume;
      moment_ = add(moment_, s.moment);
      simplices_.push_back(std::move(s));
    }
    if (total_ == 0) throw std::invalid_argument("body has no volume");
    centroid_ = scaled(moment_, Rat(1) / total_);
  }

  struct Piece {
    Rat volume = 0;
    Point moment;
  };

  /// Per-direction state: vertex heights precomputed so the bisection loop
  /// only subtracts the moving level.
  struct Prepared {
    Point v;
    std::vector<std::vector<Rat>> heights;
    Rat smin = 0, smax = 0;
  };

  Prepared prepare(const Point& v) const {
    if (v.size() != static_cast<std::size_t>(dim_))
      throw std::invalid_argument("direction dimension mismatch");
    Prepared out;
    out.v = v;
    out.heights.reserve(simplices_.size());
    bool first = true;
    for (const auto& s : simplices_) {
      std::vector<Rat> h;
      h.reserve(s.v.size());
      for (const auto& q : s.v) {
        Rat d = dot(v, q);
        if (first || d < out.smin) out.smin = d;
        if (first || d > out.smax) out.smax = d;
        first = false;
        h.push_back(std::move(d));
      }
      out.heights.push_back(std::move(h));
    }
    if (out.smin == out.smax) throw std::invalid_argument("direction is degenerate for the body");
    return out;
  }

  Piece eval(const Prepared& pv, const Rat& c) const {
    Piece out;
    out.moment = Point(static_cast<std::size_t>(dim_), Rat(0));
    std::vector<Rat> t(static_cast<std::size_t>(dim_) + 1);
    for (std::size_t si = 0; si < simplices_.size(); ++si) {
      const Simplex& s = simplices_[si];
      int neg = 0, pos = 0;
      for (std::size_t i = 0; i < s.v.size(); ++i) {
        t[i] = pv.heights[si][i] - c;
        if (t[i] < 0) ++neg;
        else if (t[i] > 0) ++pos;
      }
      if (pos == 0) {
        out.volume += s.volume;
        out.moment = add(out.moment, s.moment);
        continue;
      }
      if (neg == 0) continue;
      if (neg == 1 || pos == 1) {
        std::size_t apex = 0;
        for (std::size_t i = 0; i < s.v.size(); ++i)
          if (neg == 1 ? t[i] < 0 : t[i] > 0) apex = i;
        auto piece = corner_piece(s, t, apex);
        if (neg == 1) {
          out.volume += piece.volume;
          out.moment = add(out.moment, piece.moment);
        } else {
          out.volume += s.volume - piece.volume;
          out.moment = add(out.moment, sub(s.moment, piece.moment));
        }
        continue;
      }
      // Strict 2/2 split of a tetrahedron: the kept side is a prism over the
      // inside edge, split into three tetrahedra along its planar quads.
      std::vector<std::size_t> in, outv;
      for (std::size_t i = 0; i < s.v.size(); ++i) (t[i] < 0 ? in : outv).push_back(i);
      Point qac = cut_point(s, t, in[0], outv[0]);
      Point qad = cut_point(s, t, in[0], outv[1]);
      Point qbc = cut_point(s, t, in[1], outv[0]);
      Point qbd = cut_point(s, t, in[1], outv[1]);
      const Point& a = s.v[in[0]];
      const Point& b = s.v[in[1]];
      add_tet(out, {a, qac, qad, b});
      add_tet(out, {qac, qad, b, qbc});
      add_tet(out, {qad, b, qbc, qbd});
    }
    return out;
  }

  const Rat& total_volume() const { return total_; }
  const Point& body_centroid() const { return centroid_; }
  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }

  const Point& min_vertex(const Point& v) const {
    std::size_t best = 0;
    Rat bestval = dot(v, vertices_[0]);
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
      Rat val = dot(v, vertices_[i]);
      if (val < bestval) {
        bestval = std::move(val);
        best = i;
      }
    }
    return vertices_[best];
  }

 private:
  struct Simplex {
    std::vector<Point> v;
    Rat volume;
    Point moment;
  };

  Point cut_point(const Simplex& s, const std::vector<Rat>& t, std::size_t i,
                  std::size_t j) const {
    Rat lam = t[i] / (t[i] - t[j]);
    return add(s.v[i], scaled(sub(s.v[j], s.v[i]), lam));
  }

  Piece corner_piece(const Simplex& s, const std::vector<Rat>& t, std::size_t apex) const {
    Rat vol = s.volume;
    Point sum = s.v[apex];
    for (std::size_t j = 0; j < s.v.size(); ++j) {
      if (j == apex) continue;
      Rat lam = t[apex] / (t[apex] - t[j]);
      sum = add(sum, add(s.v[apex], scaled(sub(s.v[j], s.v[apex]), lam)));
      vol *= lam;
    }
    return Piece{vol, scaled(sum, vol / (dim_ + 1))};
  }

  void add_tet(Piece& acc, const std::vector<Point>& pts) const {
    Rat vol = detail::simplex_volume(pts);
    if (vol == 0) return;
    Point sum(static_cast<std::size_t>(dim_), Rat(0));
    for (const auto& q : pts) sum = add(sum, q);
    acc.volume += vol;
    acc.moment = add(acc.moment, scaled(sum, vol / (dim_ + 1)));
  }

  int dim_;
  std::vector<Point> vertices_;
  std::vector<Simplex> simplices_;
  Rat total_ = 0;
  Point moment_, centroid_;
};

// ---------------------------------------------------------------------------
// Direction families
// ---------------------------------------------------------------------------

inline std::vector<Point> directions_2d(int count) {
  if (count < 1) throw std::invalid_argument("need at least one direction");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double th = 2.0 * M_PI * i / count;
    out.push_back(point_from_doubles({std::cos(th), std::sin(th)}));
  }
  return out;
}

inline std::vector<Point> directions_3d(int count) {
  if (count < 1) throw std::invalid_argument("need at least one direction");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double th = golden * i;
    out.push_back(point_from_doubles({r * std::cos(th), r * std::sin(th), z}));
  }
  return out;
}

inline std::vector<Point> sweep_directions(int dim, int count) {
  if (dim == 1) return {Point{Rat(1)}, Point{Rat(-1)}};
  if (dim == 2) return directions_2d(count);
  if (dim == 3) return directions_3d(count);
  throw std::invalid_argument("unsupported dimension");
}

// ---------------------------------------------------------------------------
// Cap level and region boundary
// ---------------------------------------------------------------------------

/// Level c with vol(P cut at c) = fraction * vol(P), located by bisection.
/// The cut volume is strictly increasing in c, so the level is unique; the
/// loop stops once both the volume error and the bracket width are within
/// tol (relative to total volume and support width respectively).
inline CapCut cap_level(const CapEvaluator& body, const Point& v, const Rat& fraction,
                        const CapOptions& opt = {}) {
  if (!(fraction > 0 && fraction < 1))
    throw std::invalid_argument("cap fraction must lie strictly between 0 and 1");
  CapEvaluator::Prepared pv = body.prepare(v);
  Rat target = fraction * body.total_volume();
  Rat tol = Rat(opt.tol);
  Rat vol_tol = tol * body.total_volume();
  Rat width_tol = tol * (pv.smax - pv.smin);
  Rat lo = pv.smin, hi = pv.smax;
  for (int i = 0; i < opt.max_iter; ++i) {
    Rat c = (lo + hi) / 2;
    CapEvaluator::Piece piece = body.eval(pv, c);
    Rat err = piece.volume - target;
    if (err < 0) err = -err;
    if (err <= vol_tol && hi - lo <= width_tol) {
      CapCut out;
      out.direction = v;
      out.level = c;
      out.fraction = piece.volume / body.total_volume();
      out.centroid = scaled(piece.moment, Rat(1) / piece.volume);
      return out;
    }
    (piece.volume < target ? lo : hi) = c;
  }
  throw std::runtime_error("cap bisection did not converge");
}

inline CapCut cap_level(const Polytope& p, const Point& v, const Rat& fraction,
                        const CapOptions& opt = {}) {
  return cap_level(CapEvaluator(p), v, fraction, opt);
}

struct RegionPoint {
  Point direction;
  Rat level = 0;
  Point point;
};

/// One boundary sample per direction: the centroid of the cap holding the
/// given volume fraction. Fraction 0 degenerates to the lowest vertex in
/// each direction, fraction 1 to the body centroid.
inline std::vector<RegionPoint> region_boundary(const Polytope& p, const Rat& fraction,
                                                int directions, const CapOptions& opt = {}) {
  if (fraction < 0 || fraction > 1) throw std::invalid_argument("fraction out of range");
  CapEvaluator body(p);
  std::vector<RegionPoint> out;
  for (const Point& v : sweep_directions(p.dim, directions)) {
    RegionPoint rp;
    rp.direction = v;
    if (fraction == 0) {
      rp.point = body.min_vertex(v);
      rp.level = dot(v, rp.point);
    } else if (fraction == 1) {
      rp.point = body.body_centroid();
      rp.level = dot(v, rp.point);
    } else {
      CapCut cut = cap_level(body, v, fraction, opt);
      rp.level = cut.level;
      rp.point = cut.centroid;
    }
    out.push_back(std::move(rp));
  }
  return out;
}

/// Supporting-hyperplane test against precomputed boundary samples: x must
/// sit on the far side of every sampled boundary point, i.e. v.x >= v.x_v - tol.
inline bool region_contains(const std::vector<RegionPoint>& boundary, const Point& x,
                            double tol = 1e-9) {
  Rat slack = Rat(tol);
  for (const RegionPoint& rp : boundary)
    if (dot(rp.direction, x) < dot(rp.direction, rp.point) - slack) return false;
  return true;
}

/// Sampled membership test for the fraction-a region.
inline bool region_contains(const Polytope& p, const Rat& fraction, const Point& x,
                            int directions, double tol = 1e-9, const CapOptions& opt = {}) {
  if (!contains(p, x)) return false;
  return region_contains(region_boundary(p, fraction, directions, opt), x, tol);
}

// ---------------------------------------------------------------------------
// Direction sweep for the cap statistic
// ---------------------------------------------------------------------------

struct TauSweep {
  double fraction = 0;  // min over directions of the matched cap fraction
  double volume = 0;
  bool inside = false;
  Point min_direction;
};

/// For each direction, the cap centroid height v.centroid(cap) grows
/// strictly with the level, so there is a unique cap whose centroid matches
/// x in that direction; its volume fraction is the directional value and the
/// sweep reports the minimum. Points outside the body get 0.
inline TauSweep tau_direction_sweep(const Polytope& p, const Point& x, int directions,
                                    const CapOptions& opt = {}) {
  TauSweep out;
  if (!contains(p, x)) return out;
  out.inside = true;
  out.fraction = 1.0;
  CapEvaluator body(p);
  Rat width_tol_scale = Rat(opt.tol);
  for (const Point& v : sweep_directions(p.dim, directions)) {
    Rat g = dot(v, x);
    Rat cmax_height = dot(v, body.body_centroid());
    if (g >= cmax_height) continue;  // whole body already balances past x
    CapEvaluator::Prepared pv = body.prepare(v);
    if (g <= pv.smin) {
      out.fraction = 0.0;
      out.min_direction = v;
      break;
    }
    Rat lo = pv.smin, hi = pv.smax;
    Rat width_tol = width_tol_scale * (pv.smax - pv.smin);
    for (int i = 0; i < opt.max_iter && hi - lo > width_tol; ++i) {
      Rat c = (lo + hi) / 2;
      CapEvaluator::Piece piece = body.eval(pv, c);
      (dot(v, piece.moment) < g * piece.volume ? lo : hi) = c;
    }
    Rat c = (lo + hi) / 2;
    double frac = to_double(body.eval(pv, c).volume / body.total_volume());
    if (frac < out.fraction) {
      out.fraction = frac;
      out.min_direction = v;
    }
    if (out.fraction == 0.0) break;
  }
  out.volume = out.fraction * to_double(body.total_volume());
  return out;
}

}  // namespace torsyz
