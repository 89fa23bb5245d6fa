#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "torsyz/polytope.hpp"

namespace torsyz {

// ---------------------------------------------------------------------------
// Uniform cube grid inside a body
// ---------------------------------------------------------------------------

struct CellGrid {
  int n = 0;           // requested subdivisions along the longest axis
  Point origin;        // lower corner of the bounding box
  Rat side = 0;        // common cube side
  Rat cell_volume = 0;
  std::vector<Point> centers;  // cells whose closed cube lies inside the body
};

inline CellGrid grid_cells(const Polytope& p, int n) {
  if (n < 1) throw std::invalid_argument("grid needs at least one cell per axis");
  if (p.degenerate || p.unbounded || p.empty())
    throw std::invalid_argument("grid needs a bounded full-dimensional body");
  std::size_t dim = static_cast<std::size_t>(p.dim);
  Point lo = p.vertices[0], hi = p.vertices[0];
  for (const auto& v : p.vertices)
    for (std::size_t i = 0; i < dim; ++i) {
      if (v[i] < lo[i]) lo[i] = v[i];
      if (v[i] > hi[i]) hi[i] = v[i];
    }
  Rat h = 0;
  for (std::size_t i = 0; i < dim; ++i)
    if ((hi[i] - lo[i]) / n > h) h = (hi[i] - lo[i]) / n;

  std::vector<long> cells_per_axis(dim);
  for (std::size_t i = 0; i < dim; ++i)
    cells_per_axis[i] = static_cast<long>(rat_ceil((hi[i] - lo[i]) / h));

  // Memoize corner membership on the (m+1)-per-axis corner lattice.
  std::vector<long> corner_stride(dim, 1);
  long corner_total = 1;
  for (std::size_t i = dim; i-- > 0;) {
    corner_stride[i] = corner_total;
    corner_total *= cells_per_axis[i] + 1;
  }
  std::vector<char> corner_in(static_cast<std::size_t>(corner_total), 0);
  {
    std::vector<long> idx(dim, 0);
    Point pt(dim);
    for (long flat = 0; flat < corner_total; ++flat) {
      long rem = flat;
      for (std::size_t i = 0; i < dim; ++i) {
        idx[i] = rem / corner_stride[i];
        rem %= corner_stride[i];
        pt[i] = lo[i] + h * idx[i];
      }
      corner_in[static_cast<std::size_t>(flat)] = contains(p, pt) ? 1 : 0;
    }
  }

  CellGrid grid;
  grid.n = n;
  grid.origin = lo;
  grid.side = h;
  grid.cell_volume = 1;
  for (std::size_t i = 0; i < dim; ++i) grid.cell_volume *= h;

  std::vector<long> cell(dim, 0);
  for (;;) {
    bool inside = true;
    for (long corner = 0; corner < (1L << dim) && inside; ++corner) {
      long flat = 0;
      for (std::size_t i = 0; i < dim; ++i)
        flat += (cell[i] + ((corner >> i) & 1)) * corner_stride[i];
      inside = corner_in[static_cast<std::size_t>(flat)] != 0;
    }
    if (inside) {
      Point c(dim);
      for (std::size_t i = 0; i < dim; ++i) c[i] = lo[i] + h * cell[i] + h / 2;
      grid.centers.push_back(std::move(c));
    }
    std::size_t axis = dim;
    while (axis-- > 0) {
      if (++cell[axis] < cells_per_axis[axis]) break;
      cell[axis] = 0;
      if (axis == 0) return grid;
    }
    if (cell == std::vector<long>(dim, 0)) return grid;
  }
}

// ---------------------------------------------------------------------------
// Exact bounded-variable simplex
// ---------------------------------------------------------------------------

namespace detail {

/// maximize obj.x subject to cols.x = rhs, 0 <= x_j <= upper_j.
///
/// All simplex state is exact rational; floating-point shadows only steer
/// the entering-variable choice, and every chosen reduced cost is re-checked
/// exactly. Optimality is certified by an exact full pricing scan, with
/// Bland's rule as the anti-cycling fallback.
class BoundedSimplex {
 public:
  BoundedSimplex(std::vector<std::vector<Rat>> cols, std::vector<Rat> obj,
                 std::vector<Rat> upper, std::vector<Rat> rhs, std::vector<int> start_basis = {})
      : cols_(std::move(cols)), obj_(std::move(obj)), upper_(std::move(upper)),
        rhs_(std::move(rhs)) {
    m_ = rhs_.size();
    k_ = cols_.size();
    if (obj_.size() != k_ || upper_.size() != k_) throw std::invalid_argument("lp shape mismatch");
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      int b = start_basis.empty() ? -1 : start_basis[r];
      if (b < 0) {
        if (rhs_[r] != 0) throw std::invalid_argument("artificial start needs zero rhs");
        std::vector<Rat> e(m_, Rat(0));
        e[r] = 1;
        cols_.push_back(std::move(e));
        obj_.push_back(0);
        upper_.push_back(0);
        basis_[r] = static_cast<int>(cols_.size() - 1);
      } else {
        for (std::size_t s = 0; s < m_; ++s)
          if (cols_[static_cast<std::size_t>(b)][s] != (s == r ? 1 : 0))
            throw std::invalid_argument("start basis column must be a unit vector");
        if (rhs_[r] < 0 || rhs_[r] > upper_[static_cast<std::size_t>(b)])
          throw std::invalid_argument("start basis value out of bounds");
        basis_[r] = b;
      }
    }
    nvars_ = cols_.size();
    status_.assign(nvars_, Status::lower);
    for (std::size_t r = 0; r < m_; ++r) status_[static_cast<std::size_t>(basis_[r])] = Status::basic;
    xb_ = rhs_;
    dcols_.resize(nvars_);
    dobj_.resize(nvars_);
    for (std::size_t j = 0; j < nvars_; ++j) {
      dcols_[j].resize(m_);
      for (std::size_t r = 0; r < m_; ++r) dcols_[j][r] = to_double(cols_[j][r]);
      dobj_[j] = to_double(obj_[j]);
    }
  }

  Rat solve() {
    bool bland = false;
    long stall = 0;
    for (long iter = 0; iter < iter_limit_; ++iter) {
      std::vector<std::vector<Rat>> binv = basis_inverse();
      std::vector<Rat> y(m_, Rat(0));
      for (std::size_t r = 0; r < m_; ++r) {
        const Rat& cb = obj_[static_cast<std::size_t>(basis_[r])];
        if (cb == 0) continue;
        for (std::size_t s = 0; s < m_; ++s) y[s] += cb * binv[r][s];
      }

      int enter = -1;
      int dir = 0;
      if (!bland) pick_by_doubles(y, enter, dir);
      if (enter < 0) pick_exact(y, bland, enter, dir);
      if (enter < 0) return objective();  // exact scan found nothing improving

      std::vector<Rat> d(m_, Rat(0));
      const auto& aj = cols_[static_cast<std::size_t>(enter)];
      for (std::size_t r = 0; r < m_; ++r)
        for (std::size_t s = 0; s < m_; ++s) d[r] += binv[r][s] * aj[s];

      // Ratio test: basics stay within bounds, entering within its range.
      Rat tmax = upper_[static_cast<std::size_t>(enter)];
      int leave_row = -1;
      int leave_to_upper = 0;
      for (std::size_t r = 0; r < m_; ++r) {
        Rat step = Rat(dir) * d[r];
        Rat limit;
        int to_upper;
        if (step > 0) {
          limit = xb_[r] / step;
          to_upper = 0;
        } else if (step < 0) {
          limit = (upper_[static_cast<std::size_t>(basis_[r])] - xb_[r]) / -step;
          to_upper = 1;
        } else {
          continue;
        }
        if (limit < tmax ||
            (limit == tmax && leave_row >= 0 &&
             basis_[r] < basis_[static_cast<std::size_t>(leave_row)])) {
          tmax = limit;
          leave_row = static_cast<int>(r);
          leave_to_upper = to_upper;
        }
      }

      stall = tmax == 0 ? stall + 1 : 0;
      if (stall > 64) bland = true;

      for (std::size_t r = 0; r < m_; ++r) xb_[r] -= Rat(dir) * tmax * d[r];
      if (leave_row < 0) {
        // Bound flip: the entering variable crosses to its other bound.
        status_[static_cast<std::size_t>(enter)] =
            dir > 0 ? Status::upper : Status::lower;
      } else {
        int leaving = basis_[static_cast<std::size_t>(leave_row)];
        status_[static_cast<std::size_t>(leaving)] =
            leave_to_upper ? Status::upper : Status::lower;
        basis_[static_cast<std::size_t>(leave_row)] = enter;
        xb_[static_cast<std::size_t>(leave_row)] =
            dir > 0 ? tmax : upper_[static_cast<std::size_t>(enter)] - tmax;
        status_[static_cast<std::size_t>(enter)] = Status::basic;
      }
    }
    throw std::runtime_error("lp iteration limit reached");
  }

  /// Structural variable values (artificials excluded).
  std::vector<Rat> solution() const {
    std::vector<Rat> out(k_);
    for (std::size_t j = 0; j < k_; ++j)
      out[j] = status_[j] == Status::upper ? upper_[j] : Rat(0);
    for (std::size_t r = 0; r < m_; ++r)
      if (static_cast<std::size_t>(basis_[r]) < k_)
        out[static_cast<std::size_t>(basis_[r])] = xb_[r];
    return out;
  }

 private:
  enum class Status { lower, upper, basic };

  Rat objective() const {
    Rat z = 0;
    std::vector<Rat> x = solution();
    for (std::size_t j = 0; j < k_; ++j)
      if (x[j] != 0) z += obj_[j] * x[j];
    return z;
  }

  std::vector<std::vector<Rat>> basis_inverse() const {
    std::vector<std::vector<Rat>> a(m_, std::vector<Rat>(2 * m_, Rat(0)));
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t s = 0; s < m_; ++s)
        a[s][r] = cols_[static_cast<std::size_t>(basis_[r])][s];
      a[r][m_ + r] = 1;
    }
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t piv = col;
      while (piv < m_ && a[piv][col] == 0) ++piv;
      if (piv == m_) throw std::logic_error("singular lp basis");
      std::swap(a[piv], a[col]);
      Rat inv = Rat(1) / a[col][col];
      for (std::size_t s = col; s < 2 * m_; ++s) a[col][s] *= inv;
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == col || a[r][col] == 0) continue;
        Rat f = a[r][col];
        for (std::size_t s = col; s < 2 * m_; ++s) a[r][s] -= f * a[col][s];
      }
    }
    std::vector<std::vector<Rat>> inv(m_, std::vector<Rat>(m_));
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t s = 0; s < m_; ++s) inv[r][s] = a[r][m_ + s];
    return inv;
  }

  Rat reduced_cost(const std::vector<Rat>& y, std::size_t j) const {
    Rat r = obj_[j];
    for (std::size_t s = 0; s < m_; ++s)
      if (cols_[j][s] != 0) r -= y[s] * cols_[j][s];
    return r;
  }

  void pick_by_doubles(const std::vector<Rat>& y, int& enter, int& dir) const {
    std::vector<double> yd(m_);
    for (std::size_t s = 0; s < m_; ++s) yd[s] = to_double(y[s]);
    double best = 1e-9;
    int cand = -1, cand_dir = 0;
    for (std::size_t j = 0; j < nvars_; ++j) {
      if (status_[j] == Status::basic) continue;
      if (upper_[j] == 0) continue;
      double r = dobj_[j];
      for (std::size_t s = 0; s < m_; ++s) r -= yd[s] * dcols_[j][s];
      if (status_[j] == Status::lower ? r > best : r < -best) {
        best = status_[j] == Status::lower ? r : -r;
        cand = static_cast<int>(j);
        cand_dir = status_[j] == Status::lower ? 1 : -1;
      }
    }
    if (cand < 0) return;
    Rat exact = reduced_cost(y, static_cast<std::size_t>(cand));
    if ((cand_dir > 0 && exact > 0) || (cand_dir < 0 && exact < 0)) {
      enter = cand;
      dir = cand_dir;
    }
  }

  void pick_exact(const std::vector<Rat>& y, bool lowest_index, int& enter, int& dir) const {
    Rat best = 0;
    for (std::size_t j = 0; j < nvars_; ++j) {
      if (status_[j] == Status::basic || upper_[j] == 0) continue;
      Rat r = reduced_cost(y, j);
      if (status_[j] == Status::lower && r > 0) {
        if (lowest_index) {
          enter = static_cast<int>(j);
          dir = 1;
          return;
        }
        if (r > best) {
          best = r;
          enter = static_cast<int>(j);
          dir = 1;
        }
      } else if (status_[j] == Status::upper && r < 0) {
        if (lowest_index) {
          enter = static_cast<int>(j);
          dir = -1;
          return;
        }
        if (-r > best) {
          best = -r;
          enter = static_cast<int>(j);
          dir = -1;
        }
      }
    }
  }

  std::vector<std::vector<Rat>> cols_;
  std::vector<Rat> obj_, upper_, rhs_;
  std::vector<std::vector<double>> dcols_;
  std::vector<double> dobj_;
  std::vector<int> basis_;
  std::vector<Status> status_;
  std::vector<Rat> xb_;
  std::size_t m_ = 0, k_ = 0, nvars_ = 0;
  long iter_limit_ = 200000;
};

inline Rat root_below(const Rat& lam, int n, int bits = 40) {
  if (n == 1) return lam;
  Int a = numerator(lam), b = denominator(lam);
  Int target = a << (static_cast<unsigned>(bits) * static_cast<unsigned>(n));
  Int lo = 0, hi = Int(1) << static_cast<unsigned>(bits);
  while (lo < hi) {
    Int mid = (lo + hi + 1) / 2;
    Int mn = 1;
    for (int i = 0; i < n; ++i) mn *= mid;
    if (mn * b <= target) lo = mid;
    else hi = mid - 1;
  }
  return Rat(lo) / Rat(Int(1) << static_cast<unsigned>(bits));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Grid relaxation of the cap statistic
// ---------------------------------------------------------------------------

struct TauLP {
  Rat fraction = 0;  // covered volume over body volume
  Rat volume = 0;
  bool positive = false;
  std::vector<std::pair<std::size_t, Rat>> lambda;  // nonzero cell multipliers
};

/// Largest grid-supported volume balancing at x: maximize the covered cell
/// mass subject to the center of mass sitting exactly at x, each cell used
/// with multiplicity between 0 and 1. Cells are the inside cubes of an
/// n-per-axis grid, so the value approaches the cap statistic from below as
/// n grows.
inline TauLP tau_grid_lp(const Polytope& p, const Point& x, const CellGrid& grid) {
  std::size_t dim = static_cast<std::size_t>(p.dim);
  if (x.size() != dim) throw std::invalid_argument("point dimension mismatch");
  TauLP out;
  if (grid.centers.empty()) return out;
  std::size_t k = grid.centers.size();
  std::vector<std::vector<Rat>> cols(k, std::vector<Rat>(dim));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < dim; ++i) cols[j][i] = grid.centers[j][i] - x[i];
  std::vector<Rat> obj(k, Rat(1)), upper(k, Rat(1)), rhs(dim, Rat(0));
  detail::BoundedSimplex lp(std::move(cols), std::move(obj), std::move(upper), std::move(rhs));
  Rat count = lp.solve();
  out.volume = count * grid.cell_volume;
  out.fraction = out.volume / volume(p);
  out.positive = count > 0;
  std::vector<Rat> sol = lp.solution();
  for (std::size_t j = 0; j < k; ++j)
    if (sol[j] != 0) out.lambda.emplace_back(j, sol[j]);
  return out;
}

inline TauLP tau_grid_lp(const Polytope& p, const Point& x, int n) {
  return tau_grid_lp(p, x, grid_cells(p, n));
}

// ---------------------------------------------------------------------------
// Explicit balanced cube families
// ---------------------------------------------------------------------------

struct Cube {
  Point corner;  // lower corner
  Rat side = 0;
};

struct ShapeOptions {
  int grid_n = 16;
  bool translate = false;  // shift the family so the center of mass is exact
  double com_tol = 1e-9;
};

struct ShapeResult {
  std::vector<Cube> cubes;
  Rat volume = 0;
  Point com;
  bool empty_target = false;
  bool translated = false;
  bool inside_ok = true;
  bool disjoint_ok = true;
  bool com_ok = true;
};

/// Interior-disjoint axis-aligned cubes inside the body whose union has the
/// requested volume fraction and balances at x. Full-weight LP cells are
/// kept whole; fractional cells shrink about their centers (side rounded
/// down to 40 binary digits, so the volume lands just under the target).
/// The optional translation restores the center of mass exactly at the cost
/// of cubes possibly drifting off the grid.
inline ShapeResult shape_for(const Polytope& p, const Point& x, const Rat& target_fraction,
                             const ShapeOptions& opt = {}) {
  std::size_t dim = static_cast<std::size_t>(p.dim);
  if (x.size() != dim) throw std::invalid_argument("point dimension mismatch");
  if (target_fraction < 0 || target_fraction > 1)
    throw std::invalid_argument("target fraction out of range");
  ShapeResult out;
  out.com = x;
  if (target_fraction == 0) {
    out.empty_target = true;
    return out;
  }

  CellGrid grid = grid_cells(p, opt.grid_n);
  Rat target_count = target_fraction * volume(p) / grid.cell_volume;
  std::size_t k = grid.centers.size();
  std::vector<std::vector<Rat>> cols(k + 1, std::vector<Rat>(dim + 1, Rat(0)));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < dim; ++i) cols[j][i] = grid.centers[j][i] - x[i];
    cols[j][dim] = 1;
  }
  cols[k][dim] = 1;  // slack soaking up the unreached part of the target
  std::vector<Rat> obj(k + 1, Rat(1)), upper(k + 1, Rat(1)), rhs(dim + 1, Rat(0));
  obj[k] = 0;
  upper[k] = target_count;
  rhs[dim] = target_count;
  std::vector<int> start(dim + 1, -1);
  start[dim] = static_cast<int>(k);
  detail::BoundedSimplex lp(std::move(cols), std::move(obj), std::move(upper), std::move(rhs),
                            std::move(start));
  Rat achieved = lp.solve();
  if (achieved < target_count) throw std::runtime_error("target fraction exceeds tau at this point");

  std::vector<Rat> lam = lp.solution();
  Point mass_center(dim, Rat(0));
  for (std::size_t j = 0; j < k; ++j) {
    if (lam[j] == 0) continue;
    Cube c;
    if (lam[j] == 1) {
      c.side = grid.side;
    } else {
      c.side = grid.side * detail::root_below(lam[j], static_cast<int>(dim));
      if (c.side == 0) continue;
    }
    c.corner = grid.centers[j];
    for (std::size_t i = 0; i < dim; ++i) c.corner[i] -= c.side / 2;
    Rat cvol = 1;
    for (std::size_t i = 0; i < dim; ++i) cvol *= c.side;
    out.volume += cvol;
    mass_center = add(mass_center, scaled(grid.centers[j], cvol));
    out.cubes.push_back(std::move(c));
  }
  if (out.volume > 0) mass_center = scaled(mass_center, Rat(1) / out.volume);
  out.com = mass_center;

  if (opt.translate && out.volume > 0) {
    Point shift = sub(x, out.com);
    for (auto& c : out.cubes) c.corner = add(c.corner, shift);
    out.com = x;
    out.translated = true;
  }

  // Verification pass: containment, pairwise interior-disjointness, balance.
  for (const auto& c : out.cubes) {
    for (long cr = 0; cr < (1L << dim) && out.inside_ok; ++cr) {
      Point pt = c.corner;
      for (std::size_t i = 0; i < dim; ++i)
        if ((cr >> i) & 1) pt[i] += c.side;
      if (!contains(p, pt)) out.inside_ok = false;
    }
  }
  for (std::size_t a = 0; a < out.cubes.size() && out.disjoint_ok; ++a)
    for (std::size_t b = a + 1; b < out.cubes.size() && out.disjoint_ok; ++b) {
      bool overlap = true;
      for (std::size_t i = 0; i < dim && overlap; ++i) {
        Rat lo = std::max(out.cubes[a].corner[i], out.cubes[b].corner[i]);
        Rat hi = std::min(out.cubes[a].corner[i] + out.cubes[a].side,
                          out.cubes[b].corner[i] + out.cubes[b].side);
        if (lo >= hi) overlap = false;
      }
      if (overlap) out.disjoint_ok = false;
    }
  Rat tol = Rat(opt.com_tol);
  for (std::size_t i = 0; i < dim; ++i) {
    Rat diff = out.com[i] - x[i];
    if (diff < 0) diff = -diff;
    if (diff > tol) out.com_ok = false;
  }
  return out;
}

}  // namespace torsyz
