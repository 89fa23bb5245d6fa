#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "torsyz/cap_body.hpp"
#include "torsyz/koszul.hpp"
#include "torsyz/lattice.hpp"
#include "torsyz/polytope.hpp"

namespace torsyz {

// ---------------------------------------------------------------------------
// Sum sets of wedge supports
// ---------------------------------------------------------------------------

struct WedgeSums {
  int p = 0;
  bool exact = true;  // false when subsets were sampled instead of enumerated
  std::vector<IntVec> sums;
};

/// Distinct p-fold subset sums of a point list. When the subset count
/// exceeds the limit, a seeded random sample of subsets is taken instead and
/// the result is flagged as inexact.
inline WedgeSums wedge_sum_set(const std::vector<IntVec>& points, int p,
                               std::size_t limit = 200000, unsigned seed = 1) {
  if (p < 0) throw std::invalid_argument("negative subset size");
  WedgeSums out;
  out.p = p;
  std::size_t n = points.size();
  if (p == 0) {
    out.sums.push_back(IntVec(points.empty() ? 0 : points[0].size(), 0));
    return out;
  }
  if (static_cast<std::size_t>(p) > n) return out;

  std::size_t count = 1;
  for (int i = 1; i <= p; ++i) {
    count = count * (n - static_cast<std::size_t>(p) + static_cast<std::size_t>(i)) /
            static_cast<std::size_t>(i);
    if (count > 4 * limit) break;  // enough to know we are over
  }

  std::set<IntVec> acc;
  std::size_t dim = points[0].size();
  if (count <= limit) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(p));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (;;) {
      IntVec s(dim, 0);
      for (std::size_t i : idx)
        for (std::size_t t = 0; t < dim; ++t) s[t] += points[i][t];
      acc.insert(std::move(s));
      std::size_t j = idx.size();
      while (j-- > 0) {
        if (idx[j] != n - idx.size() + j) {
          ++idx[j];
          for (std::size_t t = j + 1; t < idx.size(); ++t) idx[t] = idx[t - 1] + 1;
          break;
        }
        if (j == 0) {
          out.sums.assign(acc.begin(), acc.end());
          return out;
        }
      }
    }
  }

  out.exact = false;
  std::mt19937 rng(seed);
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<std::size_t> pick(static_cast<std::size_t>(p));
  for (std::size_t trial = 0; trial < limit; ++trial) {
    std::sample(all.begin(), all.end(), pick.begin(), pick.size(), rng);
    IntVec s(dim, 0);
    for (std::size_t i : pick)
      for (std::size_t t = 0; t < dim; ++t) s[t] += points[i][t];
    acc.insert(std::move(s));
  }
  out.sums.assign(acc.begin(), acc.end());
  return out;
}

// ---------------------------------------------------------------------------
// Greedy average witnesses
// ---------------------------------------------------------------------------

struct AverageWitness {
  bool found = false;
  long d = 0;
  long p = 0;
  std::vector<IntVec> points;  // distinct lattice points of d*Delta
  Point average;               // exact: (sum of points) / (p*d)
  Rat dist2 = 0;               // exact squared distance from average to target
  double distance = 0;
};

/// Looks for p distinct lattice points of d*Delta whose normalized average
/// lands within eps of x, trying degrees 1..d_max in order. Starts from the
/// points nearest to d*x and improves by single swaps until stuck. p_fixed
/// zero means p = d at each degree. A miss is an ordinary result with
/// found = false and the best attempt attached.
inline AverageWitness average_hit(const Polytope& delta, const Point& x, double eps, long d_max,
                                  long p_fixed = 0) {
  if (d_max < 1) throw std::invalid_argument("degree bound must be positive");
  if (!(eps > 0)) throw std::invalid_argument("tolerance must be positive");
  std::size_t dim = static_cast<std::size_t>(delta.dim);
  if (x.size() != dim) throw std::invalid_argument("point dimension mismatch");
  Rat eps2 = Rat(eps) * Rat(eps);

  AverageWitness best;
  bool have_best = false;
  for (long d = 1; d <= d_max; ++d) {
    long p = p_fixed > 0 ? p_fixed : d;
    std::vector<IntVec> pts = lattice_points(dilate(delta, d)).points;
    if (p < 1 || static_cast<std::size_t>(p) > pts.size()) continue;

    Point target(dim);
    for (std::size_t i = 0; i < dim; ++i) target[i] = Rat(d) * x[i];

    auto d2_to_target = [&](const IntVec& w) {
      Rat s = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        Rat diff = Rat(w[i]) - target[i];
        s += diff * diff;
      }
      return s;
    };
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return d2_to_target(pts[a]) < d2_to_target(pts[b]);
    });

    std::vector<char> chosen(pts.size(), 0);
    IntVec sum(dim, 0);
    for (long i = 0; i < p; ++i) {
      chosen[order[static_cast<std::size_t>(i)]] = 1;
      for (std::size_t t = 0; t < dim; ++t) sum[t] += pts[order[static_cast<std::size_t>(i)]][t];
    }

    auto objective = [&](const IntVec& s) {
      Rat val = 0;
      Rat scale = Rat(p) * d;
      for (std::size_t i = 0; i < dim; ++i) {
        Rat diff = Rat(s[i]) / scale - x[i];
        val += diff * diff;
      }
      return val;
    };
    Rat obj = objective(sum);
    for (int pass = 0; pass < 1000 && obj > 0; ++pass) {
      bool improved = false;
      std::size_t best_out = 0, best_in = 0;
      Rat best_obj = obj;
      for (std::size_t c = 0; c < pts.size(); ++c) {
        if (!chosen[c]) continue;
        for (std::size_t u = 0; u < pts.size(); ++u) {
          if (chosen[u]) continue;
          IntVec s2 = sum;
          for (std::size_t t = 0; t < dim; ++t) s2[t] += pts[u][t] - pts[c][t];
          Rat val = objective(s2);
          if (val < best_obj) {
            best_obj = val;
            best_out = c;
            best_in = u;
            improved = true;
          }
        }
      }
      if (!improved) break;
      chosen[best_out] = 0;
      chosen[best_in] = 1;
      for (std::size_t t = 0; t < dim; ++t) sum[t] += pts[best_in][t] - pts[best_out][t];
      obj = best_obj;
    }

    AverageWitness w;
    w.d = d;
    w.p = p;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (chosen[i]) w.points.push_back(pts[i]);
    w.average = Point(dim);
    for (std::size_t i = 0; i < dim; ++i) w.average[i] = Rat(sum[i]) / (Rat(p) * d);
    w.dist2 = obj;
    w.distance = std::sqrt(to_double(obj));
    w.found = obj < eps2;
    if (w.found) return w;
    if (!have_best || w.dist2 < best.dist2) {
      best = std::move(w);
      have_best = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Density of normalized weights
// ---------------------------------------------------------------------------

struct DensityReport {
  long d_max = 0;
  unsigned seed = 0;
  std::vector<Point> support;    // distinct normalized weights, linear strand
  std::vector<double> nearest;   // per-sample distance to the support
  double covering_radius = 0;
};

/// Collects every normalized weight of the q = 1 spaces for d <= d_max and
/// p in [1, r_d], then measures how far seeded uniform samples of the body
/// can sit from that set. The maximum observed distance estimates the
/// covering radius.
inline DensityReport density_report(const Polytope& delta, long d_max, long samples,
                                    unsigned seed, const RankOptions& opt = {}) {
  if (d_max < 1 || samples < 0) throw std::invalid_argument("bad density parameters");
  DensityReport rep;
  rep.d_max = d_max;
  rep.seed = seed;

  std::set<Point> support;
  for (long d = 1; d <= d_max; ++d) {
    long r_d = static_cast<long>(lattice_points(dilate(delta, d)).points.size()) - 1;
    for (long p = 1; p <= r_d; ++p) {
      WeightCloud cloud = kpq_weights(SyzygyInput{delta, d, static_cast<int>(p), 1}, opt);
      for (auto& [w, m] : cloud.entries) support.insert(cloud.normalized(w));
    }
  }
  rep.support.assign(support.begin(), support.end());

  std::size_t dim = static_cast<std::size_t>(delta.dim);
  Point lo = delta.vertices[0], hi = delta.vertices[0];
  for (const auto& v : delta.vertices)
    for (std::size_t i = 0; i < dim; ++i) {
      if (v[i] < lo[i]) lo[i] = v[i];
      if (v[i] > hi[i]) hi[i] = v[i];
    }
  std::vector<std::vector<double>> supp_d;
  supp_d.reserve(rep.support.size());
  for (const auto& s : rep.support) supp_d.push_back(to_doubles(s));

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long attempts = 0;
  while (rep.nearest.size() < static_cast<std::size_t>(samples)) {
    if (++attempts > samples * 10000) throw std::runtime_error("sampling failed to hit the body");
    std::vector<double> cand(dim);
    Point candr(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      cand[i] = to_double(lo[i]) + unit(rng) * (to_double(hi[i]) - to_double(lo[i]));
      candr[i] = Rat(cand[i]);
    }
    if (!contains(delta, candr)) continue;
    double bestd = rep.support.empty() ? std::numeric_limits<double>::infinity() : 1e300;
    for (const auto& s : supp_d) {
      double acc = 0;
      for (std::size_t i = 0; i < dim; ++i) acc += (s[i] - cand[i]) * (s[i] - cand[i]);
      bestd = std::min(bestd, acc);
    }
    rep.nearest.push_back(std::sqrt(bestd));
  }
  if (!rep.nearest.empty())
    rep.covering_radius = *std::max_element(rep.nearest.begin(), rep.nearest.end());
  return rep;
}

// ---------------------------------------------------------------------------
// Slack of the cap statistic against the homological proxy
// ---------------------------------------------------------------------------

struct BoundRow {
  int p = 0;
  IntVec weight;
  long multiplicity = 0;
  Point normalized;
  double tau = 0;
  double proxy = 0;  // p / (r_d + 1)
  double slack = 0;  // tau - proxy
};

struct UpperBoundReport {
  long d = 0;
  std::vector<BoundRow> rows;
  // (delta, fraction of rows whose slack is >= -delta)
  std::vector<std::pair<double, double>> fraction_within;
};

inline UpperBoundReport upper_bound_check(const Polytope& delta, long d, int directions,
                                          std::vector<double> deltas = {0.05, 0.1, 0.2},
                                          const RankOptions& opt = {}) {
  UpperBoundReport rep;
  rep.d = d;
  long r_d = static_cast<long>(lattice_points(dilate(delta, d)).points.size()) - 1;
  for (long p = 1; p <= r_d; ++p) {
    WeightCloud cloud = kpq_weights(SyzygyInput{delta, d, static_cast<int>(p), 1}, opt);
    for (auto& [w, m] : cloud.entries) {
      BoundRow row;
      row.p = static_cast<int>(p);
      row.weight = w;
      row.multiplicity = m;
      row.normalized = cloud.normalized(w);
      row.tau = tau_direction_sweep(delta, row.normalized, directions).fraction;
      row.proxy = static_cast<double>(p) / static_cast<double>(r_d + 1);
      row.slack = row.tau - row.proxy;
      rep.rows.push_back(std::move(row));
    }
  }
  std::sort(deltas.begin(), deltas.end());
  for (double del : deltas) {
    long ok = 0;
    for (const auto& row : rep.rows)
      if (row.slack >= -del) ++ok;
    rep.fraction_within.emplace_back(
        del, rep.rows.empty() ? 1.0 : static_cast<double>(ok) / rep.rows.size());
  }
  return rep;
}

}  // namespace torsyz
