#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "torsyz/lattice.hpp"
#include "torsyz/linalg.hpp"
#include "torsyz/polytope.hpp"
#include "torsyz/rational.hpp"

namespace torsyz {

// ---------------------------------------------------------------------------
// Inputs and result containers
// ---------------------------------------------------------------------------

struct SyzygyInput {
  Polytope delta;
  long d = 1;
  int p = 0;
  int q = 0;
};

enum class RankMode { prime_field, exact_rational };

struct RankOptions {
  RankMode mode = RankMode::prime_field;
  std::uint64_t prime = 1000003;
  std::size_t block_limit = 200000;
};

/// Multiplicities of one syzygy space, graded by lattice weight. The divisor
/// (p+q)*d rescales weights back into the base polytope; a zero divisor only
/// happens for the trivial (0,0) space, whose normalized weight is defined
/// as the origin.
struct WeightCloud {
  int p = 0, q = 0;
  long d = 1;
  long divisor = 0;
  std::map<IntVec, long> entries;

  long total() const {
    long t = 0;
    for (auto& [w, m] : entries) t += m;
    return t;
  }

  Point normalized(const IntVec& w) const {
    Point out(w.size(), Rat(0));
    if (divisor == 0) return out;
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = Rat(w[i]) / divisor;
    return out;
  }
};

enum class StrandTerm { left, middle, right };

struct StrandBasisElement {
  std::vector<std::int32_t> wedge;  // ascending indices into the degree-d basis
  IntVec module_point;
  IntVec weight;
};

struct StrandBasis {
  long total = 0;
  std::map<IntVec, std::vector<StrandBasisElement>> by_weight;
};

/// Sparse matrix with entries restricted to +-1, stored as (row, col, sign).
struct SparseMat {
  std::size_t rows = 0, cols = 0;
  std::vector<std::array<std::int64_t, 3>> triplets;
};

/// The two differentials meeting the middle strand term in one weight:
/// d_in maps left -> middle, d_out maps middle -> right.
struct KoszulBlock {
  IntVec weight;
  std::size_t left_dim = 0, middle_dim = 0, right_dim = 0;
  SparseMat d_in, d_out;
};

struct EulerReport {
  bool ok = true;
  // weight -> (chain-level alternating sum, homology-level alternating sum)
  std::map<IntVec, std::pair<long, long>> mismatches;
};

// ---------------------------------------------------------------------------
// Strand enumeration
// ---------------------------------------------------------------------------

namespace detail {

struct Elem {
  std::vector<std::int32_t> wedge;
  std::int32_t mod = 0;
};

struct IntVecHash {
  std::size_t operator()(const IntVec& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct ElemKeyHash {
  std::size_t operator()(const std::pair<std::vector<std::int32_t>, std::int32_t>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : k.first) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(x));
      h *= 1099511628211ull;
    }
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(k.second)) + 0x9e3779b9ull;
    h *= 1099511628211ull;
    return h;
  }
};

inline void check_input(const SyzygyInput& in) {
  if (in.d < 1) throw std::invalid_argument("degree must be positive");
  if (in.p < 0) throw std::invalid_argument("homological index must be nonnegative");
  if (in.q < 0) throw std::invalid_argument("strand index must be nonnegative");
  if (in.delta.degenerate || in.delta.empty())
    throw std::invalid_argument("polytope must be full-dimensional");
}

/// Basis of sections in degree m*d: lattice points of (m*d)*Delta, with the
/// convention that degree zero is spanned by the single weight-zero element.
inline std::vector<IntVec> module_points(const Polytope& delta, long d, int m) {
  if (m < 0) return {};
  if (m == 0) return {IntVec(static_cast<std::size_t>(delta.dim), 0)};
  return lattice_points(dilate(delta, m * d)).points;
}

template <class F>
void for_each_combination(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<std::int32_t> c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), 0);
  if (k == 0) {
    f(c);
    return;
  }
  for (;;) {
    f(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// All bases in play for one (p, q, d): the degree-d point basis W, the three
/// module bases, and the three strand terms bucketed by total weight.
struct StrandContext {
  int n = 0;
  int p = 0, q = 0;
  long d = 1;
  std::vector<IntVec> W;
  std::vector<IntVec> modL, modM, modR;
  std::unordered_map<IntVec, std::int32_t, IntVecHash> modM_index, modR_index;
  std::map<IntVec, std::vector<Elem>> left, mid, right;

  const std::vector<IntVec>& module(StrandTerm t) const {
    return t == StrandTerm::left ? modL : t == StrandTerm::middle ? modM : modR;
  }
  const std::map<IntVec, std::vector<Elem>>& buckets(StrandTerm t) const {
    return t == StrandTerm::left ? left : t == StrandTerm::middle ? mid : right;
  }
};

inline void fill_buckets(const StrandContext& ctx, int k, const std::vector<IntVec>& mod,
                         std::map<IntVec, std::vector<Elem>>& out) {
  int nW = static_cast<int>(ctx.W.size());
  if (k < 0 || k > nW || mod.empty()) return;
  std::size_t n = static_cast<std::size_t>(ctx.n);
  IntVec wsum(n, 0), w(n, 0);
  for_each_combination(nW, k, [&](const std::vector<std::int32_t>& c) {
    std::fill(wsum.begin(), wsum.end(), 0);
    for (auto idx : c)
      for (std::size_t i = 0; i < n; ++i) wsum[i] += ctx.W[static_cast<std::size_t>(idx)][i];
    for (std::int32_t mi = 0; mi < static_cast<std::int32_t>(mod.size()); ++mi) {
      for (std::size_t i = 0; i < n; ++i) w[i] = wsum[i] + mod[static_cast<std::size_t>(mi)][i];
      out[w].push_back(Elem{c, mi});
    }
  });
}

inline StrandContext make_context(const SyzygyInput& in) {
  check_input(in);
  StrandContext ctx;
  ctx.n = in.delta.dim;
  ctx.p = in.p;
  ctx.q = in.q;
  ctx.d = in.d;
  ctx.W = lattice_points(dilate(in.delta, in.d)).points;
  ctx.modL = module_points(in.delta, in.d, in.q - 1);
  ctx.modM = module_points(in.delta, in.d, in.q);
  ctx.modR = module_points(in.delta, in.d, in.q + 1);
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(ctx.modM.size()); ++i)
    ctx.modM_index.emplace(ctx.modM[static_cast<std::size_t>(i)], i);
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(ctx.modR.size()); ++i)
    ctx.modR_index.emplace(ctx.modR[static_cast<std::size_t>(i)], i);
  fill_buckets(ctx, in.p + 1, ctx.modL, ctx.left);
  fill_buckets(ctx, in.p, ctx.modM, ctx.mid);
  fill_buckets(ctx, in.p - 1, ctx.modR, ctx.right);
  return ctx;
}

/// Koszul boundary of one decorated wedge: drop each index in turn with
/// alternating sign, pushing the dropped point's weight into the module part.
/// Calls f(reduced_wedge, new_module_point, sign).
template <class F>
void boundary(const StrandContext& ctx, const Elem& e, const std::vector<IntVec>& mod, F&& f) {
  std::size_t k = e.wedge.size();
  std::vector<std::int32_t> sub(k > 0 ? k - 1 : 0);
  IntVec m(static_cast<std::size_t>(ctx.n));
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t t = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (i != j) sub[t++] = e.wedge[i];
    const IntVec& wj = ctx.W[static_cast<std::size_t>(e.wedge[j])];
    const IntVec& base = mod[static_cast<std::size_t>(e.mod)];
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = base[i] + wj[i];
    f(sub, m, j % 2 == 0 ? +1 : -1);
  }
}

inline const std::vector<Elem>* bucket_at(const std::map<IntVec, std::vector<Elem>>& b,
                                          const IntVec& w) {
  auto it = b.find(w);
  return it == b.end() ? nullptr : &it->second;
}

/// Row lookup for the target term of a differential within one weight.
inline std::unordered_map<std::pair<std::vector<std::int32_t>, std::int32_t>, std::int32_t,
                          ElemKeyHash>
index_bucket(const std::vector<Elem>& elems) {
  std::unordered_map<std::pair<std::vector<std::int32_t>, std::int32_t>, std::int32_t, ElemKeyHash>
      out;
  out.reserve(elems.size() * 2);
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(elems.size()); ++i)
    out.emplace(std::make_pair(elems[static_cast<std::size_t>(i)].wedge,
                               elems[static_cast<std::size_t>(i)].mod),
                i);
  return out;
}

struct TripletList {
  std::size_t rows = 0, cols = 0;
  std::vector<std::array<std::int64_t, 3>> t;
};

/// Matrix of the boundary map from `src` elements into the `dst` bucket,
/// both living at the same weight. `dst_mod_index` resolves the module point
/// produced by the boundary to its index in the target module basis.
inline TripletList differential_matrix(
    const StrandContext& ctx, const std::vector<Elem>& src, const std::vector<IntVec>& src_mod,
    const std::vector<Elem>* dst,
    const std::unordered_map<IntVec, std::int32_t, IntVecHash>& dst_mod_index) {
  TripletList out;
  out.cols = src.size();
  out.rows = dst ? dst->size() : 0;
  if (!dst || src.empty() || src[0].wedge.empty()) return out;
  auto row_of = index_bucket(*dst);
  out.t.reserve(src.size() * src[0].wedge.size());
  for (std::size_t c = 0; c < src.size(); ++c) {
    boundary(ctx, src[c], src_mod, [&](const std::vector<std::int32_t>& sub, const IntVec& m,
                                       int sign) {
      auto mit = dst_mod_index.find(m);
      if (mit == dst_mod_index.end())
        throw std::logic_error("boundary left the section basis");
      auto rit = row_of.find(std::make_pair(sub, mit->second));
      if (rit == row_of.end()) throw std::logic_error("boundary left the strand");
      out.t.push_back({rit->second, static_cast<std::int64_t>(c), sign});
    });
  }
  return out;
}

/// Checks d(d(e)) = 0 for every left element at this weight by expanding the
/// two-step boundary symbolically and cancelling signed terms.
inline void check_composite_vanishes(const StrandContext& ctx, const std::vector<Elem>& left) {
  std::map<std::pair<std::vector<std::int32_t>, IntVec>, long> acc;
  for (const Elem& e : left) {
    acc.clear();
    boundary(ctx, e, ctx.modL, [&](const std::vector<std::int32_t>& sub1, const IntVec& m1,
                                   int s1) {
      auto mit = ctx.modM_index.find(m1);
      if (mit == ctx.modM_index.end()) throw std::logic_error("boundary left the section basis");
      Elem mid{sub1, mit->second};
      boundary(ctx, mid, ctx.modM, [&](const std::vector<std::int32_t>& sub2, const IntVec& m2,
                                       int s2) { acc[{sub2, m2}] += s1 * s2; });
    });
    for (auto& [key, v] : acc)
      if (v != 0) throw std::logic_error("koszul composite does not vanish");
  }
}

inline std::string weight_str(const IntVec& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i]);
  }
  return s + ")";
}

inline std::size_t rank_of(const TripletList& m, const RankOptions& opt) {
  if (m.rows == 0 || m.cols == 0) return 0;
  if (opt.mode == RankMode::prime_field) {
    DenseModMatrix a(m.rows, m.cols, opt.prime);
    for (auto& [r, c, s] : m.t)
      a.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), static_cast<int>(s));
    return a.rank();
  }
  std::vector<std::vector<Rat>> a(m.rows, std::vector<Rat>(m.cols, Rat(0)));
  for (auto& [r, c, s] : m.t)
    a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = Rat(s);
  return rank_exact(a);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Basis of one term of the three-term strand at (p, q, d), grouped by weight.
/// Within a weight, elements are ordered by wedge tuple then module index.
inline StrandBasis strand_basis(const SyzygyInput& in, StrandTerm term) {
  auto ctx = detail::make_context(in);
  const auto& mod = ctx.module(term);
  StrandBasis out;
  for (auto& [w, elems] : ctx.buckets(term)) {
    auto& dst = out.by_weight[w];
    dst.reserve(elems.size());
    for (const auto& e : elems)
      dst.push_back(StrandBasisElement{e.wedge, mod[static_cast<std::size_t>(e.mod)], w});
    out.total += static_cast<long>(elems.size());
  }
  return out;
}

/// Both differentials of the strand restricted to one weight. A weight that
/// supports no middle element yields an all-empty block.
inline KoszulBlock koszul_differential(const SyzygyInput& in, const IntVec& weight) {
  auto ctx = detail::make_context(in);
  if (weight.size() != static_cast<std::size_t>(ctx.n))
    throw std::invalid_argument("weight dimension mismatch");
  KoszulBlock out;
  out.weight = weight;
  const auto* left = detail::bucket_at(ctx.left, weight);
  const auto* mid = detail::bucket_at(ctx.mid, weight);
  const auto* right = detail::bucket_at(ctx.right, weight);
  out.left_dim = left ? left->size() : 0;
  out.middle_dim = mid ? mid->size() : 0;
  out.right_dim = right ? right->size() : 0;
  if (mid) {
    if (left) {
      auto din = detail::differential_matrix(ctx, *left, ctx.modL, mid, ctx.modM_index);
      out.d_in = SparseMat{din.rows, din.cols, std::move(din.t)};
    } else {
      out.d_in = SparseMat{out.middle_dim, 0, {}};
    }
    auto dout = detail::differential_matrix(ctx, *mid, ctx.modM, right, ctx.modR_index);
    out.d_out = SparseMat{dout.rows, dout.cols, std::move(dout.t)};
  } else {
    out.d_in = SparseMat{0, out.left_dim, {}};
    out.d_out = SparseMat{out.right_dim, 0, {}};
  }
  return out;
}

/// Weight-graded multiplicities of the syzygy space at (p, q, d): for each
/// weight, dim(middle) - rank(d_in) - rank(d_out) over the chosen field.
///
/// In prime mode the incoming rank at q = 1 is short-circuited to the full
/// left dimension (the first differential of the strand is injective there);
/// exact mode always eliminates, so cross-mode agreement exercises the
/// shortcut.
inline WeightCloud kpq_weights(const SyzygyInput& in, const RankOptions& opt = {}) {
  auto ctx = detail::make_context(in);
  WeightCloud cloud;
  cloud.p = in.p;
  cloud.q = in.q;
  cloud.d = in.d;
  cloud.divisor = static_cast<long>(in.p + in.q) * in.d;

  for (auto& [w, mid] : ctx.mid) {
    const auto* left = detail::bucket_at(ctx.left, w);
    const auto* right = detail::bucket_at(ctx.right, w);
    std::size_t nl = left ? left->size() : 0;
    std::size_t nm = mid.size();
    std::size_t nr = right ? right->size() : 0;
    if (nm > opt.block_limit) {
      std::ostringstream os;
      os << "koszul block at weight " << detail::weight_str(w) << " exceeds limit: left=" << nl
         << " middle=" << nm << " right=" << nr << " limit=" << opt.block_limit;
      throw std::length_error(os.str());
    }
    if (left) detail::check_composite_vanishes(ctx, *left);

    std::size_t rank_in = 0;
    if (left) {
      if (in.q == 1 && opt.mode == RankMode::prime_field) {
        rank_in = nl;  // injective first differential
      } else {
        auto din = detail::differential_matrix(ctx, *left, ctx.modL, &mid, ctx.modM_index);
        rank_in = detail::rank_of(din, opt);
      }
    }
    std::size_t rank_out = 0;
    if (right && nm > 0) {
      auto dout = detail::differential_matrix(ctx, mid, ctx.modM, right, ctx.modR_index);
      rank_out = detail::rank_of(dout, opt);
    }
    if (rank_in + rank_out > nm) throw std::logic_error("rank bound violated in koszul block");
    long mult = static_cast<long>(nm - rank_in - rank_out);
    if (mult > 0) cloud.entries.emplace(w, mult);
  }

  // Every surviving weight must lie in the dilation (p+q)*d of the base body.
  if (cloud.divisor > 0 && !cloud.entries.empty()) {
    Polytope big = dilate(in.delta, cloud.divisor);
    for (auto& [w, m] : cloud.entries)
      if (!contains(big, to_point(w))) throw std::logic_error("weight escaped its dilation");
  }
  return cloud;
}

/// Runs both rank modes and insists they agree weight-by-weight. Disagreement
/// means the prime dropped rank on this input.
inline WeightCloud kpq_weights_checked(const SyzygyInput& in, const RankOptions& opt = {}) {
  RankOptions prime = opt;
  prime.mode = RankMode::prime_field;
  RankOptions exact = opt;
  exact.mode = RankMode::exact_rational;
  WeightCloud a = kpq_weights(in, prime);
  WeightCloud b = kpq_weights(in, exact);
  if (a.entries != b.entries) throw std::runtime_error("prime unlucky, rerun");
  return a;
}

/// Alternating-sum consistency across the full Koszul complex in homological
/// width s: per weight, the chain-level Euler characteristic must match the
/// alternating sum of homology dimensions.
inline EulerReport euler_check(const Polytope& delta, long d, int s, const RankOptions& opt = {}) {
  if (s < 0) throw std::invalid_argument("negative homological width");
  std::map<IntVec, long> chain, homology;
  std::vector<IntVec> W = lattice_points(dilate(delta, d)).points;
  int nW = static_cast<int>(W.size());
  std::size_t n = static_cast<std::size_t>(delta.dim);

  for (int i = 0; i <= s; ++i) {
    int k = s - i;
    if (k > nW) continue;
    long sign = i % 2 == 0 ? 1 : -1;
    std::vector<IntVec> mod = detail::module_points(delta, d, i);
    IntVec wsum(n, 0), w(n, 0);
    detail::for_each_combination(nW, k, [&](const std::vector<std::int32_t>& c) {
      std::fill(wsum.begin(), wsum.end(), 0);
      for (auto idx : c)
        for (std::size_t t = 0; t < n; ++t) wsum[t] += W[static_cast<std::size_t>(idx)][t];
      for (const auto& m : mod) {
        for (std::size_t t = 0; t < n; ++t) w[t] = wsum[t] + m[t];
        chain[w] += sign;
      }
    });

    WeightCloud cloud = kpq_weights(SyzygyInput{delta, d, k, i}, opt);
    for (auto& [wt, mult] : cloud.entries) homology[wt] += sign * mult;
  }

  EulerReport rep;
  std::map<IntVec, std::pair<long, long>> merged;
  for (auto& [w, v] : chain) merged[w].first = v;
  for (auto& [w, v] : homology) merged[w].second = v;
  for (auto& [w, pr] : merged)
    if (pr.first != pr.second) {
      rep.ok = false;
      rep.mismatches.emplace(w, pr);
    }
  return rep;
}

}  // namespace torsyz
