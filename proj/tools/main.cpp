#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "torsyz/asymptotics.hpp"
#include "torsyz/cap_body.hpp"
#include "torsyz/koszul.hpp"
#include "torsyz/lattice.hpp"
#include "torsyz/polytope_io.hpp"
#include "torsyz/svg.hpp"
#include "torsyz/tau_lp.hpp"

namespace {

using namespace torsyz;

constexpr const char* kVersion = "torsyz 1.0";

// Invalid configuration or request; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Ctx {
  std::string polytope_src;
  std::string out;
  std::string svg;
  bool exact = false;
  std::uint64_t prime = 1000003;
  std::size_t block_limit = 200000;
  unsigned seed = 1;
  Polytope delta;

  RankOptions rank() const {
    RankOptions o;
    o.mode = exact ? RankMode::exact_rational : RankMode::prime_field;
    o.prime = prime;
    o.block_limit = block_limit;
    return o;
  }
};

// Whole-file buffering: nothing is written until a command succeeds, so a
// failed run never leaves a truncated artifact behind.
class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) {}
  std::ostream& os() { return buf_; }
  void flush(bool echo_stdout = false) {
    if (path_.empty() || echo_stdout) std::cout << buf_.str();
    if (!path_.empty()) {
      std::ofstream f(path_, std::ios::binary);
      if (!f) throw ConfigError("cannot open output file: " + path_);
      f << buf_.str();
    }
  }

 private:
  std::string path_;
  std::ostringstream buf_;
};

using Params = std::vector<std::pair<std::string, std::string>>;

Params base_params(const Ctx& ctx, const std::string& command) {
  Params p;
  p.emplace_back("command", command);
  p.emplace_back("polytope", ctx.polytope_src);
  return p;
}

void finish_params(Params& p, const Ctx& ctx) {
  p.emplace_back("mode", ctx.exact ? "exact" : "prime");
  p.emplace_back("prime", std::to_string(ctx.prime));
  p.emplace_back("block-limit", std::to_string(ctx.block_limit));
  p.emplace_back("seed", std::to_string(ctx.seed));
}

void write_header(std::ostream& os, const Params& params) {
  os << "# " << kVersion << "\n";
  for (const auto& [k, v] : params) os << "# " << k << ": " << v << "\n";
}

void svg_header(SvgFigure& fig, const Params& params) {
  fig.comment(kVersion);
  for (const auto& [k, v] : params) fig.comment(k + ": " + v);
}

Polytope load_or_die(const std::string& src) {
  try {
    return load_polytope(src);
  } catch (const std::exception& e) {
    throw ConfigError("polytope '" + src + "': " + e.what());
  }
}

Point parse_point(const std::string& s, std::size_t dim) {
  std::vector<Rat> out;
  std::stringstream ss(s);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) out.push_back(parse_rat(item));
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse coordinate list '" + s + "': " + e.what());
  }
  if (out.size() != dim)
    throw ConfigError("expected " + std::to_string(dim) + " coordinates, got " +
                      std::to_string(out.size()));
  return out;
}

Rat parse_fraction(const std::string& s, const char* what) {
  Rat a;
  try {
    a = parse_rat(s);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot parse ") + what + " '" + s + "': " + e.what());
  }
  if (a < 0 || a > 1) throw ConfigError(std::string(what) + " must lie in [0, 1]");
  return a;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  return row;
}

void maybe_warn_svg(const Ctx& ctx) {
  if (!ctx.svg.empty() && ctx.delta.dim != 2)
    std::cerr << "svg skipped: figures are 2-D only\n";
}

// ---------------------------------------------------------------------------
// syzygy
// ---------------------------------------------------------------------------

int cmd_syzygy(Ctx& ctx, long d, int q, long p_min, long p_max) {
  long n = ctx.delta.dim;
  if (q < 0 || q > n) throw ConfigError("q must lie in [0, " + std::to_string(n) + "]");
  long r_d = static_cast<long>(lattice_points(dilate(ctx.delta, d)).points.size()) - 1;
  if (p_max < 0) p_max = p_min;
  if (p_min < 0 || p_min > p_max || p_max > r_d)
    throw ConfigError("p range must satisfy 0 <= p-min <= p-max <= r_d = " + std::to_string(r_d));

  Params params = base_params(ctx, "syzygy");
  params.emplace_back("d", std::to_string(d));
  params.emplace_back("q", std::to_string(q));
  params.emplace_back("p", std::to_string(p_min) + ".." + std::to_string(p_max));
  finish_params(params, ctx);

  Output out(ctx.out);
  write_header(out.os(), params);
  std::vector<std::string> cols{"p", "q", "d"};
  for (long i = 1; i <= n; ++i) cols.push_back("w_" + std::to_string(i));
  cols.push_back("multiplicity");
  for (long i = 1; i <= n; ++i) cols.push_back("nw_" + std::to_string(i));
  for (long i = 1; i <= n; ++i) cols.push_back("nwd_" + std::to_string(i));
  out.os() << join_csv(cols) << "\n";

  std::set<Point> scatter;
  for (long p = p_min; p <= p_max; ++p) {
    WeightCloud cloud;
    try {
      cloud = kpq_weights(SyzygyInput{ctx.delta, d, static_cast<int>(p), q}, ctx.rank());
    } catch (const std::length_error& e) {
      throw std::length_error("p=" + std::to_string(p) + ": " + e.what());
    }
    for (const auto& [w, mult] : cloud.entries) {
      Point nw = cloud.normalized(w);
      std::vector<std::string> row{std::to_string(p), std::to_string(q), std::to_string(d)};
      for (auto c : w) row.push_back(std::to_string(c));
      row.push_back(std::to_string(mult));
      for (const auto& c : nw) row.push_back(rat_str(c));
      for (const auto& c : nw) row.push_back(dec12(c));
      out.os() << join_csv(row) << "\n";
      scatter.insert(std::move(nw));
    }
  }
  out.flush();

  maybe_warn_svg(ctx);
  if (!ctx.svg.empty() && ctx.delta.dim == 2) {
    SvgFigure fig = figure_for(ctx.delta);
    svg_header(fig, params);
    fig.outline(ctx.delta.vertices);
    for (const auto& pt : scatter) fig.dot(pt);
    fig.write(ctx.svg);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// region
// ---------------------------------------------------------------------------

int cmd_region(Ctx& ctx, const std::string& a_str, int directions) {
  Rat a = parse_fraction(a_str, "a");
  Params params = base_params(ctx, "region");
  params.emplace_back("a", rat_str(a));
  params.emplace_back("directions", std::to_string(directions));
  finish_params(params, ctx);

  std::vector<RegionPoint> boundary = region_boundary(ctx.delta, a, directions);
  long n = ctx.delta.dim;

  Output out(ctx.out);
  write_header(out.os(), params);
  std::vector<std::string> cols;
  if (n == 2) cols.push_back("theta");
  for (long i = 1; i <= n; ++i) cols.push_back("v_" + std::to_string(i));
  cols.push_back("c");
  for (long i = 1; i <= n; ++i) cols.push_back("x_" + std::to_string(i));
  out.os() << join_csv(cols) << "\n";
  for (const auto& rp : boundary) {
    std::vector<std::string> row;
    if (n == 2) row.push_back(dec12(std::atan2(to_double(rp.direction[1]), to_double(rp.direction[0]))));
    for (const auto& c : rp.direction) row.push_back(dec12(c));
    row.push_back(dec12(rp.level));
    for (const auto& c : rp.point) row.push_back(dec12(c));
    out.os() << join_csv(row) << "\n";
  }
  out.flush();

  maybe_warn_svg(ctx);
  if (!ctx.svg.empty() && n == 2) {
    SvgFigure fig = figure_for(ctx.delta);
    svg_header(fig, params);
    fig.outline(ctx.delta.vertices);
    std::vector<Point> loop;
    loop.reserve(boundary.size() + 1);
    for (const auto& rp : boundary) loop.push_back(rp.point);
    if (!loop.empty()) loop.push_back(loop.front());
    fig.polyline(loop);
    fig.write(ctx.svg);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// tau
// ---------------------------------------------------------------------------

int cmd_tau(Ctx& ctx, const std::string& x_str, int directions, int grid_n) {
  Point x = parse_point(x_str, static_cast<std::size_t>(ctx.delta.dim));
  if (!contains(ctx.delta, x)) throw ConfigError("x lies outside the polytope");

  Params params = base_params(ctx, "tau");
  params.emplace_back("x", x_str);
  params.emplace_back("directions", std::to_string(directions));
  params.emplace_back("grid-n", std::to_string(grid_n));
  finish_params(params, ctx);

  TauSweep sweep = tau_direction_sweep(ctx.delta, x, directions);
  TauLP lp = tau_grid_lp(ctx.delta, x, grid_n);
  double lp_val = to_double(lp.fraction);

  Output out(ctx.out);
  write_header(out.os(), params);
  out.os() << "# sweep minimizes over a finite direction set (upper estimate);\n"
           << "# grid_lp balances inside grid cells only (lower estimate);\n"
           << "# the true value lies between them.\n";
  out.os() << "estimate,value\n";
  out.os() << "sweep," << dec12(sweep.fraction) << "\n";
  out.os() << "grid_lp," << dec12(lp_val) << "\n";
  out.os() << "difference," << dec12(sweep.fraction - lp_val) << "\n";
  out.flush(/*echo_stdout=*/true);
  return 0;
}

// ---------------------------------------------------------------------------
// density
// ---------------------------------------------------------------------------

int cmd_density(Ctx& ctx, int q, long d_max, long samples) {
  if (q != 1) throw ConfigError("only the linear strand (q = 1) is supported");
  if (d_max < 1) throw ConfigError("d-max must be positive");
  if (samples < 0) throw ConfigError("samples must be nonnegative");

  Params params = base_params(ctx, "density");
  params.emplace_back("q", std::to_string(q));
  params.emplace_back("d-max", std::to_string(d_max));
  params.emplace_back("samples", std::to_string(samples));
  finish_params(params, ctx);

  DensityReport rep = density_report(ctx.delta, d_max, samples, ctx.seed, ctx.rank());
  long n = ctx.delta.dim;

  Output out(ctx.out);
  write_header(out.os(), params);
  out.os() << "# support rows: exact coordinates, then 12-place decimals\n";
  for (const auto& s : rep.support) {
    std::vector<std::string> row{"support"};
    for (const auto& c : s) row.push_back(rat_str(c));
    for (const auto& c : s) row.push_back(dec12(c));
    out.os() << join_csv(row) << "\n";
  }
  for (std::size_t i = 0; i < rep.nearest.size(); ++i)
    out.os() << "nearest," << i << "," << dec12(rep.nearest[i]) << "\n";
  if (!rep.nearest.empty()) out.os() << "covering_radius," << dec12(rep.covering_radius) << "\n";
  out.flush();
  (void)n;
  return 0;
}

// ---------------------------------------------------------------------------
// shapes
// ---------------------------------------------------------------------------

int cmd_shapes(Ctx& ctx, const std::string& x_str, const std::string& a_str, int grid_n,
               bool translate) {
  Point x = parse_point(x_str, static_cast<std::size_t>(ctx.delta.dim));
  Rat a = parse_fraction(a_str, "a");

  Params params = base_params(ctx, "shapes");
  params.emplace_back("x", x_str);
  params.emplace_back("a", rat_str(a));
  params.emplace_back("grid-n", std::to_string(grid_n));
  params.emplace_back("translate", translate ? "yes" : "no");
  finish_params(params, ctx);

  ShapeOptions opt;
  opt.grid_n = grid_n;
  opt.translate = translate;
  ShapeResult res;
  try {
    res = shape_for(ctx.delta, x, a, opt);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());  // unattainable target is a bad request
  }

  long n = ctx.delta.dim;
  Output out(ctx.out);
  write_header(out.os(), params);
  out.os() << "# cubes: " << res.cubes.size() << "\n";
  out.os() << "# volume: " << rat_str(res.volume) << " (" << dec12(res.volume) << ")\n";
  {
    std::vector<std::string> com_exact, com_dec;
    for (const auto& c : res.com) {
      com_exact.push_back(rat_str(c));
      com_dec.push_back(dec12(c));
    }
    out.os() << "# com: " << join_csv(com_exact) << " (" << join_csv(com_dec) << ")\n";
  }
  out.os() << "# translated: " << (res.translated ? "yes" : "no")
           << " inside: " << (res.inside_ok ? "ok" : "violated")
           << " disjoint: " << (res.disjoint_ok ? "ok" : "violated")
           << " com: " << (res.com_ok ? "ok" : "off") << "\n";
  if (res.empty_target) out.os() << "# empty target\n";
  std::vector<std::string> cols;
  for (long i = 1; i <= n; ++i) cols.push_back("corner_" + std::to_string(i));
  cols.push_back("side");
  for (long i = 1; i <= n; ++i) cols.push_back("cornerd_" + std::to_string(i));
  cols.push_back("sided");
  out.os() << join_csv(cols) << "\n";
  for (const auto& cube : res.cubes) {
    std::vector<std::string> row;
    for (const auto& c : cube.corner) row.push_back(rat_str(c));
    row.push_back(rat_str(cube.side));
    for (const auto& c : cube.corner) row.push_back(dec12(c));
    row.push_back(dec12(cube.side));
    out.os() << join_csv(row) << "\n";
  }
  out.flush();

  maybe_warn_svg(ctx);
  if (!ctx.svg.empty() && n == 2) {
    SvgFigure fig = figure_for(ctx.delta);
    svg_header(fig, params);
    fig.outline(ctx.delta.vertices);
    for (const auto& cube : res.cubes) fig.square(cube.corner, cube.side);
    fig.dot(x, 3.5, "#222222");
    fig.write(ctx.svg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toric syzygy weights and cap-body geometry"};
  app.require_subcommand(1);

  Ctx ctx;
  app.add_option("--polytope", ctx.polytope_src,
                 "builtin name (segment, square, simplex2, simplex3) or file path")
      ->required();
  app.add_option("--out", ctx.out, "output file (default: stdout)");
  app.add_option("--svg", ctx.svg, "SVG output file (2-D polytopes only)");
  app.add_flag("--exact", ctx.exact, "rank computations over the rationals");
  app.add_option("--prime", ctx.prime, "modulus for prime-field ranks")
      ->check(CLI::Range(std::uint64_t(2), std::uint64_t((1 << 20) - 1)));
  app.add_option("--block-limit", ctx.block_limit, "largest admissible matrix dimension");
  app.add_option("--seed", ctx.seed, "seed for sampled reports");

  long sy_d = 1, sy_pmin = 0, sy_pmax = -1;
  int sy_q = 1;
  auto* sc_syzygy = app.add_subcommand("syzygy", "weight multiplicities of syzygy spaces");
  sc_syzygy->fallthrough();
  sc_syzygy->add_option("--d", sy_d, "dilation degree")->check(CLI::PositiveNumber);
  sc_syzygy->add_option("--q", sy_q, "strand index");
  sc_syzygy->add_option("--p-min", sy_pmin, "first homological index");
  sc_syzygy->add_option("--p-max", sy_pmax, "last homological index (default: p-min)");

  std::string rg_a = "0.1";
  int rg_dirs = 360;
  auto* sc_region = app.add_subcommand("region", "boundary of the fraction-a cap region");
  sc_region->fallthrough();
  sc_region->add_option("--a", rg_a, "volume fraction in [0,1]");
  sc_region->add_option("--directions", rg_dirs, "number of sweep directions")
      ->check(CLI::PositiveNumber);

  std::string tau_x;
  int tau_dirs = 720, tau_grid = 64;
  auto* sc_tau = app.add_subcommand("tau", "cap statistic at a point, two independent estimates");
  sc_tau->fallthrough();
  sc_tau->add_option("--x", tau_x, "comma-separated coordinates")->required();
  sc_tau->add_option("--directions", tau_dirs, "sweep directions")->check(CLI::PositiveNumber);
  sc_tau->add_option("--grid-n", tau_grid, "grid resolution per axis")->check(CLI::PositiveNumber);

  int dn_q = 1;
  long dn_dmax = 2, dn_samples = 100;
  auto* sc_density = app.add_subcommand("density", "normalized weight support and covering radius");
  sc_density->fallthrough();
  sc_density->add_option("--q", dn_q, "strand index (must be 1)");
  sc_density->add_option("--d-max", dn_dmax, "largest dilation degree")->check(CLI::PositiveNumber);
  sc_density->add_option("--samples", dn_samples, "number of body samples");

  std::string sh_x, sh_a;
  int sh_grid = 16;
  bool sh_translate = false;
  auto* sc_shapes = app.add_subcommand("shapes", "balanced cube family at a point");
  sc_shapes->fallthrough();
  sc_shapes->add_option("--x", sh_x, "comma-separated coordinates")->required();
  sc_shapes->add_option("--a", sh_a, "target volume fraction")->required();
  sc_shapes->add_option("--grid-n", sh_grid, "grid resolution per axis")
      ->check(CLI::PositiveNumber);
  sc_shapes->add_flag("--translate", sh_translate, "restore the exact center of mass");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ctx.delta = load_or_die(ctx.polytope_src);
    if (*sc_syzygy) return cmd_syzygy(ctx, sy_d, sy_q, sy_pmin, sy_pmax);
    if (*sc_region) return cmd_region(ctx, rg_a, rg_dirs);
    if (*sc_tau) return cmd_tau(ctx, tau_x, tau_dirs, tau_grid);
    if (*sc_density) return cmd_density(ctx, dn_q, dn_dmax, dn_samples);
    if (*sc_shapes) return cmd_shapes(ctx, sh_x, sh_a, sh_grid, sh_translate);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
