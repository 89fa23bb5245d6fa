#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "torsyz/cap_body.hpp"
#include "torsyz/polytope.hpp"
#include "torsyz/tau_lp.hpp"

using namespace torsyz;

TEST_CASE("grid cells cover exactly the inside cubes") {
  CellGrid sq = grid_cells(builtin_square(), 4);
  REQUIRE(sq.centers.size() == 16);
  REQUIRE(sq.side == Rat(1, 4));
  REQUIRE(sq.cell_volume == Rat(1, 16));
  REQUIRE(sq.centers.front() == Point{Rat(1, 8), Rat(1, 8)});
  REQUIRE(sq.centers.back() == Point{Rat(7, 8), Rat(7, 8)});

  // Cells of the triangle survive only when the upper-right corner stays in.
  CellGrid tri = grid_cells(builtin_simplex2(), 4);
  REQUIRE(tri.centers.size() == 6);
  for (const auto& c : tri.centers) REQUIRE(c[0] + c[1] <= Rat(3, 4));

  CellGrid seg = grid_cells(builtin_segment(), 8);
  REQUIRE(seg.centers.size() == 8);
  REQUIRE(seg.cell_volume == Rat(1, 8));

  REQUIRE_THROWS_AS(grid_cells(builtin_square(), 0), std::invalid_argument);
}

TEST_CASE("grid relaxation is exact at the centroid of the square") {
  TauLP full = tau_grid_lp(builtin_square(), Point{Rat(1, 2), Rat(1, 2)}, 8);
  REQUIRE(full.fraction == Rat(1));
  REQUIRE(full.positive);
  REQUIRE(full.lambda.size() == 64);
  for (auto& [idx, lam] : full.lambda) REQUIRE(lam == Rat(1));
}

TEST_CASE("grid relaxation approaches known statistics from below") {
  Polytope sq = builtin_square();

  TauLP mid = tau_grid_lp(sq, Point{Rat(1, 2), Rat(1, 4)}, 32);
  REQUIRE(mid.fraction <= Rat(1, 2));
  REQUIRE(to_double(mid.fraction) > 0.45);

  TauLP corner = tau_grid_lp(sq, Point{Rat(1, 6), Rat(1, 6)}, 32);
  REQUIRE(corner.fraction <= Rat(1, 8));
  REQUIRE(to_double(corner.fraction) > 0.09);

  TauLP seg = tau_grid_lp(builtin_segment(), Point{Rat(1, 4)}, 16);
  REQUIRE(seg.fraction <= Rat(1, 2));
  REQUIRE(to_double(seg.fraction) > 0.4);

  // Solution mass is a legal density: every multiplier within [0,1] and the
  // weighted centroid sits at the query point.
  Point x{Rat(1, 2), Rat(1, 4)};
  CellGrid grid = grid_cells(sq, 32);
  Point balance{Rat(0), Rat(0)};
  Rat mass = 0;
  for (auto& [idx, lam] : mid.lambda) {
    REQUIRE(lam > 0);
    REQUIRE(lam <= 1);
    balance = add(balance, scaled(sub(grid.centers[idx], x), lam));
    mass += lam;
  }
  REQUIRE(balance == Point{Rat(0), Rat(0)});
  REQUIRE(mass * grid.cell_volume == mid.volume);
}

TEST_CASE("grid relaxation flags unreachable points") {
  TauLP out = tau_grid_lp(builtin_square(), Point{Rat(2), Rat(2)}, 8);
  REQUIRE(!out.positive);
  REQUIRE(out.fraction == 0);
  REQUIRE(out.lambda.empty());

  TauLP vertex = tau_grid_lp(builtin_square(), Point{Rat(0), Rat(0)}, 8);
  REQUIRE(!vertex.positive);
}

TEST_CASE("sweep and grid relaxation agree within the grid gap") {
  Polytope sq = builtin_square();
  std::mt19937 rng(4242117u);
  std::uniform_int_distribution<int> num(1, 15);
  CellGrid grid = grid_cells(sq, 48);
  for (int trial = 0; trial < 4; ++trial) {
    Point x{Rat(num(rng), 16), Rat(num(rng), 16)};
    double sweep = tau_direction_sweep(sq, x, 360).fraction;
    double lp = to_double(tau_grid_lp(sq, x, grid).fraction);
    CAPTURE(to_doubles(x), sweep, lp);
    REQUIRE(lp <= sweep + 1e-9);
    REQUIRE(std::abs(sweep - lp) < 0.03);
  }
}

TEST_CASE("balanced cube families match their targets") {
  Polytope sq = builtin_square();
  Point x{Rat(1, 2), Rat(1, 2)};

  ShapeResult half = shape_for(sq, x, Rat(1, 2), ShapeOptions{8, false, 1e-9});
  REQUIRE(half.inside_ok);
  REQUIRE(half.disjoint_ok);
  REQUIRE(half.com_ok);
  REQUIRE(half.volume <= Rat(1, 2));
  REQUIRE(to_double(half.volume) > 0.5 - 1e-9);
  REQUIRE(!half.cubes.empty());

  ShapeResult third = shape_for(sq, Point{Rat(2, 5), Rat(3, 5)}, Rat(3, 10),
                                ShapeOptions{8, false, 1e-9});
  REQUIRE(third.inside_ok);
  REQUIRE(third.disjoint_ok);
  REQUIRE(third.com_ok);
  REQUIRE(to_double(third.volume) > 0.3 - 1e-9);

  ShapeResult tri = shape_for(builtin_simplex2(), Point{Rat(1, 3), Rat(1, 3)}, Rat(1, 4),
                              ShapeOptions{8, false, 1e-9});
  REQUIRE(tri.inside_ok);
  REQUIRE(tri.disjoint_ok);
  REQUIRE(tri.com_ok);
}

TEST_CASE("translated families balance exactly") {
  Point x{Rat(9, 20), Rat(11, 20)};
  ShapeResult r = shape_for(builtin_square(), x, Rat(1, 5), ShapeOptions{8, true, 1e-9});
  REQUIRE(r.translated);
  REQUIRE(r.com == x);
  REQUIRE(r.disjoint_ok);
  REQUIRE(to_double(r.volume) > 0.2 - 1e-9);
}

TEST_CASE("unreachable shape targets are refused") {
  REQUIRE_THROWS_WITH(
      shape_for(builtin_square(), Point{Rat(1, 20), Rat(1, 2)}, Rat(9, 10), ShapeOptions{16, false, 1e-9}),
      Catch::Matchers::ContainsSubstring("exceeds tau"));

  ShapeResult none = shape_for(builtin_square(), Point{Rat(1, 2), Rat(1, 2)}, Rat(0));
  REQUIRE(none.empty_target);
  REQUIRE(none.cubes.empty());

  REQUIRE_THROWS_AS(shape_for(builtin_square(), Point{Rat(1, 2), Rat(1, 2)}, Rat(2)),
                    std::invalid_argument);
}
