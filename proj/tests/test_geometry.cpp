#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "torsyz/lattice.hpp"
#include "torsyz/polytope.hpp"
#include "torsyz/polytope_io.hpp"

using namespace torsyz;

namespace {

Point pt2(long x, long y) { return Point{Rat(x), Rat(y)}; }

Polytope random_polygon(std::mt19937& rng) {
  std::uniform_int_distribution<long> coord(-6, 6);
  std::uniform_int_distribution<long> den(1, 3);
  std::uniform_int_distribution<int> count(3, 8);
  for (;;) {
    std::vector<Point> pts;
    int n = count(rng);
    for (int i = 0; i < n; ++i)
      pts.push_back(Point{Rat(coord(rng), den(rng)), Rat(coord(rng), den(rng))});
    Polytope p = make_polytope(2, pts);
    if (!p.degenerate) return p;
  }
}

}  // namespace

TEST_CASE("rational parsing and printing", "[rational]") {
  REQUIRE(parse_rat("3/4") == Rat(3, 4));
  REQUIRE(parse_rat("-7") == Rat(-7));
  REQUIRE(parse_rat("0.25") == Rat(1, 4));
  REQUIRE(parse_rat("-1.5e-3") == Rat(-3, 2000));
  REQUIRE(rat_str(Rat(3, 4)) == "3/4");
  REQUIRE(rat_str(Rat(5)) == "5");
  REQUIRE(dec12(Rat(1, 3)) == "0.333333333333");
  REQUIRE(dec12(Rat(1, 2)) == "0.500000000000");
  REQUIRE(dec12(Rat(-1, 3)) == "-0.333333333333");
  REQUIRE(rat_floor(Rat(-7, 2)) == -4);
  REQUIRE(rat_ceil(Rat(-7, 2)) == -3);
}

TEST_CASE("dilation scales vertices and facets", "[polytope]") {
  SECTION("unit square by 1 is unchanged") {
    Polytope s = builtin_square();
    Polytope d = dilate(s, 1);
    REQUIRE(d.vertices == s.vertices);
    REQUIRE(volume(d) == Rat(1));
  }
  SECTION("segment by 4") {
    Polytope d = dilate(builtin_segment(), 4);
    REQUIRE(volume(d) == Rat(4));
    REQUIRE(d.vertices.front()[0] == Rat(0));
    REQUIRE(d.vertices.back()[0] == Rat(4));
  }
  SECTION("triangle by 2") {
    Polytope d = dilate(builtin_simplex2(), 2);
    REQUIRE(d.vertices.size() == 3);
    REQUIRE(contains(d, pt2(2, 0)));
    REQUIRE(contains(d, pt2(0, 2)));
    REQUIRE(volume(d) == Rat(2));
  }
  REQUIRE_THROWS_AS(dilate(builtin_square(), 0), std::invalid_argument);
}

TEST_CASE("lattice point enumeration", "[lattice]") {
  SECTION("doubled triangle has six points") {
    auto pts = lattice_points(dilate(builtin_simplex2(), 2));
    REQUIRE(pts.size() == 6);
  }
  SECTION("unit square corners in lexicographic order") {
    auto pts = lattice_points(builtin_square());
    REQUIRE(pts.points ==
            std::vector<IntVec>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  }
  SECTION("doubled square has nine points") {
    REQUIRE(lattice_points(dilate(builtin_square(), 2)).size() == 9);
  }
  SECTION("unbounded input raises") {
    Polytope half = polytope_from_facets(1, {HalfSpace{Point{Rat(-1)}, Rat(0)}});
    REQUIRE(half.unbounded);
    REQUIRE_THROWS_AS(lattice_points(half), std::domain_error);
  }
}

TEST_CASE("halfspace clipping", "[polytope]") {
  Polytope s = builtin_square();
  SECTION("horizontal cut leaves a rectangle") {
    Polytope r = clip(s, HalfSpace{pt2(0, 1), Rat(1, 2)});
    REQUIRE_FALSE(r.degenerate);
    REQUIRE(volume(r) == Rat(1, 2));
    REQUIRE(r.vertices.size() == 4);
  }
  SECTION("touching cut degenerates to the corner") {
    Polytope r = clip(s, HalfSpace{pt2(1, 1), Rat(0)});
    REQUIRE(r.degenerate);
    REQUIRE(r.vertices.size() == 1);
    REQUIRE(r.vertices[0] == pt2(0, 0));
    REQUIRE(volume(r) == Rat(0));
  }
  SECTION("slack cut returns the input") {
    Polytope r = clip(s, HalfSpace{pt2(1, 0), Rat(2)});
    REQUIRE(volume(r) == Rat(1));
    REQUIRE(r.vertices == s.vertices);
  }
  SECTION("empty result is flagged") {
    Polytope r = clip(s, HalfSpace{pt2(1, 0), Rat(-1)});
    REQUIRE(r.degenerate);
    REQUIRE(r.empty());
  }
}

TEST_CASE("volume and centroid on reference shapes", "[polytope]") {
  REQUIRE(volume(builtin_square()) == Rat(1));
  Polytope small_tri =
      make_polytope(2, {pt2(0, 0), Point{Rat(1, 2), Rat(0)}, Point{Rat(0), Rat(1, 2)}});
  REQUIRE(volume(small_tri) == Rat(1, 8));
  REQUIRE(centroid(builtin_square()) == Point{Rat(1, 2), Rat(1, 2)});
  Polytope rect = clip(builtin_square(), HalfSpace{pt2(0, 1), Rat(1, 2)});
  REQUIRE(centroid(rect) == Point{Rat(1, 2), Rat(1, 4)});
  REQUIRE(centroid(builtin_simplex2()) == Point{Rat(1, 3), Rat(1, 3)});
  Polytope corner = clip(builtin_square(), HalfSpace{pt2(1, 1), Rat(0)});
  REQUIRE_THROWS_WITH(centroid(corner), "degenerate centroid");
}

TEST_CASE("membership includes the boundary", "[polytope]") {
  Polytope s = builtin_square();
  REQUIRE(contains(s, Point{Rat(1, 2), Rat(1, 2)}));
  REQUIRE(contains(s, pt2(1, 1)));
  REQUIRE_FALSE(contains(s, pt2(2, 0)));
}

TEST_CASE("three dimensional support", "[polytope]") {
  Polytope t = builtin_simplex3();
  REQUIRE(volume(t) == Rat(1, 6));
  REQUIRE(centroid(t) == Point{Rat(1, 4), Rat(1, 4), Rat(1, 4)});
  REQUIRE(t.facets.size() == 4);
  validate(t);

  SECTION("clipping a corner off the simplex") {
    Polytope r = clip(t, HalfSpace{Point{Rat(1), Rat(1), Rat(1)}, Rat(1, 2)});
    REQUIRE(volume(r) == Rat(1, 48));
    validate(r);
  }
  SECTION("cube from its corners") {
    std::vector<Point> corners;
    for (long x = 0; x <= 1; ++x)
      for (long y = 0; y <= 1; ++y)
        for (long z = 0; z <= 1; ++z) corners.push_back(Point{Rat(x), Rat(y), Rat(z)});
    Polytope cube = make_polytope(3, corners);
    REQUIRE(cube.vertices.size() == 8);
    REQUIRE(cube.facets.size() == 6);
    REQUIRE(volume(cube) == Rat(1));
    REQUIRE(centroid(cube) == Point{Rat(1, 2), Rat(1, 2), Rat(1, 2)});
    Polytope half = clip(cube, HalfSpace{Point{Rat(1), Rat(1), Rat(0)}, Rat(1)});
    REQUIRE(volume(half) == Rat(1, 2));
    validate(half);
    REQUIRE(lattice_points(dilate(cube, 2)).size() == 27);
  }
}

TEST_CASE("facet reconstruction round trips", "[polytope]") {
  Polytope s = builtin_square();
  Polytope back = polytope_from_facets(2, s.facets);
  REQUIRE(back.vertices == s.vertices);
  Polytope t3 = builtin_simplex3();
  Polytope back3 = polytope_from_facets(3, t3.facets);
  REQUIRE(back3.vertices == t3.vertices);
  SECTION("infeasible facets give an empty flag") {
    Polytope none = polytope_from_facets(
        2, {HalfSpace{pt2(1, 0), Rat(-1)}, HalfSpace{pt2(-1, 0), Rat(0)},
            HalfSpace{pt2(0, 1), Rat(1)}, HalfSpace{pt2(0, -1), Rat(0)}});
    REQUIRE(none.degenerate);
    REQUIRE(none.empty());
  }
  SECTION("open wedge is unbounded") {
    Polytope wedge = polytope_from_facets(
        2, {HalfSpace{pt2(-1, 0), Rat(0)}, HalfSpace{pt2(0, -1), Rat(0)}});
    REQUIRE(wedge.unbounded);
  }
}

TEST_CASE("polytope text format", "[io]") {
  SECTION("vertices only, facets derived") {
    std::istringstream in("dim 2\nv 0 0\nv 1 0\nv 0 1\n");
    Polytope p = read_polytope(in);
    REQUIRE(p.facets.size() == 3);
    REQUIRE(volume(p) == Rat(1, 2));
  }
  SECTION("rational entries and explicit facets") {
    std::istringstream in(
        "dim 1\nv 1/2\nv 3/2\nh 1 3/2\nh -1 -1/2\n");
    Polytope p = read_polytope(in);
    REQUIRE(volume(p) == Rat(1));
  }
  SECTION("round trip") {
    std::ostringstream out;
    write_polytope(out, builtin_simplex2());
    std::istringstream in(out.str());
    Polytope p = read_polytope(in);
    REQUIRE(p.vertices == builtin_simplex2().vertices);
    REQUIRE(p.facets.size() == 3);
  }
  SECTION("builtin names resolve") {
    REQUIRE(volume(load_polytope("simplex3")) == Rat(1, 6));
    REQUIRE_THROWS_AS(load_polytope("no-such-thing"), std::invalid_argument);
  }
}

TEST_CASE("dilation scaling laws hold exactly", "[polytope][property]") {
  std::mt19937 rng(20240811);
  for (int trial = 0; trial < 25; ++trial) {
    Polytope p = random_polygon(rng);
    Rat v = volume(p);
    Point c = centroid(p);
    for (long d = 2; d <= 5; ++d) {
      Polytope pd = dilate(p, d);
      REQUIRE(volume(pd) == v * d * d);
      REQUIRE(centroid(pd) == scaled(c, Rat(d)));
    }
  }
}

TEST_CASE("clip complement volumes add up", "[polytope][property]") {
  std::mt19937 rng(7151);
  std::uniform_int_distribution<long> coord(-4, 4);
  for (int trial = 0; trial < 40; ++trial) {
    Polytope p = random_polygon(rng);
    Point n{Rat(coord(rng)), Rat(coord(rng))};
    if (n[0] == 0 && n[1] == 0) n[0] = 1;
    Rat off(coord(rng), 2);
    Polytope a = clip(p, HalfSpace{n, off});
    Polytope b = clip(p, HalfSpace{scaled(n, Rat(-1)), -off});
    REQUIRE(volume(a) + volume(b) == volume(p));
    for (const auto& v : a.vertices) {
      REQUIRE(contains(p, v));
      REQUIRE(dot(n, v) <= off);
    }
  }
}

TEST_CASE("lattice sweep matches brute force counting", "[lattice][property]") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Polytope p = random_polygon(rng);
    for (long d = 1; d <= 10; d += 3) {
      Polytope pd = dilate(p, d);
      REQUIRE(lattice_points(pd).size() == count_lattice_points_brute(pd, -70, 70));
    }
  }
}

TEST_CASE("clip results stay consistent", "[polytope][property]") {
  std::mt19937 rng(3321);
  std::uniform_int_distribution<long> coord(-3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    Polytope p = random_polygon(rng);
    Point n{Rat(coord(rng)), Rat(coord(rng))};
    if (n[0] == 0 && n[1] == 0) n[1] = 1;
    HalfSpace h{n, Rat(coord(rng), 3)};
    Polytope r = clip(p, h);
    if (r.degenerate) continue;
    validate(r);
    for (const auto& v : r.vertices) {
      for (const auto& f : p.facets) REQUIRE(dot(f.normal, v) <= f.offset);
      REQUIRE(dot(h.normal, v) <= h.offset);
    }
  }
}
