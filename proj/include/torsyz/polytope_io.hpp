#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsyz/polytope.hpp"
#include "torsyz/rational.hpp"

namespace torsyz {

// Text format:
//   dim n
//   v a_1 ... a_n          one line per vertex, entries "p/q" or integers
//   h a_1 ... a_n b        optional facet lines meaning a.x <= b
// Facets are derived from the vertices when no h lines are present.

inline Polytope read_polytope(std::istream& in) {
  std::string line;
  int dim = -1;
  std::vector<Point> verts;
  std::vector<HalfSpace> facets;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
    if (tag == "dim") {
      if (!(ls >> dim)) throw std::invalid_argument("polytope file: bad dim line");
      continue;
    }
    if (dim < 1) throw std::invalid_argument("polytope file: dim line must come first");
    if (tag == "v") {
      Point p;
      std::string tok;
      while (ls >> tok) p.push_back(parse_rat(tok));
      if (static_cast<int>(p.size()) != dim)
        throw std::invalid_argument("polytope file: vertex arity mismatch");
      verts.push_back(std::move(p));
    } else if (tag == "h") {
      std::vector<Rat> row;
      std::string tok;
      while (ls >> tok) row.push_back(parse_rat(tok));
      if (static_cast<int>(row.size()) != dim + 1)
        throw std::invalid_argument("polytope file: facet arity mismatch");
      Point n(row.begin(), row.end() - 1);
      facets.push_back(HalfSpace{std::move(n), row.back()});
    } else {
      throw std::invalid_argument("polytope file: unknown tag '" + tag + "'");
    }
  }
  if (dim < 1) throw std::invalid_argument("polytope file: missing dim line");
  if (verts.empty()) {
    if (facets.empty()) throw std::invalid_argument("polytope file: no vertices or facets");
    return polytope_from_facets(dim, std::move(facets));
  }
  Polytope p = make_polytope(dim, std::move(verts));
  if (!facets.empty()) {
    p.facets = std::move(facets);
    validate(p);
  }
  return p;
}

inline void write_polytope(std::ostream& out, const Polytope& p) {
  out << "dim " << p.dim << "\n";
  for (const auto& v : p.vertices) {
    out << "v";
    for (const auto& c : v) out << " " << rat_str(c);
    out << "\n";
  }
  for (const auto& h : p.facets) {
    out << "h";
    for (const auto& c : h.normal) out << " " << rat_str(c);
    out << " " << rat_str(h.offset) << "\n";
  }
}

/// Resolves a --polytope argument: a builtin name or a path to a file in the
/// text format above.
inline Polytope load_polytope(const std::string& source) {
  if (source == "segment") return builtin_segment();
  if (source == "square") return builtin_square();
  if (source == "simplex2") return builtin_simplex2();
  if (source == "simplex3") return builtin_simplex3();
  std::ifstream f(source);
  if (!f) throw std::invalid_argument("cannot open polytope '" + source + "'");
  return read_polytope(f);
}

}  // namespace torsyz
