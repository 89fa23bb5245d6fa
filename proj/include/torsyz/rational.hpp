#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace torsyz {

// Exact rational scalar. Kept canonical (lowest terms, positive denominator)
// by the underlying GMP representation.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

// A point with exact rational coordinates.
using Point = std::vector<Rat>;

// An integer lattice vector (torus weights, lattice points).
using IntVec = std::vector<std::int64_t>;

inline Int numerator(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rat& r) { return boost::multiprecision::denominator(r); }

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Int rat_floor(const Rat& r) {
  Int q, rem;
  boost::multiprecision::divide_qr(numerator(r), denominator(r), q, rem);
  if (rem != 0 && numerator(r) < 0) --q;
  return q;
}

inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }

/// Parses "p/q", an integer, or a plain decimal (optionally with exponent)
/// into an exact rational.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int n(s.substr(0, slash));
    Int d(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rat(n, d);
  }
  auto epos = s.find_first_of("eE");
  std::string mant = (epos == std::string::npos) ? s : s.substr(0, epos);
  long expo = (epos == std::string::npos) ? 0 : std::stol(s.substr(epos + 1));
  auto dotpos = mant.find('.');
  std::string digits = mant;
  if (dotpos != std::string::npos) {
    expo -= static_cast<long>(mant.size() - dotpos - 1);
    digits = mant.substr(0, dotpos) + mant.substr(dotpos + 1);
  }
  std::string sign;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    if (digits[0] == '-') sign = "-";
    digits.erase(0, 1);
  }
  // strip leading zeros so the big-integer parser cannot read the string as octal
  std::size_t nz = digits.find_first_not_of('0');
  digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad rational literal '" + s + "'");
  Rat r{Int(sign + digits)};
  Int ten(10);
  if (expo > 0) r *= Rat(boost::multiprecision::pow(ten, static_cast<unsigned>(expo)));
  if (expo < 0) r /= Rat(boost::multiprecision::pow(ten, static_cast<unsigned>(-expo)));
  return r;
}

inline std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Exact fixed-point decimal with 12 places, round half away from zero.
inline std::string dec12(const Rat& r) {
  static const Int scale = boost::multiprecision::pow(Int(10), 12);
  Int n = numerator(r) * scale * 2;
  Int d = denominator(r);
  Int q, rem;
  boost::multiprecision::divide_qr(n, d * 2, q, rem);
  // round half away from zero on the remainder of n/(2d)
  Int twice_rem = rem * 2;
  if (twice_rem >= d * 2) ++q;
  if (-twice_rem >= d * 2) --q;
  bool neg = q < 0;
  Int aq = boost::multiprecision::abs(q);
  std::string ds = aq.str();
  if (ds.size() < 13) ds.insert(0, 13 - ds.size(), '0');
  std::string out = ds.substr(0, ds.size() - 12) + "." + ds.substr(ds.size() - 12);
  if (neg && aq != 0) out.insert(0, "-");
  return out;
}

inline std::string dec12(double x) { return dec12(Rat(x)); }

// -- small exact vector helpers ---------------------------------------------

inline Rat dot(const Point& a, const Point& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Point add(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Point scaled(const Point& a, const Rat& f) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * f;
  return r;
}

inline Point to_point(const IntVec& v) {
  Point p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i];
  return p;
}

inline Point point_from_doubles(const std::vector<double>& v) {
  Point p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = Rat(v[i]);
  return p;
}

inline std::vector<double> to_doubles(const Point& p) {
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = to_double(p[i]);
  return v;
}

}  // namespace torsyz
