#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "spsched/rational.hpp"

namespace spsched {

/// Arithmetic mode traits. Rat runs every identity exactly; double applies a
/// fixed 1e-9 tolerance to all equality-like checks.
template <class T>
struct arith;

template <>
struct arith<Rat> {
  static constexpr bool exact = true;
  static Rat tol() { return Rat(0); }
  static bool eq(const Rat& a, const Rat& b) { return a == b; }
  static bool is_zero(const Rat& a) { return a == Rat(0); }
  static bool leq(const Rat& a, const Rat& b) { return a <= b; }
  static bool lt(const Rat& a, const Rat& b) { return a < b; }
  static Rat ratio(long num, long den) { return Rat(num, den); }
  static Rat parse(const std::string& s) { return Rat::parse(s); }
  static std::string str(const Rat& a) { return a.str(); }
  static double to_double(const Rat& a) { return a.to_double(); }
  static const char* name() { return "exact"; }
};

template <>
struct arith<double> {
  static constexpr bool exact = false;
  static double tol() { return 1e-9; }
  static bool eq(double a, double b) { return std::fabs(a - b) <= tol(); }
  static bool is_zero(double a) { return std::fabs(a) <= tol(); }
  static bool leq(double a, double b) { return a <= b + tol(); }
  static bool lt(double a, double b) { return a < b - tol(); }
  static double ratio(long num, long den) { return static_cast<double>(num) / static_cast<double>(den); }
  static double parse(const std::string& s) { return Rat::parse(s).to_double(); }
  static std::string str(double a);
  static double to_double(double a) { return a; }
  static const char* name() { return "float"; }
};

inline std::string arith<double>::str(double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", a);
  return buf;
}

inline double to_double(const Rat& r) { return r.to_double(); }
inline double to_double(double d) { return d; }

}  // namespace spsched
