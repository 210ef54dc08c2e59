#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "spsched/core.hpp"

namespace spsched {

namespace detail {

inline std::string fmt_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

template <class T>
std::vector<T> axis_breakpoints(const Schedule<T>& s) {
  std::vector<T> ticks;
  for (const auto& pc : s.pieces) {
    if (pc.start > T(0)) ticks.push_back(pc.start);
    ticks.push_back(pc.end);
  }
  for (const auto& [id, c] : s.private_completion) {
    (void)id;
    if (c > T(0)) ticks.push_back(c);
  }
  std::sort(ticks.begin(), ticks.end());
  std::vector<T> out;
  for (const auto& t : ticks)
    if (out.empty() || !arith<T>::eq(out.back(), t)) out.push_back(t);
  return out;
}

}  // namespace detail

/// Fixed-width text chart: one row per shared processor, then one row per
/// private processor, breakpoints listed underneath.
template <class T>
std::string render_text(const Schedule<T>& s, const Instance<T>& inst, int columns = 72) {
  T horizon(0);
  for (const auto& pc : s.pieces) horizon = std::max(horizon, pc.end);
  for (const auto& [id, c] : s.private_completion) {
    (void)id;
    horizon = std::max(horizon, c);
  }
  std::ostringstream os;
  if (!(horizon > T(0))) {
    os << "(empty schedule)\n";
    return os.str();
  }
  const double scale = columns / arith<T>::to_double(horizon);
  auto col = [&](const T& t) {
    int c = static_cast<int>(arith<T>::to_double(t) * scale + 0.5);
    return std::min(std::max(c, 0), columns);
  };
  auto row = [&](const std::string& label, const std::vector<Piece<T>>& pieces) {
    std::string line(static_cast<std::size_t>(columns), '.');
    for (const auto& pc : pieces) {
      const int a = col(pc.start), b = std::max(col(pc.end), a + 1);
      for (int x = a; x < b && x < columns; ++x) line[static_cast<std::size_t>(x)] = '#';
      const std::string& id = pc.job;
      for (std::size_t k = 0; k < id.size() && a + 1 + static_cast<int>(k) < b - 1; ++k)
        line[static_cast<std::size_t>(a + 1 + static_cast<int>(k))] = id[k];
    }
    os << label << " |" << line << "|\n";
  };

  for (int i = 1; i <= inst.m(); ++i) {
    std::vector<Piece<T>> on;
    for (const auto& pc : s.pieces)
      if (pc.machine == i) on.push_back(pc);
    std::ostringstream label;
    label << "M" << i << " (c=" << detail::fmt_num(arith<T>::to_double(inst.cost(i))) << ")";
    std::string l = label.str();
    l.resize(14, ' ');
    row(l, on);
  }
  for (const auto& j : inst.jobs()) {
    std::vector<Piece<T>> priv{{j.id, 0, T(0), s.private_completion.at(j.id)}};
    std::string l = "P " + j.id;
    l.resize(14, ' ');
    row(l, priv);
  }
  os << "breakpoints:";
  for (const auto& t : detail::axis_breakpoints(s)) os << " " << detail::fmt_num(arith<T>::to_double(t));
  os << "\n";
  return os.str();
}

/// Static SVG chart; byte-identical for identical inputs.
template <class T>
std::string render_svg(const Schedule<T>& s, const Instance<T>& inst) {
  T horizon(0);
  for (const auto& pc : s.pieces) horizon = std::max(horizon, pc.end);
  for (const auto& [id, c] : s.private_completion) {
    (void)id;
    horizon = std::max(horizon, c);
  }
  const double h = std::max(arith<T>::to_double(horizon), 1e-9);
  const double width = 720.0, row_h = 26.0, left = 90.0, top = 18.0;
  const int rows = inst.m() + static_cast<int>(inst.n());
  const double height = top + rows * row_h + 44.0;
  auto x_of = [&](const T& t) { return left + arith<T>::to_double(t) / h * (width - left - 20.0); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt_num(width) << "\" height=\""
     << detail::fmt_num(height) << "\" font-family=\"monospace\" font-size=\"11\">\n";
  auto bar = [&](int row, const T& a, const T& b, const std::string& label, const char* fill) {
    const double y = top + row * row_h;
    os << "  <rect x=\"" << detail::fmt_num(x_of(a)) << "\" y=\"" << detail::fmt_num(y + 4) << "\" width=\""
       << detail::fmt_num(std::max(x_of(b) - x_of(a), 0.5)) << "\" height=\"" << detail::fmt_num(row_h - 8)
       << "\" fill=\"" << fill << "\" stroke=\"black\"/>\n";
    os << "  <text x=\"" << detail::fmt_num(x_of(a) + 3) << "\" y=\"" << detail::fmt_num(y + row_h - 10)
       << "\">" << label << "</text>\n";
  };
  int row = 0;
  for (int i = 1; i <= inst.m(); ++i, ++row) {
    os << "  <text x=\"4\" y=\"" << detail::fmt_num(top + row * row_h + row_h - 10) << "\">M" << i
       << "</text>\n";
    for (const auto& pc : s.pieces)
      if (pc.machine == i) bar(row, pc.start, pc.end, pc.job, "#cfe3ff");
  }
  for (const auto& j : inst.jobs()) {
    os << "  <text x=\"4\" y=\"" << detail::fmt_num(top + row * row_h + row_h - 10) << "\">P " << j.id
       << "</text>\n";
    bar(row, T(0), s.private_completion.at(j.id), j.id, "#ffe9c2");
    ++row;
  }
  const double axis_y = top + rows * row_h + 14.0;
  os << "  <line x1=\"" << detail::fmt_num(left) << "\" y1=\"" << detail::fmt_num(axis_y) << "\" x2=\""
     << detail::fmt_num(width - 20.0) << "\" y2=\"" << detail::fmt_num(axis_y)
     << "\" stroke=\"black\"/>\n";
  for (const auto& t : detail::axis_breakpoints(s)) {
    os << "  <line x1=\"" << detail::fmt_num(x_of(t)) << "\" y1=\"" << detail::fmt_num(axis_y - 4)
       << "\" x2=\"" << detail::fmt_num(x_of(t)) << "\" y2=\"" << detail::fmt_num(axis_y + 4)
       << "\" stroke=\"black\"/>\n";
    os << "  <text class=\"tick\" x=\"" << detail::fmt_num(x_of(t) - 6) << "\" y=\""
       << detail::fmt_num(axis_y + 18) << "\">" << detail::fmt_num(arith<T>::to_double(t)) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace spsched
