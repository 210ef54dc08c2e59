#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "spsched/core.hpp"
#include "spsched/simplex.hpp"

namespace spsched {

/// The per-permutation program. Position j (1-based along the permutation)
/// owns a completion variable t_j; x variables give the amount of the job at
/// position j run on machine i inside the window (t_{k-1}, t_k), k <= j.
template <class T>
struct LpModel {
  std::vector<std::size_t> permutation;  // job indices by completion position
  std::size_t n = 0;
  int m = 0;
  LinearProgram<T> lp;

  std::size_t t_var(std::size_t pos) const { return pos; }
  std::size_t x_var(std::size_t pos, int machine, std::size_t window) const {
    // pos, window 0-based with window <= pos; machine 1-based
    return n + static_cast<std::size_t>(m) * (pos * (pos + 1) / 2) +
           window * static_cast<std::size_t>(m) + static_cast<std::size_t>(machine - 1);
  }
  std::size_t num_vars() const { return n + static_cast<std::size_t>(m) * n * (n + 1) / 2; }
};

template <class T>
struct LpSolution {
  LpStatus status = LpStatus::optimal;
  T objective{};
  std::vector<T> values;  // indexed per LpModel variable layout
};

/// Builds the program whose optimum is the best schedule compatible with the
/// given completion order.
template <class T>
LpModel<T> build_compatible_lp(const Instance<T>& inst, const std::vector<std::size_t>& permutation) {
  if (permutation.size() != inst.n())
    throw StructuralError("permutation must list every job exactly once");
  std::vector<char> seen(inst.n(), 0);
  for (std::size_t idx : permutation) {
    if (idx >= inst.n()) throw StructuralError("permutation entry out of range");
    if (seen[idx]) throw StructuralError("duplicate job in permutation");
    seen[idx] = 1;
  }

  LpModel<T> model;
  model.permutation = permutation;
  model.n = inst.n();
  model.m = inst.m();
  model.lp.num_vars = model.num_vars();
  model.lp.objective.assign(model.lp.num_vars, T(0));
  for (std::size_t pos = 0; pos < model.n; ++pos) {
    const auto& job = inst.job(permutation[pos]);
    for (std::size_t k = 0; k <= pos; ++k)
      for (int i = 1; i <= model.m; ++i)
        model.lp.objective[model.x_var(pos, i, k)] = job.w - inst.cost(i);
  }

  // completion chain: t_{k-1} - t_k <= 0 with t_0 = 0
  for (std::size_t k = 0; k < model.n; ++k) {
    auto& row = model.lp.add_row(Rel::le, T(0));
    if (k > 0) row.a[model.t_var(k - 1)] = T(1);
    row.a[model.t_var(k)] = T(-1);
  }
  // window capacity: sum_{pos >= k} x - (t_k - t_{k-1}) <= 0
  for (int i = 1; i <= model.m; ++i) {
    for (std::size_t k = 0; k < model.n; ++k) {
      auto& row = model.lp.add_row(Rel::le, T(0));
      row.a[model.t_var(k)] = T(-1);
      if (k > 0) row.a[model.t_var(k - 1)] = T(1);
      for (std::size_t pos = k; pos < model.n; ++pos) row.a[model.x_var(pos, i, k)] = T(1);
    }
  }
  // completion: shared amount of each job equals p - t
  for (std::size_t pos = 0; pos < model.n; ++pos) {
    auto& row = model.lp.add_row(Rel::eq, inst.job(permutation[pos]).p);
    row.a[model.t_var(pos)] = T(1);
    for (std::size_t k = 0; k <= pos; ++k)
      for (int i = 1; i <= model.m; ++i) row.a[model.x_var(pos, i, k)] = T(1);
  }
  return model;
}

template <class T>
LpSolution<T> solve_lp(const LpModel<T>& model) {
  auto res = solve_simplex(model.lp);
  if (res.status == LpStatus::unbounded)
    throw InvariantBreach("completion-ordered program cannot be unbounded");
  LpSolution<T> sol;
  sol.status = res.status;
  if (res.status == LpStatus::optimal) {
    sol.objective = res.objective;
    sol.values = std::move(res.x);
  }
  return sol;
}

/// Turns an optimal solution into a schedule: completion t per position, and
/// inside every window the pieces packed left to right by position.
template <class T>
Schedule<T> extract_schedule(const LpSolution<T>& sol, const LpModel<T>& model, const Instance<T>& inst) {
  if (sol.status != LpStatus::optimal) throw StructuralError("cannot extract from a non-optimal solution");
  Schedule<T> s;
  std::vector<T> t(model.n);
  for (std::size_t pos = 0; pos < model.n; ++pos) {
    t[pos] = sol.values[model.t_var(pos)];
    s.private_completion[inst.job(model.permutation[pos]).id] = t[pos];
  }
  for (std::size_t k = 0; k < model.n; ++k) {
    const T window_start = k == 0 ? T(0) : t[k - 1];
    for (int i = 1; i <= model.m; ++i) {
      T cursor = window_start;
      for (std::size_t pos = k; pos < model.n; ++pos) {
        const T len = sol.values[model.x_var(pos, i, k)];
        if (len > arith<T>::tol()) {
          s.pieces.push_back({inst.job(model.permutation[pos]).id, i, cursor, cursor + len});
          cursor += len;
        }
      }
    }
  }
  return normalized(std::move(s));
}

template <class T>
struct ExactResult {
  Schedule<T> schedule;
  T objective{};
  std::vector<std::size_t> permutation;
};

/// Optimal schedule by trying every completion order. Orders that admit no
/// compatible schedule are skipped; the order sorted by processing time is
/// always compatible, so a result always exists.
template <class T>
ExactResult<T> solve_exact(const Instance<T>& inst, std::size_t max_jobs = 8) {
  if (inst.n() > max_jobs)
    throw SolverRefusal("exhaustive search limited to " + std::to_string(max_jobs) +
                        " jobs, instance has " + std::to_string(inst.n()));
  std::vector<std::size_t> perm(inst.n());
  std::iota(perm.begin(), perm.end(), 0);
  bool found = false;
  ExactResult<T> best;
  do {
    auto model = build_compatible_lp(inst, perm);
    auto sol = solve_lp(model);
    if (sol.status != LpStatus::optimal) continue;
    if (!found || sol.objective > best.objective) {
      best.schedule = extract_schedule(sol, model, inst);
      best.objective = sol.objective;
      best.permutation = perm;
      found = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (!found) throw InvariantBreach("no completion order admitted a schedule");
  return best;
}

/// Shorter processing time always comes with greater-or-equal weight.
template <class T>
bool is_antithetical(const Instance<T>& inst) {
  for (std::size_t a = 0; a < inst.n(); ++a)
    for (std::size_t b = 0; b < inst.n(); ++b) {
      if (a == b) continue;
      if (inst.job(a).p <= inst.job(b).p && inst.job(a).w < inst.job(b).w) return false;
    }
  return true;
}

/// Sorted by processing time ascending; ties by weight descending, then id.
template <class T>
std::vector<std::size_t> processing_time_order(const Instance<T>& inst) {
  std::vector<std::size_t> perm(inst.n());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    if (inst.job(a).p != inst.job(b).p) return inst.job(a).p < inst.job(b).p;
    if (inst.job(a).w != inst.job(b).w) return inst.job(a).w > inst.job(b).w;
    return inst.job(a).id < inst.job(b).id;
  });
  return perm;
}

/// One program along the processing-time order; globally optimal exactly on
/// antithetical instances.
template <class T>
ExactResult<T> solve_antithetical(const Instance<T>& inst) {
  if (!is_antithetical(inst))
    throw SolverRefusal("instance is not antithetical: some shorter job has a smaller weight");
  auto perm = processing_time_order(inst);
  auto model = build_compatible_lp(inst, perm);
  auto sol = solve_lp(model);
  if (sol.status != LpStatus::optimal)
    throw InvariantBreach("processing-time order must always be compatible");
  ExactResult<T> res;
  res.schedule = extract_schedule(sol, model, inst);
  res.objective = sol.objective;
  res.permutation = std::move(perm);
  return res;
}

/// Plain-text dump of the model for cross-checking with external solvers.
template <class T>
std::string lp_debug_text(const LpModel<T>& model, const Instance<T>& inst) {
  auto var_name = [&](std::size_t v) -> std::string {
    if (v < model.n) return "t" + std::to_string(v + 1);
    for (std::size_t pos = 0; pos < model.n; ++pos)
      for (std::size_t k = 0; k <= pos; ++k)
        for (int i = 1; i <= model.m; ++i)
          if (model.x_var(pos, i, k) == v)
            return "x_" + std::to_string(pos + 1) + "_" + std::to_string(i) + "_" + std::to_string(k + 1);
    return "v" + std::to_string(v);
  };
  auto term = [&](const T& coeff, std::size_t v, bool first) -> std::string {
    std::ostringstream os;
    const double c = arith<T>::to_double(coeff);
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "- ";
    os << arith<T>::str(coeff < T(0) ? -coeff : coeff) << " " << var_name(v);
    return os.str();
  };
  std::ostringstream os;
  os << "\\ completion-ordered overlap program, n=" << model.n << " m=" << model.m << "\n";
  os << "Maximize\n obj:";
  bool first = true;
  for (std::size_t v = 0; v < model.lp.num_vars; ++v) {
    if (arith<T>::is_zero(model.lp.objective[v])) continue;
    os << " " << term(model.lp.objective[v], v, first);
    first = false;
  }
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < model.lp.rows.size(); ++r) {
    const auto& row = model.lp.rows[r];
    os << " c" << r + 1 << ":";
    first = true;
    for (std::size_t v = 0; v < model.lp.num_vars; ++v) {
      if (arith<T>::is_zero(row.a[v])) continue;
      os << " " << term(row.a[v], v, first);
      first = false;
    }
    os << (row.rel == Rel::le ? " <= " : row.rel == Rel::eq ? " = " : " >= ") << arith<T>::str(row.b)
       << "\n";
  }
  os << "Bounds\n";
  for (std::size_t v = 0; v < model.lp.num_vars; ++v) os << " 0 <= " << var_name(v) << "\n";
  os << "End\n";
  (void)inst;
  return os.str();
}

}  // namespace spsched
