#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spsched/core.hpp"

namespace spsched {

struct EnumerationBudget {
  std::size_t max_jobs = 6;
  int max_machines = 4;
  std::uint64_t max_candidates = 5'000'000;
};

/// Number of (ordered job subset, non-increasing width sequence) pairs.
inline std::uint64_t synchronized_candidate_count(std::size_t n, int m) {
  // sum over k of P(n,k) * C(m+k-1, k)
  std::uint64_t total = 0;
  long double guard = 0;
  std::uint64_t ordered = 1;  // P(n, k)
  for (std::size_t k = 0; k <= n; ++k) {
    // width multisets of size k from m values
    std::uint64_t widths = 1;
    for (std::size_t i = 1; i <= k; ++i)
      widths = widths * (static_cast<std::uint64_t>(m) + i - 1) / i;
    total += ordered * widths;
    guard += static_cast<long double>(ordered) * static_cast<long double>(widths);
    if (guard > 1e18L) return UINT64_MAX;
    if (k < n) ordered *= (n - k);
  }
  return total;
}

template <class T>
struct OracleStats {
  std::uint64_t generated = 0;  // all (subset, widths) pairs
  std::uint64_t yielded = 0;    // pairs with non-decreasing boundaries
};

/// Walks every synchronized candidate within budget. The visitor receives the
/// slot list (job index, width) and the boundaries; infeasible boundary
/// sequences (some boundary would move backwards) are counted but skipped.
template <class T, class Visit>
OracleStats<T> enumerate_synchronized(const Instance<T>& inst, const EnumerationBudget& budget,
                                      Visit&& visit) {
  if (inst.n() > budget.max_jobs)
    throw SolverRefusal("enumeration budget allows " + std::to_string(budget.max_jobs) +
                        " jobs, instance has " + std::to_string(inst.n()));
  if (inst.m() > budget.max_machines)
    throw SolverRefusal("enumeration budget allows " + std::to_string(budget.max_machines) +
                        " machines, instance has " + std::to_string(inst.m()));
  const auto projected = synchronized_candidate_count(inst.n(), inst.m());
  if (projected > budget.max_candidates)
    throw SolverRefusal("enumeration would visit " + std::to_string(projected) +
                        " candidates, budget is " + std::to_string(budget.max_candidates));

  OracleStats<T> stats;
  std::vector<std::size_t> jobs;      // job index per slot
  std::vector<int> widths;            // width per slot
  std::vector<T> bounds;              // boundary per slot
  std::vector<char> used(inst.n(), 0);

  // feasible == boundaries stayed non-decreasing for the whole prefix
  auto emit = [&](bool feasible) {
    ++stats.generated;
    if (!feasible) return;
    ++stats.yielded;
    visit(jobs, widths, bounds);
  };

  // depth-first over (job, width) choices; widths non-increasing
  auto recurse = [&](auto&& self, int max_width, bool feasible) -> void {
    emit(feasible);
    if (jobs.size() == inst.n()) return;
    for (std::size_t j = 0; j < inst.n(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      for (int w = 1; w <= max_width; ++w) {
        const T prev = bounds.empty() ? T(0) : bounds.back();
        const bool slot_ok = feasible && !(inst.job(j).p < prev);
        jobs.push_back(j);
        widths.push_back(w);
        bounds.push_back(slot_ok ? sync_boundary(inst.job(j).p, w, prev) : T(0));
        self(self, w, slot_ok);
        jobs.pop_back();
        widths.pop_back();
        bounds.pop_back();
      }
      used[j] = 0;
    }
  };
  recurse(recurse, inst.m(), true);
  return stats;
}

template <class T>
struct OracleResult {
  SyncSchedule<T> schedule;
  T objective{};
  OracleStats<T> stats;
};

/// Exact optimum over all synchronized schedules. Ties prefer the shorter
/// slot sequence, then lexicographically smaller job ids, then smaller widths.
template <class T>
OracleResult<T> oracle_optimum(const Instance<T>& inst, const EnumerationBudget& budget = {}) {
  OracleResult<T> best;
  best.objective = T(0);
  bool have = false;
  std::vector<std::string> best_ids;

  auto better = [&](const T& obj, const std::vector<std::size_t>& jobs, const std::vector<int>& widths,
                    std::vector<std::string>& ids) {
    if (!have) return true;
    if (obj != best.objective) return obj > best.objective;
    if (jobs.size() != best.schedule.slots.size()) return jobs.size() < best.schedule.slots.size();
    ids.clear();
    for (std::size_t j : jobs) ids.push_back(inst.job(j).id);
    if (ids != best_ids) return ids < best_ids;
    for (std::size_t i = 0; i < widths.size(); ++i)
      if (widths[i] != best.schedule.slots[i].width) return widths[i] < best.schedule.slots[i].width;
    return false;
  };

  best.stats = enumerate_synchronized<T>(
      inst, budget,
      [&](const std::vector<std::size_t>& jobs, const std::vector<int>& widths, const std::vector<T>& bounds) {
        T obj(0);
        T prev(0);
        for (std::size_t i = 0; i < jobs.size(); ++i) {
          obj += (bounds[i] - prev) *
                 (T(widths[i]) * inst.job(jobs[i]).w - inst.cost_prefix(widths[i]));
          prev = bounds[i];
        }
        std::vector<std::string> ids;
        if (better(obj, jobs, widths, ids)) {
          best.objective = obj;
          best.schedule.slots.clear();
          best.schedule.boundaries = bounds;
          for (std::size_t i = 0; i < jobs.size(); ++i)
            best.schedule.slots.push_back({inst.job(jobs[i]).id, widths[i]});
          best_ids.clear();
          for (std::size_t j : jobs) best_ids.push_back(inst.job(j).id);
          have = true;
        }
      });
  return best;
}

}  // namespace spsched
