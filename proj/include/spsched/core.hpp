#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spsched/errors.hpp"
#include "spsched/numeric.hpp"

namespace spsched {

template <class T>
struct Job {
  std::string id;
  T p;  // processing time, > 0
  T w;  // payoff per unit of overlap, >= 0
};

/// Problem instance: jobs plus the shared-processor cost vector. Costs are
/// kept sorted ascending; machine index i (1-based) is the i-th cheapest.
template <class T>
class Instance {
 public:
  Instance(std::vector<Job<T>> jobs, std::vector<T> costs)
      : jobs_(std::move(jobs)), costs_(std::move(costs)) {
    if (jobs_.empty()) throw StructuralError("instance needs at least one job");
    if (costs_.empty()) throw StructuralError("instance needs at least one shared processor");
    std::stable_sort(costs_.begin(), costs_.end());
    for (const auto& j : jobs_) {
      if (!(j.p > T(0))) throw StructuralError("job " + j.id + ": processing time must be positive");
      if (j.w < T(0)) throw StructuralError("job " + j.id + ": weight must be non-negative");
      if (j.id.empty()) throw StructuralError("job with empty id");
    }
    if (costs_.front() < T(0)) throw StructuralError("machine costs must be non-negative");
    for (std::size_t a = 0; a < jobs_.size(); ++a)
      for (std::size_t b = a + 1; b < jobs_.size(); ++b)
        if (jobs_[a].id == jobs_[b].id) throw StructuralError("duplicate job id: " + jobs_[a].id);
  }

  const std::vector<Job<T>>& jobs() const { return jobs_; }
  const std::vector<T>& costs() const { return costs_; }
  std::size_t n() const { return jobs_.size(); }
  int m() const { return static_cast<int>(costs_.size()); }

  const Job<T>& job(std::size_t idx) const { return jobs_.at(idx); }
  /// Cost of machine i, 1-based.
  const T& cost(int machine) const { return costs_.at(static_cast<std::size_t>(machine - 1)); }
  /// Sum of the k cheapest machine costs.
  T cost_prefix(int k) const {
    T s(0);
    for (int i = 1; i <= k; ++i) s += cost(i);
    return s;
  }

  std::size_t index_of(const std::string& id) const {
    for (std::size_t i = 0; i < jobs_.size(); ++i)
      if (jobs_[i].id == id) return i;
    throw StructuralError("unknown job id: " + id);
  }
  bool has_job(const std::string& id) const {
    for (const auto& j : jobs_)
      if (j.id == id) return true;
    return false;
  }

 private:
  std::vector<Job<T>> jobs_;
  std::vector<T> costs_;
};

/// One piece of a job on a shared processor; machine is 1-based.
template <class T>
struct Piece {
  std::string job;
  int machine = 1;
  T start{};
  T end{};

  T length() const { return end - start; }
};

/// A schedule: per-job completion time on the private processor plus the
/// shared-processor pieces. Pieces of the same job on different machines may
/// overlap in time; pieces on one machine may not.
template <class T>
struct Schedule {
  std::map<std::string, T> private_completion;
  std::vector<Piece<T>> pieces;
};

/// Drops zero-length pieces and orders pieces by (machine, start, job).
template <class T>
Schedule<T> normalized(Schedule<T> s) {
  std::vector<Piece<T>> kept;
  kept.reserve(s.pieces.size());
  for (auto& pc : s.pieces) {
    if (pc.end < pc.start) throw StructuralError("piece of " + pc.job + " with negative length");
    if (arith<T>::eq(pc.start, pc.end)) continue;
    kept.push_back(std::move(pc));
  }
  std::sort(kept.begin(), kept.end(), [](const Piece<T>& a, const Piece<T>& b) {
    if (a.machine != b.machine) return a.machine < b.machine;
    if (a.start != b.start) return a.start < b.start;
    return a.job < b.job;
  });
  s.pieces = std::move(kept);
  return s;
}

enum class ViolationKind {
  completion_sum,          // private time plus shared pieces != processing time
  machine_conflict,        // two pieces overlap on one shared processor
  outside_private_window,  // piece not contained in (0, private completion)
  bad_value,               // non-positive completion or malformed piece bounds
};

inline const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::completion_sum: return "completion-sum";
    case ViolationKind::machine_conflict: return "machine-conflict";
    case ViolationKind::outside_private_window: return "outside-private-window";
    case ViolationKind::bad_value: return "bad-value";
  }
  return "?";
}

template <class T>
struct Violation {
  ViolationKind kind;
  std::string job;
  int machine = 0;  // 0 when not machine-specific
  T magnitude{};
  std::string message;
};

template <class T>
std::string violation_text(const Violation<T>& v) {
  std::ostringstream os;
  os << violation_kind_name(v.kind) << " job=" << v.job;
  if (v.machine > 0) os << " machine=" << v.machine;
  os << " magnitude=" << arith<T>::str(v.magnitude) << " (" << v.message << ")";
  return os.str();
}

/// Checks the three feasibility conditions; returns one entry per violation.
/// References to unknown jobs or machines throw StructuralError instead.
template <class T>
std::vector<Violation<T>> validate(const Schedule<T>& s, const Instance<T>& inst) {
  for (const auto& [id, c] : s.private_completion) {
    if (!inst.has_job(id)) throw StructuralError("schedule names unknown job id: " + id);
    (void)c;
  }
  for (const auto& pc : s.pieces) {
    if (!inst.has_job(pc.job)) throw StructuralError("piece names unknown job id: " + pc.job);
    if (pc.machine < 1 || pc.machine > inst.m())
      throw StructuralError("piece of " + pc.job + " names machine " + std::to_string(pc.machine) +
                            " outside 1.." + std::to_string(inst.m()));
  }
  for (const auto& j : inst.jobs())
    if (!s.private_completion.count(j.id))
      throw StructuralError("schedule misses private completion of job " + j.id);

  std::vector<Violation<T>> out;

  for (const auto& j : inst.jobs()) {
    const T c = s.private_completion.at(j.id);
    if (!(c > T(0))) {
      out.push_back({ViolationKind::bad_value, j.id, 0, c, "private completion must be positive"});
    }
  }
  for (const auto& pc : s.pieces) {
    if (pc.start < T(0) || pc.end < pc.start) {
      out.push_back({ViolationKind::bad_value, pc.job, pc.machine, pc.start, "piece bounds out of order"});
    }
  }

  // total execution equals processing time
  for (const auto& j : inst.jobs()) {
    T total = s.private_completion.at(j.id);
    for (const auto& pc : s.pieces)
      if (pc.job == j.id) total += pc.length();
    if (!arith<T>::eq(total, j.p)) {
      out.push_back({ViolationKind::completion_sum, j.id, 0, total - j.p,
                     "private time plus pieces minus processing time"});
    }
  }

  // one job at a time per shared processor
  for (int machine = 1; machine <= inst.m(); ++machine) {
    std::vector<const Piece<T>*> on;
    for (const auto& pc : s.pieces)
      if (pc.machine == machine) on.push_back(&pc );
    std::sort(on.begin(), on.end(), [](const Piece<T>* a, const Piece<T>* b) {
      if (a->start != b->start) return a->start < b->start;
      return a->end < b->end;
    });
    for (std::size_t i = 0; i + 1 < on.size(); ++i) {
      const T overlap = on[i]->end - on[i + 1]->start;
      if (overlap > arith<T>::tol()) {
        out.push_back({ViolationKind::machine_conflict,
                       on[i]->job + "+" + on[i + 1]->job, machine, overlap,
                       "pieces overlap on one shared processor"});
      }
    }
  }

  // pieces confined to (0, private completion)
  for (const auto& pc : s.pieces) {
    const T c = s.private_completion.at(pc.job);
    if (pc.end > c + arith<T>::tol()) {
      out.push_back({ViolationKind::outside_private_window, pc.job, pc.machine, pc.end - c,
                     "piece ends after the job's private completion"});
    }
  }
  return out;
}

template <class T>
bool is_feasible(const Schedule<T>& s, const Instance<T>& inst) {
  return validate(s, inst).empty();
}

template <class T>
struct OverlapReport {
  std::vector<std::vector<T>> per_job_per_machine;  // [job index][machine-1]
  T total_weighted{};
};

/// Weighted sum of piece lengths. Equals the total weighted overlap whenever
/// every piece lies inside its job's private window; also used on transient
/// schedules that intentionally break the completion-sum condition.
template <class T>
T weighted_piece_sum(const Schedule<T>& s, const Instance<T>& inst) {
  T total(0);
  for (const auto& pc : s.pieces) {
    const auto& j = inst.job(inst.index_of(pc.job));
    total += pc.length() * (j.w - inst.cost(pc.machine));
  }
  return total;
}

/// Per-job, per-machine overlap totals and the weighted objective. The
/// schedule must be feasible; violations are re-raised as a rejection.
template <class T>
OverlapReport<T> total_weighted_overlap(const Schedule<T>& s, const Instance<T>& inst) {
  auto violations = validate(s, inst);
  if (!violations.empty()) {
    std::vector<std::string> rendered;
    rendered.reserve(violations.size());
    for (const auto& v : violations) rendered.push_back(violation_text(v));
    throw InfeasibleScheduleError("infeasible schedule rejected", std::move(rendered));
  }
  OverlapReport<T> rep;
  rep.per_job_per_machine.assign(inst.n(), std::vector<T>(static_cast<std::size_t>(inst.m()), T(0)));
  rep.total_weighted = T(0);
  for (const auto& pc : s.pieces) {
    const std::size_t jidx = inst.index_of(pc.job);
    const T c = s.private_completion.at(pc.job);
    // overlap is the part of the piece inside (0, C)
    T lo = std::max(pc.start, T(0));
    T hi = std::min(pc.end, c);
    if (hi > lo) rep.per_job_per_machine[jidx][static_cast<std::size_t>(pc.machine - 1)] += hi - lo;
  }
  for (std::size_t j = 0; j < inst.n(); ++j)
    for (int i = 1; i <= inst.m(); ++i)
      rep.total_weighted +=
          rep.per_job_per_machine[j][static_cast<std::size_t>(i - 1)] * (inst.job(j).w - inst.cost(i));
  return rep;
}

/// A synchronized schedule: an ordered subset of jobs with non-increasing
/// widths. Slot i runs job_i on the width_i cheapest machines over
/// (t_{i-1}, t_i) and the job completes privately at t_i.
template <class T>
struct SyncSlot {
  std::string job;
  int width = 1;
};

template <class T>
struct SyncSchedule {
  std::vector<SyncSlot<T>> slots;
  std::vector<T> boundaries;  // t_1..t_k; t_0 = 0 implicit
};

/// Feasible boundary for one slot: solves t + width*(t - prev) = p.
template <class T>
T sync_boundary(const T& p, int width, const T& prev) {
  return (p + T(width) * prev) / T(width + 1);
}

/// Verifies the synchronized-schedule invariants; throws on violation.
template <class T>
void check_synchronized(const SyncSchedule<T>& sync, const Instance<T>& inst) {
  if (sync.slots.size() != sync.boundaries.size())
    throw StructuralError("slot/boundary count mismatch");
  int prev_width = inst.m();
  T prev_t(0);
  std::vector<char> seen(inst.n(), 0);
  for (std::size_t i = 0; i < sync.slots.size(); ++i) {
    const auto& slot = sync.slots[i];
    const std::size_t jidx = inst.index_of(slot.job);
    if (seen[jidx]) throw StructuralError("job " + slot.job + " listed twice");
    seen[jidx] = 1;
    if (slot.width < 1 || slot.width > prev_width)
      throw StructuralError("widths must be non-increasing within 1..m");
    const T t = sync.boundaries[i];
    if (t < prev_t - arith<T>::tol()) throw StructuralError("boundaries must be non-decreasing");
    const T lhs = t + T(slot.width) * (t - prev_t);
    if (!arith<T>::eq(lhs, inst.job(jidx).p))
      throw StructuralError("slot " + std::to_string(i + 1) + " breaks the completion identity");
    prev_width = slot.width;
    prev_t = t;
  }
}

/// Builds a synchronized schedule from (job, width) pairs, deriving each
/// boundary from the completion identity. Returns nothing when some boundary
/// would move backwards (the job is too short for its position).
template <class T>
std::optional<SyncSchedule<T>> make_synchronized(const Instance<T>& inst,
                                                 const std::vector<std::pair<std::string, int>>& order) {
  SyncSchedule<T> sync;
  T prev(0);
  int prev_width = inst.m();
  for (const auto& [id, width] : order) {
    const auto& job = inst.job(inst.index_of(id));
    if (width < 1 || width > prev_width) return std::nullopt;
    if (job.p < prev) return std::nullopt;
    const T t = sync_boundary(job.p, width, prev);
    sync.slots.push_back({id, width});
    sync.boundaries.push_back(t);
    prev = t;
    prev_width = width;
  }
  return sync;
}

/// Concrete schedule for a synchronized one: slot jobs get one piece per used
/// machine, everything else runs privately in (0, p).
template <class T>
Schedule<T> expand(const SyncSchedule<T>& sync, const Instance<T>& inst) {
  check_synchronized(sync, inst);
  Schedule<T> s;
  for (const auto& j : inst.jobs()) s.private_completion[j.id] = j.p;
  T prev(0);
  for (std::size_t i = 0; i < sync.slots.size(); ++i) {
    const auto& slot = sync.slots[i];
    const T t = sync.boundaries[i];
    s.private_completion[slot.job] = t;  // equals p when the slot is empty
    for (int machine = 1; machine <= slot.width; ++machine)
      s.pieces.push_back({slot.job, machine, prev, t});
    prev = t;
  }
  return normalized(std::move(s));
}

/// Closed-form objective of a synchronized schedule. Matches
/// total_weighted_overlap(expand(...)) exactly.
template <class T>
T synchronized_objective(const SyncSchedule<T>& sync, const Instance<T>& inst) {
  check_synchronized(sync, inst);
  T total(0);
  T prev(0);
  for (std::size_t i = 0; i < sync.slots.size(); ++i) {
    const auto& slot = sync.slots[i];
    const std::size_t jidx = inst.index_of(slot.job);
    const T t = sync.boundaries[i];
    total += (t - prev) * (T(slot.width) * inst.job(jidx).w - inst.cost_prefix(slot.width));
    prev = t;
  }
  return total;
}

}  // namespace spsched
