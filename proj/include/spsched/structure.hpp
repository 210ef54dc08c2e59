#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spsched/core.hpp"

namespace spsched {

/// Maximal interval in which every shared processor is either fully busy or
/// fully idle.
template <class T>
struct Segment {
  T start{};
  T end{};
  std::vector<int> busy;                            // busy machines, 1-based ascending
  std::vector<std::pair<std::size_t, T>> amounts;   // job index -> executed amount inside
};

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? -v : v;
}

namespace detail {

template <class T>
std::vector<std::vector<Piece<T>>> pieces_by_machine(const Schedule<T>& s, const Instance<T>& inst) {
  std::vector<std::vector<Piece<T>>> by(static_cast<std::size_t>(inst.m()));
  for (const auto& pc : s.pieces) by[static_cast<std::size_t>(pc.machine - 1)].push_back(pc);
  for (auto& v : by)
    std::sort(v.begin(), v.end(), [](const Piece<T>& a, const Piece<T>& b) { return a.start < b.start; });
  return by;
}

template <class T>
std::vector<T> sorted_unique(std::vector<T> vals) {
  std::sort(vals.begin(), vals.end());
  std::vector<T> out;
  for (auto& v : vals)
    if (out.empty() || !arith<T>::eq(out.back(), v)) out.push_back(v);
  return out;
}

}  // namespace detail

template <class T>
std::vector<Segment<T>> find_segments(const Schedule<T>& s, const Instance<T>& inst) {
  auto by = detail::pieces_by_machine(s, inst);
  // merge each machine's busy time into maximal intervals
  std::vector<std::vector<std::pair<T, T>>> busy(static_cast<std::size_t>(inst.m()));
  std::vector<T> cuts;
  for (int i = 0; i < inst.m(); ++i) {
    for (const auto& pc : by[static_cast<std::size_t>(i)]) {
      auto& iv = busy[static_cast<std::size_t>(i)];
      if (!iv.empty() && arith<T>::leq(pc.start, iv.back().second))
        iv.back().second = std::max(iv.back().second, pc.end);
      else
        iv.emplace_back(pc.start, pc.end);
    }
    for (const auto& [a, b] : busy[static_cast<std::size_t>(i)]) {
      cuts.push_back(a);
      cuts.push_back(b);
    }
  }
  cuts = detail::sorted_unique(std::move(cuts));

  std::vector<Segment<T>> out;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    Segment<T> seg;
    seg.start = cuts[c];
    seg.end = cuts[c + 1];
    for (int i = 0; i < inst.m(); ++i)
      for (const auto& [a, b] : busy[static_cast<std::size_t>(i)])
        if (arith<T>::leq(a, seg.start) && arith<T>::leq(seg.end, b)) {
          seg.busy.push_back(i + 1);
          break;
        }
    if (seg.busy.empty()) continue;
    std::map<std::size_t, T> amounts;
    for (const auto& pc : s.pieces) {
      const T lo = std::max(pc.start, seg.start);
      const T hi = std::min(pc.end, seg.end);
      if (hi > lo) amounts[inst.index_of(pc.job)] += hi - lo;
    }
    // order present jobs by private completion, ties by index
    std::vector<std::pair<std::size_t, T>> ordered(amounts.begin(), amounts.end());
    std::sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
      const T ca = s.private_completion.at(inst.job(a.first).id);
      const T cb = s.private_completion.at(inst.job(b.first).id);
      if (ca != cb) return ca < cb;
      return a.first < b.first;
    });
    seg.amounts = std::move(ordered);
    out.push_back(std::move(seg));
  }
  return out;
}

/// Closes idle gaps machine by machine, relabels content among equal-cost
/// machines so longer-running ones come first, then lays every segment out
/// sequentially: jobs in order of private completion, each running on all of
/// the segment's busy machines for amount/width time. The total weighted
/// overlap never changes.
template <class T>
Schedule<T> make_sequential(const Schedule<T>& input, const Instance<T>& inst) {
  {
    auto violations = validate(input, inst);
    if (!violations.empty()) {
      std::vector<std::string> rendered;
      for (const auto& v : violations) rendered.push_back(violation_text(v));
      throw InfeasibleScheduleError("make_sequential needs a feasible schedule", std::move(rendered));
    }
  }
  auto by = detail::pieces_by_machine(input, inst);

  // shift every piece left onto the previous one
  std::vector<T> load(static_cast<std::size_t>(inst.m()), T(0));
  for (int i = 0; i < inst.m(); ++i) {
    T cursor(0);
    for (auto& pc : by[static_cast<std::size_t>(i)]) {
      const T len = pc.length();
      pc.start = cursor;
      pc.end = cursor + len;
      cursor += len;
    }
    load[static_cast<std::size_t>(i)] = cursor;
  }
  // within equal-cost machine groups, put heavier content on lower indices
  {
    std::size_t g = 0;
    while (g < load.size()) {
      std::size_t h = g + 1;
      while (h < load.size() && inst.cost(static_cast<int>(h) + 1) == inst.cost(static_cast<int>(g) + 1)) ++h;
      std::vector<std::size_t> idx;
      for (std::size_t i = g; i < h; ++i) idx.push_back(i);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return load[a] > load[b]; });
      std::vector<std::vector<Piece<T>>> content(idx.size());
      std::vector<T> l(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) {
        content[i] = std::move(by[idx[i]]);
        l[i] = load[idx[i]];
      }
      for (std::size_t i = 0; i < idx.size(); ++i) {
        by[g + i] = std::move(content[i]);
        load[g + i] = l[i];
        for (auto& pc : by[g + i]) pc.machine = static_cast<int>(g + i) + 1;
      }
      g = h;
    }
  }

  // segment boundaries are the distinct machine loads
  std::vector<T> cuts = detail::sorted_unique(load);
  if (!cuts.empty() && arith<T>::is_zero(cuts.front())) cuts.erase(cuts.begin());

  Schedule<T> out;
  out.private_completion = input.private_completion;
  T seg_start(0);
  for (const T& seg_end : cuts) {
    std::vector<int> busy;
    for (int i = 0; i < inst.m(); ++i)
      if (load[static_cast<std::size_t>(i)] >= seg_end) busy.push_back(i + 1);
    const int width = static_cast<int>(busy.size());
    std::map<std::size_t, T> amounts;
    for (int machine : busy)
      for (const auto& pc : by[static_cast<std::size_t>(machine - 1)]) {
        const T lo = std::max(pc.start, seg_start);
        const T hi = std::min(pc.end, seg_end);
        if (hi > lo) amounts[inst.index_of(pc.job)] += hi - lo;
      }
    std::vector<std::pair<std::size_t, T>> ordered(amounts.begin(), amounts.end());
    std::sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
      const T ca = input.private_completion.at(inst.job(a.first).id);
      const T cb = input.private_completion.at(inst.job(b.first).id);
      if (ca != cb) return ca < cb;
      return a.first < b.first;
    });
    T cursor = seg_start;
    for (const auto& [jidx, amount] : ordered) {
      const T next = cursor + amount / T(width);
      for (int machine : busy) out.pieces.push_back({inst.job(jidx).id, machine, cursor, next});
      cursor = next;
    }
    seg_start = seg_end;
  }
  return normalized(std::move(out));
}

/// One job block of a processor-descending sequential schedule: the job runs
/// on machines 1..width over (start, end).
template <class T>
struct SeqInterval {
  std::size_t job = 0;
  T start{};
  T end{};
  int width = 1;
  std::size_t segment = 0;
};

template <class T>
struct SequentialView {
  std::vector<SeqInterval<T>> intervals;  // time ordered, tiling the busy span
  std::vector<T> completion;              // per job index
  std::size_t segments = 0;
};

/// Interprets a schedule as a processor-descending sequential one; throws
/// StructuralError describing the first offending spot otherwise.
template <class T>
SequentialView<T> to_sequential_view(const Schedule<T>& s, const Instance<T>& inst) {
  auto by = detail::pieces_by_machine(s, inst);
  // no idle gaps between pieces of a machine
  for (int i = 0; i < inst.m(); ++i) {
    const auto& v = by[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      if (v[k].end > v[k + 1].start + arith<T>::tol())
        throw StructuralError("machine " + std::to_string(i + 1) + " runs two pieces at once");
      if (!arith<T>::eq(v[k].end, v[k + 1].start))
        throw StructuralError("machine " + std::to_string(i + 1) + " has an idle gap between pieces");
    }
  }
  // busy spans share one start and shrink along the cost order, so the busy
  // set at any instant is a cheapest prefix and widths never grow over time
  std::vector<std::pair<T, T>> span(static_cast<std::size_t>(inst.m()), {T(0), T(0)});
  for (int i = 0; i < inst.m(); ++i)
    if (!by[static_cast<std::size_t>(i)].empty())
      span[static_cast<std::size_t>(i)] = {by[static_cast<std::size_t>(i)].front().start,
                                           by[static_cast<std::size_t>(i)].back().end};
  int busy_machines = 0;
  for (int i = 0; i < inst.m(); ++i)
    if (!by[static_cast<std::size_t>(i)].empty()) busy_machines = i + 1;
  for (int i = 0; i < busy_machines; ++i) {
    const auto& sp = span[static_cast<std::size_t>(i)];
    if (by[static_cast<std::size_t>(i)].empty())
      throw StructuralError("machine " + std::to_string(i + 1) + " idle while a costlier one runs");
    if (i > 0) {
      const auto& prev = span[static_cast<std::size_t>(i - 1)];
      if (!arith<T>::eq(sp.first, prev.first))
        throw StructuralError("machine " + std::to_string(i + 1) + " starts apart from machine " +
                              std::to_string(i));
      if (sp.second > prev.second + arith<T>::tol())
        throw StructuralError("machine " + std::to_string(i + 1) + " outlasts machine " +
                              std::to_string(i));
    }
  }

  SequentialView<T> view;
  view.completion.assign(inst.n(), T(0));
  for (const auto& j : inst.jobs()) view.completion[inst.index_of(j.id)] = s.private_completion.at(j.id);
  if (busy_machines == 0) return view;

  std::vector<T> cuts;
  for (int i = 0; i < busy_machines; ++i) {
    for (const auto& pc : by[static_cast<std::size_t>(i)]) {
      cuts.push_back(pc.start);
      cuts.push_back(pc.end);
    }
  }
  cuts = detail::sorted_unique(std::move(cuts));

  auto covering_job = [&](int machine, const T& lo, const T& hi) -> std::optional<std::size_t> {
    for (const auto& pc : by[static_cast<std::size_t>(machine - 1)])
      if (arith<T>::leq(pc.start, lo) && arith<T>::leq(hi, pc.end)) return inst.index_of(pc.job);
    return std::nullopt;
  };

  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const T lo = cuts[c], hi = cuts[c + 1];
    std::optional<std::size_t> job;
    int width = 0;
    for (int machine = 1; machine <= busy_machines; ++machine) {
      auto owner = covering_job(machine, lo, hi);
      if (!owner) break;  // nested spans make the busy set a prefix
      if (width > 0 && *owner != *job)
        throw StructuralError("two jobs run side by side inside one segment");
      job = owner;
      ++width;
    }
    if (width == 0) continue;  // idle everywhere in (lo, hi)
    for (int machine = width + 1; machine <= busy_machines; ++machine)
      if (covering_job(machine, lo, hi))
        throw StructuralError("busy machines do not form a cheapest prefix");
    if (!view.intervals.empty() && view.intervals.back().job == *job &&
        view.intervals.back().width == width && arith<T>::eq(view.intervals.back().end, lo)) {
      view.intervals.back().end = hi;  // same block continues
    } else {
      std::size_t segment = 0;
      if (!view.intervals.empty()) {
        segment = view.intervals.back().segment;
        if (width != view.intervals.back().width || !arith<T>::eq(view.intervals.back().end, lo)) ++segment;
      }
      view.intervals.push_back({*job, lo, hi, width, segment});
    }
  }
  view.segments = view.intervals.empty() ? 0 : view.intervals.back().segment + 1;
  for (const auto& iv : view.intervals)
    if (iv.end > view.completion[iv.job] + arith<T>::tol())
      throw StructuralError("piece of " + inst.job(iv.job).id + " ends after its private completion");
  return view;
}

template <class T>
Schedule<T> from_sequential_view(const SequentialView<T>& view, const Instance<T>& inst) {
  Schedule<T> s;
  for (std::size_t j = 0; j < inst.n(); ++j) s.private_completion[inst.job(j).id] = view.completion[j];
  for (const auto& iv : view.intervals)
    for (int machine = 1; machine <= iv.width; ++machine)
      s.pieces.push_back({inst.job(iv.job).id, machine, iv.start, iv.end});
  return normalized(std::move(s));
}

/// Per-interval data driving the shift calculus. A block whose end coincides
/// with the job's private completion carries factor width+1 and measures its
/// slack against the processing time; otherwise the factor is the width and
/// the slack runs to the private completion.
template <class T>
struct IntervalDescriptor {
  std::size_t job = 0;
  T start{};
  T end{};
  int width = 1;
  int factor = 1;
  T radius{};
  bool ends_at_completion = false;
};

template <class T>
IntervalDescriptor<T> describe_one(const SeqInterval<T>& iv, const SequentialView<T>& view,
                                   const Instance<T>& inst) {
  IntervalDescriptor<T> d;
  d.job = iv.job;
  d.start = iv.start;
  d.end = iv.end;
  d.width = iv.width;
  const T completion = view.completion[iv.job];
  if (arith<T>::eq(iv.end, completion)) {
    d.ends_at_completion = true;
    d.factor = iv.width + 1;
    d.radius = std::min(iv.end - iv.start, inst.job(iv.job).p - iv.end);
  } else {
    d.ends_at_completion = false;
    d.factor = iv.width;
    d.radius = std::min(iv.end - iv.start, completion - iv.end);
  }
  return d;
}

template <class T>
std::vector<IntervalDescriptor<T>> describe_intervals(const Schedule<T>& s, const Instance<T>& inst) {
  auto view = to_sequential_view(s, inst);
  std::vector<IntervalDescriptor<T>> out;
  out.reserve(view.intervals.size());
  for (const auto& iv : view.intervals) out.push_back(describe_one(iv, view, inst));
  return out;
}

namespace detail {

template <class T>
std::size_t interval_ending_at(const SequentialView<T>& view, const T& t) {
  for (std::size_t i = 0; i < view.intervals.size(); ++i)
    if (arith<T>::eq(view.intervals[i].end, t)) return i;
  throw SolverRefusal("no job piece ends at the requested time point");
}

template <class T>
T prefix_margin(const Instance<T>& inst, std::size_t job, int width) {
  T s(0);
  for (int z = 1; z <= width; ++z) s += inst.job(job).w - inst.cost(z);
  return s;
}

}  // namespace detail

/// Marginal payoff per unit of shift for the chain of moves anchored at t.
/// Depends only on the schedule and the time point.
template <class T>
T rate(const Schedule<T>& s, const Instance<T>& inst, const T& t) {
  auto view = to_sequential_view(s, inst);
  const std::size_t first = detail::interval_ending_at(view, t);
  std::vector<IntervalDescriptor<T>> d;
  for (std::size_t i = first; i < view.intervals.size(); ++i)
    d.push_back(describe_one(view.intervals[i], view, inst));

  T result = detail::prefix_margin(inst, d[0].job, d[0].width) / T(d[0].factor);
  T chain(1);  // product of m_z / factor_{z-1}
  for (std::size_t i = 1; i < d.size(); ++i) {
    const T prev = chain / T(d[i - 1].factor);
    chain *= T(d[i].width) / T(d[i - 1].factor);
    const T cur = chain / T(d[i].factor);
    result += (cur - prev) * detail::prefix_margin(inst, d[i].job, d[i].width);
  }
  return result;
}

enum class ModStepKind { base, interior, interior_synchronized };

inline const char* mod_step_name(ModStepKind k) {
  switch (k) {
    case ModStepKind::base: return "base";
    case ModStepKind::interior: return "interior";
    case ModStepKind::interior_synchronized: return "interior-synchronized";
  }
  return "?";
}

template <class T>
struct ModStep {
  ModStepKind kind = ModStepKind::base;
  std::size_t job = 0;
  T eps{};
  T payoff{};
  T boundary_before{};
  T boundary_after{};
  T shift_bound{};  // factor * radius at the moment of the step
};

template <class T>
struct ModificationTrace {
  T start_time{};
  T eps{};
  T rate_value{};
  T delta{};  // sum of step payoffs
  std::size_t job0 = 0;
  std::vector<ModStep<T>> steps;
  Schedule<T> result;  // runs job0 for p + eps in total; every other job intact
};

/// The chained endpoint-shift: starting at the piece ending at t, moves every
/// later boundary by a geometrically scaled share of eps. The last step also
/// moves the final job's private completion when it is synchronized. The
/// output deliberately overruns job0's processing time by eps.
template <class T>
ModificationTrace<T> apply_modification(const Schedule<T>& s, const Instance<T>& inst, const T& t,
                                        const T& eps) {
  if (arith<T>::is_zero(eps)) throw SolverRefusal("shift must be non-zero");
  auto view = to_sequential_view(s, inst);
  const std::size_t first = detail::interval_ending_at(view, t);

  ModificationTrace<T> trace;
  trace.start_time = t;
  trace.eps = eps;
  trace.rate_value = rate(s, inst, t);
  trace.job0 = view.intervals[first].job;
  trace.delta = T(0);

  T cur_eps = eps;
  for (std::size_t i = first; i < view.intervals.size(); ++i) {
    auto& iv = view.intervals[i];
    const bool last = i + 1 == view.intervals.size();
    const auto d = describe_one(iv, view, inst);  // radius against the current start

    ModStep<T> step;
    step.job = iv.job;
    step.eps = cur_eps;
    step.kind = last ? ModStepKind::base
                     : (d.ends_at_completion ? ModStepKind::interior_synchronized : ModStepKind::interior);
    step.shift_bound = T(d.factor) * d.radius;
    if (abs_value(cur_eps) > step.shift_bound)
      throw SolverRefusal(std::string("shift outside the doable range of the ") + mod_step_name(step.kind) +
                          " step at " + arith<T>::str(iv.end));

    const T move = cur_eps / T(d.factor);
    step.boundary_before = iv.end;
    step.boundary_after = iv.end + move;
    step.payoff = move * detail::prefix_margin(inst, iv.job, iv.width);
    if (!last) {
      const auto& next = view.intervals[i + 1];
      step.payoff -= move * detail::prefix_margin(inst, next.job, next.width);
    }

    iv.end = step.boundary_after;
    if (d.ends_at_completion) view.completion[iv.job] = step.boundary_after;
    if (!last) {
      view.intervals[i + 1].start = step.boundary_after;
      cur_eps = cur_eps * T(view.intervals[i + 1].width) / T(d.factor);
    }
    trace.delta += step.payoff;
    trace.steps.push_back(std::move(step));
  }
  trace.result = from_sequential_view(view, inst);
  return trace;
}

/// Largest eps magnitude accepted by every step of the chain anchored at t:
/// half of min(width * radius) over the suffix.
template <class T>
T modification_margin(const Schedule<T>& s, const Instance<T>& inst, const T& t) {
  auto view = to_sequential_view(s, inst);
  const std::size_t first = detail::interval_ending_at(view, t);
  T margin{};
  bool have = false;
  for (std::size_t i = first; i < view.intervals.size(); ++i) {
    const auto d = describe_one(view.intervals[i], view, inst);
    const T bound = T(d.width) * d.radius / T(2);
    if (!have || bound < margin) margin = bound, have = true;
  }
  return margin;
}

/// Two pieces of one job living in different segments; right_* is the later
/// piece.
template <class T>
struct JobSplit {
  std::size_t job = 0;
  T left_start{}, left_end{};
  int left_width = 1;
  T right_start{}, right_end{};
  int right_width = 1;
};

template <class T>
std::optional<JobSplit<T>> find_rightmost_split(const Schedule<T>& s, const Instance<T>& inst) {
  auto view = to_sequential_view(s, inst);
  std::optional<JobSplit<T>> best;
  for (std::size_t i = 0; i < view.intervals.size(); ++i) {
    // latest earlier sibling in another segment
    std::size_t sibling = i;
    for (std::size_t before = 0; before < i; ++before)
      if (view.intervals[before].job == view.intervals[i].job &&
          view.intervals[before].segment != view.intervals[i].segment)
        sibling = before;
    if (sibling == i) continue;
    if (best && best->right_end >= view.intervals[i].end) continue;
    JobSplit<T> split;
    split.job = view.intervals[i].job;
    split.left_start = view.intervals[sibling].start;
    split.left_end = view.intervals[sibling].end;
    split.left_width = view.intervals[sibling].width;
    split.right_start = view.intervals[i].start;
    split.right_end = view.intervals[i].end;
    split.right_width = view.intervals[i].width;
    best = split;
  }
  return best;
}

/// Moves eps units of the split job between its two pieces: the chained shift
/// grows the right piece while the balance leaves (eps > 0) or enters
/// (eps < 0) machine right_width+1 next to the other piece. Ends with the
/// sequential relayout. Negative eps strictly shortens the schedule.
template <class T>
Schedule<T> transfer(const Schedule<T>& s, const Instance<T>& inst, const JobSplit<T>& split, const T& eps) {
  auto rightmost = find_rightmost_split(s, inst);
  if (!rightmost) throw SolverRefusal("schedule has no job split");
  if (rightmost->job != split.job || !arith<T>::eq(rightmost->right_end, split.right_end) ||
      !arith<T>::eq(rightmost->left_end, split.left_end))
    throw SolverRefusal("only the rightmost split can be transferred");
  if (split.right_width + 1 > inst.m())
    throw InvariantBreach("a split implies a spare machine next to the right piece");

  auto view = to_sequential_view(s, inst);
  const std::size_t right_idx = detail::interval_ending_at(view, split.right_end);
  const auto right_desc = describe_one(view.intervals[right_idx], view, inst);

  const T len_left = split.left_end - split.left_start;
  const T len_right = split.right_end - split.right_start;
  const T margin = modification_margin(s, inst, split.right_end);
  T bound = std::min(len_left, len_right * T(right_desc.factor) / T(right_desc.factor + 1));
  bound = std::min(bound, margin);
  if (arith<T>::is_zero(eps) || !(abs_value(eps) < bound))
    throw SolverRefusal("transfer shift must satisfy 0 < |eps| < " + arith<T>::str(bound));

  auto trace = apply_modification(s, inst, split.right_end, eps);
  Schedule<T> edited = trace.result;
  const int spare = split.right_width + 1;
  const std::string& job_id = inst.job(split.job).id;
  if (eps > T(0)) {
    bool done = false;
    for (auto& pc : edited.pieces) {
      if (pc.machine != spare || pc.job != job_id) continue;
      if (arith<T>::leq(pc.start, split.left_start) && arith<T>::leq(split.left_end, pc.end)) {
        pc.end = pc.end - eps;
        done = true;
        break;
      }
    }
    if (!done) throw InvariantBreach("split piece missing on the spare machine");
  } else {
    edited.pieces.push_back({job_id, spare, split.right_start, split.right_start - eps});
  }
  return make_sequential(normalized(std::move(edited)), inst);
}

template <class T>
struct SynchronizeResult {
  Schedule<T> schedule;
  T eps{};
  T rate_value{};
};

/// One synchronization move for the last non-synchronized job: shift its
/// piece end toward its private completion (direction picked by the sign of
/// the rate) and pull the private completion back by eps.
template <class T>
SynchronizeResult<T> synchronize_job(const Schedule<T>& s, const Instance<T>& inst, const std::string& job_id) {
  const std::size_t jidx = inst.index_of(job_id);
  auto view = to_sequential_view(s, inst);
  if (find_rightmost_split(s, inst)) throw SolverRefusal("schedule still has job splits");

  std::size_t mine = view.intervals.size();
  for (std::size_t i = 0; i < view.intervals.size(); ++i)
    if (view.intervals[i].job == jidx) mine = i;
  if (mine == view.intervals.size()) throw SolverRefusal("job " + job_id + " has no shared piece");
  const auto& iv = view.intervals[mine];
  if (arith<T>::eq(iv.end, view.completion[jidx]))
    throw SolverRefusal("job " + job_id + " is already synchronized");
  for (std::size_t i = mine + 1; i < view.intervals.size(); ++i)
    if (!arith<T>::eq(view.intervals[i].end, view.completion[view.intervals[i].job]))
      throw SolverRefusal("a later job is not synchronized either");

  const T r = rate(s, inst, iv.end);
  const T width(iv.width);
  T bound = std::min(width * (iv.end - iv.start),
                     width / (width + T(1)) * (view.completion[jidx] - iv.end));
  bound = std::min(bound, modification_margin(s, inst, iv.end));
  if (!(bound > T(0))) throw SolverRefusal("no feasible shift for job " + job_id);
  T eps = bound / T(2);
  if (!(r > T(0))) eps = -eps;

  auto trace = apply_modification(s, inst, iv.end, eps);
  SynchronizeResult<T> out;
  out.eps = eps;
  out.rate_value = r;
  out.schedule = trace.result;
  out.schedule.private_completion[job_id] = out.schedule.private_completion[job_id] - eps;
  out.schedule = normalized(std::move(out.schedule));
  return out;
}

template <class T>
struct FillResult {
  Schedule<T> schedule;
  std::string donor;  // first job of the synchronized run
  T fill_start{};
  T fill_end{};
  T moved{};  // amount handed from the donor to the filled job
};

/// Fills the head of the processing-time-ordered synchronized tail with job
/// j: the donor's early part moves to its own private processor and j takes
/// its place on the shared ones, finishing earlier privately.
template <class T>
FillResult<T> j_filling(const Schedule<T>& s, const Instance<T>& inst, const std::string& job_id) {
  const std::size_t jidx = inst.index_of(job_id);
  auto view = to_sequential_view(s, inst);

  // longest synchronized suffix with non-decreasing processing times and
  // pairwise distinct jobs
  std::size_t suffix = view.intervals.size();
  while (suffix > 0) {
    const auto& iv = view.intervals[suffix - 1];
    if (!arith<T>::eq(iv.end, view.completion[iv.job])) break;
    if (suffix < view.intervals.size() &&
        inst.job(iv.job).p > inst.job(view.intervals[suffix].job).p)
      break;
    bool dup = false;
    for (std::size_t k = suffix; k < view.intervals.size(); ++k)
      if (view.intervals[k].job == iv.job) dup = true;
    if (dup) break;
    --suffix;
  }
  if (suffix >= view.intervals.size())
    throw SolverRefusal("no synchronized processing-time-ordered tail to fill");

  const auto& head = view.intervals[suffix];  // donor block
  // the filled job must either immediately precede the tail or be absent
  std::size_t last_of_j = view.intervals.size();
  for (std::size_t i = 0; i < suffix; ++i)
    if (view.intervals[i].job == jidx) last_of_j = i;
  for (std::size_t i = suffix; i < view.intervals.size(); ++i)
    if (view.intervals[i].job == jidx) throw SolverRefusal("job " + job_id + " already sits in the tail");

  const T completion = view.completion[jidx];
  if (last_of_j != view.intervals.size()) {
    if (last_of_j + 1 != suffix)
      throw SolverRefusal("job " + job_id + " does not immediately precede the tail");
    if (arith<T>::eq(view.intervals[last_of_j].end, completion))
      throw SolverRefusal("job " + job_id + " is already synchronized");
  } else {
    if (!(head.start < inst.job(jidx).p))
      throw SolverRefusal("tail starts after the job's processing time");
  }

  const T t1 = head.start;
  const T t1p = head.end;
  const T width(head.width);
  T t = (completion + width * t1) / (width + T(1));
  if (t > t1p) t = t1p;
  if (!(t > t1)) throw InvariantBreach("fill interval collapsed");

  const T moved = width * (t - t1);
  const std::size_t donor = head.job;

  view.completion[donor] = view.completion[donor] + moved;
  view.completion[jidx] = completion - moved;
  auto filled = view.intervals[suffix];
  filled.job = jidx;
  filled.end = t;
  view.intervals[suffix].start = t;  // donor keeps (t, t1p); drops out when empty
  const bool donor_gone = arith<T>::eq(view.intervals[suffix].start, view.intervals[suffix].end);
  if (donor_gone) view.intervals.erase(view.intervals.begin() + static_cast<long>(suffix));
  view.intervals.insert(view.intervals.begin() + static_cast<long>(suffix), filled);

  FillResult<T> out;
  out.donor = inst.job(donor).id;
  out.fill_start = t1;
  out.fill_end = t;
  out.moved = moved;
  out.schedule = from_sequential_view(view, inst);
  return out;
}

template <class T>
struct CanonicalizeResult {
  Schedule<T> schedule;
  int transfers = 0;
  int synchronizations = 0;
  bool split_free = false;
  bool synchronized = false;
};

/// Best-effort normal form: sequential relayout, then backward transfers
/// until no split remains, then synchronization passes right to left. Capped;
/// each transfer strictly shrinks the schedule, synchronization steps may
/// stall and give up at the cap.
template <class T>
CanonicalizeResult<T> canonicalize(const Schedule<T>& s, const Instance<T>& inst, int max_rounds = 200) {
  CanonicalizeResult<T> out;
  out.schedule = make_sequential(s, inst);
  for (int round = 0; round < max_rounds; ++round) {
    auto split = find_rightmost_split(out.schedule, inst);
    if (!split) break;
    const auto view = to_sequential_view(out.schedule, inst);
    const std::size_t right_idx = detail::interval_ending_at(view, split->right_end);
    const auto d = describe_one(view.intervals[right_idx], view, inst);
    T bound = std::min(split->left_end - split->left_start,
                       (split->right_end - split->right_start) * T(d.factor) / T(d.factor + 1));
    bound = std::min(bound, modification_margin(out.schedule, inst, split->right_end));
    if (!(bound > T(0))) break;
    out.schedule = transfer(out.schedule, inst, *split, -bound / T(2));
    ++out.transfers;
  }
  out.split_free = !find_rightmost_split(out.schedule, inst).has_value();
  if (out.split_free) {
    for (int round = 0; round < max_rounds; ++round) {
      auto view = to_sequential_view(out.schedule, inst);
      std::size_t last_bad = view.intervals.size();
      for (std::size_t i = 0; i < view.intervals.size(); ++i)
        if (!arith<T>::eq(view.intervals[i].end, view.completion[view.intervals[i].job])) last_bad = i;
      if (last_bad == view.intervals.size()) {
        out.synchronized = true;
        break;
      }
      try {
        auto step = synchronize_job(out.schedule, inst, inst.job(view.intervals[last_bad].job).id);
        out.schedule = std::move(step.schedule);
        ++out.synchronizations;
      } catch (const SolverRefusal&) {
        break;
      }
    }
  }
  return out;
}

}  // namespace spsched
