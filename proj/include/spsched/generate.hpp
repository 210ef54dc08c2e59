#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "spsched/core.hpp"
#include "spsched/structure.hpp"

namespace spsched {

// All draws go through the raw engine so identical seeds give identical data
// on every platform.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

/// Random rational on a small-denominator grid inside [lo, hi].
template <class T>
T draw_value(std::mt19937_64& rng, long lo, long hi) {
  const long den = static_cast<long>(1 + draw(rng, 4));
  const long num = lo * den + static_cast<long>(draw(rng, static_cast<std::uint64_t>((hi - lo) * den + 1)));
  return arith<T>::ratio(num, den);
}

struct InstanceShape {
  std::size_t min_jobs = 1, max_jobs = 5;
  int min_machines = 1, max_machines = 3;
  long p_lo = 1, p_hi = 20;
  long w_lo = 0, w_hi = 10;
  long c_lo = 0, c_hi = 10;
};

template <class T>
Instance<T> random_instance(std::mt19937_64& rng, const InstanceShape& shape = {}) {
  const std::size_t n = shape.min_jobs + draw(rng, shape.max_jobs - shape.min_jobs + 1);
  const int m = shape.min_machines +
                static_cast<int>(draw(rng, static_cast<std::uint64_t>(shape.max_machines - shape.min_machines + 1)));
  std::vector<Job<T>> jobs;
  for (std::size_t j = 0; j < n; ++j)
    jobs.push_back({"j" + std::to_string(j + 1), draw_value<T>(rng, shape.p_lo, shape.p_hi),
                    draw_value<T>(rng, shape.w_lo, shape.w_hi)});
  std::vector<T> costs;
  for (int i = 0; i < m; ++i) costs.push_back(draw_value<T>(rng, shape.c_lo, shape.c_hi));
  return Instance<T>(std::move(jobs), std::move(costs));
}

/// Processing times ascending, weights descending; jobs sharing a processing
/// time share a weight.
template <class T>
Instance<T> random_antithetical_instance(std::mt19937_64& rng, const InstanceShape& shape = {}) {
  const std::size_t n = shape.min_jobs + draw(rng, shape.max_jobs - shape.min_jobs + 1);
  const int m = shape.min_machines +
                static_cast<int>(draw(rng, static_cast<std::uint64_t>(shape.max_machines - shape.min_machines + 1)));
  std::vector<T> ps, ws;
  for (std::size_t j = 0; j < n; ++j) {
    ps.push_back(draw_value<T>(rng, shape.p_lo, shape.p_hi));
    ws.push_back(draw_value<T>(rng, shape.w_lo, shape.w_hi));
  }
  std::sort(ps.begin(), ps.end());
  std::sort(ws.begin(), ws.end(), [](const T& a, const T& b) { return b < a; });
  for (std::size_t j = 1; j < n; ++j)
    if (ps[j] == ps[j - 1]) ws[j] = ws[j - 1];
  std::vector<Job<T>> jobs;
  for (std::size_t j = 0; j < n; ++j) jobs.push_back({"j" + std::to_string(j + 1), ps[j], ws[j]});
  std::vector<T> costs;
  for (int i = 0; i < m; ++i) costs.push_back(draw_value<T>(rng, shape.c_lo, shape.c_hi));
  return Instance<T>(std::move(jobs), std::move(costs));
}

/// Random feasible schedule. Jobs pack dense blocks from time zero, machine
/// contents are ordered by running time, and a roughening pass splits pieces
/// and slides tail pieces right so idle gaps appear.
template <class T>
Schedule<T> random_schedule(std::mt19937_64& rng, const Instance<T>& inst) {
  const int m = inst.m();
  struct Placed {
    std::string job;
    T start, end;
  };
  std::vector<std::vector<Placed>> content(static_cast<std::size_t>(m));
  std::vector<T> cursor(static_cast<std::size_t>(m), T(0));

  Schedule<T> s;
  // choose shared budgets, then pack jobs in order of target completion
  std::vector<std::pair<T, std::size_t>> targets;
  std::vector<T> budget(inst.n(), T(0));
  for (std::size_t j = 0; j < inst.n(); ++j) {
    const auto& job = inst.job(j);
    T c = job.p;
    if (draw(rng, 100) < 75) {
      // completion fraction in [1/(m+1), 1] keeps the budget packable
      const T frac = T(1) / T(m + 1) +
                     T(static_cast<long>(draw(rng, 16))) / T(16) * (T(1) - T(1) / T(m + 1));
      c = job.p * frac;
    }
    budget[j] = job.p - c;
    targets.push_back({c, j});
  }
  std::sort(targets.begin(), targets.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });

  for (const auto& [c, j] : targets) {
    const auto& job = inst.job(j);
    T left = budget[j];
    const int width = 1 + static_cast<int>(draw(rng, static_cast<std::uint64_t>(m)));
    for (int i = 0; i < width && left > T(0); ++i) {
      T len = left / T(width - i);
      if (draw(rng, 2)) len = left;  // lumpy split
      const T room = c - cursor[static_cast<std::size_t>(i)];
      if (len > room) len = room;
      if (!(len > T(0))) continue;
      content[static_cast<std::size_t>(i)].push_back(
          {job.id, cursor[static_cast<std::size_t>(i)], cursor[static_cast<std::size_t>(i)] + len});
      cursor[static_cast<std::size_t>(i)] += len;
      left -= len;
    }
    s.private_completion[job.id] = job.p - (budget[j] - left);
  }

  // longer-running contents onto cheaper machines
  std::vector<std::size_t> order(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cursor[a] > cursor[b]; });
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    for (const auto& pl : content[order[rank]])
      s.pieces.push_back({pl.job, static_cast<int>(rank) + 1, pl.start, pl.end});

  s = normalized(std::move(s));

  // roughen: split some pieces, slide some machine-final pieces right
  std::vector<Piece<T>> rough;
  std::vector<T> machine_end(static_cast<std::size_t>(m), T(0));
  for (const auto& pc : s.pieces)
    machine_end[static_cast<std::size_t>(pc.machine - 1)] =
        std::max(machine_end[static_cast<std::size_t>(pc.machine - 1)], pc.end);
  for (auto pc : s.pieces) {
    const bool last_on_machine = arith<T>::eq(pc.end, machine_end[static_cast<std::size_t>(pc.machine - 1)]);
    if (last_on_machine && draw(rng, 3) == 0) {
      const T slack = s.private_completion.at(pc.job) - pc.end;
      if (slack > T(0)) {
        const T shift = slack * T(static_cast<long>(1 + draw(rng, 4))) / T(4);
        pc.start += shift;
        pc.end += shift;
      }
    }
    if (pc.length() > T(0) && draw(rng, 3) == 0) {
      const T mid = pc.start + pc.length() * T(static_cast<long>(1 + draw(rng, 3))) / T(4);
      rough.push_back({pc.job, pc.machine, pc.start, mid});
      rough.push_back({pc.job, pc.machine, mid, pc.end});
    } else {
      rough.push_back(pc);
    }
  }
  s.pieces = std::move(rough);
  return normalized(std::move(s));
}

/// Processor-descending sequential schedule holding one deliberate split:
/// the first job also owns the final block of a later, narrower segment.
/// Instance data is derived from the layout. Returns instance and schedule.
template <class T>
std::pair<Instance<T>, Schedule<T>> random_split_schedule(std::mt19937_64& rng) {
  const int m = 2 + static_cast<int>(draw(rng, 3));               // 2..4 machines
  const int wide = 2 + static_cast<int>(draw(rng, static_cast<std::uint64_t>(m - 1)));  // first segment width
  const int narrow = 1 + static_cast<int>(draw(rng, static_cast<std::uint64_t>(wide - 1)));

  auto len = [&]() { return T(static_cast<long>(1 + draw(rng, 8))) / T(2); };

  // segment 1: split job then one filler; segment 2: optional filler then the
  // split job again, then a synchronized tail block
  const T a0 = len(), a1 = len(), b0 = len(), b1 = len(), b2 = len();
  struct Block {
    std::string job;
    T start, end;
    int width;
  };
  std::vector<Block> blocks;
  T t(0);
  blocks.push_back({"split", t, t + a0, wide});
  t += a0;
  blocks.push_back({"f1", t, t + a1, wide});
  t += a1;
  const bool pre_filler = draw(rng, 2) == 0;
  if (pre_filler) {
    blocks.push_back({"f2", t, t + b0, narrow});
    t += b0;
  }
  blocks.push_back({"split", t, t + b1, narrow});
  t += b1;
  blocks.push_back({"tail", t, t + b2, narrow});
  t += b2;

  Schedule<T> s;
  std::map<std::string, T> shared_total;
  std::map<std::string, T> last_end;
  for (const auto& blk : blocks) {
    for (int i = 1; i <= blk.width; ++i) s.pieces.push_back({blk.job, i, blk.start, blk.end});
    shared_total[blk.job] += T(blk.width) * (blk.end - blk.start);
    last_end[blk.job] = blk.end;
  }
  std::vector<Job<T>> jobs;
  for (const auto& [id, total] : shared_total) {
    // keep slack so every shift radius stays positive; "tail" stays synchronized
    T completion = last_end[id];
    if (id != "tail") completion += T(static_cast<long>(1 + draw(rng, 6))) / T(2);
    s.private_completion[id] = completion;
    jobs.push_back({id, completion + total, draw_value<T>(rng, 0, 10)});
  }
  std::vector<T> costs;
  T c(0);
  for (int i = 0; i < m; ++i) {
    c += T(static_cast<long>(draw(rng, 7))) / T(2);
    costs.push_back(c);
  }
  Instance<T> inst(std::move(jobs), std::move(costs));
  return {std::move(inst), normalized(std::move(s))};
}

/// Random synchronized schedule on a subset of jobs.
template <class T>
SyncSchedule<T> random_synchronized(std::mt19937_64& rng, const Instance<T>& inst) {
  std::vector<std::size_t> jobs(inst.n());
  for (std::size_t j = 0; j < jobs.size(); ++j) jobs[j] = j;
  for (std::size_t j = jobs.size(); j > 1; --j) std::swap(jobs[j - 1], jobs[draw(rng, j)]);
  const std::size_t k = draw(rng, jobs.size() + 1);
  int width = inst.m();
  std::vector<std::pair<std::string, int>> order;
  for (std::size_t i = 0; i < k; ++i) {
    width = 1 + static_cast<int>(draw(rng, static_cast<std::uint64_t>(width)));
    order.push_back({inst.job(jobs[i]).id, width});
  }
  for (;;) {
    auto sync = make_synchronized(inst, order);
    if (sync) return *sync;
    order.pop_back();  // drop the offending tail until boundaries work out
  }
}

}  // namespace spsched
