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

/// Private-share fraction guaranteeing the approximation ratio:
/// (2m+3)/(4(m+1)) = 1/2 + 1/(4(m+1)).
template <class T>
T alpha_of(int m) {
  if (m < 1) throw StructuralError("machine count must be at least 1");
  return arith<T>::ratio(2L * m + 3, 4L * (m + 1));
}

/// The restricted program over remainders. Jobs are indexed by processing
/// time ascending (ties by id); window k on each machine spans
/// (alpha*p_{k-1}, alpha*p_k) with p_0 = 0.
template <class T>
struct LaModel {
  T alpha{};
  std::vector<std::size_t> order;  // job indices sorted by p ascending
  std::size_t n = 0;
  int m = 0;
  LinearProgram<T> lp;

  std::size_t r_var(std::size_t pos) const { return pos; }  // remainder of job at pos
  std::size_t x_var(std::size_t pos, int machine, std::size_t window) const {
    return n + static_cast<std::size_t>(m) * (pos * (pos + 1) / 2) +
           window * static_cast<std::size_t>(m) + static_cast<std::size_t>(machine - 1);
  }
};

template <class T>
std::vector<std::size_t> ascending_p_order(const Instance<T>& inst) {
  std::vector<std::size_t> order(inst.n());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (inst.job(a).p != inst.job(b).p) return inst.job(a).p < inst.job(b).p;
    return inst.job(a).id < inst.job(b).id;
  });
  return order;
}

template <class T>
LaModel<T> build_la(const Instance<T>& inst) {
  LaModel<T> model;
  model.alpha = alpha_of<T>(inst.m());
  model.order = ascending_p_order(inst);
  model.n = inst.n();
  model.m = inst.m();
  model.lp.num_vars = model.n + static_cast<std::size_t>(model.m) * model.n * (model.n + 1) / 2;
  model.lp.objective.assign(model.lp.num_vars, T(0));
  for (std::size_t pos = 0; pos < model.n; ++pos) {
    const auto& job = inst.job(model.order[pos]);
    for (std::size_t k = 0; k <= pos; ++k)
      for (int i = 1; i <= model.m; ++i)
        model.lp.objective[model.x_var(pos, i, k)] = job.w - inst.cost(i);
  }

  const T half_share = arith<T>::ratio(1, 2L * (inst.m() + 1));
  for (std::size_t pos = 0; pos < model.n; ++pos) {
    const T p = inst.job(model.order[pos]).p;
    auto& lower = model.lp.add_row(Rel::ge, p * half_share);
    lower.a[model.r_var(pos)] = T(1);
    auto& upper = model.lp.add_row(Rel::le, model.alpha * p);
    upper.a[model.r_var(pos)] = T(1);
  }
  for (int i = 1; i <= model.m; ++i) {
    for (std::size_t k = 0; k < model.n; ++k) {
      const T prev_p = k == 0 ? T(0) : inst.job(model.order[k - 1]).p;
      auto& row = model.lp.add_row(Rel::le, model.alpha * (inst.job(model.order[k]).p - prev_p));
      for (std::size_t pos = k; pos < model.n; ++pos) row.a[model.x_var(pos, i, k)] = T(1);
    }
  }
  for (std::size_t pos = 0; pos < model.n; ++pos) {
    auto& row = model.lp.add_row(Rel::eq, model.alpha * inst.job(model.order[pos]).p);
    row.a[model.r_var(pos)] = T(1);
    for (std::size_t k = 0; k <= pos; ++k)
      for (int i = 1; i <= model.m; ++i) row.a[model.x_var(pos, i, k)] = T(1);
  }
  return model;
}

template <class T>
struct LaSolution {
  T objective{};
  std::vector<T> remainders;               // per position
  std::vector<std::vector<std::vector<T>>> x;  // [pos][machine-1][window]
};

template <class T>
LaSolution<T> solve_la(const LaModel<T>& model) {
  auto res = solve_simplex(model.lp);
  if (res.status != LpStatus::optimal)
    throw InvariantBreach("restricted program is always feasible and bounded");
  LaSolution<T> sol;
  sol.objective = res.objective;
  sol.remainders.resize(model.n);
  sol.x.assign(model.n, {});
  for (std::size_t pos = 0; pos < model.n; ++pos) {
    sol.remainders[pos] = res.x[model.r_var(pos)];
    sol.x[pos].assign(static_cast<std::size_t>(model.m), std::vector<T>(pos + 1, T(0)));
    for (int i = 1; i <= model.m; ++i)
      for (std::size_t k = 0; k <= pos; ++k)
        sol.x[pos][static_cast<std::size_t>(i - 1)][k] = res.x[model.x_var(pos, i, k)];
  }
  return sol;
}

/// Profit-maximizing flow instance equivalent to the restricted program.
/// Node layout: 0 = source, 1 = sink, 2+pos = job node, then per
/// (machine, window) an entry/exit pair.
template <class T>
struct FlowNetwork {
  struct Arc {
    int from = 0, to = 0;
    bool unbounded = false;
    T capacity{};
    T profit{};
  };
  int nodes = 0;
  int source = 0, sink = 1;
  std::vector<Arc> arcs;
  std::vector<std::string> node_names;
  T alpha{};
  std::vector<std::size_t> order;
  bool literal_source_capacity = false;

  int job_node(std::size_t pos) const { return 2 + static_cast<int>(pos); }
};

/// Builds the flow form. The default source capacity is the remainder range
/// alpha*p - p/(2(m+1)) = (2m+1)p/(4(m+1)); pass literal_capacity to use the
/// tighter m*p/(2(m+1)) variant kept for comparison studies.
template <class T>
FlowNetwork<T> build_flow(const Instance<T>& inst, bool literal_capacity = false) {
  FlowNetwork<T> net;
  net.alpha = alpha_of<T>(inst.m());
  net.order = ascending_p_order(inst);
  net.literal_source_capacity = literal_capacity;
  const std::size_t n = inst.n();
  const int m = inst.m();
  net.nodes = 2 + static_cast<int>(n) + 2 * m * static_cast<int>(n);
  net.node_names.assign(static_cast<std::size_t>(net.nodes), "");
  net.node_names[0] = "s";
  net.node_names[1] = "t";

  auto entry = [&](int machine, std::size_t k) {
    return 2 + static_cast<int>(n) + 2 * ((machine - 1) * static_cast<int>(n) + static_cast<int>(k));
  };
  for (std::size_t pos = 0; pos < n; ++pos)
    net.node_names[static_cast<std::size_t>(net.job_node(pos))] = "u" + std::to_string(pos + 1);
  for (int i = 1; i <= m; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      net.node_names[static_cast<std::size_t>(entry(i, k))] =
          "v" + std::to_string(i) + "_" + std::to_string(k + 1);
      net.node_names[static_cast<std::size_t>(entry(i, k)) + 1] =
          "v" + std::to_string(i) + "_" + std::to_string(k + 1) + "'";
    }

  const T half_share = arith<T>::ratio(1, 2L * (m + 1));
  for (std::size_t pos = 0; pos < n; ++pos) {
    const T p = inst.job(net.order[pos]).p;
    const T cap = literal_capacity ? T(m) * p * half_share : net.alpha * p - p * half_share;
    net.arcs.push_back({net.source, net.job_node(pos), false, cap, T(0)});
  }
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto& job = inst.job(net.order[pos]);
    for (int i = 1; i <= m; ++i)
      for (std::size_t k = 0; k <= pos; ++k)
        net.arcs.push_back({net.job_node(pos), entry(i, k), true, T(0), job.w - inst.cost(i)});
  }
  for (int i = 1; i <= m; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const T prev_p = k == 0 ? T(0) : inst.job(net.order[k - 1]).p;
      const T cap = net.alpha * (inst.job(net.order[k]).p - prev_p);
      net.arcs.push_back({entry(i, k), entry(i, k) + 1, false, cap, T(0)});
      net.arcs.push_back({entry(i, k) + 1, net.sink, true, T(0), T(0)});
    }
  return net;
}

template <class T>
struct FlowResult {
  T profit{};
  std::vector<T> flow;  // per arc
  int augmentations = 0;
};

/// Successive shortest augmenting paths on the residual graph, maximizing
/// profit and stopping once the best augmenting path no longer pays.
template <class T>
FlowResult<T> solve_max_profit_flow(const FlowNetwork<T>& net) {
  FlowResult<T> res;
  res.flow.assign(net.arcs.size(), T(0));
  res.profit = T(0);

  // residual edges: forward per arc and a paired reverse
  struct Edge {
    int to;
    std::size_t arc;
    bool forward;
  };
  std::vector<std::vector<Edge>> adj(static_cast<std::size_t>(net.nodes));
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    adj[static_cast<std::size_t>(net.arcs[a].from)].push_back({net.arcs[a].to, a, true});
    adj[static_cast<std::size_t>(net.arcs[a].to)].push_back({net.arcs[a].from, a, false});
  }

  auto residual = [&](const Edge& e, T& cap) -> bool {
    const auto& arc = net.arcs[e.arc];
    if (e.forward) {
      if (arc.unbounded) return true;  // cap unused
      cap = arc.capacity - res.flow[e.arc];
      return cap > T(0);
    }
    cap = res.flow[e.arc];
    return cap > T(0);
  };

  const std::size_t nn = static_cast<std::size_t>(net.nodes);
  std::vector<T> dist(nn);
  std::vector<char> reach(nn);
  std::vector<std::size_t> via_edge(nn);
  std::vector<int> via_node(nn);

  for (;;) {
    // longest-profit path search; no positive cycles exist along the way
    std::fill(reach.begin(), reach.end(), 0);
    reach[static_cast<std::size_t>(net.source)] = 1;
    dist[static_cast<std::size_t>(net.source)] = T(0);
    bool changed = true;
    for (int round = 0; round < net.nodes && changed; ++round) {
      changed = false;
      for (std::size_t u = 0; u < nn; ++u) {
        if (!reach[u]) continue;
        for (const auto& e : adj[u]) {
          T cap{};
          if (!residual(e, cap)) continue;
          const auto& arc = net.arcs[e.arc];
          const T gain = e.forward ? arc.profit : -arc.profit;
          const T cand = dist[u] + gain;
          const std::size_t v = static_cast<std::size_t>(e.to);
          if (!reach[v] || cand > dist[v]) {
            reach[v] = 1;
            dist[v] = cand;
            via_edge[v] = e.arc;
            via_node[v] = static_cast<int>(u);
            changed = true;
          }
        }
      }
    }
    const std::size_t sink = static_cast<std::size_t>(net.sink);
    if (!reach[sink] || !(dist[sink] > T(0))) break;

    // walk the path backwards, find the bottleneck
    T bottleneck{};
    bool has_bottleneck = false;
    int v = net.sink;
    while (v != net.source) {
      const std::size_t a = via_edge[static_cast<std::size_t>(v)];
      const int u = via_node[static_cast<std::size_t>(v)];
      const bool forward = net.arcs[a].from == u && net.arcs[a].to == v;
      if (forward) {
        if (!net.arcs[a].unbounded) {
          const T c = net.arcs[a].capacity - res.flow[a];
          if (!has_bottleneck || c < bottleneck) bottleneck = c, has_bottleneck = true;
        }
      } else {
        const T c = res.flow[a];
        if (!has_bottleneck || c < bottleneck) bottleneck = c, has_bottleneck = true;
      }
      v = u;
    }
    if (!has_bottleneck) throw InvariantBreach("augmenting path with no capacity bound");
    v = net.sink;
    while (v != net.source) {
      const std::size_t a = via_edge[static_cast<std::size_t>(v)];
      const int u = via_node[static_cast<std::size_t>(v)];
      const bool forward = net.arcs[a].from == u && net.arcs[a].to == v;
      res.flow[a] += forward ? bottleneck : -bottleneck;
      v = u;
    }
    res.profit += dist[sink] * bottleneck;
    ++res.augmentations;
  }
  return res;
}

/// Remainders and window amounts recovered from a flow.
template <class T>
LaSolution<T> flow_to_la(const FlowNetwork<T>& net, const FlowResult<T>& flow, const Instance<T>& inst) {
  LaSolution<T> sol;
  const std::size_t n = net.order.size();
  sol.objective = flow.profit;
  sol.remainders.assign(n, T(0));
  sol.x.assign(n, {});
  for (std::size_t pos = 0; pos < n; ++pos)
    sol.x[pos].assign(static_cast<std::size_t>(inst.m()), std::vector<T>(pos + 1, T(0)));
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const auto& arc = net.arcs[a];
    if (arc.from == net.source) {
      const std::size_t pos = static_cast<std::size_t>(arc.to - 2);
      sol.remainders[pos] = net.alpha * inst.job(net.order[pos]).p - flow.flow[a];
    }
  }
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const auto& arc = net.arcs[a];
    if (arc.from < 2 || arc.from >= 2 + static_cast<int>(n)) continue;
    if (arc.to < 2 + static_cast<int>(n)) continue;
    const std::size_t pos = static_cast<std::size_t>(arc.from - 2);
    const int slot = arc.to - (2 + static_cast<int>(n));
    const int machine = slot / (2 * static_cast<int>(n)) + 1;
    const std::size_t window = static_cast<std::size_t>((slot / 2) % static_cast<int>(n));
    sol.x[pos][static_cast<std::size_t>(machine - 1)][window] += flow.flow[a];
  }
  return sol;
}

/// Schedule corresponding to a solution of the restricted program: completion
/// (1-alpha)p + remainder, pieces packed inside (alpha*p_{k-1}, alpha*p_k).
template <class T>
Schedule<T> extract_alpha_private(const LaSolution<T>& sol, const std::vector<std::size_t>& order,
                                  const Instance<T>& inst) {
  const T alpha = alpha_of<T>(inst.m());
  Schedule<T> s;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& job = inst.job(order[pos]);
    s.private_completion[job.id] = (T(1) - alpha) * job.p + sol.remainders[pos];
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    const T window_start = k == 0 ? T(0) : alpha * inst.job(order[k - 1]).p;
    for (int i = 1; i <= inst.m(); ++i) {
      T cursor = window_start;
      for (std::size_t pos = k; pos < order.size(); ++pos) {
        const T len = sol.x[pos][static_cast<std::size_t>(i - 1)][k];
        if (len > arith<T>::tol()) {
          s.pieces.push_back({inst.job(order[pos]).id, i, cursor, cursor + len});
          cursor += len;
        }
      }
    }
  }
  return normalized(std::move(s));
}

enum class AlphaBackend { lp, flow };

template <class T>
struct AlphaResult {
  Schedule<T> schedule;
  T objective{};
  T alpha{};
  AlphaBackend backend = AlphaBackend::flow;
  bool literal_source_capacity = false;
};

/// Guaranteed-ratio solver: optimal alpha-private schedule via either backend.
template <class T>
AlphaResult<T> solve_alpha(const Instance<T>& inst, AlphaBackend backend = AlphaBackend::flow,
                           bool literal_capacity = false) {
  AlphaResult<T> out;
  out.alpha = alpha_of<T>(inst.m());
  out.backend = backend;
  out.literal_source_capacity = literal_capacity;
  if (backend == AlphaBackend::lp) {
    if (literal_capacity)
      throw SolverRefusal("the literal source capacity exists only in the flow form");
    auto model = build_la(inst);
    auto sol = solve_la(model);
    out.schedule = extract_alpha_private(sol, model.order, inst);
    out.objective = sol.objective;
  } else {
    auto net = build_flow(inst, literal_capacity);
    auto flow = solve_max_profit_flow(net);
    auto sol = flow_to_la(net, flow, inst);
    out.schedule = extract_alpha_private(sol, net.order, inst);
    out.objective = sol.objective;
  }
  return out;
}

/// Arc-list dump: "nodes arcs" header, then one line per arc with
/// tail, head, capacity and cost (negated profit, min-cost convention).
template <class T>
std::string flow_debug_text(const FlowNetwork<T>& net) {
  // unbounded arcs get the sum of source capacities, which no flow can exceed
  T big(0);
  for (const auto& arc : net.arcs)
    if (arc.from == net.source) big += arc.capacity;
  std::ostringstream os;
  os << net.nodes << " " << net.arcs.size() << "\n";
  for (const auto& arc : net.arcs)
    os << arc.from << " " << arc.to << " " << arith<T>::str(arc.unbounded ? big : arc.capacity) << " "
       << arith<T>::str(-arc.profit) << "\n";
  return os.str();
}

}  // namespace spsched
