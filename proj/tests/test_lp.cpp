#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "spsched/generate.hpp"
#include "spsched/lp.hpp"
#include "spsched/oracle.hpp"

using namespace spsched;
using spsched::testing::rat;

TEST_CASE("model shape for one job and one machine") {
  auto inst = testing::single_job<Rat>();
  auto model = build_compatible_lp(inst, {0});
  CHECK(model.lp.num_vars == 2);  // t1 and one x
  REQUIRE(model.lp.rows.size() == 3);
  // t1 >= 0, x <= t1, x + t1 = p
  CHECK(model.lp.rows[0].rel == Rel::le);
  CHECK(model.lp.rows[0].a[model.t_var(0)] == Rat(-1));
  CHECK(model.lp.rows[1].a[model.x_var(0, 1, 0)] == Rat(1));
  CHECK(model.lp.rows[1].a[model.t_var(0)] == Rat(-1));
  CHECK(model.lp.rows[2].rel == Rel::eq);
  CHECK(model.lp.rows[2].b == Rat(12));
}

TEST_CASE("model size follows the variable count formula") {
  auto inst = Instance<Rat>({{"a", Rat(2), Rat(1)}, {"b", Rat(3), Rat(1)}}, {Rat(0)});
  auto model = build_compatible_lp(inst, {0, 1});
  CHECK(model.lp.num_vars == 2 + 3);  // n + m n(n+1)/2
  std::size_t capacity_rows = 0;
  for (const auto& row : model.lp.rows)
    if (row.rel == Rel::le) ++capacity_rows;
  CHECK(capacity_rows == 2 + 2);  // chain rows plus per-(machine, window) rows
}

TEST_CASE("permutation must be a bijection") {
  auto inst = testing::two_jobs<Rat>();
  CHECK_THROWS_AS(build_compatible_lp(inst, {0}), StructuralError);
  CHECK_THROWS_AS(build_compatible_lp(inst, {0, 0}), StructuralError);
  CHECK_THROWS_AS(build_compatible_lp(inst, {0, 5}), StructuralError);
}

TEST_CASE("single job program reproduces the half split") {
  auto inst = testing::single_job<Rat>();
  auto model = build_compatible_lp(inst, {0});
  auto sol = solve_lp(model);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == Rat(6));
  CHECK(sol.values[model.t_var(0)] == Rat(6));
  CHECK(sol.values[model.x_var(0, 1, 0)] == Rat(6));

  auto s = extract_schedule(sol, model, inst);
  CHECK(validate(s, inst).empty());
  CHECK(s.private_completion.at("j") == Rat(6));
  REQUIRE(s.pieces.size() == 1);
  CHECK(s.pieces[0].end == Rat(6));
}

TEST_CASE("weights below every cost give a private-only optimum") {
  Instance<Rat> inst({{"a", Rat(5), Rat(1)}, {"b", Rat(7), Rat(0)}}, {Rat(2), Rat(3)});
  auto model = build_compatible_lp(inst, {0, 1});
  auto sol = solve_lp(model);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == Rat(0));
  auto s = extract_schedule(sol, model, inst);
  CHECK(s.pieces.empty());
}

TEST_CASE("two-job program per completion order") {
  auto inst = testing::two_jobs<Rat>();
  auto forward = solve_lp(build_compatible_lp(inst, {0, 1}));
  REQUIRE(forward.status == LpStatus::optimal);
  CHECK(forward.objective == Rat(7));
  auto backward = solve_lp(build_compatible_lp(inst, {1, 0}));
  REQUIRE(backward.status == LpStatus::optimal);
  CHECK(backward.objective == Rat(4));
}

TEST_CASE("orders no schedule can satisfy come back infeasible") {
  // the long job cannot finish before the short one on a single machine
  Instance<Rat> inst({{"long", Rat(100), Rat(1)}, {"short", Rat(1), Rat(1)}}, {Rat(0)});
  auto sol = solve_lp(build_compatible_lp(inst, {0, 1}));
  CHECK(sol.status == LpStatus::infeasible);
  // yet the exhaustive search still succeeds through the other order
  auto best = solve_exact(inst);
  CHECK(best.objective > Rat(0));
}

TEST_CASE("extracted schedules stay feasible and keep the objective") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    auto inst = random_instance<Rat>(rng);
    std::vector<std::size_t> perm(inst.n());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t j = perm.size(); j > 1; --j) std::swap(perm[j - 1], perm[draw(rng, j)]);
    auto model = build_compatible_lp(inst, perm);
    auto sol = solve_lp(model);
    if (sol.status != LpStatus::optimal) continue;
    auto s = extract_schedule(sol, model, inst);
    CHECK(validate(s, inst).empty());
    CHECK(total_weighted_overlap(s, inst).total_weighted == sol.objective);
    // completion order respected
    for (std::size_t pos = 0; pos + 1 < perm.size(); ++pos)
      CHECK(s.private_completion.at(inst.job(perm[pos]).id) <=
            s.private_completion.at(inst.job(perm[pos + 1]).id));
  }
}

TEST_CASE("feasible schedules encode into the program constraints") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 40; ++round) {
    auto inst = random_instance<Rat>(rng);
    auto s = random_schedule(rng, inst);
    REQUIRE(validate(s, inst).empty());
    // order jobs by their private completion; the schedule is compatible
    std::vector<std::size_t> perm(inst.n());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      const Rat ca = s.private_completion.at(inst.job(a).id);
      const Rat cb = s.private_completion.at(inst.job(b).id);
      if (ca != cb) return ca < cb;
      return a < b;
    });
    auto model = build_compatible_lp(inst, perm);
    // encode: t from completions, x by clipping pieces to windows
    std::vector<Rat> values(model.lp.num_vars, Rat(0));
    std::vector<Rat> t(inst.n());
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
      t[pos] = s.private_completion.at(inst.job(perm[pos]).id);
      values[model.t_var(pos)] = t[pos];
    }
    for (const auto& pc : s.pieces) {
      std::size_t pos = 0;
      while (perm[pos] != inst.index_of(pc.job)) ++pos;
      for (std::size_t k = 0; k <= pos; ++k) {
        const Rat lo = std::max(pc.start, k == 0 ? Rat(0) : t[k - 1]);
        const Rat hi = std::min(pc.end, t[k]);
        if (hi > lo) values[model.x_var(pos, pc.machine, k)] += hi - lo;
      }
    }
    // every row satisfied and the objective equals the overlap
    for (const auto& row : model.lp.rows) {
      Rat lhs(0);
      for (std::size_t v = 0; v < model.lp.num_vars; ++v) lhs += row.a[v] * values[v];
      if (row.rel == Rel::le) CHECK(lhs <= row.b);
      if (row.rel == Rel::eq) CHECK(lhs == row.b);
      if (row.rel == Rel::ge) CHECK(lhs >= row.b);
    }
    Rat f(0);
    for (std::size_t v = 0; v < model.lp.num_vars; ++v) f += model.lp.objective[v] * values[v];
    CHECK(f == total_weighted_overlap(s, inst).total_weighted);
  }
}

TEST_CASE("exhaustive search refuses oversized instances") {
  std::vector<Job<Rat>> jobs;
  for (int j = 0; j < 9; ++j) jobs.push_back({"j" + std::to_string(j), Rat(1 + j), Rat(1)});
  Instance<Rat> inst(std::move(jobs), {Rat(1)});
  CHECK_THROWS_AS(solve_exact(inst), SolverRefusal);
  CHECK_THROWS_WITH_AS(solve_exact(inst), doctest::Contains("8"), SolverRefusal);
}

TEST_CASE("exhaustive search matches the named optima") {
  auto d1 = solve_exact(testing::two_jobs<Rat>());
  CHECK(d1.objective == Rat(7));
  auto fig = solve_exact(testing::three_jobs_two_machines<Rat>());
  CHECK(fig.objective == Rat(37));
  Instance<Rat> cheap({{"j", Rat(5), Rat(1)}}, {Rat(3)});
  CHECK(solve_exact(cheap).objective == Rat(0));
}

TEST_CASE("antithetical detection checks all pairs") {
  CHECK(is_antithetical(testing::two_jobs<Rat>()));
  CHECK_FALSE(is_antithetical(testing::three_jobs_two_machines<Rat>()));
  Instance<Rat> same({{"a", Rat(3), Rat(2)}, {"b", Rat(3), Rat(2)}, {"c", Rat(3), Rat(2)}}, {Rat(1)});
  CHECK(is_antithetical(same));
  Instance<Rat> tied({{"a", Rat(3), Rat(2)}, {"b", Rat(3), Rat(1)}}, {Rat(1)});
  CHECK_FALSE(is_antithetical(tied));  // equal p with unequal w breaks the pair rule
}

TEST_CASE("antithetical solver matches the exhaustive one") {
  auto res = solve_antithetical(testing::two_jobs<Rat>());
  CHECK(res.objective == Rat(7));
  for (const auto& j : {std::string("a"), std::string("b")}) {
    Rat shared(0);
    for (const auto& pc : res.schedule.pieces)
      if (pc.job == j) shared += pc.length();
    CHECK(shared > Rat(0));
  }
  CHECK(solve_antithetical(testing::single_job<Rat>()).objective == Rat(6));
  CHECK_THROWS_AS(solve_antithetical(testing::three_jobs_two_machines<Rat>()), SolverRefusal);
}

TEST_CASE("identical jobs give the same payoff under either order") {
  Instance<Rat> inst({{"a", Rat(6), Rat(3)}, {"b", Rat(6), Rat(3)}}, {Rat(1)});
  auto fwd = solve_lp(build_compatible_lp(inst, {0, 1}));
  auto bwd = solve_lp(build_compatible_lp(inst, {1, 0}));
  CHECK(fwd.objective == bwd.objective);
  CHECK(solve_antithetical(inst).objective == fwd.objective);
}

TEST_CASE("exhaustive search equals the enumeration oracle on random instances") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 30; ++round) {
    auto inst = random_instance<Rat>(rng);
    auto exact = solve_exact(inst);
    auto oracle = oracle_optimum(inst);
    CHECK(exact.objective == oracle.objective);
  }
}

TEST_CASE("antithetical instances need only one program") {
  std::mt19937_64 rng(14);
  for (int round = 0; round < 25; ++round) {
    auto inst = random_antithetical_instance<Rat>(rng);
    REQUIRE(is_antithetical(inst));
    CHECK(solve_antithetical(inst).objective == solve_exact(inst).objective);
  }
}

TEST_CASE("a machine nobody can afford never changes the optimum") {
  std::mt19937_64 rng(15);
  for (int round = 0; round < 15; ++round) {
    auto inst = random_instance<Rat>(rng, {1, 4, 1, 2});
    auto base = solve_exact(inst);
    Rat wmax(0);
    for (const auto& j : inst.jobs()) wmax = std::max(wmax, j.w);
    auto costs = inst.costs();
    costs.push_back(wmax + Rat(1));
    Instance<Rat> wider(inst.jobs(), costs);
    CHECK(solve_exact(wider).objective == base.objective);
  }
}

TEST_CASE("float mode tracks the exact optimum closely") {
  std::mt19937_64 rng(16);
  for (int round = 0; round < 15; ++round) {
    auto seed = rng();
    std::mt19937_64 ra(seed), rb(seed);
    auto exact = solve_exact(random_instance<Rat>(ra));
    auto fl = solve_exact(random_instance<double>(rb));
    CHECK(std::fabs(exact.objective.to_double() - fl.objective) <= 1e-6);
  }
}

TEST_CASE("debug dump lists objective and rows") {
  auto inst = testing::two_jobs<Rat>();
  auto model = build_compatible_lp(inst, {0, 1});
  auto text = lp_debug_text(model, inst);
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("t1") != std::string::npos);
  CHECK(text.find("<=") != std::string::npos);
}
