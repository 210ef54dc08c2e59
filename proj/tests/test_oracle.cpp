#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "spsched/generate.hpp"
#include "spsched/oracle.hpp"

using namespace spsched;

namespace {

template <class T>
OracleStats<T> count_candidates(const Instance<T>& inst) {
  return enumerate_synchronized<T>(inst, {}, [](const auto&, const auto&, const auto&) {});
}

}  // namespace

TEST_CASE("candidate counts match the closed form") {
  CHECK(synchronized_candidate_count(1, 1) == 2);
  CHECK(synchronized_candidate_count(1, 2) == 3);
  // 1 + 5*3 + 20*6 + 60*10 + 120*15 + 120*21
  CHECK(synchronized_candidate_count(5, 3) == 5056);

  auto one = count_candidates(testing::single_job<Rat>());
  CHECK(one.generated == 2);
  Instance<Rat> two_machines({{"j", Rat(12), Rat(2)}}, {Rat(1), Rat(2)});
  CHECK(count_candidates(two_machines).generated == 3);
}

TEST_CASE("generated counts agree with the formula on random instances") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 20; ++round) {
    auto inst = random_instance<Rat>(rng);
    auto stats = count_candidates(inst);
    CHECK(stats.generated == synchronized_candidate_count(inst.n(), inst.m()));
    CHECK(stats.yielded <= stats.generated);
  }
}

TEST_CASE("zero-length slots survive enumeration") {
  auto inst = testing::two_jobs<Rat>();
  bool saw = false;
  enumerate_synchronized<Rat>(inst, {}, [&](const auto& jobs, const auto& widths, const auto& bounds) {
    if (jobs.size() == 2 && jobs[0] == 1 && jobs[1] == 0 && widths[0] == 1 && widths[1] == 1) {
      CHECK(bounds[0] == Rat(4));
      CHECK(bounds[1] == Rat(4));  // the short job collapses to a point
      saw = true;
    }
  });
  CHECK(saw);
}

TEST_CASE("budget refusals name the counts") {
  std::vector<Job<Rat>> jobs;
  for (int j = 0; j < 7; ++j) jobs.push_back({"j" + std::to_string(j), Rat(j + 1), Rat(1)});
  Instance<Rat> inst(std::move(jobs), {Rat(1)});
  CHECK_THROWS_AS(oracle_optimum(inst), SolverRefusal);

  EnumerationBudget tight;
  tight.max_candidates = 4;  // the two-job instance generates five pairs
  CHECK_THROWS_AS(oracle_optimum(testing::two_jobs<Rat>(), tight), SolverRefusal);
}

TEST_CASE("oracle finds the named optima") {
  auto d1 = oracle_optimum(testing::two_jobs<Rat>());
  CHECK(d1.objective == Rat(7));
  REQUIRE(d1.schedule.slots.size() == 2);
  CHECK(d1.schedule.slots[0].job == "a");
  CHECK(d1.schedule.slots[1].job == "b");
  CHECK(d1.schedule.boundaries == std::vector<Rat>{Rat(2), Rat(5)});

  auto fig = oracle_optimum(testing::three_jobs_two_machines<Rat>());
  CHECK(fig.objective == Rat(37));
  REQUIRE(fig.schedule.slots.size() == 2);  // the cheap job contributes nothing
  CHECK(fig.schedule.slots[0].width == 2);
  CHECK(fig.schedule.slots[1].width == 2);

  Instance<Rat> cheap({{"j", Rat(5), Rat(1)}}, {Rat(3)});
  auto none = oracle_optimum(cheap);
  CHECK(none.objective == Rat(0));
  CHECK(none.schedule.slots.empty());
}

TEST_CASE("no feasible schedule beats the oracle") {
  std::mt19937_64 rng(22);
  for (int round = 0; round < 40; ++round) {
    auto inst = random_instance<Rat>(rng);
    auto best = oracle_optimum(inst);
    auto s = random_schedule(rng, inst);
    REQUIRE(validate(s, inst).empty());
    CHECK(total_weighted_overlap(s, inst).total_weighted <= best.objective);
  }
}

TEST_CASE("oracle schedules expand to feasible schedules of equal value") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 25; ++round) {
    auto inst = random_instance<Rat>(rng);
    auto best = oracle_optimum(inst);
    auto s = expand(best.schedule, inst);
    CHECK(validate(s, inst).empty());
    CHECK(total_weighted_overlap(s, inst).total_weighted == best.objective);
  }
}
