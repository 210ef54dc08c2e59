#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "spsched/core.hpp"
#include "spsched/generate.hpp"

using namespace spsched;
using spsched::testing::rat;

TEST_CASE("rational parsing and printing") {
  CHECK(rat("3/4") + rat("1/8") == rat("7/8"));
  CHECK(rat("3.5") == Rat(7, 2));
  CHECK(rat("0.1") == Rat(1, 10));
  CHECK(rat("-2.5e-1") == Rat(-1, 4));
  CHECK(rat("5/8").str() == "5/8");
  CHECK(rat("6/3").str() == "2");
  CHECK_THROWS_AS(rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rat("abc"), std::invalid_argument);
}

TEST_CASE("instance invariants") {
  CHECK_THROWS_AS(Instance<Rat>({}, {Rat(1)}), StructuralError);
  CHECK_THROWS_AS(Instance<Rat>({{"a", Rat(0), Rat(1)}}, {Rat(1)}), StructuralError);
  CHECK_THROWS_AS(Instance<Rat>({{"a", Rat(1), Rat(-1)}}, {Rat(1)}), StructuralError);
  CHECK_THROWS_AS(Instance<Rat>({{"a", Rat(1), Rat(1)}, {"a", Rat(2), Rat(1)}}, {Rat(1)}),
                  StructuralError);
  // costs arrive unsorted and come out ascending
  Instance<Rat> inst({{"a", Rat(1), Rat(1)}}, {Rat(5), Rat(2)});
  CHECK(inst.cost(1) == Rat(2));
  CHECK(inst.cost(2) == Rat(5));
  CHECK(inst.cost_prefix(2) == Rat(7));
}

TEST_CASE("validate accepts the half-and-half single job layout") {
  Instance<Rat> inst({{"j", Rat(12), Rat(2)}}, {Rat(1)});
  Schedule<Rat> s;
  s.private_completion["j"] = Rat(6);
  s.pieces.push_back({"j", 1, Rat(0), Rat(6)});
  CHECK(validate(s, inst).empty());
}

TEST_CASE("validate allows one job overlapping itself across machines") {
  Instance<Rat> inst({{"j", Rat(12), Rat(1)}}, {Rat(0), Rat(0), Rat(0)});
  Schedule<Rat> s;
  s.private_completion["j"] = Rat(4);
  s.pieces.push_back({"j", 1, Rat(0), Rat(4)});
  s.pieces.push_back({"j", 2, Rat(0), Rat(3)});
  s.pieces.push_back({"j", 3, Rat(1), Rat(2)});
  CHECK(validate(s, inst).empty());

  auto rep = total_weighted_overlap(s, inst);
  Rat total(0);
  for (int i = 1; i <= 3; ++i) total += rep.per_job_per_machine[0][static_cast<std::size_t>(i - 1)];
  CHECK(total == Rat(8));
  CHECK(rep.total_weighted == Rat(8));
}

TEST_CASE("validate accepts a private-only job") {
  Instance<Rat> inst({{"j", Rat(5), Rat(2)}}, {Rat(1)});
  Schedule<Rat> s;
  s.private_completion["j"] = Rat(5);
  CHECK(validate(s, inst).empty());
  CHECK(total_weighted_overlap(s, inst).total_weighted == Rat(0));
}

TEST_CASE("validate flags overlapping pieces of different jobs") {
  Instance<Rat> inst({{"a", Rat(9), Rat(1)}, {"b", Rat(9), Rat(1)}}, {Rat(0)});
  Schedule<Rat> s;
  s.private_completion["a"] = Rat(7);
  s.private_completion["b"] = Rat(7);
  s.pieces.push_back({"a", 1, Rat(0), Rat(2)});
  s.pieces.push_back({"b", 1, Rat(1), Rat(3)});
  auto violations = validate(s, inst);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == ViolationKind::machine_conflict);
  CHECK(violations[0].magnitude == Rat(1));
  CHECK_THROWS_AS(total_weighted_overlap(s, inst), InfeasibleScheduleError);
}

TEST_CASE("validate reports the broken condition per job") {
  Instance<Rat> inst({{"a", Rat(4), Rat(1)}}, {Rat(0)});
  Schedule<Rat> s;
  s.private_completion["a"] = Rat(3);
  s.pieces.push_back({"a", 1, Rat(0), Rat(2)});  // total 5 != 4, and piece fits
  auto violations = validate(s, inst);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == ViolationKind::completion_sum);
  CHECK(violations[0].magnitude == Rat(1));

  s.pieces[0].end = rat("3.5");  // sticks out past the private completion
  violations = validate(s, inst);
  bool saw_window = false;
  for (const auto& v : violations)
    if (v.kind == ViolationKind::outside_private_window) saw_window = true;
  CHECK(saw_window);
}

TEST_CASE("unknown references are structural, not violations") {
  Instance<Rat> inst({{"a", Rat(4), Rat(1)}}, {Rat(0)});
  Schedule<Rat> s;
  s.private_completion["a"] = Rat(4);
  s.pieces.push_back({"ghost", 1, Rat(0), Rat(1)});
  CHECK_THROWS_AS(validate(s, inst), StructuralError);
  s.pieces[0] = {"a", 2, Rat(0), Rat(1)};
  CHECK_THROWS_AS(validate(s, inst), StructuralError);
  Schedule<Rat> missing;  // no completion entry for "a"
  CHECK_THROWS_AS(validate(missing, inst), StructuralError);
}

TEST_CASE("expand solves the single-job boundary") {
  auto inst = testing::single_job<Rat>();
  auto sync = make_synchronized(inst, {{"j", 1}});
  REQUIRE(sync.has_value());
  CHECK(sync->boundaries[0] == Rat(6));
  auto s = expand(*sync, inst);
  CHECK(validate(s, inst).empty());
  CHECK(s.private_completion.at("j") == Rat(6));
  REQUIRE(s.pieces.size() == 1);
  CHECK(s.pieces[0].start == Rat(0));
  CHECK(s.pieces[0].end == Rat(6));
}

TEST_CASE("expand with width three") {
  Instance<Rat> inst({{"j", Rat(12), Rat(1)}}, {Rat(0), Rat(0), Rat(0)});
  auto sync = make_synchronized(inst, {{"j", 3}});
  REQUIRE(sync.has_value());
  CHECK(sync->boundaries[0] == Rat(3));  // t + 3t = 12
  auto s = expand(*sync, inst);
  CHECK(validate(s, inst).empty());
  CHECK(s.pieces.size() == 3);
}

TEST_CASE("expand of an empty sequence leaves everything private") {
  auto inst = testing::two_jobs<Rat>();
  SyncSchedule<Rat> sync;
  auto s = expand(sync, inst);
  CHECK(validate(s, inst).empty());
  CHECK(s.pieces.empty());
  CHECK(total_weighted_overlap(s, inst).total_weighted == Rat(0));
}

TEST_CASE("expand rejects broken width or boundary sequences") {
  auto inst = testing::two_jobs<Rat>();
  SyncSchedule<Rat> sync;
  sync.slots = {{"a", 1}, {"b", 2}};  // widths grow
  sync.boundaries = {Rat(2), Rat(2)};
  CHECK_THROWS_AS(expand(sync, inst), StructuralError);
  sync.slots = {{"a", 1}, {"b", 1}};
  sync.boundaries = {Rat(2), Rat(4)};  // identity broken for b
  CHECK_THROWS_AS(expand(sync, inst), StructuralError);
}

TEST_CASE("two-job objective matches the slot sums") {
  auto inst = testing::two_jobs<Rat>();
  auto sync = make_synchronized(inst, {{"a", 1}, {"b", 1}});
  REQUIRE(sync.has_value());
  CHECK(sync->boundaries[0] == Rat(2));
  CHECK(sync->boundaries[1] == Rat(5));
  CHECK(synchronized_objective(*sync, inst) == Rat(7));
}

TEST_CASE("slot contribution vanishes at average cost") {
  // width 2, weight equal to the mean of the two costs
  Instance<Rat> inst({{"j", Rat(10), Rat(3)}}, {Rat(2), Rat(4)});
  auto sync = make_synchronized(inst, {{"j", 2}});
  REQUIRE(sync.has_value());
  CHECK(synchronized_objective(*sync, inst) == Rat(0));
}

TEST_CASE("five-slot layout implies the right processing times") {
  // widths (4,3,3,1,1) and boundaries (1,2,3.5,7,10) need p = (5,5,8,10.5,13)
  Instance<Rat> inst({{"j1", Rat(5), Rat(9)},
                      {"j2", Rat(5), Rat(8)},
                      {"j3", Rat(8), Rat(7)},
                      {"j4", rat("10.5"), Rat(6)},
                      {"j5", Rat(13), Rat(5)}},
                     {Rat(0), Rat(1), Rat(1), Rat(2)});
  auto sync = make_synchronized(
      inst, {{"j1", 4}, {"j2", 3}, {"j3", 3}, {"j4", 1}, {"j5", 1}});
  REQUIRE(sync.has_value());
  CHECK(sync->boundaries == std::vector<Rat>{Rat(1), Rat(2), rat("3.5"), Rat(7), Rat(10)});
  auto s = expand(*sync, inst);
  CHECK(validate(s, inst).empty());
  CHECK(total_weighted_overlap(s, inst).total_weighted == synchronized_objective(*sync, inst));
}

TEST_CASE("zero-length slots are legal and collapse to private-only") {
  // second job exactly as long as the first boundary
  Instance<Rat> inst({{"a", Rat(4), Rat(3)}, {"b", Rat(2), Rat(1)}}, {Rat(1)});
  auto sync = make_synchronized(inst, {{"a", 1}, {"b", 1}});
  REQUIRE(sync.has_value());
  CHECK(sync->boundaries[0] == Rat(2));
  CHECK(sync->boundaries[1] == Rat(2));  // zero-length slot
  auto s = expand(*sync, inst);
  CHECK(validate(s, inst).empty());
  CHECK(s.private_completion.at("b") == Rat(2));
  for (const auto& pc : s.pieces) CHECK(pc.job == "a");
}

TEST_CASE("objective equals expanded overlap on random synchronized schedules") {
  std::mt19937_64 rng(101);
  for (int round = 0; round < 60; ++round) {
    auto inst = random_instance<Rat>(rng);
    auto sync = random_synchronized(rng, inst);
    auto s = expand(sync, inst);
    CHECK(validate(s, inst).empty());
    CHECK(total_weighted_overlap(s, inst).total_weighted == synchronized_objective(sync, inst));
  }
}

TEST_CASE("objective round trip holds in float mode within tolerance") {
  std::mt19937_64 rng(102);
  for (int round = 0; round < 40; ++round) {
    auto inst = random_instance<double>(rng);
    auto sync = random_synchronized(rng, inst);
    auto s = expand(sync, inst);
    CHECK(validate(s, inst).empty());
    const double direct = synchronized_objective(sync, inst);
    const double expanded = total_weighted_overlap(s, inst).total_weighted;
    CHECK(std::fabs(direct - expanded) <= 1e-9);
  }
}

TEST_CASE("overlap ignores where pieces sit inside the window") {
  Instance<Rat> inst({{"a", Rat(10), Rat(4)}, {"b", Rat(10), Rat(1)}}, {Rat(1)});
  Schedule<Rat> a;
  a.private_completion["a"] = Rat(7);
  a.private_completion["b"] = Rat(9);
  a.pieces.push_back({"a", 1, Rat(0), Rat(3)});
  a.pieces.push_back({"b", 1, Rat(3), Rat(4)});
  Schedule<Rat> b = a;
  b.pieces[0] = {"a", 1, Rat(1), Rat(4)};
  b.pieces[1] = {"b", 1, Rat(0), Rat(1)};
  CHECK(total_weighted_overlap(a, inst).total_weighted == total_weighted_overlap(b, inst).total_weighted);
}

TEST_CASE("random schedules from the generator are feasible") {
  std::mt19937_64 rng(103);
  for (int round = 0; round < 80; ++round) {
    auto inst = random_instance<Rat>(rng);
    auto s = random_schedule(rng, inst);
    CHECK(validate(s, inst).empty());
  }
}
