#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "spsched/simplex.hpp"

using namespace spsched;
using spsched::testing::rat;

namespace {

template <class T>
LinearProgram<T> tiny_lp() {
  // max 3x + 2y st x + y <= 4, x + 3y <= 6
  LinearProgram<T> lp;
  lp.num_vars = 2;
  lp.objective = {T(3), T(2)};
  auto& r1 = lp.add_row(Rel::le, T(4));
  r1.a = {T(1), T(1)};
  auto& r2 = lp.add_row(Rel::le, T(6));
  r2.a = {T(1), T(3)};
  return lp;
}

}  // namespace

TEST_CASE("simplex solves a small program exactly") {
  auto sol = solve_simplex(tiny_lp<Rat>());
  CHECK(sol.status == LpStatus::optimal);
  CHECK(sol.objective == Rat(12));
  CHECK(sol.x[0] == Rat(4));
  CHECK(sol.x[1] == Rat(0));
}

TEST_CASE("simplex handles equalities and lower bounds") {
  // max x + y st x + y = 3, x >= 1, y <= 1  ->  x = 2, y = 1
  LinearProgram<Rat> lp;
  lp.num_vars = 2;
  lp.objective = {Rat(1), Rat(1)};
  auto& r1 = lp.add_row(Rel::eq, Rat(3));
  r1.a = {Rat(1), Rat(1)};
  auto& r2 = lp.add_row(Rel::ge, Rat(1));
  r2.a = {Rat(1), Rat(0)};
  auto& r3 = lp.add_row(Rel::le, Rat(1));
  r3.a = {Rat(0), Rat(1)};
  auto sol = solve_simplex(lp);
  CHECK(sol.status == LpStatus::optimal);
  CHECK(sol.objective == Rat(3));
  CHECK(sol.x[0] + sol.x[1] == Rat(3));
  CHECK(sol.x[1] <= Rat(1));
}

TEST_CASE("simplex reports infeasible programs") {
  LinearProgram<Rat> lp;
  lp.num_vars = 1;
  lp.objective = {Rat(1)};
  auto& r1 = lp.add_row(Rel::le, Rat(1));
  r1.a = {Rat(1)};
  auto& r2 = lp.add_row(Rel::ge, Rat(2));
  r2.a = {Rat(1)};
  CHECK(solve_simplex(lp).status == LpStatus::infeasible);
}

TEST_CASE("simplex reports unbounded programs") {
  LinearProgram<Rat> lp;
  lp.num_vars = 2;
  lp.objective = {Rat(1), Rat(0)};
  auto& r1 = lp.add_row(Rel::ge, Rat(1));
  r1.a = {Rat(1), Rat(-1)};
  CHECK(solve_simplex(lp).status == LpStatus::unbounded);
}

TEST_CASE("degenerate programs still terminate") {
  // many redundant rows through the origin
  LinearProgram<Rat> lp;
  lp.num_vars = 3;
  lp.objective = {Rat(1), Rat(1), Rat(1)};
  for (int i = 0; i < 6; ++i) {
    auto& r = lp.add_row(Rel::le, Rat(0));
    r.a = {Rat(1 + i % 2), Rat(-1), Rat(i % 3 == 0 ? 1 : -1)};
  }
  auto& cap = lp.add_row(Rel::le, Rat(5));
  cap.a = {Rat(1), Rat(1), Rat(1)};
  auto sol = solve_simplex(lp);
  CHECK(sol.status == LpStatus::optimal);
  CHECK(sol.objective == Rat(5));
}

TEST_CASE("exact and float agree on random dense programs") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 1 + rng() % 4;
    const std::size_t rows = 1 + rng() % 4;
    LinearProgram<Rat> lp;
    LinearProgram<double> lpd;
    lp.num_vars = lpd.num_vars = n;
    for (std::size_t v = 0; v < n; ++v) {
      const long c = static_cast<long>(rng() % 11) - 3;
      lp.objective.push_back(Rat(c));
      lpd.objective.push_back(static_cast<double>(c));
    }
    for (std::size_t r = 0; r < rows; ++r) {
      const long b = static_cast<long>(rng() % 12);
      auto& row = lp.add_row(Rel::le, Rat(b));
      auto& rowd = lpd.add_row(Rel::le, static_cast<double>(b));
      for (std::size_t v = 0; v < n; ++v) {
        const long a = static_cast<long>(rng() % 9) - 2;
        row.a[v] = Rat(a);
        rowd.a[v] = static_cast<double>(a);
      }
    }
    auto sol = solve_simplex(lp);
    auto sold = solve_simplex(lpd);
    // origin is feasible, so both must be optimal or both unbounded
    REQUIRE(sol.status == sold.status);
    if (sol.status == LpStatus::optimal)
      CHECK(std::fabs(sol.objective.to_double() - sold.objective) <= 1e-6);
  }
}
