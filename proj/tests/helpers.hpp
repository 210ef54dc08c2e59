#pragma once

#include <string>
#include <vector>

#include "spsched/core.hpp"
#include "spsched/rational.hpp"

namespace spsched::testing {

inline Rat rat(const std::string& s) { return Rat::parse(s); }

/// Two jobs, one machine: (p=4, w=3), (p=8, w=2), c=(1). Optimum 7.
template <class T>
Instance<T> two_jobs() {
  return Instance<T>({{"a", T(4), T(3)}, {"b", T(8), T(2)}}, {T(1)});
}

/// Three jobs, two machines: p=(9,9,5), w=(9,7,5), c=(4,5). Optimum 37.
template <class T>
Instance<T> three_jobs_two_machines() {
  return Instance<T>({{"j1", T(9), T(9)}, {"j2", T(9), T(7)}, {"j3", T(5), T(5)}}, {T(4), T(5)});
}

/// One job of size 12 and weight 2 on a single unit-cost machine. Optimum 6.
template <class T>
Instance<T> single_job() {
  return Instance<T>({{"j", T(12), T(2)}}, {T(1)});
}

}  // namespace spsched::testing
