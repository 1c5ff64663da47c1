#ifndef SSPD_TEST_HELPERS_HPP
#define SSPD_TEST_HELPERS_HPP

#include "sspd/model.hpp"

#include <array>
#include <vector>

namespace sspd::test {

inline Instance make_instance(double alpha, double L, double g,
                              std::vector<std::array<double, 3>> rdw) {
  std::vector<Job> jobs;
  jobs.reserve(rdw.size());
  for (const auto& x : rdw) {
    Job j;
    j.release = x[0];
    j.deadline = x[1];
    j.workload = x[2];
    jobs.push_back(j);
  }
  return Instance(EnergyModel(alpha, L, g), std::move(jobs));
}

} // namespace sspd::test

#endif
