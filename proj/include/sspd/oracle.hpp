#ifndef SSPD_ORACLE_HPP
#define SSPD_ORACLE_HPP

#include "sspd/dp.hpp"
#include "sspd/model.hpp"
#include "sspd/schedule.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sspd {

// Y value of pair (i, j) of a gap recomputed from scratch by max-density
// peeling; +inf on infeasible pairs. Local indices, 1 <= i <= j+1 <= m+1.
double yds_from_scratch_Y(const EnergyModel& m, const Subinstance& gap, int i, int j);

// Exhaustive variant of the recursion: enumerates every (a, b, c) triple,
// validating suffix/prefix chains by their defining inequalities and the
// minimality of a explicitly. Shares no code with the squeeze or the f/h
// scans. Intended for n up to ~12.
double naive_dp(const Instance& inst);

// Minimum cost over schedules that run jobs in index order, one uninterrupted
// run each, with both run endpoints on the grid {releases, deadlines} union a
// uniform lattice of pitch delta. Gaps between runs pick the cheaper of idle
// and shutdown. Upper bound on the optimum; nullopt when the grid is too
// coarse to place every job.
std::optional<double> grid_oracle(const Instance& inst, double delta);
double default_grid_delta(const Instance& inst);

struct PerturbationReport {
  double worst_delta = 0; // min over trials of perturbed cost - original cost
  int trials = 0;
  int applied = 0;
};

// Random feasibility-preserving edits of a claimed-optimal schedule:
// stretch/compress a run, toggle a gap between idle and off, shift a run
// within its slack. Gap modes of the edited geometry are re-chosen optimally.
PerturbationReport perturbation_sampler(const Instance& inst, const Schedule& s,
                                        int trials, uint64_t seed);

// Agreeable instance generator used by the oracle campaigns: sorted uniform
// releases, deadlines d_k = max(d_{k-1}, r_k + slack), workloads straddling
// the critical speed, wake cost cycling from tiny to huge.
Instance random_agreeable_instance(uint64_t seed, int n);

// Structural checks on solver output; returns human-readable problems, empty
// when everything holds.
std::vector<std::string> structural_report(const Instance& inst, const SolveResult& res);

} // namespace sspd

#endif
