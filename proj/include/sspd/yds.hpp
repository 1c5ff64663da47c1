#ifndef SSPD_YDS_HPP
#define SSPD_YDS_HPP

#include "sspd/model.hpp"
#include "sspd/schedule.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace sspd {

// Ordered disjoint blacked-out intervals plus queries that map between real
// time and available (non-blacked) time.
class BlackoutTimeline {
public:
  void add(double a, double b);
  double overlap(double a, double b) const;  // blacked measure inside [a,b)
  double available(double a, double b) const { return (b - a) - overlap(a, b); }
  double skip_right(double t) const;  // smallest available point >= t
  double skip_left(double t) const;   // largest available point <= t
  // Consumes `amount` of available time starting at the available point t.
  // Appends the covered real intervals to `pieces` and returns the end point.
  double advance(double t, double amount,
                 std::vector<std::pair<double, double>>* pieces) const;
  const std::vector<std::pair<double, double>>& intervals() const { return iv_; }
  bool empty() const { return iv_.empty(); }

private:
  std::vector<std::pair<double, double>> iv_;
};

struct YdsRun {
  int job = 0;
  double start = 0;
  double end = 0;
  double speed = 0;
};

struct YdsRound {
  double lo = 0;       // selected interval [lo, hi]
  double hi = 0;
  double dens = 0;     // execution speed of this round
  int first_job = 0;   // contained job id range (agreeable instances)
  int last_job = 0;
  std::vector<int> jobs;
};

struct YdsSchedule {
  std::vector<YdsRun> runs;      // sorted by start
  std::vector<YdsRound> rounds;  // in selection order, densities non-increasing
  double speed_cost = 0;
};

// Max-density peeling over jobs with windows intersected with [left, right).
// Handles arbitrary (not only agreeable) windows; runs may split around
// blacked-out regions. Returns nullopt when a restricted window is empty.
std::optional<YdsSchedule> yds_schedule(const EnergyModel& m, std::span<const Job> jobs,
                                        double left, double right);

struct Decomposition {
  std::vector<YdsRun> dense_runs;    // work consumed by rounds at density >= s*
  std::vector<std::pair<double, double>> dense_regions; // merged spans, sorted
  std::vector<Subinstance> gaps;     // sparse subinstances between regions,
                                     // ordered; jobs possibly empty
};

// Peels while the max density is at least s*, then groups the remaining jobs
// into the sparse subinstances delimited by the dense regions.
Decomposition extract_dense_regions(const Instance& inst);

} // namespace sspd

#endif
