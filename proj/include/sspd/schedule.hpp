#ifndef SSPD_SCHEDULE_HPP
#define SSPD_SCHEDULE_HPP

#include "sspd/model.hpp"

#include <string>
#include <vector>

namespace sspd {

enum class Mode { On, Off };

// Piecewise-constant slice of a schedule. job == 0 means none (idle or off).
struct Segment {
  double start = 0;
  double end = 0;
  Mode mode = Mode::Off;
  double speed = 0;
  int job = 0;
};

// Ordered, abutting segments covering [horizon_start, horizon_end).
// Outside the horizon the machine is off.
struct Schedule {
  double horizon_start = 0;
  double horizon_end = 0;
  std::vector<Segment> segments;
};

// Incremental builder; coalesces equal adjacent pieces and checks abutment.
class ScheduleBuilder {
public:
  explicit ScheduleBuilder(double start);
  void run(int job, double start, double end, double speed);
  void idle(double start, double end);
  void off(double start, double end);
  double cursor() const { return cursor_; }
  Schedule finish(double horizon_end);

private:
  void push(Segment s);
  double start_;
  double cursor_;
  std::vector<Segment> segments_;
};

struct Violation {
  int property = 0; // 1..5 matching the schedule properties, 6 = structural
  std::string detail;
};

// Checks the defining schedule properties against the instance: speed>0 only
// while on, speed==0 iff no job, jobs inside their windows, workloads summing
// to w_j (relative tolerance), and segment list well-formedness.
std::vector<Violation> validate_schedule(const Instance& inst, const Schedule& s);

struct InvalidScheduleError : std::runtime_error {
  explicit InvalidScheduleError(const std::string& what) : std::runtime_error(what) {}
  std::vector<Violation> violations;
};

enum class Boundary {
  OnAtBothEnds,    // subinstance convention: every maximal off interval in the
                   // horizon costs one wake-up, border-touching ones included
  InfiniteHorizon, // whole-line convention: wake-ups = #on-blocks + 1
};

struct CostBreakdown {
  double speed_cost = 0;
  double mode_cost = 0;
  int wakeups = 0;
  double on_duration = 0;
  double total = 0;
};

CostBreakdown evaluate_cost(const Instance& inst, const Schedule& s, Boundary boundary);

// Same accounting without validation, for schedules built internally.
CostBreakdown cost_of_segments(const EnergyModel& m, const std::vector<Segment>& segs,
                               Boundary boundary);

// Total workload of jobs contained in [t0, t1) divided by t1 - t0.
double density(const std::vector<Job>& jobs, double t0, double t1);
double density(const Instance& inst, double t0, double t1);

// density >= s* up to a relative tolerance
bool is_dense(const EnergyModel& m, double density_value);

} // namespace sspd

#endif
