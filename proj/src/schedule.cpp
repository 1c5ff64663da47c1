#include "sspd/schedule.hpp"

#include <cmath>
#include <sstream>

namespace sspd {

namespace {
constexpr double kAbutTol = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}
} // namespace

ScheduleBuilder::ScheduleBuilder(double start) : start_(start), cursor_(start) {}

void ScheduleBuilder::push(Segment s) {
  if (s.end <= s.start) {
    if (s.end < s.start - kAbutTol)
      throw InternalError("builder: segment with negative length");
    return; // drop zero-length pieces
  }
  if (std::abs(s.start - cursor_) > kAbutTol)
    throw InternalError("builder: segment at " + fmt(s.start) + " does not abut cursor " + fmt(cursor_));
  s.start = cursor_;
  if (!segments_.empty()) {
    Segment& prev = segments_.back();
    if (prev.mode == s.mode && prev.job == s.job && prev.speed == s.speed) {
      prev.end = s.end;
      cursor_ = s.end;
      return;
    }
  }
  segments_.push_back(s);
  cursor_ = s.end;
}

void ScheduleBuilder::run(int job, double start, double end, double speed) {
  push({start, end, Mode::On, speed, job});
}

void ScheduleBuilder::idle(double start, double end) {
  push({start, end, Mode::On, 0.0, 0});
}

void ScheduleBuilder::off(double start, double end) {
  push({start, end, Mode::Off, 0.0, 0});
}

Schedule ScheduleBuilder::finish(double horizon_end) {
  if (std::abs(cursor_ - horizon_end) > kAbutTol)
    throw InternalError("builder: horizon ends at " + fmt(horizon_end) + " but cursor is " + fmt(cursor_));
  Schedule s;
  s.horizon_start = start_;
  s.horizon_end = horizon_end;
  s.segments = std::move(segments_);
  if (!s.segments.empty()) s.segments.back().end = horizon_end;
  return s;
}

std::vector<Violation> validate_schedule(const Instance& inst, const Schedule& s) {
  std::vector<Violation> out;
  auto add = [&](int prop, const std::string& d) { out.push_back({prop, d}); };

  if (s.horizon_end <= s.horizon_start)
    add(6, "empty horizon");

  double cur = s.horizon_start;
  for (size_t k = 0; k < s.segments.size(); ++k) {
    const Segment& seg = s.segments[k];
    if (!(seg.start < seg.end))
      add(5, "segment " + std::to_string(k) + " has non-positive length");
    if (std::abs(seg.start - cur) > kAbutTol)
      add(5, "gap or overlap before segment " + std::to_string(k) + " at t=" + fmt(seg.start));
    cur = seg.end;

    if (seg.speed > 0 && seg.mode != Mode::On)
      add(1, "positive speed while off at t=" + fmt(seg.start));
    if ((seg.speed == 0) != (seg.job == 0))
      add(2, "speed zero iff no job violated at t=" + fmt(seg.start));
    if (seg.speed < 0)
      add(2, "negative speed at t=" + fmt(seg.start));
    if (seg.job != 0) {
      if (seg.job < 1 || seg.job > inst.size()) {
        add(3, "unknown job id " + std::to_string(seg.job));
      } else {
        const Job& j = inst.job(seg.job);
        if (seg.start < j.release - kAbutTol || seg.end > j.deadline + kAbutTol)
          add(3, "job " + std::to_string(seg.job) + " runs outside its window at t=" + fmt(seg.start));
      }
    }
  }
  if (!s.segments.empty() && std::abs(cur - s.horizon_end) > kAbutTol)
    add(5, "segments do not reach the horizon end");

  std::vector<double> work(static_cast<size_t>(inst.size()) + 1, 0.0);
  for (const Segment& seg : s.segments)
    if (seg.job >= 1 && seg.job <= inst.size())
      work[static_cast<size_t>(seg.job)] += seg.speed * (seg.end - seg.start);
  for (int id = 1; id <= inst.size(); ++id) {
    const double w = inst.job(id).workload;
    const double tol = 1e-9 * std::max(1.0, w);
    if (std::abs(work[static_cast<size_t>(id)] - w) > tol)
      add(4, "job " + std::to_string(id) + " executes " + fmt(work[static_cast<size_t>(id)]) +
                 " of workload " + fmt(w));
  }
  return out;
}

CostBreakdown cost_of_segments(const EnergyModel& m, const std::vector<Segment>& segs,
                               Boundary boundary) {
  CostBreakdown c;
  int on_blocks = 0;
  int off_blocks = 0;
  bool prev_on = false;
  bool first = true;
  for (const Segment& seg : segs) {
    const double len = seg.end - seg.start;
    if (seg.mode == Mode::On) {
      c.on_duration += len;
      if (seg.job != 0) c.speed_cost += std::pow(seg.speed, m.alpha) * len;
      if (first || !prev_on) ++on_blocks;
      prev_on = true;
    } else {
      if (first || prev_on) ++off_blocks;
      prev_on = false;
    }
    first = false;
  }
  c.wakeups = (boundary == Boundary::InfiniteHorizon) ? on_blocks + 1 : off_blocks;
  c.mode_cost = m.wake_cost * c.wakeups + m.dissipation * c.on_duration;
  c.total = c.speed_cost + c.mode_cost;
  return c;
}

CostBreakdown evaluate_cost(const Instance& inst, const Schedule& s, Boundary boundary) {
  auto violations = validate_schedule(inst, s);
  if (!violations.empty()) {
    InvalidScheduleError err("invalid schedule: " + violations.front().detail);
    err.violations = std::move(violations);
    throw err;
  }
  return cost_of_segments(inst.model(), s.segments, boundary);
}

double density(const std::vector<Job>& jobs, double t0, double t1) {
  if (!(t0 < t1)) throw ModelError("density: empty interval");
  double w = 0;
  for (const Job& j : jobs)
    if (j.release >= t0 && j.deadline <= t1) w += j.workload;
  return w / (t1 - t0);
}

double density(const Instance& inst, double t0, double t1) {
  return density(inst.jobs(), t0, t1);
}

bool is_dense(const EnergyModel& m, double density_value) {
  return density_value >= m.critical_speed * (1.0 - 1e-12);
}

} // namespace sspd
