#include "sspd/yds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace sspd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void BlackoutTimeline::add(double a, double b) {
  if (!(b > a)) return;
  std::vector<std::pair<double, double>> out;
  out.reserve(iv_.size() + 1);
  size_t k = 0;
  while (k < iv_.size() && iv_[k].second < a) out.push_back(iv_[k++]);
  while (k < iv_.size() && iv_[k].first <= b) {
    a = std::min(a, iv_[k].first);
    b = std::max(b, iv_[k].second);
    ++k;
  }
  out.emplace_back(a, b);
  while (k < iv_.size()) out.push_back(iv_[k++]);
  iv_ = std::move(out);
}

double BlackoutTimeline::overlap(double a, double b) const {
  double s = 0;
  for (const auto& [x, y] : iv_) {
    if (y <= a) continue;
    if (x >= b) break;
    s += std::min(y, b) - std::max(x, a);
  }
  return s;
}

double BlackoutTimeline::skip_right(double t) const {
  for (const auto& [x, y] : iv_) {
    if (t < x) return t;
    if (t < y) return y;
  }
  return t;
}

double BlackoutTimeline::skip_left(double t) const {
  for (auto it = iv_.rbegin(); it != iv_.rend(); ++it) {
    if (it->second < t) return t;
    if (it->first < t && t <= it->second) return it->first;
  }
  return t;
}

double BlackoutTimeline::advance(double t, double amount,
                                 std::vector<std::pair<double, double>>* pieces) const {
  double cur = t;
  double left = amount;
  size_t k = 0;
  while (k < iv_.size() && iv_[k].second <= cur) ++k;
  while (left > 0) {
    const double stop = (k < iv_.size()) ? iv_[k].first : kInf;
    if (cur < stop) {
      const double take = std::min(left, stop - cur);
      if (pieces) pieces->emplace_back(cur, cur + take);
      cur += take;
      left -= take;
      if (left <= 0) break;
    }
    if (k >= iv_.size()) break;
    cur = iv_[k].second;
    ++k;
  }
  return cur;
}

namespace {

struct EngineJob {
  int id = 0;
  double r = 0, d = 0; // skip-normalized restricted window
  double w = 0;
  bool alive = true;
};

struct Candidate {
  double dens = -1;
  double lo = 0, hi = 0;
  bool valid = false;
};

// Max-density peeling over restricted windows with blacked-out bookkeeping.
class YdsEngine {
public:
  YdsEngine(const EnergyModel& m, std::span<const Job> jobs, double left, double right)
      : m_(m) {
    jobs_.reserve(jobs.size());
    for (const Job& j : jobs) {
      EngineJob e;
      e.id = j.id;
      e.w = j.workload;
      e.r = std::max(j.release, left);
      e.d = std::min(j.deadline, right);
      if (!(e.r < e.d)) feasible_ = false;
      jobs_.push_back(e);
    }
    alive_ = static_cast<int>(jobs_.size());
  }

  bool feasible() const { return feasible_; }
  int alive() const { return alive_; }
  const BlackoutTimeline& timeline() const { return tl_; }

  Candidate best() const {
    Candidate best;
    if (alive_ == 0) return best;

    std::vector<int> byd;
    byd.reserve(static_cast<size_t>(alive_));
    for (size_t k = 0; k < jobs_.size(); ++k)
      if (jobs_[k].alive) byd.push_back(static_cast<int>(k));
    std::sort(byd.begin(), byd.end(), [&](int x, int y) {
      return std::tie(jobs_[x].d, jobs_[x].id) < std::tie(jobs_[y].d, jobs_[y].id);
    });

    // cumulative blacked measure at every window coordinate
    std::vector<double> rcum(jobs_.size(), 0), dcum(jobs_.size(), 0);
    {
      std::vector<std::pair<double, double*>> pts;
      pts.reserve(2 * byd.size());
      for (int k : byd) {
        pts.emplace_back(jobs_[k].r, &rcum[static_cast<size_t>(k)]);
        pts.emplace_back(jobs_[k].d, &dcum[static_cast<size_t>(k)]);
      }
      std::sort(pts.begin(), pts.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      double acc = 0;
      size_t iv = 0;
      const auto& bl = tl_.intervals();
      for (auto& [t, slot] : pts) {
        while (iv < bl.size() && bl[iv].second <= t) {
          acc += bl[iv].second - bl[iv].first;
          ++iv;
        }
        double here = acc;
        if (iv < bl.size() && bl[iv].first < t) here += t - bl[iv].first;
        *slot = here;
      }
    }

    for (int a : byd) {
      const double ra = jobs_[a].r;
      double W = 0;
      for (size_t p = 0; p < byd.size(); ++p) {
        const EngineJob& jb = jobs_[byd[p]];
        if (jb.r >= ra) W += jb.w;
        // candidates end at the last job of each distinct deadline value
        if (p + 1 < byd.size() && jobs_[byd[p + 1]].d == jb.d) continue;
        if (!(jb.d > ra) || W <= 0) continue;
        const double avail = (jb.d - ra) - (dcum[static_cast<size_t>(byd[p])] - rcum[static_cast<size_t>(a)]);
        if (!(avail > 0))
          throw InternalError("yds: candidate with contained work but no available time");
        const double dens = W / avail;
        if (dens > best.dens ||
            (dens == best.dens && std::tie(ra, jb.d) < std::tie(best.lo, best.hi))) {
          best.dens = dens;
          best.lo = ra;
          best.hi = jb.d;
          best.valid = true;
        }
      }
    }
    return best;
  }

  YdsRound peel(const Candidate& c) {
    YdsRound round;
    round.lo = c.lo;
    round.hi = c.hi;
    round.dens = c.dens;

    struct Item {
      double rel, dl, rem, worig;
      int id;
    };
    std::vector<Item> items;
    for (EngineJob& j : jobs_) {
      if (!j.alive || j.r < c.lo || j.d > c.hi) continue;
      items.push_back({j.r, j.d, j.w, j.w, j.id});
      j.alive = false;
      --alive_;
      round.jobs.push_back(j.id);
      speed_cost_ += j.w * std::pow(c.dens, m_.alpha - 1.0);
    }
    if (items.empty()) throw InternalError("yds: empty peel");
    std::sort(round.jobs.begin(), round.jobs.end());
    round.first_job = round.jobs.front();
    round.last_job = round.jobs.back();

    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
      return std::tie(x.rel, x.id) < std::tie(y.rel, y.id);
    });
    auto later = [](const Item* x, const Item* y) {
      return std::tie(x->dl, x->id) > std::tie(y->dl, y->id);
    };
    std::priority_queue<Item*, std::vector<Item*>, decltype(later)> pq(later);

    std::vector<std::pair<double, double>> pieces;
    size_t next = 0;
    size_t done = 0;
    double t = tl_.skip_right(items.front().rel);
    while (done < items.size()) {
      while (next < items.size() && items[next].rel <= t) pq.push(&items[next++]);
      if (pq.empty()) {
        t = tl_.skip_right(items[next].rel);
        continue;
      }
      Item* top = pq.top();
      const double limit = (next < items.size()) ? items[next].rel : kInf;
      const double need = top->rem / c.dens;
      const double avail = (limit == kInf) ? need : tl_.available(t, std::max(t, limit));
      const double use = std::min(need, avail);
      if (use > 0) {
        pieces.clear();
        t = tl_.advance(t, use, &pieces);
        for (const auto& [x, y] : pieces) runs_.push_back({top->id, x, y, c.dens});
        top->rem -= use * c.dens;
      }
      if (top->rem <= 1e-12 * std::max(1.0, top->worig)) {
        if (t > top->dl + 1e-7 * std::max(1.0, std::abs(top->dl)))
          throw InternalError("yds: deadline overrun in max-density interval");
        pq.pop();
        ++done;
      } else {
        t = tl_.skip_right(limit);
      }
    }

    tl_.add(c.lo, c.hi);
    for (EngineJob& j : jobs_) {
      if (!j.alive) continue;
      j.r = tl_.skip_right(j.r);
      j.d = tl_.skip_left(j.d);
      if (!(j.r < j.d)) throw InternalError("yds: surviving job lost its window");
    }
    return round;
  }

  double speed_cost() const { return speed_cost_; }
  std::vector<YdsRun> take_runs() {
    std::sort(runs_.begin(), runs_.end(), [](const YdsRun& x, const YdsRun& y) {
      return std::tie(x.start, x.job) < std::tie(y.start, y.job);
    });
    return std::move(runs_);
  }
  const EngineJob& job_state(size_t k) const { return jobs_[k]; }
  size_t job_count() const { return jobs_.size(); }

private:
  const EnergyModel& m_;
  std::vector<EngineJob> jobs_;
  BlackoutTimeline tl_;
  std::vector<YdsRun> runs_;
  double speed_cost_ = 0;
  int alive_ = 0;
  bool feasible_ = true;
};

} // namespace

std::optional<YdsSchedule> yds_schedule(const EnergyModel& m, std::span<const Job> jobs,
                                        double left, double right) {
  YdsEngine eng(m, jobs, left, right);
  if (!eng.feasible()) return std::nullopt;
  YdsSchedule out;
  while (eng.alive() > 0) {
    Candidate c = eng.best();
    if (!c.valid) throw InternalError("yds: no candidate while jobs remain");
    out.rounds.push_back(eng.peel(c));
  }
  out.runs = eng.take_runs();
  out.speed_cost = eng.speed_cost();
  return out;
}

Decomposition extract_dense_regions(const Instance& inst) {
  const EnergyModel& m = inst.model();
  YdsEngine eng(m, inst.jobs(), inst.sentinel_left(), inst.sentinel_right());
  if (!eng.feasible()) throw InfeasibleError("instance has an empty job window");

  std::vector<YdsRound> rounds;
  while (eng.alive() > 0) {
    Candidate c = eng.best();
    if (!c.valid || !is_dense(m, c.dens)) break;
    rounds.push_back(eng.peel(c));
  }

  Decomposition dec;
  dec.dense_runs = eng.take_runs();
  dec.dense_regions = eng.timeline().intervals();

  // Gap boundaries: sentinels around the merged dense regions.
  std::vector<double> lefts, rights;
  lefts.push_back(inst.sentinel_left());
  for (const auto& [a, b] : dec.dense_regions) {
    rights.push_back(a);
    lefts.push_back(b);
  }
  rights.push_back(inst.sentinel_right());

  const size_t ngaps = lefts.size();
  std::vector<std::vector<Job>> gap_jobs(ngaps);
  for (size_t k = 0; k < eng.job_count(); ++k) {
    const auto& ej = eng.job_state(k);
    if (!ej.alive) continue;
    // locate the gap whose span contains the job's surviving window
    size_t g = 0;
    while (g + 1 < ngaps && lefts[g + 1] <= ej.r) ++g;
    if (ej.r < lefts[g] || ej.d > rights[g] + 1e-9 * std::max(1.0, std::abs(rights[g])))
      throw InternalError("extract: surviving window crosses a dense region");
    Job j;
    j.id = ej.id;
    j.release = ej.r;
    j.deadline = std::min(ej.d, rights[g]);
    j.workload = ej.w;
    gap_jobs[g].push_back(j);
  }

  int prev_hi = 0;
  for (size_t g = 0; g < ngaps; ++g) {
    Subinstance sub;
    sub.left = lefts[g];
    sub.right = rights[g];
    auto& js = gap_jobs[g];
    std::sort(js.begin(), js.end(), [](const Job& x, const Job& y) { return x.id < y.id; });
    if (!js.empty()) {
      sub.lo = js.front().id;
      sub.hi = js.back().id;
      if (sub.hi - sub.lo + 1 != static_cast<int>(js.size()))
        throw InternalError("extract: sparse job ids not contiguous in a gap");
      if (sub.lo <= prev_hi) throw InternalError("extract: gap job ranges out of order");
      prev_hi = sub.hi;
      sub.jobs = std::move(js);
    } else {
      // empty range markers; ids resolved by neighbours during composition
      sub.lo = 1;
      sub.hi = 0;
    }
    dec.gaps.push_back(std::move(sub));
  }
  return dec;
}

} // namespace sspd
