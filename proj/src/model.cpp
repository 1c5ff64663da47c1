#include "sspd/model.hpp"

#include <cmath>
#include <limits>

namespace sspd {

EnergyModel::EnergyModel(double alpha_, double wake_cost_, double dissipation_,
                         bool paper_alpha_range)
    : alpha(alpha_), wake_cost(wake_cost_), dissipation(dissipation_) {
  if (!(alpha > 1.0) || !std::isfinite(alpha))
    throw ModelError("alpha must be finite and > 1");
  if (paper_alpha_range && !(alpha >= 2.0 && alpha <= 3.0))
    throw ModelError("alpha outside [2,3] (strict range enforced)");
  if (!(wake_cost > 0.0) || !std::isfinite(wake_cost))
    throw ModelError("wake_cost must be finite and > 0");
  if (!(dissipation > 0.0) || !std::isfinite(dissipation))
    throw ModelError("dissipation must be finite and > 0");
  critical_speed = std::pow(dissipation / (alpha - 1.0), 1.0 / alpha);
  g_star = (dissipation + std::pow(critical_speed, alpha)) / critical_speed;
}

double EnergyModel::per_work_energy(double s) const {
  return (std::pow(s, alpha) + dissipation) / s;
}

Instance::Instance(EnergyModel model, std::vector<Job> jobs)
    : model_(model), jobs_(std::move(jobs)) {
  if (jobs_.empty()) throw ModelError("instance needs at least one job");
  for (size_t k = 0; k < jobs_.size(); ++k) {
    Job& j = jobs_[k];
    j.id = static_cast<int>(k) + 1;
    if (!(j.workload > 0.0) || !std::isfinite(j.workload))
      throw ModelError("job " + std::to_string(j.id) + ": workload must be > 0");
    if (!(j.release < j.deadline) || !std::isfinite(j.release) || !std::isfinite(j.deadline))
      throw InfeasibleError("job " + std::to_string(j.id) + ": empty release/deadline interval");
  }
  if (!is_agreeable(jobs_))
    throw AgreeableError("jobs are not in agreeable order");
}

double Instance::sentinel_left() const {
  return jobs_.front().release - model_.wake_cost / model_.dissipation;
}

double Instance::sentinel_right() const {
  return jobs_.back().deadline + model_.wake_cost / model_.dissipation;
}

double Instance::total_workload() const {
  double w = 0;
  for (const Job& j : jobs_) w += j.workload;
  return w;
}

bool is_agreeable(const std::vector<Job>& jobs) {
  for (size_t k = 1; k < jobs.size(); ++k) {
    if (jobs[k].release < jobs[k - 1].release) return false;
    if (jobs[k].deadline < jobs[k - 1].deadline) return false;
  }
  return true;
}

Subinstance make_subinstance(const Instance& inst, int i, int j) {
  const int n = inst.size();
  if (i < 1 || i > n || j < i - 1 || j > n)
    throw ModelError("subinstance indices out of range");
  Subinstance s;
  s.lo = i;
  s.hi = j;
  s.left = (i == 1) ? inst.sentinel_left() : inst.job(i - 1).deadline;
  s.right = (j == n) ? inst.sentinel_right() : inst.job(j + 1).release;
  if (j >= i) {
    s.jobs.reserve(static_cast<size_t>(j - i + 1));
    for (int k = i; k <= j; ++k) {
      Job jk = inst.job(k);
      jk.release = std::max(jk.release, s.left);
      jk.deadline = std::min(jk.deadline, s.right);
      s.jobs.push_back(jk);
    }
    const double d_prev = s.left;
    const double d_i = inst.job(i).deadline;
    const double r_j = inst.job(j).release;
    s.infeasible = (d_prev >= s.right) || (d_prev >= d_i) || (r_j >= s.right);
  }
  return s;
}

Instance reverse_instance(const Instance& inst) {
  std::vector<Job> rev;
  rev.reserve(inst.jobs().size());
  for (auto it = inst.jobs().rbegin(); it != inst.jobs().rend(); ++it) {
    Job j;
    j.release = -it->deadline;
    j.deadline = -it->release;
    j.workload = it->workload;
    rev.push_back(j);
  }
  return Instance(inst.model(), std::move(rev));
}

} // namespace sspd
