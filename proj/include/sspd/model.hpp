#ifndef SSPD_MODEL_HPP
#define SSPD_MODEL_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace sspd {

struct ModelError : std::runtime_error {
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct AgreeableError : std::runtime_error {
  explicit AgreeableError(const std::string& what) : std::runtime_error(what) {}
};

struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// Cost model: running at speed s draws s^alpha + dissipation while on,
// and waking up from the off state costs wake_cost.
struct EnergyModel {
  double alpha;       // speed exponent, > 1
  double wake_cost;   // energy per wake-up (L)
  double dissipation; // power while on (g)

  // derived
  double critical_speed; // s* = (g/(alpha-1))^(1/alpha)
  double g_star;         // (g + s*^alpha)/s* = min_s (s^alpha + g)/s

  EnergyModel(double alpha_, double wake_cost_, double dissipation_,
              bool paper_alpha_range = false);

  // energy per unit workload when running at speed s on an on machine
  double per_work_energy(double s) const;
};

struct Job {
  int id = 0;        // 1-based
  double release = 0;
  double deadline = 0;
  double workload = 0;

  double span() const { return deadline - release; }
};

// Agreeable instance: jobs sorted so releases and deadlines are both
// non-decreasing. Ties allowed; index order breaks them.
class Instance {
public:
  Instance(EnergyModel model, std::vector<Job> jobs);

  const EnergyModel& model() const { return model_; }
  const std::vector<Job>& jobs() const { return jobs_; }
  const Job& job(int id) const { return jobs_[static_cast<size_t>(id - 1)]; }
  int size() const { return static_cast<int>(jobs_.size()); }

  // boundary coordinates d_0 and r_{n+1}
  double sentinel_left() const;
  double sentinel_right() const;

  double total_workload() const;

private:
  EnergyModel model_;
  std::vector<Job> jobs_;
};

// checks ordering only; construction of Instance enforces the rest
bool is_agreeable(const std::vector<Job>& jobs);

// Job range {lo..hi} restricted to an interval [left, right).
// lo == hi+1 encodes the empty set.
struct Subinstance {
  int lo = 1;
  int hi = 0;
  double left = 0;
  double right = 0;
  std::vector<Job> jobs; // restricted windows, original ids, empty iff lo > hi
  bool infeasible = false;

  int size() const { return static_cast<int>(jobs.size()); }
  bool empty() const { return jobs.empty(); }
};

// Restriction of jobs i..j to [d_{i-1}, r_{j+1}) with sentinel boundaries.
// j == i-1 builds the empty subinstance over [d_{i-1}, r_i).
Subinstance make_subinstance(const Instance& inst, int i, int j);

// Time-mirrored copy: job k becomes n+1-k with release/deadline negated and
// swapped. Used by symmetry checks.
Instance reverse_instance(const Instance& inst);

} // namespace sspd

#endif
