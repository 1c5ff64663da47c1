#include "sspd/cli.hpp"

#include "sspd/io.hpp"
#include "sspd/oracle.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace sspd {

namespace {

double wall_ms(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const AgreeableError& e) {
    std::cerr << "non-agreeable instance: " << e.what() << "\n";
    return 3;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible instance: " << e.what() << "\n";
    return 4;
  } catch (const ModelError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

Instance flow_instance(uint64_t seed, int n, double flow, double alpha, double L, double g) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EnergyModel model(alpha, L, g);
  std::vector<double> rel(static_cast<size_t>(n));
  for (double& x : rel) x = unit(rng) * flow * n;
  std::sort(rel.begin(), rel.end());
  std::vector<Job> jobs(static_cast<size_t>(n));
  for (size_t k = 0; k < jobs.size(); ++k) {
    jobs[k].release = rel[k];
    jobs[k].deadline = rel[k] + flow;
    jobs[k].workload = (0.1 + 1.2 * unit(rng)) * model.critical_speed * flow;
  }
  return Instance(model, std::move(jobs));
}

// mostly sparse workloads; the cubic kernel dominates on these
Instance bench_instance(uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EnergyModel model(2.0, 2.0, 1.0);
  std::vector<double> rel(static_cast<size_t>(n));
  for (double& x : rel) x = unit(rng) * 3.0 * n;
  std::sort(rel.begin(), rel.end());
  std::vector<Job> jobs(static_cast<size_t>(n));
  double dprev = 0;
  for (size_t k = 0; k < jobs.size(); ++k) {
    const double d = std::max(dprev, rel[k] + 1.0 + 5.0 * unit(rng));
    dprev = d;
    jobs[k].release = rel[k];
    jobs[k].deadline = d;
    jobs[k].workload = (0.05 + 0.4 * unit(rng)) * model.critical_speed * (d - rel[k]);
  }
  return Instance(model, std::move(jobs));
}

struct CheckState {
  int failures = 0;
  void report(bool ok, const std::string& what) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  }
};

// drops jobs one at a time while the mismatch persists
Instance shrink_mismatch(Instance inst) {
  const auto mismatch = [](const Instance& x) {
    try {
      const double a = solve(x).total;
      const double b = naive_dp(x);
      return std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b));
    } catch (const std::exception&) {
      return true;
    }
  };
  bool again = true;
  while (again && inst.size() > 1) {
    again = false;
    for (int k = 1; k <= inst.size(); ++k) {
      std::vector<Job> jobs;
      for (const Job& j : inst.jobs())
        if (j.id != k) jobs.push_back(j);
      try {
        Instance cand(inst.model(), std::move(jobs));
        if (mismatch(cand)) {
          inst = std::move(cand);
          again = true;
          break;
        }
      } catch (const std::exception&) {
      }
    }
  }
  return inst;
}

int cmd_oracle_check(int count, int maxn, uint64_t seed, int grid_count, int perturb_count,
                     const std::string& corrupt) {
  CheckState st;

  // exact equality against the exhaustive recursion
  int worst_seed = -1;
  double worst_diff = 0;
  int structural_bad = 0;
  for (int k = 0; k < count; ++k) {
    const uint64_t s = seed + static_cast<uint64_t>(k);
    const int n = 1 + static_cast<int>(s % static_cast<uint64_t>(maxn));
    Instance inst = random_agreeable_instance(s, n);
    SolveResult res = solve(inst);
    const double expect = naive_dp(inst);
    const double diff = std::abs(res.total - expect);
    if (diff > 1e-9 * std::max(1.0, std::abs(expect)) && diff > worst_diff) {
      worst_diff = diff;
      worst_seed = static_cast<int>(s);
    }
    structural_bad += static_cast<int>(!structural_report(inst, res).empty());
  }
  st.report(worst_seed < 0, "solver equals exhaustive recursion on " + std::to_string(count) +
                                " instances");
  if (worst_seed >= 0) {
    Instance small = shrink_mismatch(random_agreeable_instance(
        static_cast<uint64_t>(worst_seed),
        1 + static_cast<int>(static_cast<uint64_t>(worst_seed) % static_cast<uint64_t>(maxn))));
    write_file("failing_instance.txt", emit_instance_text(small));
    std::cout << "  minimized mismatch written to failing_instance.txt\n";
  }
  st.report(structural_bad == 0, "structural invariants on every solver output");

  // speed-optimal tables against the from-scratch peeling
  {
    bool ok = true;
    std::string where;
    bool corrupt_used = corrupt.empty();
    for (int k = 0; k < std::max(10, count / 10) && ok; ++k) {
      const uint64_t s = seed + 1000 + static_cast<uint64_t>(k);
      const int n = 2 + static_cast<int>(s % 15);
      Instance inst = random_agreeable_instance(s, n);
      Subinstance whole = make_subinstance(inst, 1, inst.size());
      YTable y = build_y_table(inst.model(), whole);
      if (!corrupt_used) {
        int ci = 0, cj = 0;
        double delta = 0;
        char comma;
        std::istringstream cs(corrupt);
        cs >> ci >> comma >> cj >> comma >> delta;
        y.set(ci, cj, y.get(ci, cj) + delta);
        corrupt_used = true;
      }
      for (int i = 1; i <= n + 1 && ok; ++i) {
        for (int j = i - 1; j <= n && ok; ++j) {
          const double a = y.get(i, j);
          const double b = yds_from_scratch_Y(inst.model(), whole, i, j);
          const bool both_inf = std::isinf(a) && std::isinf(b);
          if (!both_inf && std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) {
            ok = false;
            where = "Y[" + std::to_string(i) + "][" + std::to_string(j) + "] seed " +
                    std::to_string(s);
          }
        }
      }
    }
    st.report(ok, "speed-optimal tables match from-scratch peeling" +
                      (ok ? "" : " (mismatch at " + where + ")"));
  }

  // grid upper bound
  {
    bool ok = true;
    double max_gap = 0;
    for (int k = 0; k < grid_count && ok; ++k) {
      const uint64_t s = seed + 2000 + static_cast<uint64_t>(k);
      const int n = 1 + static_cast<int>(s % 5);
      Instance inst = random_agreeable_instance(s, n);
      const double opt = solve(inst).total;
      double delta = default_grid_delta(inst);
      double finest = std::numeric_limits<double>::infinity();
      for (int ref = 0; ref < 4; ++ref, delta /= 2) {
        auto gv = grid_oracle(inst, delta);
        if (!gv) continue;
        if (*gv < opt - 1e-9 * std::max(1.0, opt)) ok = false;
        finest = *gv;
      }
      if (std::isfinite(finest))
        max_gap = std::max(max_gap, (finest - opt) / std::max(1e-12, opt));
    }
    std::ostringstream os;
    os << "grid search stays above the solver (max gap "
       << format_double(100.0 * max_gap) << "%)";
    st.report(ok && max_gap <= 0.02, os.str());
  }

  // local optimality
  {
    bool ok = true;
    for (int k = 0; k < perturb_count && ok; ++k) {
      const uint64_t s = seed + 3000 + static_cast<uint64_t>(k);
      const int n = 2 + static_cast<int>(s % 29);
      Instance inst = random_agreeable_instance(s, n);
      SolveResult res = solve(inst);
      const auto rep = perturbation_sampler(inst, res.schedule, 1000, s);
      if (rep.worst_delta < -1e-9 * std::max(1.0, res.total)) ok = false;
    }
    st.report(ok, "no perturbation beats solver output");
  }

  return st.failures == 0 ? 0 : 1;
}

int cmd_bench(const std::vector<int>& sizes, int reps, uint64_t seed) {
  std::cout << "size,median_ms,min_ms,max_ms\n";
  std::vector<std::pair<int, double>> medians;
  for (int n : sizes) {
    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
      Instance inst = bench_instance(seed + static_cast<uint64_t>(r), n);
      double total = 0;
      times.push_back(wall_ms([&] { total = solve(inst).total; }));
      (void)total;
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    std::cout << n << ',' << format_double(median) << ',' << format_double(times.front())
              << ',' << format_double(times.back()) << "\n";
    medians.emplace_back(n, median);
  }
  for (size_t a = 0; a < medians.size(); ++a)
    for (size_t b = 0; b < medians.size(); ++b)
      if (medians[b].first == 2 * medians[a].first && medians[a].second > 0)
        std::cout << "# t(" << medians[b].first << ")/t(" << medians[a].first << ") = "
                  << format_double(medians[b].second / medians[a].second) << "\n";
  return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"minimum-energy single-processor scheduling with speed scaling and power-down"};
  app.require_subcommand(1);

  // solve
  auto* cs = app.add_subcommand("solve", "solve an instance file");
  std::string solve_path, solve_out, svg_path, dump_y, dump_o, dump_fh;
  bool strict_alpha = false;
  cs->add_option("file", solve_path)->required();
  cs->add_option("--out", solve_out, "write schedule here instead of stdout");
  cs->add_option("--svg", svg_path, "render the schedule as svg");
  cs->add_option("--dump-y", dump_y, "write the speed-optimal tables");
  cs->add_option("--dump-o", dump_o, "write the total-cost tables");
  cs->add_option("--dump-fh", dump_fh, "write the scan tables of each gap");
  cs->add_flag("--strict-alpha", strict_alpha, "require alpha in [2,3]");

  // gen
  auto* cg = app.add_subcommand("gen", "generate an instance");
  int gen_n = 10;
  double gen_flow = 0;
  uint64_t gen_seed = 1;
  double gen_alpha = 2, gen_L = 1, gen_g = 1;
  std::string gen_out;
  bool gen_json = false;
  cg->add_option("-n,--jobs", gen_n)->required();
  cg->add_option("--flow", gen_flow, "flow guarantee: every deadline is release + F");
  cg->add_option("--seed", gen_seed);
  cg->add_option("--alpha", gen_alpha);
  cg->add_option("--wake-cost", gen_L);
  cg->add_option("--dissipation", gen_g);
  cg->add_option("-o,--out", gen_out);
  cg->add_flag("--json", gen_json);

  // bench
  auto* cb = app.add_subcommand("bench", "timing table");
  std::vector<int> bench_sizes{100, 200, 300, 400};
  int bench_reps = 5;
  uint64_t bench_seed = 1;
  cb->add_option("--sizes", bench_sizes)->delimiter(',');
  cb->add_option("--reps", bench_reps);
  cb->add_option("--seed", bench_seed);

  // oracle-check
  auto* co = app.add_subcommand("oracle-check", "cross-check the solver against its oracles");
  int oc_count = 200, oc_maxn = 12, oc_grid = 50, oc_perturb = 50;
  uint64_t oc_seed = 1;
  std::string oc_corrupt;
  co->add_option("--count", oc_count);
  co->add_option("--max-n", oc_maxn);
  co->add_option("--seed", oc_seed);
  co->add_option("--grid-count", oc_grid);
  co->add_option("--perturb-count", oc_perturb);
  co->add_option("--corrupt-y", oc_corrupt, "fault injection: i,j,delta")->group("");

  // validate
  auto* cv = app.add_subcommand("validate", "check an instance (and optionally a schedule)");
  std::string val_path, val_sched;
  bool val_strict = false;
  cv->add_option("file", val_path)->required();
  cv->add_option("--schedule", val_sched);
  cv->add_flag("--strict-alpha", val_strict);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (cs->parsed()) {
    return run_guarded([&]() -> int {
      Instance inst = load_instance(solve_path, strict_alpha);
      SolveResult res = solve(inst);
      if (solve_out.empty()) {
        write_schedule(std::cout, inst, res);
      } else {
        std::ofstream out(solve_out);
        write_schedule(out, inst, res);
      }
      if (!svg_path.empty()) {
        std::ofstream out(svg_path);
        render_svg(out, inst, res.schedule);
      }
      if (!dump_y.empty()) {
        std::ofstream out(dump_y);
        write_y_tables(out, res);
      }
      if (!dump_o.empty()) {
        std::ofstream out(dump_o);
        write_o_tables(out, res);
      }
      if (!dump_fh.empty()) {
        std::ofstream out(dump_fh);
        write_fh_tables(out, inst.model(), res);
      }
      return 0;
    });
  }
  if (cg->parsed()) {
    return run_guarded([&]() -> int {
      Instance inst = (gen_flow > 0)
                          ? flow_instance(gen_seed, gen_n, gen_flow, gen_alpha, gen_L, gen_g)
                          : random_agreeable_instance(gen_seed, gen_n);
      const std::string body = gen_json ? emit_instance_json(inst) : emit_instance_text(inst);
      if (gen_out.empty())
        std::cout << body;
      else
        write_file(gen_out, body);
      return 0;
    });
  }
  if (cb->parsed()) {
    return run_guarded([&]() -> int { return cmd_bench(bench_sizes, bench_reps, bench_seed); });
  }
  if (co->parsed()) {
    return run_guarded([&]() -> int {
      return cmd_oracle_check(oc_count, oc_maxn, oc_seed, oc_grid, oc_perturb, oc_corrupt);
    });
  }
  if (cv->parsed()) {
    return run_guarded([&]() -> int {
      Instance inst = load_instance(val_path, val_strict);
      if (!val_sched.empty()) {
        std::ifstream in(val_sched);
        if (!in) throw ParseError("cannot open " + val_sched);
        Schedule s = parse_schedule(in, inst.sentinel_left(), inst.sentinel_right());
        const auto violations = validate_schedule(inst, s);
        for (const Violation& v : violations)
          std::cout << "violation(property " << v.property << "): " << v.detail << "\n";
        if (!violations.empty()) return 1;
      }
      std::cout << "ok\n";
      return 0;
    });
  }
  return 0;
}

} // namespace sspd
