#include <doctest.h>

#include "helpers.hpp"
#include "sspd/cli.hpp"
#include "sspd/io.hpp"
#include "sspd/oracle.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace sspd;
using test::make_instance;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& body = "") {
    path = std::string("/tmp/sspd_test_") + name;
    if (!body.empty()) {
      std::ofstream out(path);
      out << body;
    }
  }
  ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("[io] text round trip is exact") {
  Instance inst = make_instance(2.5, 0.3, 1.7,
                                {{0.1, 2.30000000000000004, 1.0 / 3.0}, {1.5, 7, 2}});
  const std::string text = emit_instance_text(inst);
  Instance back = parse_instance(text);
  REQUIRE(back.size() == inst.size());
  for (int k = 1; k <= inst.size(); ++k) {
    CHECK(back.job(k).release == inst.job(k).release);
    CHECK(back.job(k).deadline == inst.job(k).deadline);
    CHECK(back.job(k).workload == inst.job(k).workload);
  }
  CHECK(back.model().alpha == inst.model().alpha);
  CHECK(emit_instance_text(back) == text);
}

TEST_CASE("[io] json round trip") {
  Instance inst = make_instance(3, 2, 0.5, {{0, 1, 0.25}, {0.5, 3, 1}});
  Instance back = parse_instance(emit_instance_json(inst));
  REQUIRE(back.size() == 2);
  CHECK(back.model().wake_cost == inst.model().wake_cost);
  CHECK(back.job(2).deadline == inst.job(2).deadline);
}

TEST_CASE("[io] parse failures") {
  CHECK_THROWS_AS(parse_instance("2 1\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("2 1 1\n0 x 1\n"), ParseError);
  CHECK_THROWS_AS(parse_instance(""), ParseError);
  CHECK_THROWS_AS(parse_instance("2 1 1\n0 1 0\n"), ParseError); // zero workload
  CHECK_THROWS_AS(parse_instance("{\"alpha\": 2}"), ParseError);
}

TEST_CASE("[io] schedule writer round trips through the parser") {
  Instance inst = make_instance(2, 10, 1, {{0, 2, 1}});
  SolveResult res = solve(inst);
  std::ostringstream os;
  write_schedule(os, inst, res);
  std::istringstream is(os.str());
  Schedule back = parse_schedule(is, inst.sentinel_left(), inst.sentinel_right());
  CHECK(validate_schedule(inst, back).empty());
  REQUIRE(back.segments.size() == res.schedule.segments.size());
  for (size_t k = 0; k < back.segments.size(); ++k) {
    CHECK(back.segments[k].start == res.schedule.segments[k].start);
    CHECK(back.segments[k].speed == res.schedule.segments[k].speed);
    CHECK(back.segments[k].job == res.schedule.segments[k].job);
  }
  CHECK(os.str().find("# total 22") != std::string::npos);
}

TEST_CASE("[io] svg rendering is deterministic and well formed") {
  Instance inst = make_instance(2, 5, 1, {{0, 1, 0.9}, {1.2, 2.2, 0.9}, {8, 9, 2}});
  SolveResult res = solve(inst);
  std::ostringstream a, b;
  render_svg(a, inst, res.schedule);
  render_svg(b, inst, res.schedule);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("<svg", 0) == 0);
  CHECK(a.str().find("</svg>") != std::string::npos);
  CHECK(a.str().find("#74c476") != std::string::npos); // a run at critical speed
  CHECK(a.str().find("#fb6a4a") != std::string::npos); // a run above critical speed
}

TEST_CASE("[cli] solve writes a schedule and exit codes follow the contract") {
  TempFile good("good.txt", "2 10 1\n0 2 1\n");
  TempFile out("sched.txt");
  CHECK(run_cli({"solve", good.path, "--out", out.path}) == 0);
  CHECK(slurp(out.path).find("# total 22") != std::string::npos);

  TempFile bad_parse("bad.txt", "2 10\n");
  CHECK(run_cli({"solve", bad_parse.path}) == 2);

  TempFile not_agreeable("na.txt", "2 10 1\n0 5 1\n1 4 1\n");
  CHECK(run_cli({"solve", not_agreeable.path}) == 3);

  TempFile infeasible("inf.txt", "2 10 1\n2 2 1\n");
  CHECK(run_cli({"solve", infeasible.path}) == 4);

  TempFile strict("strict.txt", "1.5 10 1\n0 2 1\n");
  CHECK(run_cli({"solve", strict.path}) == 0);
  CHECK(run_cli({"solve", strict.path, "--strict-alpha"}) == 2);
}

TEST_CASE("[cli] solve emits dumps when asked") {
  TempFile inst("dumps.txt", "2 10 1\n0 2 1\n0.5 3 1\n");
  TempFile y("y.txt"), o("o.txt"), fh("fh.txt"), svg("out.svg");
  CHECK(run_cli({"solve", inst.path, "--out", "/dev/null", "--dump-y", y.path, "--dump-o",
                 o.path, "--dump-fh", fh.path, "--svg", svg.path}) == 0);
  CHECK(slurp(y.path).find("Y[1][1]") != std::string::npos);
  CHECK(slurp(o.path).find("O[1][2]") != std::string::npos);
  CHECK(slurp(fh.path).find("f[1]") != std::string::npos);
  CHECK(slurp(svg.path).find("<svg") != std::string::npos);
}

TEST_CASE("[cli] generated instances are reproducible and agreeable") {
  TempFile a("gen_a.txt"), b("gen_b.txt");
  CHECK(run_cli({"gen", "-n", "12", "--flow", "3", "--seed", "42", "-o", a.path}) == 0);
  CHECK(run_cli({"gen", "-n", "12", "--flow", "3", "--seed", "42", "-o", b.path}) == 0);
  CHECK(slurp(a.path) == slurp(b.path));

  Instance inst = load_instance(a.path);
  CHECK(inst.size() == 12);
  for (const Job& j : inst.jobs())
    CHECK(j.deadline - j.release == doctest::Approx(3.0));

  TempFile c("gen_c.txt");
  CHECK(run_cli({"gen", "-n", "9", "--seed", "5", "-o", c.path}) == 0);
  CHECK(is_agreeable(load_instance(c.path).jobs()));
}

TEST_CASE("[cli] validate checks instances and schedules") {
  TempFile inst("val.txt", "2 10 1\n0 2 1\n");
  CHECK(run_cli({"validate", inst.path}) == 0);

  TempFile sched("val_sched.txt", "-10 1 off 0 -\n1 2 on 1 1\n2 12 off 0 -\n");
  CHECK(run_cli({"validate", inst.path, "--schedule", sched.path}) == 0);

  TempFile broken("val_broken.txt", "-10 1 off 0 -\n1 2 on 0.25 1\n2 12 off 0 -\n");
  CHECK(run_cli({"validate", inst.path, "--schedule", broken.path}) == 1);
}

TEST_CASE("[cli] oracle check passes clean and flags injected corruption") {
  CHECK(run_cli({"oracle-check", "--count", "12", "--max-n", "6", "--grid-count", "4",
                 "--perturb-count", "3"}) == 0);
  CHECK(run_cli({"oracle-check", "--count", "4", "--max-n", "5", "--grid-count", "2",
                 "--perturb-count", "2", "--corrupt-y", "1,2,0.75"}) == 1);
}
