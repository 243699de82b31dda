#include <doctest.h>

#include <sstream>
#include <string>

#include "skoromap/io.hpp"

using namespace skoromap;

TEST_CASE("CSV parse and write round-trip") {
  const StepPath p({0.0, 0.25, 1.0}, {1.5, -2.0, 0.3});
  const std::string csv = step_path_to_csv(p);
  std::istringstream in(csv);
  const StepPath q = parse_step_path_csv(in, "mem");
  CHECK(q.times() == p.times());
  CHECK(q.values() == p.values());
}

TEST_CASE("CSV errors name the offending row") {
  SUBCASE("bad header") {
    std::istringstream in("time,val\n0,1\n");
    CHECK_THROWS_WITH_AS(parse_step_path_csv(in, "f.csv"),
                         doctest::Contains("f.csv:1"), io_error);
  }
  SUBCASE("non-numeric field") {
    std::istringstream in("t,value\n0,1\n0.5,oops\n");
    CHECK_THROWS_WITH_AS(parse_step_path_csv(in, "f.csv"),
                         doctest::Contains("f.csv:3"), io_error);
  }
  SUBCASE("missing comma") {
    std::istringstream in("t,value\n0 1\n");
    CHECK_THROWS_WITH_AS(parse_step_path_csv(in, "f.csv"),
                         doctest::Contains("f.csv:2"), io_error);
  }
  SUBCASE("grid violation is reported with the file name") {
    std::istringstream in("t,value\n0,1\n0,2\n");
    CHECK_THROWS_AS(parse_step_path_csv(in, "f.csv"), io_error);
  }
}

TEST_CASE("JSON path parse") {
  const StepPath p = parse_step_path_json(
      R"({"times":[0,0.5,2],"values":[1,2,-3]})", "mem");
  CHECK(p.times() == std::vector<double>{0.0, 0.5, 2.0});
  CHECK(p.values() == std::vector<double>{1.0, 2.0, -3.0});
  CHECK_THROWS_AS(parse_step_path_json(R"({"times":[0]})", "mem"), io_error);
  CHECK_THROWS_AS(parse_step_path_json("{not json", "mem"), io_error);
}

TEST_CASE("solution JSON carries the fixed field names") {
  const StepPath psi({0.0, 1.0}, {0.0, 2.0});
  const auto sol = reflect(psi, Band(0.0, 1.0));
  const auto doc = solution_to_json(psi, sol);
  CHECK(doc.contains("times"));
  CHECK(doc.contains("psi"));
  CHECK(doc.contains("phibar"));
  CHECK(doc.contains("eta_l"));
  CHECK(doc.contains("eta_u"));
  const auto parsed = parse_candidate_json(doc.dump(), "mem");
  CHECK(parsed.psi.values() == psi.values());
  CHECK(parsed.solution.phibar.values() == sol.phibar.values());
}

TEST_CASE("histogram CSV has one row per bin plus a header") {
  SimConfig cfg;
  cfg.steps = 100;
  cfg.dt = 0.01;
  cfg.sigma = 1.0;
  cfg.initial = 0.5;
  cfg.histogram_bins = 10;
  const std::string csv = histogram_to_csv(simulate(cfg));
  std::size_t lines = 0;
  for (char ch : csv) {
    if (ch == '\n') ++lines;
  }
  CHECK(lines == 11);
  CHECK(csv.rfind("bin_left,bin_right,count\n", 0) == 0);
}

TEST_CASE("round-trip through text keeps doubles bit-exact") {
  const StepPath p({0.0, 1.0 / 3.0, 0.7000000000000001},
                   {1e-17, -0.1, 12345.678901234567});
  std::istringstream in(step_path_to_csv(p));
  const StepPath q = parse_step_path_csv(in, "mem");
  CHECK(q.times() == p.times());
  CHECK(q.values() == p.values());
  const StepPath r = parse_step_path_json(step_path_to_json(p).dump(), "mem");
  CHECK(r.times() == p.times());
  CHECK(r.values() == p.values());
}
