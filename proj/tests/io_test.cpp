#include <algorithm>
#include <cstdio>
#include <sstream>

#include "combforge/io.hpp"
#include "combforge/model.hpp"
#include "doctest.h"

using namespace cf;

namespace {

Solution make_solution() {
  const Grid g(30.0, 32);
  Solution s;
  s.field = soliton_profile(0.4, 1.0, 0.0, g);
  s.params = Params{1.0, 2.0, 0.05, 1.5};
  s.residual_norm = 3.25e-12;
  s.is_even = true;
  s.pulse_centers = {0.0};
  s.period = g.period;
  return s;
}

}  // namespace

TEST_CASE("format17 round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 3.141592653589793}) {
    CHECK(std::stod(format17(v)) == v);
  }
}

TEST_CASE("solution json round trip") {
  const Solution s = make_solution();
  const Json j = solution_to_json(s);
  const Solution back = solution_from_json(Json::parse(j.dump()));
  CHECK(back.params.zeta == s.params.zeta);
  CHECK(back.params.epsilon == s.params.epsilon);
  REQUIRE(back.params.d.has_value());
  CHECK(*back.params.d == *s.params.d);
  CHECK(back.field.grid.period == s.field.grid.period);
  CHECK(back.field.grid.n == s.field.grid.n);
  CHECK((back.field.u1 - s.field.u1).abs().maxCoeff() == 0.0);
  CHECK((back.field.u2 - s.field.u2).abs().maxCoeff() == 0.0);
  CHECK(back.residual_norm == s.residual_norm);
  CHECK(back.is_even == s.is_even);
}

TEST_CASE("json key order is stable") {
  const Json j = solution_to_json(make_solution());
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> expected{"params",        "grid",     "u1", "u2",
                                          "pulse_centers", "residual_norm", "is_even"};
  CHECK(keys == expected);
}

TEST_CASE("solution csv has a header and n data rows") {
  const Solution s = make_solution();
  const std::string csv = solution_csv(s);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,u1,u2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == s.field.grid.n);
}

TEST_CASE("trace csv columns") {
  EvolutionTrace tr;
  tr.times = {0.0, 0.5};
  tr.raw_l2 = {1.0, 0.5};
  tr.perturbation_l2 = {0.9, 0.4};
  tr.gamma = {0.0, 0.01};
  const std::string csv = trace_csv(tr);
  CHECK(csv.rfind("t,raw_l2,mod_l2,gamma\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("write and read text round trip") {
  const std::string path = "io_test_tmp.txt";
  write_text(path, "hello\n1,2,3\n");
  CHECK(read_text(path) == "hello\n1,2,3\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text("definitely_missing_file_xyz"), Error);
}
