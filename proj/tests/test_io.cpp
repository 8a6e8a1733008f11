#include <sstream>

#include "doctest.h"
#include "dgff/gaussian.hpp"
#include "dgff/io.hpp"
#include "json.hpp"

using namespace dgff;

TEST_CASE("fnv1a and hex") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("field CSV roundtrip") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{7, 5});
  const GaussianModel m(d, boundary_field(d, kLambdaTG, kLambdaTG));
  Rng rng(3);
  const Field f = m.sample(rng);
  std::stringstream ss;
  write_field_csv(ss, f, {hex64(fnv1a("cfg")), 3});
  const std::string text = ss.str();
  CHECK(text.rfind("# dgff-sle schema=field/1 config_hash=" + hex64(fnv1a("cfg")) + " seed=3\n", 0) == 0);
  const Field g = read_field_csv(ss, d);
  CHECK(g.values == f.values);

  std::istringstream bad("vertex_id,i,j,x,y,h\n0,0,0,0,0,1\n");
  CHECK_THROWS_AS(read_field_csv(bad, d), std::invalid_argument);
  const DomainPtr other = build_domain(triangular_lattice(), Rhombus{5, 7});
  std::istringstream wrong(text);
  CHECK_THROWS_AS(read_field_csv(wrong, other), std::invalid_argument);
}

TEST_CASE("driving and fixed-frame CSV") {
  const DrivingFunction W{{0.0, 0.5, 1.0}, {0.0, 0.25, -0.125}};
  std::ostringstream os;
  write_driving_csv(os, W, {"x", 1});
  CHECK(os.str() == "# dgff-sle schema=driving/1 config_hash=x seed=1\nt,W\n0,0\n0.5,0.25\n1,-0.125\n");
  std::ostringstream fs;
  write_fixed_frame_csv(fs, std::vector<double>{-1.0, 0.0}, std::vector<double>{0.5, -0.5}, {"x", 1});
  CHECK(fs.str() == "# dgff-sle schema=fixed_frame/1 config_hash=x seed=1\ns,Y\n-1,0.5\n0,-0.5\n");
}

TEST_CASE("summaries JSON has sorted keys and omits a missing p-value") {
  EnsembleSummary a;
  a.test_name = "one";
  a.n = 4;
  a.estimate = 1.5;
  a.pass = true;
  EnsembleSummary b = a;
  b.test_name = "two";
  b.p_value = 0.25;
  const std::vector<EnsembleSummary> v{a, b};
  const auto j = nlohmann::json::parse(summaries_json(v));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["test"] == "one");
  CHECK_FALSE(j[0].contains("p_value"));
  CHECK(j[1]["p_value"] == 0.25);
  std::vector<std::string> keys;
  for (auto it = j[1].begin(); it != j[1].end(); ++it) keys.push_back(it.key());
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  const std::string text = summaries_json(v);
  CHECK(text.find("\"ci95\"") < text.find("\"estimate\""));
}

TEST_CASE("SVG output") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{4, 4});
  const Field f(d, 0.5);
  std::ostringstream os;
  const std::vector<std::vector<Complex>> curves{{Complex(0.0, 0.0), Complex(1.0, 1.0)}};
  write_field_svg(os, f, curves);
  const std::string s = os.str();
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("polyline") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
}
