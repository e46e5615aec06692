#include <doctest.h>

#include <cmath>
#include <sstream>

#include "z2lgt/scan.hpp"

using namespace z2lgt;

namespace {

ScanRow row(double value, double N) {
  ScanRow r;
  r.value = value;
  r.N = N;
  return r;
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kGeometry = R"("geometry": {"Lx": 4, "Ly": 3, "bc_x": "open", "bc_y": "open"})";

}  // namespace

TEST_CASE("breaking detection") {
  auto x = detect_breaking({row(0.0, 0.0), row(1.0, 0.5), row(2.0, 1.5), row(3.0, 2.0)});
  REQUIRE(x.size() == 1);
  CHECK(x[0].value == doctest::Approx(1.5));
  CHECK(x[0].rising);

  CHECK(detect_breaking({row(0.0, 0.0), row(1.0, 0.2)}).empty());
  CHECK(detect_breaking({}).empty());
  CHECK(detect_breaking({row(0.0, 2.0)}).empty());

  // Non-monotone: every crossing is reported.
  CHECK(detect_breaking({row(0, 0), row(1, 2), row(2, 0), row(3, 2)}).size() == 3);

  // A point exactly at the threshold counts once.
  x = detect_breaking({row(0, 0), row(1, 1), row(2, 2)});
  REQUIRE(x.size() == 1);
  CHECK(x[0].value == doctest::Approx(1.0));

  // Decreasing grid: N grows as the parameter falls.
  x = detect_breaking({row(0.6, 0.1), row(0.4, 0.3), row(0.2, 1.9)});
  REQUIRE(x.size() == 1);
  CHECK(x[0].value == doctest::Approx(0.4 - 0.2 * 0.7 / 1.6));
  CHECK_FALSE(x[0].rising);

  CHECK(detect_breaking({row(0, 0), row(1, 0.6)}, 0.5).size() == 1);
}

TEST_CASE("classical scan across the threshold") {
  ScanSpec s;
  s.geometry = {4, 3, Boundary::Open, Boundary::Open};
  s.charges = std::make_pair(Site{0, 0}, Site{3, 2});
  s.couplings = {2.5, 0.0, 0.0, 0.0, {}};
  s.param = SweptParameter::h_x;
  s.grid = {0.8, 0.9, 1.1, 1.2};
  const auto rows = run_scan(s);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.error.empty());
    CHECK(r.converged);
    CHECK(r.N == (r.value < 1.0 ? 0.0 : 2.0));
    // Vacuum is all +1 links: the energy cost is the string or the two charges.
    CHECK(r.dE == doctest::Approx(r.value < 1.0 ? 10.0 * r.value : 10.0));
  }
  CHECK(rows[0].degenerate);
  const auto x = detect_breaking(rows);
  REQUIRE(x.size() == 1);
  CHECK(x[0].value == doctest::Approx(1.0));

  std::ostringstream out;
  write_scan_csv(out, s.param, rows);
  CHECK(out.str().rfind("param,value,E0,dE,N,degenerate,residual\nh_x,0.8,", 0) == 0);
}

TEST_CASE("classical threshold follows 2 J_s / l") {
  for (double Js : {1.5, 2.5}) {
    for (Site corner : {Site{1, 1}, Site{2, 1}, Site{3, 2}}) {
      const int l = corner.x + corner.y;
      const double expected = 2 * Js / l;
      ScanSpec s;
      s.geometry = {4, 3, Boundary::Open, Boundary::Open};
      s.charges = std::make_pair(Site{0, 0}, corner);
      s.couplings = {Js, 0.0, 0.0, 0.0, {}};
      s.param = SweptParameter::h_x;
      for (int i = -5; i <= 5; ++i) s.grid.push_back(expected + 0.1 * i + 0.03);
      const auto x = detect_breaking(run_scan(s));
      REQUIRE(x.size() == 1);
      CHECK(std::abs(x[0].value - expected) <= 0.1);
    }
  }
}

TEST_CASE("scan validation") {
  ScanSpec s;
  s.geometry = {3, 3, Boundary::Periodic, Boundary::Periodic};
  s.couplings = {1.0, 1.0, 0.0, 0.0, {}};
  s.grid = {};
  CHECK_NOTHROW(validate_scan(s));
  CHECK(run_scan(s).empty());
  s.grid = {0.1, 0.3, 0.2};
  CHECK_THROWS_AS(validate_scan(s), ConfigError);
  s.grid = {0.3, 0.2, 0.1};
  CHECK_NOTHROW(validate_scan(s));
  s.charges = std::make_pair(Site{0, 0}, Site{0, 0});
  CHECK_THROWS_AS(validate_scan(s), ConfigError);
}

TEST_CASE("a failing grid point does not abort the scan") {
  ScanSpec s;
  s.geometry = {2, 2, Boundary::Periodic, Boundary::Periodic};
  s.couplings = {1.0, 1.0, 0.0, 0.5, {}};
  s.param = SweptParameter::h_z;
  s.grid = {0.1, 0.2};
  s.solver.max_iter = 1;
  s.solver.dense_limit = 0;
  const auto rows = run_scan(s);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) CHECK_FALSE(r.converged);
}

TEST_CASE("swept parameter names") {
  for (auto p : {SweptParameter::J_s, SweptParameter::J_p, SweptParameter::h_z, SweptParameter::h_x}) {
    CHECK(swept_from_string(to_string(p)) == p);
  }
  CHECK_THROWS_AS(swept_from_string("g"), ConfigError);
  Couplings c;
  coupling_ref(c, SweptParameter::h_z) = 0.25;
  CHECK(c.h_z == 0.25);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config_text(std::string("{") + kGeometry + R"(,
    "charges": [[0, 0], [3, 2]],
    "couplings": {"J_s": 2.5, "J_p": 0.2, "h_z": 1.0},
    "scan": {"param": "h_x", "grid": {"start": 0.5, "stop": 1.5, "step": 0.25}},
    "solver": {"tol": 1e-9, "seed": 7}})");
  CHECK(cfg.geometry.Lx == 4);
  REQUIRE(cfg.charges);
  CHECK(cfg.charges->second.x == 3);
  REQUIRE(cfg.scan_param);
  CHECK(*cfg.scan_param == SweptParameter::h_x);
  REQUIRE(cfg.grid.size() == 5);
  CHECK(cfg.grid.back() == doctest::Approx(1.5));
  CHECK(cfg.solver.tol == 1e-9);
  CHECK(cfg.solver.seed == 7);
  const auto spec = cfg.scan_spec();
  CHECK(spec.couplings.J_s == 2.5);
  CHECK(cfg.charge_config(cfg.geometry.build()).num_charges() == 2);

  const auto plain = parse_config_text(std::string("{") + kGeometry + ", \"charges\": null}");
  CHECK_FALSE(plain.charges);
  CHECK_FALSE(plain.couplings);
}

TEST_CASE("config errors name the offending key") {
  const std::string g = kGeometry;
  CHECK(config_error("{") .find("malformed JSON") != std::string::npos);
  CHECK(config_error("{}").find("geometry") != std::string::npos);
  CHECK(config_error("{" + g + ", \"colour\": 1}").find("colour") != std::string::npos);
  CHECK(config_error(R"({"geometry": {"Lx": 4, "Ly": 3, "bc_x": "open"}})").find("bc_y") != std::string::npos);
  CHECK(config_error(R"({"geometry": {"Lx": 1, "Ly": 3, "bc_x": "open", "bc_y": "open"}})").find("geometry") !=
        std::string::npos);
  CHECK(config_error("{" + g + R"(, "couplings": {"J_s": 1, "J_p": 1, "h_z": 0}})").find("h_x") !=
        std::string::npos);
  CHECK(config_error("{" + g + R"(, "couplings": {"J_s": "big", "J_p": 1, "h_z": 0, "h_x": 0}})")
            .find("couplings.J_s") != std::string::npos);
  CHECK(config_error("{" + g +
                     R"(, "couplings": {"J_s": 1, "J_p": 1, "h_z": 0, "h_x": 0},
                         "scan": {"param": "h_x", "grid": [0.1, 0.2]}})")
            .find("couplings.h_x") != std::string::npos);
  CHECK(config_error("{" + g + R"(, "scan": {"param": "mu", "grid": [0.1]}})").find("scan.param") !=
        std::string::npos);
  CHECK(config_error("{" + g + R"(, "scan": {"param": "h_x", "grid": {"start": 0, "stop": 1, "step": 0}}})")
            .find("scan.grid.step") != std::string::npos);
  CHECK(config_error("{" + g + R"(, "charges": [[0, 0]]})").find("charges") != std::string::npos);
  CHECK(config_error("{" + g + R"(, "solver": {"tol": -1}})").find("solver.tol") != std::string::npos);
  CHECK(config_error("{" + g + R"(, "potential": {"row": 0}})").find("separations") != std::string::npos);
}
