#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cqed/config.hpp"
#include "cqed/error.hpp"

using namespace cqed;
using nlohmann::json;

TEST_CASE("grid values") {
  CHECK(Grid{-2, 2, 5}.values() == std::vector<double>{-2, -1, 0, 1, 2});
  CHECK(Grid{0.5, 3, 1}.values() == std::vector<double>{0.5});
  const auto v = Grid{-2, 2, 81}.values();
  CHECK(v.size() == 81);
  CHECK(v.front() == -2.0);
  CHECK(v.back() == 2.0);
  CHECK(v[40] == 0.0);
}

TEST_CASE("json round trip") {
  RunConfig c;
  c.system = SystemKind::full;
  c.g0_mhz = 33.9;
  c.delta_omega_c1_mhz = 4.4;
  c.u0_mhz = -43;
  c.drive = DriveConfig::atom(0.25);
  c.filter_coeffs = {1.0, {0.3, -0.4}, 0.0};
  c.filter_alpha = {0.1, 0.2};
  c.solver = SteadyStateMethod::krylov;
  c.output_format = "json";
  CHECK(config_from_json(to_json(c)) == c);

  c.drive = DriveConfig{DriveTarget::cavity_z, RawAmplitude{0.7}};
  CHECK(config_from_json(to_json(c)) == c);
  CHECK(config_from_json(json::object()) == RunConfig{});
}

TEST_CASE("raw drive amplitudes are converted from MHz") {
  RunConfig c;
  c.drive = DriveConfig{DriveTarget::cavity_z, RawAmplitude{1.0}};
  CHECK(std::get<RawAmplitude>(c.drive_config().strength).value == doctest::Approx(kTwoPi));
  c.drive = DriveConfig::cavity(DriveTarget::cavity_z, 0.2);
  CHECK(c.drive_config() == c.drive);
}

TEST_CASE("overrides") {
  json doc = {{"params", {{"g0", 10}}}};
  apply_override(doc, "params.g0=33.9");
  apply_override(doc, "params.kappa=4.1");
  apply_override(doc, "system=full");
  apply_override(doc, "fock.n_z=3");
  apply_override(doc, "filter.coeffs=[1, [0.1, 0.2], 0]");
  const RunConfig c = config_from_json(doc);
  CHECK(c.g0_mhz == 33.9);
  CHECK(c.kappa_mhz == 4.1);
  CHECK(c.system == SystemKind::full);
  CHECK(c.n_z == 3);
  CHECK(c.filter_coeffs[1] == std::complex<double>(0.1, 0.2));

  apply_override(doc, "fock=null");
  CHECK(config_from_json(doc).n_z == 2);

  CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "=3"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "params..g0=3"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "system.sub=3"), ConfigError);
}

TEST_CASE("rejected documents") {
  CHECK_THROWS_AS(config_from_json({{"sytem", "ideal"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"params", {{"g", 1}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"params", {{"g0", "big"}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"system", "other"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"drive", {{"target", "atom_z"}, {"n0", 0.1}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"drive", {{"target", "cavity_z"}, {"s", 0.1}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"drive", {{"n0", 0.1}, {"raw", 1}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"solver", {{"method", "magic"}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json({{"filter", {{"alpha", "x"}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);

  const auto invalid = [](const std::string& o) { return load_config("", {o}); };
  CHECK_THROWS_AS(invalid("params.kappa=0"), ConfigError);
  CHECK_THROWS_AS(invalid("fock.n_z=1"), ConfigError);
  CHECK_THROWS_AS(invalid("sweep.points=0"), ConfigError);
  CHECK_THROWS_AS(invalid("tau_grid.start=-1"), ConfigError);
  CHECK_THROWS_AS(invalid("output.format=xml"), ConfigError);
  CHECK_THROWS_AS(invalid("drive.n0=-1"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json", {}), ConfigError);
}

TEST_CASE("load from file with overrides") {
  const auto path = std::filesystem::temp_directory_path() / "cqed_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"system": "jc", "params": {"g0": 50, "kappa": 1, "gamma": 1},
              "drive": {"target": "atom_z", "s": 0.1}, "fock": {"n_z": 4}})";
  }
  const RunConfig c = load_config(path.string(), {"fock.n_z=5"});
  CHECK(c.system == SystemKind::jc);
  CHECK(c.n_z == 5);
  CHECK(c.drive == DriveConfig::atom(0.1));
  std::filesystem::remove(path);

  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_config(path.string(), {}), ConfigError);
  std::filesystem::remove(path);
}
