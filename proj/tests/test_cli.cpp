#include "qgeom/cli.hpp"
#include "qgeom/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qgeom;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "qgeom_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string commuting_file() {
  return write_file("commuting.json", R"({"kind": "eigenvalue_path", "lambda0": [0, 1], "slope": [1, -1]})");
}

std::string rotation_file() {
  return write_file("rotation.json", R"({
    "kind": "unitary_orbit",
    "rho0": {"re": [[1, 0], [0, 0]]},
    "hamiltonian": {"re": [[0, 0], [0, 0]], "im": [[0, -0.5], [0.5, 0]]}
  })");
}

std::size_t column(const Json& j, const std::string& name) {
  const auto& cols = j["columns"];
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("grid parsing") {
    CHECK(parse_grid("0:1:11").size() == 11);
    CHECK(parse_grid("0:1:11")[5] == doctest::Approx(0.5));
    CHECK(parse_grid("0.25:0.25:1") == std::vector<double>{0.25});
    CHECK_THROWS(parse_grid("0:1"));
    CHECK_THROWS(parse_grid("0:1:0"));
  }

  TEST_CASE("help and usage errors") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"metric", "--help"}).code == 0);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--format", "xml", "verify"}).code == 2);
    CHECK(run({"metric"}).code == 2);
    CHECK(run({"--tolerance-profile", "loose", "verify"}).code == 2);
  }

  TEST_CASE("rotation family metric over eleven points") {
    const auto r = run({"metric", "--family", rotation_file(), "--grid", "0:3:11"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    REQUIRE(j["rows"].size() == 11);
    const auto g = column(j, "gamma_0_0"), cr = column(j, "cr_bound_0");
    for (const auto& row : j["rows"]) {
      CHECK(row[g].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(row[cr].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    }
  }

  TEST_CASE("ds2 column") {
    const auto r = run({"metric", "--family", commuting_file(), "--grid", "0.5:0.5:1", "--dtheta", "0.1"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["rows"][0][column(j, "ds2")].get<double>() == doctest::Approx(0.01));
  }

  TEST_CASE("alpha scan at alpha 1 reproduces the metric") {
    const auto m = Json::parse(run({"metric", "--family", commuting_file(), "--grid", "0.1:0.9:9"}).out);
    const auto a = Json::parse(run({"alpha-scan", "--family", commuting_file(), "--grid", "0.1:0.9:9", "--alpha", "1"}).out);
    REQUIRE(a["rows"].size() == 9);
    for (std::size_t i = 0; i < 9; ++i) {
      const double gamma = m["rows"][i][column(m, "gamma_0_0")];
      CHECK(a["rows"][i][column(a, "G_0_0")].get<double>() == doctest::Approx(gamma).epsilon(1e-10));
      CHECK(a["rows"][i][column(a, "Gtilde_0_0")].get<double>() == doctest::Approx(gamma).epsilon(1e-10));
      CHECK(a["rows"][i][column(a, "max_dev_from_fs")].get<double>() <= 1e-10);
    }
  }

  TEST_CASE("alpha scan phase on the commuting example") {
    const auto r = run({"alpha-scan", "--family", commuting_file(), "--grid", "0.25:0.25:1", "--alpha", "2"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["rows"][0][column(j, "phase_im_0")].get<double>() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(run({"alpha-scan", "--family", commuting_file(), "--alpha", "0.5"}).code == 2);
  }

  TEST_CASE("csv and json carry the same table") {
    const std::string fam = commuting_file();
    const Json j = Json::parse(run({"metric", "--family", fam, "--grid", "0.2:0.8:4"}).out);
    const auto csv = run({"--format", "csv", "metric", "--family", fam, "--grid", "0.2:0.8:4"});
    REQUIRE(csv.code == 0);
    std::istringstream lines(csv.out);
    std::string line;
    std::getline(lines, line);
    std::string header;
    for (std::size_t i = 0; i < j["columns"].size(); ++i) header += (i ? "," : "") + j["columns"][i].get<std::string>();
    CHECK(line == header);
    std::size_t row = 0;
    while (std::getline(lines, line)) {
      std::istringstream cells(line);
      std::string cell;
      std::size_t col = 0;
      while (std::getline(cells, cell, ',')) CHECK(std::stod(cell) == j["rows"][row][col++].get<double>());
      ++row;
    }
    CHECK(row == 4);
  }

  TEST_CASE("output file written only on success") {
    const fs::path out = scratch() / "metric_out.json";
    fs::remove(out);
    CHECK(run({"--out", out.string(), "metric", "--family", commuting_file(), "--grid", "0.5:0.5:1"}).code == 0);
    CHECK(fs::exists(out));
    fs::remove(out);
    const std::string bad = write_file("bad.json", R"({"kind": "eigenvalue_path", "lambda0": [0.5, 0.6], "slope": [1, -1]})");
    CHECK(run({"--out", out.string(), "metric", "--family", bad}).code == 3);
    CHECK_FALSE(fs::exists(out));
  }

  TEST_CASE("malformed input is a parse error") {
    CHECK(run({"metric", "--family", (scratch() / "missing.json").string()}).code == 2);
    CHECK(run({"metric", "--family", write_file("garbage.json", "{not json")}).code == 2);
    CHECK(run({"metric", "--family", write_file("table.json", R"({"kind": "matrix_table"})")}).code == 2);
    CHECK(run({"metric", "--family", commuting_file(), "--grid", "a:b:c"}).code == 2);
  }

  TEST_CASE("numeric failures") {
    const std::string nonherm = write_file("nonherm.json", R"({
      "kind": "unitary_orbit",
      "rho0": {"re": [[0.5, 0], [0, 0.5]]},
      "hamiltonian": {"re": [[0, 1], [0, 0]]}
    })");
    const auto r = run({"metric", "--family", nonherm});
    CHECK(r.code == 3);
    CHECK_FALSE(r.err.empty());
    CHECK(r.out.empty());
  }

  TEST_CASE("verify exit codes") {
    CHECK(run({"verify", "--suite", "bogus"}).code == 4);
    const auto ok = run({"--seed", "2", "verify", "--suite", "gauge", "--samples", "5"});
    CHECK(ok.code == 0);
    const Json j = Json::parse(ok.out);
    CHECK(j["passed"] == true);
    CHECK(j["tolerance_profile"] == "default");
    CHECK(j["suites"].size() == 1);
    CHECK(run({"--format", "csv", "verify", "--suite", "domination", "--samples", "5"}).code == 0);
  }

  TEST_CASE("verify is byte-identical across runs") {
    const std::vector<std::string> args{"--seed", "7", "verify", "--suite", "all", "--samples", "5"};
    CHECK(run(args).out == run(args).out);
  }

  TEST_CASE("experiment") {
    const auto r = run({"--seed", "1", "experiment", "--family", rotation_file(), "--theta", "0.3", "--shots", "20000"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["exact_variance"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j["fs_metric"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j["construction"] == "commutator");
    CHECK(j["shots"] == 20000);
    CHECK(run({"experiment", "--family", rotation_file(), "--shots", "0"}).code == 2);
  }

  TEST_CASE("sample") {
    const auto a = run({"--seed", "5", "sample", "--what", "state", "--dim", "3", "--rank", "2"});
    REQUIRE(a.code == 0);
    const auto rho = density_from_json(Json::parse(a.out));
    CHECK(rho.dim() == 3);
    CHECK(std::abs(rho.min_eigenvalue()) < 1e-12);
    CHECK(run({"--seed", "5", "sample", "--what", "state", "--dim", "3", "--rank", "2"}).out == a.out);
    const auto ch = run({"sample", "--what", "channel", "--dim", "2", "--kraus", "3"});
    CHECK(channel_from_json(Json::parse(ch.out)).kraus_count() == 3);
    const auto fam = run({"sample", "--what", "family", "--dim", "2"});
    CHECK(build_family(family_spec_from_json(Json::parse(fam.out))).dim() == 2);
    CHECK(run({"--format", "csv", "sample", "--what", "family"}).code == 2);
    CHECK(run({"sample", "--what", "state", "--dim", "2", "--rank", "3"}).code != 0);
  }
}
