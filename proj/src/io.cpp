#include "qgeom/io.hpp"

#include "qgeom/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace qgeom {

namespace {

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw FormatError(where + ": expected a JSON object");
}

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw FormatError(where + ": unknown key '" + key + "'");
}

const Json& require_key(const Json& j, const std::string& key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(where + ": missing key '" + key + "'");
  return *it;
}

RealMatrix real_table(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw FormatError(where + ": expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  RealMatrix out;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.empty()) throw FormatError(where + ": every row must be a nonempty array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      out.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError(where + ": ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) out(i, c) = number_from_json(row[static_cast<std::size_t>(c)], where);
  }
  return out;
}

RealVector real_vector(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw FormatError(where + ": expected a nonempty array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from_json(j[i], where);
  return v;
}

}  // namespace

Json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw FormatError(where + ": expected a number");
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(number_to_json(m(i, c).real()));
      ir.push_back(number_to_json(m(i, c).imag()));
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  Json out = Json::object();
  if (m.rows() == m.cols()) out["dim"] = m.rows();
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown_keys(j, {"dim", "re", "im"}, where);
  const RealMatrix re = real_table(require_key(j, "re", where), where + ".re");
  RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
  if (j.contains("im")) {
    im = real_table(j["im"], where + ".im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) throw FormatError(where + ": re and im differ in shape");
  }
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer()) throw FormatError(where + ".dim: expected an integer");
    const auto d = j["dim"].get<long long>();
    if (d != re.rows() || d != re.cols()) throw FormatError(where + ": dim does not match the entries");
  }
  ComplexMatrix m(re.rows(), re.cols());
  for (Eigen::Index r = 0; r < re.rows(); ++r)
    for (Eigen::Index c = 0; c < re.cols(); ++c) m(r, c) = Complex(re(r, c), im(r, c));
  return m;
}

DensityMatrix density_from_json(const Json& j) { return DensityMatrix(matrix_from_json(j, "density")); }

Json channel_to_json(const KrausChannel& ch) {
  Json kraus = Json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  Json out = Json::object();
  out["in_dim"] = ch.in_dim();
  out["out_dim"] = ch.out_dim();
  out["kraus"] = std::move(kraus);
  return out;
}

KrausChannel channel_from_json(const Json& j) {
  require_object(j, "channel");
  reject_unknown_keys(j, {"in_dim", "out_dim", "kraus"}, "channel");
  const Json& list = require_key(j, "kraus", "channel");
  if (!list.is_array() || list.empty()) throw FormatError("channel.kraus: expected a nonempty array");
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < list.size(); ++i) kraus.push_back(matrix_from_json(list[i], "channel.kraus"));
  KrausChannel ch(std::move(kraus));
  for (const char* key : {"in_dim", "out_dim"})
    if (j.contains(key)) {
      if (!j[key].is_number_integer()) throw FormatError(std::string("channel.") + key + ": expected an integer");
      const auto want = j[key].get<long long>();
      const auto have = static_cast<long long>(std::string(key) == "in_dim" ? ch.in_dim() : ch.out_dim());
      if (want != have) throw FormatError(std::string("channel.") + key + " does not match the Kraus operators");
    }
  return ch;
}

FamilySpec family_spec_from_json(const Json& j) {
  require_object(j, "family");
  const Json& kind_j = require_key(j, "kind", "family");
  if (!kind_j.is_string()) throw FormatError("family.kind: expected a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "unitary_orbit") {
    reject_unknown_keys(j, {"kind", "rho0", "hamiltonian"}, "family");
    require_key(j, "rho0", "family");
    require_key(j, "hamiltonian", "family");
  } else if (kind == "eigenvalue_path") {
    reject_unknown_keys(j, {"kind", "lambda0", "slope", "basis"}, "family");
    require_key(j, "lambda0", "family");
    require_key(j, "slope", "family");
  } else if (kind == "affine") {
    reject_unknown_keys(j, {"kind", "rho0", "directions"}, "family");
    require_key(j, "rho0", "family");
    require_key(j, "directions", "family");
  } else if (kind == "matrix_table") {
    throw FormatError("family kind 'matrix_table' is not supported; use unitary_orbit, eigenvalue_path or affine");
  } else {
    throw FormatError("unknown family kind '" + kind + "'");
  }
  return {kind, j};
}

StateFamily build_family(const FamilySpec& spec) {
  const Json& j = spec.source;
  if (spec.kind == "unitary_orbit")
    return family_unitary_orbit(density_from_json(j["rho0"]),
                                HermitianMatrix(matrix_from_json(j["hamiltonian"], "family.hamiltonian")));
  if (spec.kind == "eigenvalue_path") {
    const RealVector l0 = real_vector(j["lambda0"], "family.lambda0");
    const RealVector slope = real_vector(j["slope"], "family.slope");
    const ComplexMatrix basis =
        j.contains("basis") ? matrix_from_json(j["basis"], "family.basis") : identity(static_cast<std::size_t>(l0.size()));
    return family_linear_eigenvalue_path(l0, slope, basis);
  }
  const Json& dirs = j["directions"];
  if (!dirs.is_array() || dirs.empty()) throw FormatError("family.directions: expected a nonempty array");
  std::vector<HermitianMatrix> directions;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    directions.emplace_back(matrix_from_json(dirs[i], "family.directions"));
  return family_affine(density_from_json(j["rho0"]), directions);
}

Json unitary_orbit_to_json(const DensityMatrix& rho0, const HermitianMatrix& h) {
  Json out = Json::object();
  out["kind"] = "unitary_orbit";
  out["rho0"] = matrix_to_json(rho0.matrix());
  out["hamiltonian"] = matrix_to_json(h.matrix());
  return out;
}

Json suite_to_json(const SuiteResult& r) {
  Json out = Json::object();
  out["name"] = r.name;
  out["assertion"] = r.assertion;
  out["passed"] = r.passed();
  out["cases"] = r.cases;
  out["failures"] = r.failures;
  out["allowed_failures"] = r.allowed_failures;
  out["worst_deviation"] = number_to_json(r.worst_deviation);
  out["seed"] = r.seed;
  out["diagnostics"] = r.diagnostics;
  out["columns"] = r.columns;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json jr = Json::array();
    for (double x : row) jr.push_back(number_to_json(x));
    rows.push_back(std::move(jr));
  }
  out["rows"] = std::move(rows);
  return out;
}

SuiteResult suite_from_json(const Json& j) {
  require_object(j, "suite");
  reject_unknown_keys(j,
                      {"name", "assertion", "passed", "cases", "failures", "allowed_failures", "worst_deviation",
                       "seed", "diagnostics", "columns", "rows"},
                      "suite");
  SuiteResult r;
  try {
    r.name = require_key(j, "name", "suite").get<std::string>();
    r.assertion = require_key(j, "assertion", "suite").get<bool>();
    r.cases = require_key(j, "cases", "suite").get<std::size_t>();
    r.failures = require_key(j, "failures", "suite").get<std::size_t>();
    r.allowed_failures = j.value("allowed_failures", std::size_t{0});
    r.worst_deviation = number_from_json(require_key(j, "worst_deviation", "suite"), "suite.worst_deviation");
    r.seed = require_key(j, "seed", "suite").get<std::uint64_t>();
    r.diagnostics = j.value("diagnostics", std::vector<std::string>{});
    r.columns = j.value("columns", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("suite: ") + e.what());
  }
  if (j.contains("rows")) {
    for (const auto& row : j["rows"]) {
      if (!row.is_array()) throw FormatError("suite.rows: expected arrays");
      std::vector<double> out;
      for (const auto& x : row) out.push_back(number_from_json(x, "suite.rows"));
      r.rows.push_back(std::move(out));
    }
  }
  return r;
}

Json mean_report_to_json(const MeanCheckReport& r) {
  Json out = Json::object();
  out["trials"] = r.trials;
  out["violations"] = r.violations;
  out["worst_margin"] = number_to_json(r.worst_margin);
  out["seed"] = r.seed;
  out["function"] = r.function;
  out["direction"] = to_string(r.direction);
  return out;
}

Json estimate_to_json(const EstimateRecord& e) {
  Json out = Json::object();
  out["exact_variance"] = number_to_json(e.exact_variance);
  out["sample_variance"] = number_to_json(e.sample_variance);
  out["stderr"] = number_to_json(e.stderr_estimate);
  out["shots"] = e.shots;
  out["seed"] = e.seed;
  out["construction"] = e.construction;
  if (!e.warnings.empty()) out["warnings"] = e.warnings;
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

}  // namespace qgeom
