#include "qgeom/cli.hpp"

#include "qgeom/errors.hpp"
#include "qgeom/expsim.hpp"
#include "qgeom/io.hpp"
#include "qgeom/metrics.hpp"
#include "qgeom/rng.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qgeom {

namespace {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Json table_to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json jr = Json::array();
    for (double x : row) jr.push_back(number_to_json(x));
    rows.push_back(std::move(jr));
  }
  Json out = Json::object();
  out["columns"] = t.columns;
  out["rows"] = std::move(rows);
  return out;
}

std::string index_name(const std::string& stem, std::size_t i) { return stem + "_" + std::to_string(i); }
std::string index_name(const std::string& stem, std::size_t i, std::size_t j) {
  return stem + "_" + std::to_string(i) + "_" + std::to_string(j);
}

void push_matrix_columns(std::vector<std::string>& cols, const std::string& stem, std::size_t d) {
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) cols.push_back(index_name(stem, i, j));
}

void push_matrix_values(std::vector<double>& row, const RealMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
}

std::string theta_label(const Theta& th) {
  std::ostringstream s;
  s << "theta=(";
  for (std::size_t i = 0; i < th.size(); ++i) s << (i ? "," : "") << format_number(th[i]);
  s << ")";
  return s.str();
}

/// Raised with an Error kind so numeric failures keep their exit code.
class ContextError : public Error {
public:
  ContextError(const Error& e, const std::string& context) : Error(e.kind(), context + ": " + e.what()) {}
};

std::vector<Theta> theta_points(const RunConfig& c, std::size_t params) {
  if (c.param >= params)
    throw FormatError("--param " + std::to_string(c.param) + " is out of range for a " + std::to_string(params) +
                      "-parameter family");
  Theta base(params, 0.0);
  if (!c.base.empty()) {
    if (c.base.size() != params)
      throw FormatError("--base needs " + std::to_string(params) + " values, got " + std::to_string(c.base.size()));
    base = c.base;
  }
  std::vector<Theta> out;
  for (double v : parse_grid(c.grid)) {
    Theta th = base;
    th[c.param] = v;
    out.push_back(th);
  }
  return out;
}

struct LoadedFamily {
  FamilySpec spec;
  StateFamily family;
};

LoadedFamily load_family(const RunConfig& c) {
  if (c.family_path.empty()) throw FormatError("--family is required");
  FamilySpec spec = family_spec_from_json(read_json_file(c.family_path));
  StateFamily fam = build_family(spec);
  return {std::move(spec), std::move(fam)};
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw FormatError("cannot write '" + c.out + "'");
  f << text;
}

std::string render(const RunConfig& c, const Json& json, const Table& table) {
  if (c.format == "csv") {
    std::ostringstream s;
    write_csv(s, table.columns, table.rows);
    return s.str();
  }
  return json.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::string cmd_metric(const RunConfig& c, std::ostream& err) {
  const LoadedFamily lf = load_family(c);
  const std::size_t d = lf.family.param_count();
  const auto points = theta_points(c, d);
  if (!c.dtheta.empty() && c.dtheta.size() != d) throw FormatError("--dtheta needs one value per parameter");

  Table t;
  for (std::size_t i = 0; i < d; ++i) t.columns.push_back(index_name("theta", i));
  push_matrix_columns(t.columns, "gamma", d);
  push_matrix_columns(t.columns, "sigma", d);
  for (std::size_t i = 0; i < d; ++i) t.columns.push_back(index_name("phase_re", i));
  for (std::size_t i = 0; i < d; ++i) t.columns.push_back(index_name("phase_im", i));
  for (std::size_t i = 0; i < d; ++i) t.columns.push_back(index_name("cr_bound", i));
  if (!c.dtheta.empty()) t.columns.push_back("ds2");

  std::vector<std::string> warnings;
  for (const auto& th : points) {
    MetricReport r;
    try {
      r = metric_report(lf.family, th, c.dtheta.empty() ? std::nullopt : std::optional(c.dtheta));
    } catch (const Error& e) {
      throw ContextError(e, theta_label(th));
    }
    std::vector<double> row(th.begin(), th.end());
    push_matrix_values(row, r.tensor.gamma);
    push_matrix_values(row, r.tensor.sigma);
    for (const auto& p : r.dyn_phase) row.push_back(p.real());
    for (const auto& p : r.dyn_phase) row.push_back(p.imag());
    for (double b : r.cr_bound) row.push_back(b);
    if (r.ds2) row.push_back(*r.ds2);
    t.rows.push_back(std::move(row));
    for (const auto& w : r.warnings) warnings.push_back(theta_label(th) + ": " + w);
  }
  for (const auto& w : warnings) err << "warning: " << w << '\n';

  Json j = Json::object();
  j["command"] = "metric";
  j["family"] = lf.spec.kind;
  j["params"] = d;
  const Json body = table_to_json(t);
  j["columns"] = body["columns"];
  j["rows"] = body["rows"];
  j["warnings"] = warnings;
  return render(c, j, t);
}

std::string cmd_alpha_scan(const RunConfig& c) {
  const LoadedFamily lf = load_family(c);
  const std::size_t d = lf.family.param_count();
  const auto points = theta_points(c, d);
  if (c.alphas.empty()) throw FormatError("--alpha needs at least one value");
  for (double a : c.alphas)
    if (!(a >= 1.0) || !std::isfinite(a)) throw FormatError("--alpha values must be finite and >= 1");
  const OperatorFunction arith = arithmetic_fn();

  Table t;
  for (std::size_t i = 0; i < d; ++i) t.columns.push_back(index_name("theta", i));
  t.columns.push_back("alpha");
  push_matrix_columns(t.columns, "G", d);
  push_matrix_columns(t.columns, "Gtilde", d);
  for (std::size_t i = 0; i < d; ++i) t.columns.push_back(index_name("phase_re", i));
  for (std::size_t i = 0; i < d; ++i) t.columns.push_back(index_name("phase_im", i));
  push_matrix_columns(t.columns, "fs_gamma", d);
  t.columns.push_back("max_dev_from_fs");

  for (const auto& th : points) {
    for (double a : c.alphas) {
      try {
        const DensityMatrix rho = lf.family.evaluate(th);
        const auto drho = lf.family.derivatives(th);
        const SqrtDerivative cs = sqrt_derivative(rho, drho);
        const QGTensor g = alpha_qgt_G(rho, cs, a);
        const QGTensor gt = alpha_qgt_Gtilde(rho, cs, a);
        const QGTensor fs = fs_qgt(rho, cs);
        const auto phase = alpha_dynamical_phase(rho, generalized_sqrt_derivative(rho, drho, arith), a);
        std::vector<double> row(th.begin(), th.end());
        row.push_back(a);
        push_matrix_values(row, g.gamma);
        push_matrix_values(row, gt.gamma);
        for (const auto& p : phase) row.push_back(p.real());
        for (const auto& p : phase) row.push_back(p.imag());
        push_matrix_values(row, fs.gamma);
        row.push_back(std::max((g.gamma - fs.gamma).cwiseAbs().maxCoeff(), (gt.gamma - fs.gamma).cwiseAbs().maxCoeff()));
        t.rows.push_back(std::move(row));
      } catch (const Error& e) {
        throw ContextError(e, theta_label(th) + " alpha=" + format_number(a));
      }
    }
  }
  Json j = Json::object();
  j["command"] = "alpha-scan";
  j["family"] = lf.spec.kind;
  j["params"] = d;
  j["alphas"] = c.alphas;
  const Json body = table_to_json(t);
  j["columns"] = body["columns"];
  j["rows"] = body["rows"];
  return render(c, j, t);
}

std::string cmd_verify(const RunConfig& c, bool& all_passed) {
  for (const auto& s : c.suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw UnknownSuite("unknown suite '" + s + "'");
  SuiteOptions o;
  o.seed = c.seed;
  o.samples = c.samples;
  o.profile = c.profile;
  std::vector<SuiteResult> results;
  for (const auto& s : c.suites) {
    auto part = run_suite(s, o);
    results.insert(results.end(), part.begin(), part.end());
  }
  all_passed = std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.passed(); });

  if (c.format == "csv") {
    std::ostringstream s;
    s << "suite,assertion,passed,cases,failures,allowed_failures,worst_deviation\n";
    for (const auto& r : results)
      s << r.name << ',' << (r.assertion ? 1 : 0) << ',' << (r.passed() ? 1 : 0) << ',' << r.cases << ','
        << r.failures << ',' << r.allowed_failures << ',' << format_number(r.worst_deviation) << '\n';
    return s.str();
  }
  Json j = Json::object();
  j["command"] = "verify";
  j["seed"] = c.seed;
  j["tolerance_profile"] = to_string(c.profile);
  j["passed"] = all_passed;
  Json suites = Json::array();
  for (const auto& r : results) suites.push_back(suite_to_json(r));
  j["suites"] = std::move(suites);
  return j.dump(2) + "\n";
}

std::string cmd_experiment(const RunConfig& c, std::ostream& err) {
  if (c.shots < 1) throw FormatError("--shots must be at least 1");
  const LoadedFamily lf = load_family(c);
  const std::size_t d = lf.family.param_count();
  if (c.param >= d) throw FormatError("--param is out of range for this family");
  Theta th(d, 0.0);
  if (!c.theta.empty()) {
    if (c.theta.size() != d) throw FormatError("--theta needs one value per parameter");
    th = c.theta;
  }
  const DensityMatrix rho = lf.family.evaluate(th);
  const ComplexVector psi = vec(rho.sqrt().matrix());
  const SqrtDerivative cs = sqrt_derivative(rho, lf.family.derivatives(th));
  const double gamma = fs_qgt(rho, cs).gamma(static_cast<Eigen::Index>(c.param), static_cast<Eigen::Index>(c.param));

  GeneratorSolution gen;
  if (lf.spec.kind == "unitary_orbit") {
    gen = generator_commutator(rho, HermitianMatrix(matrix_from_json(lf.spec.source["hamiltonian"], "hamiltonian")));
  } else {
    gen = generator_rank2(psi, vec(cs.components[c.param]));
  }
  const EstimateRecord e = simulate_variance(gen.h_ab, psi, c.shots, c.seed, gen.construction);
  for (const auto& w : e.warnings) err << "warning: " << w << '\n';
  for (const auto& w : cs.warnings) err << "warning: " << w.message() << '\n';

  const double z = e.stderr_estimate > 0.0 ? std::abs(e.sample_variance - e.exact_variance) / e.stderr_estimate : 0.0;
  Table t{{"exact_variance", "sample_variance", "stderr", "shots", "seed", "fs_metric", "residual", "z"},
          {{e.exact_variance, e.sample_variance, e.stderr_estimate, static_cast<double>(e.shots),
            static_cast<double>(e.seed), gamma, gen.residual, z}}};
  Json j = estimate_to_json(e);
  j["fs_metric"] = number_to_json(gamma);
  j["residual"] = number_to_json(gen.residual);
  j["z"] = number_to_json(z);
  return render(c, j, t);
}

std::string cmd_sample(const RunConfig& c) {
  if (c.dim < 1) throw FormatError("--dim must be at least 1");
  const std::size_t rank = c.rank.value_or(c.dim);
  Json j;
  Table t;
  if (c.what == "state") {
    const DensityMatrix rho = random_density(c.dim, rank, c.seed);
    j = matrix_to_json(rho.matrix());
    t.columns = {"row", "col", "re", "im"};
    for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r)
      for (Eigen::Index k = 0; k < rho.matrix().cols(); ++k)
        t.rows.push_back({static_cast<double>(r), static_cast<double>(k), rho.matrix()(r, k).real(),
                          rho.matrix()(r, k).imag()});
  } else if (c.what == "channel") {
    if (c.kraus > c.dim * c.dim)
      throw TooManyKraus("--kraus " + std::to_string(c.kraus) + " exceeds dim^2 = " + std::to_string(c.dim * c.dim));
    const KrausChannel ch = random_channel(c.dim, c.kraus, c.seed);
    j = channel_to_json(ch);
    t.columns = {"kraus", "row", "col", "re", "im"};
    for (std::size_t k = 0; k < ch.kraus_count(); ++k) {
      const auto& m = ch.kraus()[k];
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index q = 0; q < m.cols(); ++q)
          t.rows.push_back({static_cast<double>(k), static_cast<double>(r), static_cast<double>(q), m(r, q).real(),
                            m(r, q).imag()});
    }
  } else {
    if (c.format == "csv") throw FormatError("sample --what family is available as json only");
    Rng rng(c.seed);
    const DensityMatrix rho = random_density(c.dim, rank, rng.next_u64());
    j = unitary_orbit_to_json(rho, HermitianMatrix::symmetrized(random_hermitian(rng, c.dim)));
  }
  return render(c, j, t);
}

std::vector<double> split_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw FormatError(what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw FormatError("grid '" + spec + "' must have the form start:stop:count");
  const auto ends = split_numbers(parts[0] + "," + parts[1], "grid");
  long count = 0;
  try {
    std::size_t used = 0;
    count = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::exception&) {
    throw FormatError("grid count '" + parts[2] + "' is not an integer");
  }
  if (count < 1) throw FormatError("grid count must be at least 1");
  if (count == 1) return {ends[0]};
  std::vector<double> out;
  for (long k = 0; k < count; ++k)
    out.push_back(ends[0] + (ends[1] - ends[0]) * static_cast<double>(k) / static_cast<double>(count - 1));
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string profile = "default";
  std::string base, dtheta, alphas, theta;
  std::size_t samples = 0;
  std::size_t rank = 0;

  CLI::App app{"Mixed-state quantum geometric tensor toolkit"};
  app.name("qgeom");
  app.require_subcommand(1);
  app.add_option("--seed", c.seed, "master seed")->capture_default_str();
  app.add_option("--out", c.out, "output path (default: standard output)");
  app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--tolerance-profile", profile, "strict or default")
      ->check(CLI::IsMember({"strict", "default"}))
      ->capture_default_str();

  auto grid_options = [&](CLI::App* sub) {
    sub->add_option("--family", c.family_path, "family JSON file")->required();
    sub->add_option("--grid", c.grid, "start:stop:count")->capture_default_str();
    sub->add_option("--param", c.param, "parameter swept by the grid")->capture_default_str();
    sub->add_option("--base", base, "comma-separated values of all parameters");
  };

  auto* metric = app.add_subcommand("metric", "metric tensor, dynamical phase and 1/gamma bound over a grid");
  grid_options(metric);
  metric->add_option("--dtheta", dtheta, "comma-separated displacement for ds^2");

  auto* scan = app.add_subcommand("alpha-scan", "G(alpha), Gtilde(alpha) and the alpha dynamical phase");
  grid_options(scan);
  scan->add_option("--alpha", alphas, "comma-separated alpha values (>= 1)");

  auto* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("--suite", c.suites, "suite name (repeatable)")->capture_default_str();
  verify->add_option("--samples", samples, "override the per-suite sample count")->check(CLI::PositiveNumber);

  auto* experiment = app.add_subcommand("experiment", "simulate measuring the generator variance");
  experiment->add_option("--family", c.family_path, "family JSON file")->required();
  experiment->add_option("--theta", theta, "comma-separated parameter point");
  experiment->add_option("--param", c.param, "parameter whose metric is measured")->capture_default_str();
  experiment->add_option("--shots", c.shots, "number of shots")->check(CLI::PositiveNumber)->capture_default_str();

  auto* sample = app.add_subcommand("sample", "emit a random state, channel or family");
  sample->add_option("--what", c.what, "state, channel or family")
      ->check(CLI::IsMember({"state", "channel", "family"}))
      ->capture_default_str();
  sample->add_option("--dim", c.dim, "dimension")->check(CLI::PositiveNumber)->capture_default_str();
  sample->add_option("--rank", rank, "state rank (default: dim)")->check(CLI::PositiveNumber);
  sample->add_option("--kraus", c.kraus, "Kraus operator count")->check(CLI::PositiveNumber)->capture_default_str();

  for (auto* sub : {metric, scan, verify, experiment, sample}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    c.profile = tolerance_profile_from_string(profile);
    if (!base.empty()) c.base = split_numbers(base, "--base");
    if (!dtheta.empty()) c.dtheta = split_numbers(dtheta, "--dtheta");
    if (!alphas.empty()) c.alphas = split_numbers(alphas, "--alpha");
    if (!theta.empty()) c.theta = split_numbers(theta, "--theta");
    if (samples > 0) c.samples = samples;
    if (rank > 0) c.rank = rank;

    std::string text;
    int code = kExitOk;
    if (metric->parsed()) {
      c.command = "metric";
      text = cmd_metric(c, err);
    } else if (scan->parsed()) {
      c.command = "alpha-scan";
      text = cmd_alpha_scan(c);
    } else if (verify->parsed()) {
      c.command = "verify";
      bool passed = true;
      text = cmd_verify(c, passed);
      if (!passed) code = kExitSuiteFailed;
    } else if (experiment->parsed()) {
      c.command = "experiment";
      text = cmd_experiment(c, err);
    } else {
      c.command = "sample";
      text = cmd_sample(c);
    }
    emit(c, text, out);
    if (code == kExitSuiteFailed) err << "verify: at least one assertion suite failed\n";
    return code;
  } catch (const UnknownSuite& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnknownSuite;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const Error& e) {
    err << "error (" << e.kind() << "): " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace qgeom
