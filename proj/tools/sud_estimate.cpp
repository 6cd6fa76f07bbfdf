// sud-estimate: batch front end for risk sweeps, constants, the spectral optimum
// and the character-quadrature cross-checks.
//
// Exit codes: 0 ok, 1 error or failed verification, 2 infeasible (d, N),
// 3 numerical non-convergence.

#include <sud/cache.hpp>
#include <sud/sud.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;

enum class Format { kJson, kCsv };

struct Range {
  int lo = 0;
  int hi = 0;
};

struct RunConfig {
  std::string command;
  int d = 2;
  std::string levels = "5";
  Range range;
  std::string scheme = "product";
  Format format = Format::kJson;
  std::string cache_dir;
  unsigned workers = 1;
  double eig_tol = 1e-12;
  long max_iter = 1'000'000;
  double oracle_tol = 1e-7;
  double pieri_tol = 1e-9;
  double ortho_tol = 1e-9;
  bool fit = false;
  bool timestamp = true;
  std::string export_path;
  std::string support = "full";
  std::string riemann = "100,200,400,800";
  std::string riemann_csv;
  int n_max = 0;
};

constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNoConvergence = 3;

Range parse_range(const std::string& s) {
  auto to_int = [&](const std::string& t) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (t.empty() || pos != t.size()) throw sud::InvalidArgument("bad N '" + s + "'");
    return v;
  };
  Range r;
  if (const auto c = s.find(':'); c != std::string::npos) {
    r.lo = to_int(s.substr(0, c));
    r.hi = to_int(s.substr(c + 1));
  } else {
    r.lo = r.hi = to_int(s);
  }
  if (r.lo < 0 || r.hi < r.lo) throw sud::InvalidArgument("empty N range '" + s + "'");
  return r;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_range(item).lo);
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json header(const RunConfig& c) {
  json h;
  h["tool"] = "sud-estimate";
  h["version"] = sud::kVersion;
  h["schema_version"] = sud::kSchemaVersion;
  if (c.timestamp) h["timestamp"] = utc_now();
  json cfg;
  cfg["command"] = c.command;
  cfg["d"] = c.d;
  if (c.command != "constant" && c.command != "tables") cfg["N"] = c.levels;
  if (c.command == "risk" || c.command == "sweep") cfg["scheme"] = c.scheme;
  if (c.command == "optimal") cfg["support"] = c.support;
  if (c.command == "constant") cfg["riemann"] = c.riemann;
  if (c.command == "tables") cfg["n_max"] = c.n_max;
  cfg["format"] = c.format == Format::kJson ? "json" : "csv";
  cfg["workers"] = c.workers;
  cfg["cache_dir"] = c.cache_dir;
  cfg["eig_tol"] = c.eig_tol;
  cfg["max_iter"] = c.max_iter;
  cfg["oracle_tol"] = c.oracle_tol;
  h["config"] = std::move(cfg);
  return h;
}

// CSV reports open with the same header as '#' comment lines.
void csv_preamble(std::ostream& out, const RunConfig& c) {
  out << "# " << header(c).dump() << "\n";
}

sud::ResolveOptions resolve_options(const RunConfig& c) {
  sud::ResolveOptions r;
  r.eigen.tol = c.eig_tol;
  r.eigen.max_iterations = c.max_iter;
  return r;
}

// ---------------------------------------------------------------------------

json point_json(const sud::CurvePoint& p) {
  json j;
  j["N"] = p.level;
  j["risk"] = p.exact ? json(sud::to_fraction_string(*p.exact)) : json(nullptr);
  j["risk_float"] = p.risk;
  j["N2_risk"] = p.n2_risk;
  return j;
}

void csv_point(std::ostream& out, const sud::CurvePoint& p) {
  out << p.level << ",";
  if (p.exact)
    out << numerator(*p.exact) << "," << denominator(*p.exact);
  else
    out << ",";
  out << "," << num(p.risk) << "," << num(p.n2_risk) << "\n";
}

int cmd_risk(const RunConfig& c, std::ostream& out) {
  const auto spec = sud::parse_scheme(c.scheme);
  if (c.range.lo != c.range.hi) throw sud::InvalidArgument("risk takes a single N; use sweep for ranges");
  const int n = c.range.lo;
  const auto w = sud::resolve_scheme(spec, c.d, n, resolve_options(c));
  if (sud::weights_empty(w))
    throw sud::EmptySupportError("scheme '" + c.scheme + "' has empty support at d=" + std::to_string(c.d) +
                                 ", N=" + std::to_string(n));
  sud::CurvePoint p;
  p.level = n;
  if (const auto* e = std::get_if<sud::ExactWeights>(&w)) {
    p.exact = sud::exact_risk(c.d, n, *e, c.workers).risk;
    p.risk = sud::to_double(*p.exact);
  } else {
    p.risk = sud::any_float_risk(c.d, n, w, c.workers);
  }
  p.n2_risk = static_cast<double>(n) * n * p.risk;
  if (c.format == Format::kCsv) {
    csv_preamble(out, c);
    out << "N,risk_num,risk_den,risk_float,N2_risk\n";
    csv_point(out, p);
    return 0;
  }
  json j = header(c);
  j["d"] = c.d;
  j["N"] = n;
  j["scheme"] = spec.text;
  const json pj = point_json(p);
  for (const auto& [k, v] : pj.items())
    if (k != "N") j[k] = v;
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const auto spec = sud::parse_scheme(c.scheme);
  sud::CurveOptions opt;
  opt.workers = c.workers;
  opt.resolve = resolve_options(c);
  const auto curve = sud::risk_curve(c.d, c.range.lo, c.range.hi, spec, opt);
  if (curve.points.empty()) throw sud::EmptySupportError("no feasible N in " + c.levels);
  if (c.fit && !curve.fit) throw sud::InvalidArgument("--fit needs at least 4 feasible levels");

  if (c.format == Format::kCsv) {
    csv_preamble(out, c);
    out << "N,risk_num,risk_den,risk_float,N2_risk\n";
    for (const auto& p : curve.points) csv_point(out, p);
    for (const auto& s : curve.skipped) out << "# skipped N=" << s.level << ": " << s.reason << "\n";
    if (c.fit)
      out << "# fit C=" << num(curve.fit->intercept) << " slope=" << num(curve.fit->slope)
          << " over N=" << curve.fit->levels.front() << ".." << curve.fit->levels.back() << "\n";
    return 0;
  }
  json j = header(c);
  j["d"] = c.d;
  j["scheme"] = spec.text;
  j["points"] = json::array();
  for (const auto& p : curve.points) j["points"].push_back(point_json(p));
  j["skipped"] = json::array();
  for (const auto& s : curve.skipped) j["skipped"].push_back({{"N", s.level}, {"reason", s.reason}});
  if (c.fit) {
    const auto& f = *curve.fit;
    j["fit"] = {{"C", f.intercept},
                {"slope", f.slope},
                {"N_lo", f.levels.front()},
                {"N_hi", f.levels.back()},
                {"max_abs_residual", f.max_abs_residual()}};
  }
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_constant(const RunConfig& c, std::ostream& out) {
  const auto rep = sud::exact_constant(c.d);
  const auto levels = parse_int_list(c.riemann);
  const auto values = sud::detail::parallel_map<double>(levels.size(), c.workers, [&](std::size_t k) {
    try {
      return sud::riemann_constant(c.d, levels[k]);
    } catch (const sud::EmptySumError&) {
      return std::nan("");
    }
  });
  auto write_csv = [&](std::ostream& os) {
    csv_preamble(os, c);
    os << "N,value\n";
    for (std::size_t k = 0; k < levels.size(); ++k)
      if (!std::isnan(values[k])) os << levels[k] << "," << num(values[k]) << "\n";
  };
  if (!c.riemann_csv.empty()) {
    std::ofstream f(c.riemann_csv);
    if (!f) throw std::runtime_error("cannot write " + c.riemann_csv);
    write_csv(f);
  }
  if (c.format == Format::kCsv) {
    write_csv(out);
    return 0;
  }
  json j = header(c);
  j["d"] = c.d;
  j["exact"] = sud::to_fraction_string(rep.exact);
  j["float"] = rep.value();
  j["numerator_integral"] = sud::to_fraction_string(rep.numerator_integral);
  j["denominator_integral"] = sud::to_fraction_string(rep.denominator_integral);
  j["riemann"] = json::array();
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (!std::isnan(values[k])) j["riemann"].push_back({{"N", levels[k]}, {"value", values[k]}});
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_optimal(const RunConfig& c, std::ostream& out) {
  if (c.range.lo != c.range.hi) throw sud::InvalidArgument("optimal takes a single N");
  const int n = c.range.lo;
  const auto support = c.support == "strict" ? sud::Support::kStrict : sud::Support::kFull;
  sud::PowerIterationOptions opt;
  opt.tol = c.eig_tol;
  opt.max_iterations = c.max_iter;
  const auto s = sud::optimal_scheme(c.d, n, support, opt);
  const auto product = sud::product_scheme(c.d, n);
  std::optional<sud::Rational> product_risk;
  if (!product.empty()) product_risk = sud::exact_risk(c.d, n, product, c.workers).risk;

  if (!c.export_path.empty()) {
    std::ofstream f(c.export_path);
    if (!f) throw std::runtime_error("cannot write " + c.export_path);
    f << sud::weights_to_json(sud::to_exact(s.eigvec)).dump(2) << "\n";
  }
  if (c.format == Format::kCsv) {
    csv_preamble(out, c);
    out << "parts,coefficient\n";
    for (const auto& [lambda, v] : s.eigvec.entries()) {
      std::string parts = lambda.to_string();
      out << "\"" << parts << "\"," << num(s.eigvec.coefficient(lambda)) << "\n";
    }
    return 0;
  }
  json j = header(c);
  j["d"] = c.d;
  j["N"] = n;
  j["support"] = c.support;
  j["eigmax"] = s.eigmax;
  j["optimal_risk"] = s.optimal_risk();
  j["N2_optimal_risk"] = static_cast<double>(n) * n * s.optimal_risk();
  j["product_risk"] = product_risk ? json(sud::to_fraction_string(*product_risk)) : json(nullptr);
  j["product_risk_float"] = product_risk ? json(sud::to_double(*product_risk)) : json(nullptr);
  j["iterations"] = s.iterations;
  j["residual"] = s.residual;
  j["components"] = s.components;
  j["degenerate"] = s.degenerate;
  j["support_size"] = s.eigvec.entries().size();
  if (!c.export_path.empty()) j["exported"] = c.export_path;
  out << j.dump(2) << "\n";
  return 0;
}

struct Check {
  std::string name;
  double value = 0;
  double tol = 0;
  bool pass = false;
  std::string note;
};

int cmd_verify(const RunConfig& c, std::ostream& out) {
  std::vector<Check> checks;
  for (int n = c.range.lo; n <= c.range.hi; ++n) {
    const std::string at = "d=" + std::to_string(c.d) + ",N=" + std::to_string(n);
    const auto rule = sud::haar_quadrature(c.d, sud::default_resolution(c.d, n));
    const double defect = sud::orthonormality_defect(sud::enumerate_partitions(c.d, n + 1), rule, c.workers);
    checks.push_back({"orthonormality " + at, defect, c.ortho_tol, defect <= c.ortho_tol, ""});

    // chi_lambda chi_box against the Pieri sum, relative to the largest term.
    const auto box = sud::Partition::row(c.d, 1);
    const auto points = sud::random_torus_points(c.d, 100, 20260101u + static_cast<unsigned>(n));
    double pieri = 0;
    for (const auto& lambda : sud::enumerate_partitions(c.d, n)) {
      const auto children = sud::pieri_add(lambda);
      for (const auto& t : points) {
        const auto lhs = sud::schur_eval(lambda, t) * sud::schur_eval(box, t);
        sud::Complex rhs = 0;
        for (const auto& ch : children) rhs += sud::schur_eval(ch.child, t);
        pieri = std::max(pieri, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
    }
    checks.push_back({"pieri " + at, pieri, c.pieri_tol, pieri <= c.pieri_tol, ""});

    for (const std::string scheme : {"product", "uniform", "optimal"}) {
      Check ch;
      ch.name = "risk " + scheme + " " + at;
      ch.tol = c.oracle_tol;
      const auto w = sud::resolve_scheme(sud::parse_scheme(scheme), c.d, n, resolve_options(c));
      if (sud::weights_empty(w)) {
        ch.pass = true;
        ch.note = "skipped: empty support";
        checks.push_back(ch);
        continue;
      }
      const double exact = sud::to_double(sud::any_exact_risk(c.d, n, w, c.workers).risk);
      sud::QuadratureRiskOptions q;
      q.workers = c.workers;
      const double quad = std::visit([&](const auto& x) { return sud::quadrature_risk(c.d, n, x, q); }, w);
      ch.value = std::abs(quad - exact);
      ch.pass = ch.value <= ch.tol;
      checks.push_back(ch);
    }
  }
  bool all = true;
  for (const auto& ch : checks) all = all && ch.pass;

  if (c.format == Format::kCsv) {
    csv_preamble(out, c);
    out << "check,value,tol,pass,note\n";
    for (const auto& ch : checks)
      out << ch.name << "," << num(ch.value) << "," << num(ch.tol) << "," << (ch.pass ? "pass" : "fail") << ","
          << ch.note << "\n";
  } else {
    json j = header(c);
    j["d"] = c.d;
    j["pass"] = all;
    j["checks"] = json::array();
    for (const auto& ch : checks) {
      json e{{"check", ch.name}, {"value", ch.value}, {"tol", ch.tol}, {"pass", ch.pass}};
      if (!ch.note.empty()) e["note"] = ch.note;
      j["checks"].push_back(std::move(e));
    }
    out << j.dump(2) << "\n";
  }
  return all ? 0 : kExitError;
}

int cmd_tables(const RunConfig& c, std::ostream& out) {
  if (c.cache_dir.empty()) throw sud::InvalidArgument("tables needs --cache-dir or SUD_CACHE_DIR");
  const auto m = sud::cache_tables(c.d, c.n_max, c.cache_dir);
  for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
  json j = header(c);
  j["d"] = c.d;
  j["N_max"] = c.n_max;
  j["reused"] = m.reused;
  j["rebuilt"] = m.rebuilt;
  j["warnings"] = m.warnings;
  j["manifest"] = (std::filesystem::path(c.cache_dir) / "manifest.json").string();
  out << j.dump(2) << "\n";
  return 0;
}

int run(RunConfig& c, std::ostream& out) {
  if (c.d < 2) throw sud::InvalidArgument("d must be at least 2");
  if (c.command != "tables" && c.command != "constant") c.range = parse_range(c.levels);
  if (c.command != "constant" && c.command != "tables" && c.command != "optimal" && c.command != "verify")
    (void)sud::parse_scheme(c.scheme);
  if (c.command == "risk") return cmd_risk(c, out);
  if (c.command == "sweep") return cmd_sweep(c, out);
  if (c.command == "constant") return cmd_constant(c, out);
  if (c.command == "optimal") return cmd_optimal(c, out);
  if (c.command == "verify") return cmd_verify(c, out);
  if (c.command == "tables") return cmd_tables(c, out);
  throw sud::InvalidArgument("unknown command " + c.command);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  if (const char* env = std::getenv("SUD_CACHE_DIR")) c.cache_dir = env;

  CLI::App app{"Exact risk, asymptotic constants and oracle checks for SU(d) estimation at rate 1/N^2"};
  app.set_version_flag("--version", std::string(sud::kVersion));
  app.require_subcommand(1);

  std::string format = "json";
  auto common = [&](CLI::App* s, bool with_scheme) {
    s->add_option("-d", c.d, "dimension d >= 2")->required();
    s->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--workers", c.workers, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
    s->add_option("--cache-dir", c.cache_dir, "table cache directory (overrides SUD_CACHE_DIR)");
    s->add_flag("--no-timestamp", [&](std::int64_t) { c.timestamp = false; }, "omit the timestamp field");
    s->add_option("--eig-tol", c.eig_tol, "power-iteration residual tolerance");
    s->add_option("--max-iter", c.max_iter, "power-iteration cap");
    if (with_scheme)
      s->add_option("--scheme", c.scheme, "product | uniform | power:<a> | optimal[:full|:strict] | file:<path>");
  };

  auto* risk = app.add_subcommand("risk", "exact risk of one scheme at one N");
  common(risk, true);
  risk->add_option("-N", c.levels, "level N")->required();

  auto* sweep = app.add_subcommand("sweep", "risk over a range of N");
  common(sweep, true);
  sweep->add_option("-N", c.levels, "range a:b")->required();
  sweep->add_flag("--fit", c.fit, "fit N^2 R = C + b/N over the upper half of the range");

  auto* constant = app.add_subcommand("constant", "exact asymptotic constant C(d) with Riemann trace");
  common(constant, false);
  constant->add_option("--riemann", c.riemann, "comma-separated N for the lattice-sum trace");
  constant->add_option("--riemann-csv", c.riemann_csv, "also write the trace as CSV to this path");

  auto* optimal = app.add_subcommand("optimal", "spectral optimum of the risk at one N");
  common(optimal, false);
  optimal->add_option("-N", c.levels, "level N")->required();
  optimal->add_option("--support", c.support, "full or strict")->check(CLI::IsMember({"full", "strict"}));
  optimal->add_option("--export", c.export_path, "write the optimal weights as a scheme file");

  auto* verify = app.add_subcommand("verify", "character-quadrature cross-checks");
  common(verify, false);
  verify->add_option("-N", c.levels, "level N or range a:b")->required();
  verify->add_option("--oracle-tol", c.oracle_tol, "max |quadrature - exact| risk delta");
  verify->add_option("--pieri-tol", c.pieri_tol, "max relative Pieri defect");
  verify->add_option("--ortho-tol", c.ortho_tol, "max orthonormality defect");

  auto* tables = app.add_subcommand("tables", "build or validate the representation-table cache");
  common(tables, false);
  tables->add_option("--n-max", c.n_max, "highest level")->required()->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  c.command = app.get_subcommands().front()->get_name();
  c.format = format == "csv" ? Format::kCsv : Format::kJson;

  try {
    std::ostringstream buf;
    const int status = run(c, buf);
    std::cout << buf.str();
    return status;
  } catch (const sud::EmptySupportError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const sud::EmptySumError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const sud::ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const sud::NumericalInstabilityError& e) {
    std::cerr << "numerical: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const sud::ResolutionTooLowError& e) {
    std::cerr << "numerical: " << e.what() << " (try resolution " << e.suggested_resolution() << ")\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
