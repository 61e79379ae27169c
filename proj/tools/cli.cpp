#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "nck/clifford.hpp"
#include "nck/forms.hpp"
#include "nck/holomorphic.hpp"
#include "nck/kahler.hpp"
#include "nck/report.hpp"
#include "nck/serialize.hpp"
#include "nck/torus.hpp"

namespace nck::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

/// Invalid input: reported with exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string theta_path;
  std::string theta2_path;
  std::optional<int> n;
  std::string matching;
  std::string eps_prime = "+1";
  std::optional<double> tol;
  int radius = 3;
  std::string out;
  std::string dump_ops;
  std::string conn_path;
};

struct Run {
  std::string command;
  double tol = kVerifyTol;
  json header = json::object();
  json results = json::object();
  json theta;
  VerificationReport report;
};

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

double resolve_tol(const Options& o) {
  double tol = kVerifyTol;
  if (const char* env = std::getenv("NCK_TOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    tol = std::strtod(env, &end);
    if (end == env || *end != '\0') throw ConfigError(std::string("NCK_TOL is not a number: ") + env);
  }
  if (o.tol) tol = *o.tol;
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("tolerance must be positive");
  return tol;
}

ThetaMatrix load_theta(const std::string& path) {
  try {
    return theta_from_json(read_json_file(path));
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

/// Theta from --theta, else the standard matrix of size --n (default 2).
ThetaMatrix resolve_theta(const Options& o, std::ostream& err, int default_n = 2) {
  ThetaMatrix theta;
  if (!o.theta_path.empty()) {
    theta = load_theta(o.theta_path);
    if (o.n && *o.n != theta.n())
      throw ConfigError("--n " + std::to_string(*o.n) + " does not match the theta file (n = " +
                        std::to_string(theta.n()) + ")");
  } else {
    const int n = o.n.value_or(default_n);
    if (n < 2 || n % 2 != 0) throw ConfigError("torus dimension must be even and >= 2");
    if (n > kMaxCliffordN) throw ConfigError("torus dimension above " + std::to_string(kMaxCliffordN));
    theta = ThetaMatrix::standard(n);
  }
  if (theta.looks_rational()) err << "warning: theta looks rational; A_Theta is not simple\n";
  return theta;
}

std::vector<int> resolve_eps(const std::string& s) {
  if (s == "both") return {1, -1};
  if (s == "+1" || s == "1" || s == "+") return {1};
  if (s == "-1" || s == "-") return {-1};
  throw ConfigError("--eps-prime must be +1, -1 or both (got \"" + s + "\")");
}

std::vector<Matching> resolve_matchings(const std::string& s, int n) {
  if (s.empty()) return {Matching::standard(n)};
  if (s == "all") return enumerate_matchings(n);
  try {
    return {Matching::parse(s, n)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

json eps_json(const std::vector<int>& eps) {
  if (eps.size() > 1) return "both";
  return eps.front();
}

std::string eps_label(int e) { return e > 0 ? "+1" : "-1"; }

double bool_residual(bool ok) { return ok ? 0.0 : 1.0; }

json config_json(const Options& o, double tol) {
  json c = json::object();
  c["theta"] = o.theta_path.empty() ? json(nullptr) : json(o.theta_path);
  c["n"] = o.n ? json(*o.n) : json(nullptr);
  c["matching"] = o.matching.empty() ? json(nullptr) : json(o.matching);
  c["eps_prime"] = o.eps_prime;
  c["tol"] = tol;
  c["radius"] = o.radius;
  c["conn"] = o.conn_path.empty() ? json(nullptr) : json(o.conn_path);
  return c;
}

json operator_dump(const KahlerPackage& p) {
  return json{{"D", to_json(p.D)},         {"Dfrak", to_json(p.Dfrak)},
              {"Dfrak_bar", to_json(p.Dfrak_bar)}, {"d", to_json(p.d)},
              {"d_star", to_json(p.d_star)}, {"T_script", to_json(p.T_script)},
              {"I", to_json(p.I)},         {"d2", to_json(p.d2)},
              {"del", to_json(p.del)},     {"delbar", to_json(p.delbar)},
              {"T", to_json(p.T)},         {"T_bar", to_json(p.T_bar)},
              {"grading", to_json(p.grading)}, {"hodge", to_json(p.hodge)}};
}

std::shared_ptr<const Torus> make_torus(const ThetaMatrix& theta) {
  return std::make_shared<const Torus>(theta);
}

// ---- subcommands ---------------------------------------------------------

void clifford_checks(int n, VerificationReport& r, json& results, const std::string& prefix) {
  const GammaRep rep = build_gamma(n);
  const double rel = relations_residual(rep);
  const double grad = grading_product_check(rep);
  r.add(prefix + "Clifford relations", rel);
  r.add(prefix + "gamma_1...gamma_n = c sigma", grad);
  for (ConjVariant v : {ConjVariant::plus, ConjVariant::minus}) {
    const std::string tag = v == ConjVariant::plus ? "J+" : "J-";
    const ChargeConjugation cc = charge_conjugation(rep, v);
    r.add(prefix + tag + " relations", cc.residual);
    r.add(prefix + tag + " signs match table", bool_residual(cc.signs == expected_signs(n, v)));
  }
  results["N"] = rep.N;
  results["relations_residual"] = rel;
  results["grading_product_residual"] = grad;
  results["signs_plus"] = to_json(rep.signs_plus);
  results["signs_minus"] = to_json(rep.signs_minus);
  results["expected_plus"] = to_json(expected_signs(n, ConjVariant::plus));
  results["expected_minus"] = to_json(expected_signs(n, ConjVariant::minus));
}

void run_clifford(const Options& o, Run& run) {
  int n = o.n.value_or(2);
  if (!o.theta_path.empty()) n = load_theta(o.theta_path).n();
  if (n < 2 || n % 2 != 0 || n > kMaxCliffordN)
    throw ConfigError("clifford needs an even n between 2 and " + std::to_string(kMaxCliffordN));
  run.header["n"] = n;
  clifford_checks(n, run.report, run.results, "");
  const GammaRep rep = build_gamma(n);
  const json full = to_json(rep);
  run.results["gammas"] = full.at("gammas");
  run.results["sigma"] = full.at("sigma");
  run.results["conj_plus"] = full.at("conj_plus");
  run.results["conj_minus"] = full.at("conj_minus");
}

void run_verify(const Options& o, Run& run, std::ostream& err) {
  const ThetaMatrix theta = resolve_theta(o, err);
  const int n = theta.n();
  const auto matchings = resolve_matchings(o.matching, n);
  const auto eps = resolve_eps(o.eps_prime);
  run.theta = to_json(theta);
  run.header["n"] = n;
  run.header["matching"] = o.matching == "all" ? "all" : matchings.front().to_string();
  run.header["eps_prime"] = eps_json(eps);

  const auto torus = make_torus(theta);
  const auto grid = verify_grid(torus, matchings, eps, run.tol);
  const bool multi = grid.size() > 1;
  for (const auto& e : grid) {
    const std::string prefix =
        multi ? "[" + e.matching.to_string() + " eps'=" + eps_label(e.eps_prime) + "] " : "";
    run.report.append(e.report, prefix);
  }

  if (!o.dump_ops.empty()) {
    json dump = json::object();
    auto rep = std::make_shared<const GammaRep>(build_gamma(n));
    for (const auto& m : matchings)
      for (int e : eps) {
        const KahlerPackage p = build_kahler_package(torus, rep, m, e);
        if (multi)
          dump[m.to_string() + " eps'=" + eps_label(e)] = operator_dump(p);
        else
          dump = operator_dump(p);
      }
    write_file_atomic(o.dump_ops, dump.dump(2) + "\n");
  }
}

void run_enumerate(const Options& o, Run& run) {
  int n = o.n.value_or(2);
  if (!o.theta_path.empty()) n = load_theta(o.theta_path).n();
  if (n < 2 || n % 2 != 0) throw ConfigError("enumerate needs an even n >= 2");
  if (n > 16) throw ConfigError("enumerate is limited to n <= 16");
  const auto ms = enumerate_matchings(n);
  long expected = 1;
  for (int j = n - 1; j > 0; j -= 2) expected *= j;
  run.header["n"] = n;
  json list = json::array();
  for (const auto& m : ms) list.push_back(m.to_string());
  run.results["count"] = ms.size();
  run.results["matchings"] = list;
  run.report.add("count = (n-1)!!", std::abs(static_cast<double>(ms.size()) - expected));
}

void forms_checks(int dim, double tol, VerificationReport& r, json& results, const std::string& prefix) {
  const FormBasisMatrices b = build_form_matrices(dim);
  const int n = dim / 2;
  json table = json::array();
  for (int level = 0; level <= dim + 1; ++level) {
    const int rd = form_rank(b, FormFamily::mu, level);
    const int r0q = form_rank(b, FormFamily::eta_bar, level);
    const int rp0 = form_rank(b, FormFamily::eta_hol, level);
    table.push_back(json{{"level", level}, {"omega_d", rd}, {"omega_0q", r0q}, {"omega_p0", rp0}});
    const std::string l = std::to_string(level);
    r.add(prefix + "rank Omega_d^" + l + " = C(" + std::to_string(dim) + "," + l + ")",
          std::abs(rd - binomial(dim, level)));
    r.add(prefix + "rank Omega^(0," + l + ") = C(" + std::to_string(n) + "," + l + ")",
          std::abs(r0q - binomial(n, level)));
    r.add(prefix + "rank Omega^(" + l + ",0) = C(" + std::to_string(n) + "," + l + ")",
          std::abs(rp0 - binomial(n, level)));
  }
  r.add(prefix + "mu anticommute", anticommutation_residual(b.mu));
  r.add(prefix + "eta_bar anticommute", anticommutation_residual(b.eta_bar));
  r.add(prefix + "eta_hol anticommute", anticommutation_residual(b.eta_hol));
  r.append(bidegree_decomposition_check(dim, -1, tol), prefix);
  results["levels"] = table;
}

void run_forms(const Options& o, Run& run, std::ostream& err) {
  const ThetaMatrix theta = resolve_theta(o, err);
  run.theta = to_json(theta);
  run.header["n"] = theta.n();
  forms_checks(theta.n(), run.tol, run.report, run.results, "");
}

void run_holo_kernel(const Options& o, Run& run, std::ostream& err) {
  const ThetaMatrix theta = resolve_theta(o, err);
  run.theta = to_json(theta);
  run.header["n"] = theta.n();
  run.header["radius"] = o.radius;
  const Torus torus(theta);
  const KernelBasis k = holomorphic_kernel(torus, o.radius);
  json elems = json::array();
  bool constants_only = true;
  for (const auto& v : k.elements) {
    elems.push_back(to_json(v.front()));
    for (const auto& [m, c] : v.front().coeffs())
      if (m != Exponent::zero(theta.n())) constants_only = false;
  }
  run.results["dim"] = k.dim();
  run.results["basis"] = elems;
  run.report.add("holomorphic kernel dimension = 1", std::abs(k.dim() - 1));
  run.report.add("holomorphic kernel is constant", bool_residual(constants_only));
}

Connection load_connection(const Options& o, std::ostream& err, ThetaMatrix& theta) {
  if (o.conn_path.empty()) throw ConfigError("--conn is required");
  json j;
  try {
    j = read_json_file(o.conn_path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  int default_n = 2;
  if (j.is_object() && j.contains("A") && j.at("A").is_array())
    default_n = 2 * static_cast<int>(j.at("A").size());
  theta = resolve_theta(o, err, default_n);
  try {
    return connection_from_json(j, theta.n());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void run_holo_flat(const Options& o, Run& run, std::ostream& err) {
  ThetaMatrix theta;
  const Connection c = load_connection(o, err, theta);
  run.theta = to_json(theta);
  run.header["n"] = theta.n();
  const Torus torus(theta);
  const double res = flatness_check(torus, c);
  run.results["m"] = c.m;
  run.results["curvature_max"] = res;
  run.report.add("curvature = 0", res);
}

void run_holo_h0(const Options& o, Run& run, std::ostream& err) {
  ThetaMatrix theta;
  const Connection c = load_connection(o, err, theta);
  run.theta = to_json(theta);
  run.header["n"] = theta.n();
  run.header["radius"] = o.radius;
  const auto torus = make_torus(theta);
  const KernelBasis k = h0_solve(*torus, c, o.radius);
  double worst = 0.0;
  json basis = json::array();
  for (const auto& xi : k.elements) {
    json v = json::array();
    for (const auto& e : xi) v.push_back(to_json(e));
    basis.push_back(v);
    for (int j = 1; j <= theta.n() / 2; ++j)
      for (const auto& e : nck::apply(connection_operator(torus, c, j), xi))
        worst = std::max(worst, e.max_abs());
  }
  run.results["m"] = c.m;
  run.results["dim"] = k.dim();
  run.results["basis"] = basis;
  run.report.add("nabla xi = 0 on the H0 basis", worst);
}

json complex_json(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

void run_holo_ps(const Options& o, Run& run, std::ostream& err) {
  ThetaMatrix theta;
  if (!o.theta2_path.empty()) {
    theta = load_theta(o.theta2_path);
  } else {
    Options copy = o;
    if (!copy.n) copy.n = 2;
    theta = resolve_theta(copy, err);
  }
  if (theta.n() != 2) throw ConfigError("ps-compare needs a 2x2 theta");
  run.theta = to_json(theta);
  run.header["n"] = 2;
  run.header["radius"] = o.radius;
  const PsComparison cmp = ps_compare(make_torus(theta), o.radius);
  run.results["c"] = complex_json(cmp.c);
  run.results["residual"] = cmp.residual;
  run.report.add("Phi[delbar,a] = c d_tau(a)", cmp.residual);
}

void run_report(const Options& o, Run& run, std::ostream& err) {
  const ThetaMatrix theta = resolve_theta(o, err);
  const int n = theta.n();
  run.theta = to_json(theta);
  run.header["n"] = n;
  run.header["matching"] = "all";
  run.header["eps_prime"] = "both";
  const auto torus = make_torus(theta);
  VerificationReport& r = run.report;

  json cliff = json::object();
  clifford_checks(n, r, cliff, "clifford: ");
  run.results["clifford"] = cliff;

  const auto matchings = enumerate_matchings(n);
  long expected = 1;
  for (int j = n - 1; j > 0; j -= 2) expected *= j;
  r.add("matchings: count = (n-1)!!", std::abs(static_cast<double>(matchings.size()) - expected));
  if (matchings.size() > 1) {
    const double sep = min_d2_separation(torus, n);
    run.results["min_d2_separation"] = sep;
    r.add("matchings: d2 pairwise distinct", bool_residual(sep > 0.1));
  }

  for (const auto& e : verify_grid(torus, matchings, {1, -1}, run.tol))
    r.append(e.report, "kahler [" + e.matching.to_string() + " eps'=" + eps_label(e.eps_prime) + "]: ");
  for (const auto& m : matchings)
    r.add("conjugation [" + m.to_string() + "]: S del+ = del- S, S delbar+ = delbar- S",
          verify_pm_conjugation(torus, m));

  const GammaRep rep = build_gamma(n);
  r.append(verify_real_structure(torus, rep, ConjVariant::plus, run.tol), "real structure J+: ");
  r.append(verify_real_structure(torus, rep, ConjVariant::minus, run.tol), "real structure J-: ");

  json forms = json::object();
  forms_checks(n, run.tol, r, forms, "forms: ");
  run.results["forms"] = forms;

  const KernelBasis k = holomorphic_kernel(*torus, o.radius);
  r.add("holomorphic: kernel dimension = 1", std::abs(k.dim() - 1));
  for (int m = 1; m <= 3; ++m) {
    const Connection g = grassmannian(n, m);
    r.add("holomorphic: Grassmannian rank " + std::to_string(m) + " flat", flatness_check(*torus, g));
    r.add("holomorphic: dim H0(Grassmannian rank " + std::to_string(m) + ") = " + std::to_string(m),
          std::abs(h0_solve(*torus, g, o.radius).dim() - m));
  }

  const ThetaMatrix theta2 = ThetaMatrix::from_upper(2, {{0.0, theta(1, 2)}, {0.0, 0.0}});
  const PsComparison cmp = ps_compare(make_torus(theta2), o.radius);
  run.results["ps_compare"] = json{{"c", complex_json(cmp.c)}, {"residual", cmp.residual}};
  r.add("holomorphic: Phi[delbar,a] = c d_tau(a) (Theta_12 sub-torus)", cmp.residual);
}

json build_document(const Run& run, const Options& o, const std::vector<std::string>& args) {
  json doc = run.header;
  doc["command"] = run.command;
  doc["tol"] = run.tol;
  doc["checks"] = checks_to_json(run.report);
  doc["summary"] = json{{"total", run.report.checks().size()},
                        {"passed", run.report.pass_count()},
                        {"failed", static_cast<int>(run.report.checks().size()) - run.report.pass_count()},
                        {"max_residual", run.report.max_residual()},
                        {"all_pass", run.report.all_pass()}};
  if (!run.results.empty()) doc["results"] = run.results;
  json args_json = json::array();
  for (const auto& a : args) args_json.push_back(a);
  doc["metadata"] = json{{"tool", "nck"},
                         {"version", kVersion},
                         {"timestamp", timestamp_utc()},
                         {"args", args_json},
                         {"theta", run.theta.is_null() ? json(nullptr) : run.theta},
                         {"config", config_json(o, run.tol)}};
  return doc;
}

std::string summary_line(const json& doc) {
  const auto& s = doc.at("summary");
  std::ostringstream os;
  os << "nck " << doc.at("command").get<std::string>() << ": " << s.at("passed").get<int>() << "/"
     << s.at("total").get<int>() << " checks passed, max residual " << std::setprecision(3)
     << s.at("max_residual").get<double>();
  if (!s.at("all_pass").get<bool>()) {
    os << "\nfailed:";
    for (const auto& c : doc.at("checks"))
      if (!c.at("pass").get<bool>())
        os << "\n  " << c.at("name").get<std::string>() << " (residual " << c.at("residual").get<double>()
           << ")";
  }
  return os.str();
}

void add_theta(CLI::App* sub, Options& o) {
  sub->add_option("--theta", o.theta_path, "Theta JSON file {\"n\":..,\"theta\":[[..]]}");
  sub->add_option("--n", o.n, "Torus dimension (standard Theta when --theta is absent)");
}

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "Pass threshold (overrides NCK_TOL)");
  sub->add_option("--out", o.out, "Write the JSON report here (atomically)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Kahler structures on noncommutative tori", "nck"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* clifford = app.add_subcommand("clifford", "Gamma matrices, grading and charge conjugations");
  add_theta(clifford, o);
  add_output(clifford, o);

  auto* verify = app.add_subcommand("verify", "N=(2,2) checklist for one or all matchings");
  add_theta(verify, o);
  verify->add_option("--matching", o.matching, "Matching \"1-2,3-4\" or \"all\"");
  verify->add_option("--eps-prime", o.eps_prime, "+1, -1 or both");
  verify->add_option("--dump-ops", o.dump_ops, "Write the operators as JSON");
  add_output(verify, o);

  auto* enumerate = app.add_subcommand("enumerate", "List the perfect matchings of {1..n}");
  add_theta(enumerate, o);
  add_output(enumerate, o);

  auto* forms = app.add_subcommand("forms", "Ranks of the differential-form bimodules");
  add_theta(forms, o);
  add_output(forms, o);

  auto* holo = app.add_subcommand("holo", "Holomorphic calculus");
  holo->require_subcommand(1);
  auto* kernel = holo->add_subcommand("kernel", "Holomorphic elements in box(R)");
  add_theta(kernel, o);
  kernel->add_option("--radius", o.radius, "Truncation radius")->check(CLI::NonNegativeNumber);
  add_output(kernel, o);
  auto* flat = holo->add_subcommand("flat", "Curvature of a delbar-connection");
  add_theta(flat, o);
  flat->add_option("--conn", o.conn_path, "Connection JSON file")->required();
  add_output(flat, o);
  auto* h0 = holo->add_subcommand("h0", "Holomorphic sections in box(R)");
  add_theta(h0, o);
  h0->add_option("--conn", o.conn_path, "Connection JSON file")->required();
  h0->add_option("--radius", o.radius, "Truncation radius")->check(CLI::NonNegativeNumber);
  add_output(h0, o);
  auto* ps = holo->add_subcommand("ps-compare", "Compare [delbar,a] with d_tau on a 2-torus");
  ps->add_option("--theta2", o.theta2_path, "2x2 Theta JSON file");
  ps->add_option("--radius", o.radius, "Test radius")->check(CLI::NonNegativeNumber);
  add_output(ps, o);

  auto* report = app.add_subcommand("report", "Every check for one Theta");
  add_theta(report, o);
  report->add_option("--radius", o.radius, "Truncation radius")->check(CLI::NonNegativeNumber);
  add_output(report, o);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  Run run;
  json doc;
  try {
    run.tol = resolve_tol(o);
    run.report = VerificationReport(run.tol);
    if (clifford->parsed()) {
      run.command = "clifford";
      run_clifford(o, run);
    } else if (verify->parsed()) {
      run.command = "verify";
      run_verify(o, run, err);
    } else if (enumerate->parsed()) {
      run.command = "enumerate";
      run_enumerate(o, run);
    } else if (forms->parsed()) {
      run.command = "forms";
      run_forms(o, run, err);
    } else if (kernel->parsed()) {
      run.command = "holo kernel";
      run_holo_kernel(o, run, err);
    } else if (flat->parsed()) {
      run.command = "holo flat";
      run_holo_flat(o, run, err);
    } else if (h0->parsed()) {
      run.command = "holo h0";
      run_holo_h0(o, run, err);
    } else if (ps->parsed()) {
      run.command = "holo ps-compare";
      run_holo_ps(o, run, err);
    } else if (report->parsed()) {
      run.command = "report";
      run_report(o, run, err);
    }
    doc = build_document(run, o, args);
    const std::string text = doc.dump(2) + "\n";
    if (!o.out.empty()) {
      write_file_atomic(o.out, text);
      out << summary_line(doc) << "\n";
    } else {
      out << text;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return run.report.all_pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace nck::cli
