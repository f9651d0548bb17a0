#include "app.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "input.hpp"
#include "json.hpp"
#include "tcut/cuttail.hpp"
#include "tcut/errors.hpp"
#include "tcut/kernels.hpp"
#include "tcut/quasipoly.hpp"
#include "tcut/remez.hpp"
#include "tcut/switching.hpp"

namespace tcut::app {

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- options --------------------------------------------------------------

struct TcutOptions {
  std::string input;
  double tol = 1e-6;
  std::string method = "remez";
  double decisionTol = 1e-13;
  int hullSamples = 4000;
  // Tighter than the oracle's own default: the T-resolution of the hull test
  // scales like sqrt(margin) because the trajectory enters the hull tangentially.
  double hullMargin = 1e-10;
  int hullRefinements = 4;
  std::uint64_t seed = 0;
};

struct LeastDeviationOptions {
  std::string input;
  double horizon = 0.0;
  double eps = 1e-6;
  int maxIterations = 500;
  std::string csv = "least_deviation.csv";
};

struct DwellOptions {
  std::string input;
  double tol = 1e-6;
  double decisionTol = 1e-13;
  std::tuple<int, double, std::uint64_t> simulate{200, 50.0, 0};
  bool simulateGiven = false;
  std::string csv = "dwell_worst.csv";
};

ordered_json snapshot(const TcutOptions& o) {
  return {{"command", "tcut"},
          {"input", o.input},
          {"options",
           {{"tol", o.tol},
            {"method", o.method},
            {"decision-tol", o.decisionTol},
            {"hull-samples", o.hullSamples},
            {"hull-margin", o.hullMargin},
            {"hull-refinements", o.hullRefinements},
            {"seed", o.seed}}}};
}

ordered_json snapshot(const LeastDeviationOptions& o) {
  return {{"command", "least-deviation"},
          {"input", o.input},
          {"options",
           {{"T", o.horizon}, {"eps", o.eps}, {"max-iterations", o.maxIterations}, {"csv", o.csv}}}};
}

ordered_json snapshot(const DwellOptions& o) {
  ordered_json opts = {{"tol", o.tol}, {"decision-tol", o.decisionTol}};
  if (o.simulateGiven) {
    opts["simulate"] = {std::get<0>(o.simulate), std::get<1>(o.simulate), std::get<2>(o.simulate)};
    opts["csv"] = o.csv;
  }
  return {{"command", "dwell"}, {"input", o.input}, {"options", opts}};
}

std::string scalar_arg(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_number()) return v.dump();
  throw UsageError("config snapshot holds an unsupported value: " + v.dump());
}

// Rebuilds the command line recorded in a report's "config" block; the
// caller's own arguments are appended so they take precedence.
std::vector<std::string> expand_config(const std::string& path, std::vector<std::string> rest) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open config");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  const ordered_json& cfg = doc.contains("config") ? doc["config"] : doc;
  if (!cfg.contains("command") || !cfg.contains("input")) {
    throw InputError(path + ": config snapshot needs 'command' and 'input'");
  }
  std::vector<std::string> args{cfg["command"].get<std::string>(), cfg["input"].get<std::string>()};
  if (cfg.contains("options")) {
    for (const auto& [key, value] : cfg["options"].items()) {
      args.push_back("--" + key);
      if (value.is_array()) {
        for (const auto& v : value) args.push_back(scalar_arg(v));
      } else {
        args.push_back(scalar_arg(value));
      }
    }
  }
  args.insert(args.end(), rest.begin(), rest.end());
  return args;
}

// ---- report pieces --------------------------------------------------------

ordered_json spectrum_json(const Spectrum& s) {
  ordered_json items = ordered_json::array();
  for (const auto& it : s.items) {
    items.push_back({{"alpha", it.alpha}, {"beta", it.beta}, {"blockSize", it.blockSize}});
  }
  return {{"eigenvalues", items}, {"minimalDegree", s.minimalDegree}, {"warnings", s.warnings}};
}

ordered_json basis_json(const Basis& b) {
  ordered_json out = ordered_json::array();
  for (const auto& f : b.functions()) {
    out.push_back({{"alpha", f.alpha},
                   {"beta", f.beta},
                   {"power", f.power},
                   {"kind", f.kind == Trig::Cos ? "cos" : "sin"}});
  }
  return out;
}

ordered_json vector_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ordered_json decision_json(const std::optional<CutTailDecision>& d) {
  if (!d) return nullptr;
  return {{"T", d->horizon},
          {"verdict", to_string(d->verdict)},
          {"lower", d->lower},
          {"upper", d->upper},
          {"thresholdMargin", d->thresholdMargin},
          {"iterations", d->iterations},
          {"solverStatus", to_string(d->solverStatus)},
          {"decisionTol", d->decisionTol}};
}

ordered_json tcut_result_json(const CutTailResult& r) {
  ordered_json out = {{"method", to_string(r.method)},
                      {"tcut", r.estimate()},
                      {"tLow", r.tLow},
                      {"tHigh", r.tHigh},
                      {"decisions", r.decisions},
                      {"widened", r.widened},
                      {"minimalDegree", r.minimalDegree}};
  if (r.lowDecision || r.highDecision) {
    out["lowDecision"] = decision_json(r.lowDecision);
    out["highDecision"] = decision_json(r.highDecision);
  }
  return out;
}

ordered_json certificate_json(const LeastDeviationResult& res, const DeviationProblem& problem) {
  const auto& c = res.certificate;
  return {{"points", c.points},
          {"signs", c.signs},
          {"globalSign", c.globalSign},
          {"coneCoefficients", vector_json(c.coneCoeffs)},
          {"level", c.lower},
          {"verified", verify_certificate(res, problem)}};
}

ordered_json trace_json(const std::vector<StepRecord>& trace) {
  ordered_json out = ordered_json::array();
  for (const auto& s : trace) {
    out.push_back({{"k", s.iteration},
                   {"b", s.lowerAfter},
                   {"B", s.upperAfter},
                   {"supNorm", s.supNorm},
                   {"maximizer", s.maximizer},
                   {"inserted", s.inserted},
                   {"replaced", s.replaced},
                   {"gamma0", s.gamma0},
                   {"Gamma", s.gammaSum},
                   {"perturbed", s.perturbed},
                   {"slow", s.slow},
                   {"signFlips", s.signFlips}});
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<std::pair<double, double>>& rows) {
  std::ofstream f(path);
  if (!f) throw InputError(path + ": cannot write CSV");
  f << "t,value\n";
  for (const auto& [t, v] : rows) f << fmt(t) << ',' << fmt(v) << '\n';
}

struct Report {
  ordered_json body;
  ordered_json timings = ordered_json::object();
  int exitCode = kOk;
  std::string errorLine;  // emitted after the report when exitCode != 0
};

ordered_json report_header(const std::string& command, const std::vector<std::string>& argv,
                           const InputDocument& doc, ordered_json config) {
  return {{"tool", {{"name", kToolName}, {"version", kVersion}}},
          {"command", {{"name", command}, {"argv", argv}}},
          {"input", {{"path", doc.path}, {"sha256", doc.sha256}}},
          {"config", std::move(config)}};
}

void require_hurwitz(const SystemMatrix& a) {
  if (!is_hurwitz(a)) {
    std::ostringstream msg;
    msg << "matrix is not Hurwitz (spectral abscissa " << fmt(spectral_abscissa(a)) << ")";
    throw NotHurwitz(msg.str());
  }
}

// ---- commands -------------------------------------------------------------

Report cmd_tcut(const TcutOptions& o, const std::vector<std::string>& argv) {
  const auto t0 = Clock::now();
  const InputDocument doc = load_document(o.input);
  const SystemMatrix a = matrix_from_document(doc);
  require_hurwitz(a);

  CutTailConfig cfg;
  cfg.decisionTol = o.decisionTol;
  cfg.hullMarginTol = o.hullMargin;
  cfg.hullRefinements = o.hullRefinements;
  const Spectrum spectrum = compute_spectrum(a, cfg.spectral);

  std::vector<std::string> methods;
  if (o.method == "all") {
    methods = {"remez", "planar", "hull"};
  } else {
    methods = {o.method};
  }

  struct Outcome {
    std::optional<CutTailResult> result;
    std::string skipped;
    double seconds = 0.0;
  };
  auto run_method = [&](const std::string& m) {
    Outcome out;
    const auto start = Clock::now();
    try {
      if (m == "remez") {
        out.result = compute_tcut(a, o.tol, cfg);
      } else if (m == "planar") {
        out.result = tcut_planar(a, cfg.spectral);
      } else {
        out.result = tcut_hull(a, o.tol, o.hullSamples, o.seed, cfg);
      }
    } catch (const ValidationError& e) {
      // Shape restrictions only excuse a method when cross-checking.
      if (o.method != "all") throw;
      out.skipped = e.what();
    }
    out.seconds = seconds_since(start);
    return out;
  };

  std::vector<std::future<Outcome>> futures;
  for (const auto& m : methods) futures.push_back(std::async(std::launch::async, run_method, m));
  std::vector<Outcome> outcomes;
  for (auto& f : futures) outcomes.push_back(f.get());

  Report rep;
  rep.body = report_header("tcut", argv, doc, snapshot(o));
  ordered_json results = {{"dimension", a.dim()}, {"spectrum", spectrum_json(spectrum)}};
  ordered_json perMethod = ordered_json::object();
  std::vector<double> estimates;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto& oc = outcomes[i];
    if (oc.result) {
      perMethod[methods[i]] = tcut_result_json(*oc.result);
      estimates.push_back(oc.result->estimate());
    } else {
      perMethod[methods[i]] = {{"skipped", oc.skipped}};
    }
    rep.timings[methods[i] + "_seconds"] = oc.seconds;
  }
  results["methods"] = perMethod;
  results["tcut"] = estimates.empty() ? ordered_json(nullptr) : ordered_json(estimates.front());
  if (o.method == "all") {
    double disc = 0.0;
    for (double x : estimates)
      for (double y : estimates) disc = std::max(disc, std::abs(x - y));
    results["maxDiscrepancy"] = disc;
  }
  rep.body["results"] = results;

  // Alternance certificate of the least-deviation problem just above T_cut.
  ordered_json certs = ordered_json::object();
  const auto& first = outcomes.front().result;
  if (first && spectrum.minimalDegree > 1 && first->tHigh > 0.0) {
    const auto start = Clock::now();
    const Basis basis = build_basis(spectrum);
    const DeviationProblem problem{basis, first->tHigh, {moment_vector(basis, first->tHigh)}};
    RemezConfig rc = cfg.remez;
    rc.eps = 1e-9;
    const LeastDeviationResult res = solve_least_deviation(problem, rc);
    certs["atTHigh"] = certificate_json(res, problem);
    certs["atTHigh"]["T"] = first->tHigh;
    certs["atTHigh"]["lower"] = res.lower;
    certs["atTHigh"]["upper"] = res.upper;
    rep.timings["certificate_seconds"] = seconds_since(start);
  }
  rep.body["certificates"] = certs;
  rep.timings["total_seconds"] = seconds_since(t0);
  return rep;
}

Report cmd_least_deviation(const LeastDeviationOptions& o, const std::vector<std::string>& argv) {
  const auto t0 = Clock::now();
  if (!(o.horizon > 0.0)) throw ValidationError("--T must be positive");
  const InputDocument doc = load_document(o.input);
  const SystemMatrix a = matrix_from_document(doc);
  const Spectrum spectrum = compute_spectrum(a);
  const Basis basis = build_basis(spectrum);
  const DeviationProblem problem{basis, o.horizon, {moment_vector(basis, o.horizon)}};
  RemezConfig rc;
  rc.eps = o.eps;
  rc.maxIterations = o.maxIterations;
  const LeastDeviationResult res = solve_least_deviation(problem, rc);

  Report rep;
  rep.body = report_header("least-deviation", argv, doc, snapshot(o));
  ordered_json coeffs = ordered_json::array();
  const auto labels = basis_json(basis);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    ordered_json c = labels[i];
    c["coefficient"] = res.polynomial.coefficients(static_cast<Eigen::Index>(i));
    coeffs.push_back(c);
  }
  ordered_json results = {{"T", o.horizon},
                          {"spectrum", spectrum_json(spectrum)},
                          {"lower", res.lower},
                          {"upper", res.upper},
                          {"gap", res.upper - res.lower},
                          {"status", to_string(res.status)},
                          {"iterations", res.iterations},
                          {"polynomial", coeffs},
                          {"warnings", res.warnings},
                          {"csv", o.csv}};
  rep.body["results"] = results;
  rep.body["certificates"] = {{"alternance", certificate_json(res, problem)}};
  ordered_json trace = trace_json(res.trace);
  if (!res.trace.empty()) {
    trace.insert(trace.begin(), ordered_json{{"k", 0},
                                             {"b", res.trace.front().lowerBefore},
                                             {"B", res.trace.front().upperBefore}});
  }
  rep.body["trace"] = trace;

  constexpr int kPoints = 1000;
  std::vector<std::pair<double, double>> rows;
  rows.reserve(kPoints);
  for (int j = 0; j < kPoints; ++j) {
    const double t = o.horizon * j / (kPoints - 1);
    rows.emplace_back(t, eval(res.polynomial, basis, t));
  }
  write_csv(o.csv, rows);
  rep.timings["total_seconds"] = seconds_since(t0);
  return rep;
}

Report cmd_dwell(const DwellOptions& o, const std::vector<std::string>& argv) {
  const auto t0 = Clock::now();
  const InputDocument doc = load_document(o.input);
  const SwitchedSystem sys = system_from_document(doc);
  CutTailConfig cfg;
  cfg.decisionTol = o.decisionTol;
  const DwellReport dr = critical_bounds(sys, o.tol, cfg);
  Report rep;
  rep.body = report_header("dwell", argv, doc, snapshot(o));
  rep.timings["critical_bounds_seconds"] = seconds_since(t0);

  auto opt = [](const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json rows = ordered_json::array();
  std::vector<std::string> table;
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-8s %12s %12s %12s %12s", "regime", "hurwitz", "m", "M",
                "T_cut", "m+T_cut");
  table.emplace_back(line);
  auto cell = [](const std::optional<double>& v) {
    char buf[32];
    if (v) {
      std::snprintf(buf, sizeof buf, "%.6f", *v);
    } else {
      std::snprintf(buf, sizeof buf, "-");
    }
    return std::string(buf);
  };
  for (const auto& r : dr.rows) {
    rows.push_back({{"label", r.label},
                    {"hurwitz", r.hurwitz},
                    {"m", r.dwell},
                    {"M", opt(r.upper)},
                    {"tcut", opt(r.tcut)},
                    {"tcutLow", opt(r.tcutLow)},
                    {"tcutHigh", opt(r.tcutHigh)},
                    {"criticalM", opt(r.criticalM)},
                    {"coversCritical", r.upper && r.criticalM && *r.upper >= *r.criticalM}});
    std::snprintf(line, sizeof line, "%-12s %-8s %12s %12s %12s %12s", r.label.c_str(),
                  r.hurwitz ? "yes" : "no", cell(r.dwell).c_str(),
                  r.upper ? cell(r.upper).c_str() : "inf", cell(r.tcut).c_str(),
                  cell(r.criticalM).c_str());
    table.emplace_back(line);
  }
  ordered_json results = {{"rows", rows},
                          {"allHurwitz", dr.allHurwitz},
                          {"boundsCoverCritical", dr.boundsCoverCritical},
                          {"verdictNote", dr.verdictNote},
                          {"table", table}};

  if (o.simulateGiven) {
    const auto [trials, horizon, seed] = o.simulate;
    if (!dr.allHurwitz) {
      results["simulation"] = {{"skipped", "a regime is not Hurwitz"}};
    } else {
      const auto start = Clock::now();
      std::vector<double> tcuts;
      for (const auto& r : dr.rows) tcuts.push_back(*r.tcut);
      const SearchOutcome so = random_switching_search(sys, tcuts, trials, horizon, seed);
      ordered_json law = ordered_json::array();
      for (const auto& s : so.worstLaw.segments) {
        law.push_back({{"label", s.label}, {"duration", s.duration}});
      }
      std::vector<double> sorted = so.growth;
      std::sort(sorted.begin(), sorted.end());
      results["simulation"] = {{"trials", trials},
                               {"horizon", horizon},
                               {"seed", seed},
                               {"worstGrowth", so.worstGrowth},
                               {"worstTrial", so.worstTrial},
                               {"medianGrowth", sorted[sorted.size() / 2]},
                               {"minGrowth", sorted.front()},
                               {"worstInitial", vector_json(so.worstInitial)},
                               {"worstLaw", law},
                               {"csv", o.csv}};
      const auto traj = simulate(sys, so.worstLaw, so.worstInitial, 25);
      std::vector<std::pair<double, double>> csvRows;
      for (const auto& s : traj) {
        if (s.t > horizon) break;
        csvRows.emplace_back(s.t, s.norm);
      }
      write_csv(o.csv, csvRows);
      rep.timings["simulation_seconds"] = seconds_since(start);
    }
  }
  rep.body["results"] = results;
  rep.body["certificates"] = ordered_json::object();
  rep.timings["total_seconds"] = seconds_since(t0);
  if (!dr.allHurwitz) {
    rep.exitCode = kNotHurwitz;
    rep.errorLine = dr.verdictNote;
  }
  return rep;
}

// ---- driver ---------------------------------------------------------------

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

void emit_error(std::ostream& err, const char* code, const std::string& msg) {
  err << kToolName << ": error: " << code << ": " << one_line(msg) << '\n';
}

int dispatch(const std::vector<std::string>& original, std::ostream& out) {
  std::vector<std::string> args;
  std::optional<std::string> configPath;
  for (std::size_t i = 0; i < original.size(); ++i) {
    const auto& a = original[i];
    if (a == "--config") {
      if (i + 1 >= original.size()) throw UsageError("--config needs a file");
      configPath = original[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      configPath = a.substr(9);
    } else {
      args.push_back(a);
    }
  }
  if (configPath) args = expand_config(*configPath, std::move(args));

  CLI::App app{"Cut tail points of linear switching systems", kToolName};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  std::string reportPath;
  app.add_option("--report", reportPath, "Write the JSON report here instead of stdout")
      ->envname("TCUT_REPORT");
  app.add_option("--config", configPath,
                 "Replay the config snapshot of an earlier report (flags still override)");

  TcutOptions to;
  auto* tc = app.add_subcommand("tcut", "Compute T_cut of a Hurwitz matrix");
  tc->add_option("input", to.input, "Matrix file")->required();
  tc->add_option("--tol", to.tol, "Bisection tolerance")
      ->envname("TCUT_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  tc->add_option("--method", to.method, "remez, planar, hull or all")
      ->envname("TCUT_METHOD")
      ->check(CLI::IsMember({"remez", "planar", "hull", "all"}))
      ->capture_default_str();
  tc->add_option("--decision-tol", to.decisionTol, "Cut-tail threshold offset above 1")
      ->envname("TCUT_DECISION_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  tc->add_option("--hull-samples", to.hullSamples, "Trajectory samples for the hull method")
      ->envname("TCUT_HULL_SAMPLES")
      ->check(CLI::Range(4, 10000000))
      ->capture_default_str();
  tc->add_option("--hull-margin", to.hullMargin, "Interior margin of the hull method")
      ->envname("TCUT_HULL_MARGIN")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  tc->add_option("--hull-refinements", to.hullRefinements, "Local resampling rounds")
      ->envname("TCUT_HULL_REFINEMENTS")
      ->check(CLI::Range(0, 20))
      ->capture_default_str();
  tc->add_option("--seed", to.seed, "Seed of the hull method's initial state")
      ->envname("TCUT_SEED")
      ->capture_default_str();

  LeastDeviationOptions lo;
  auto* ld = app.add_subcommand("least-deviation", "Least-deviation problem at a fixed T");
  ld->add_option("input", lo.input, "Matrix file")->required();
  ld->add_option("--T", lo.horizon, "Horizon T")->required();
  ld->add_option("--eps", lo.eps, "Stop once B - b < eps")
      ->envname("TCUT_EPS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ld->add_option("--max-iterations", lo.maxIterations, "Iteration cap")
      ->envname("TCUT_MAX_ITERATIONS")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  ld->add_option("--csv", lo.csv, "Plot data (t, p(t)) on 1000 points")->capture_default_str();

  DwellOptions dwo;
  auto* dw = app.add_subcommand("dwell", "Critical upper dwell bounds of a switching system");
  dw->add_option("input", dwo.input, "System file")->required();
  dw->add_option("--tol", dwo.tol, "Bisection tolerance for each T_cut")
      ->envname("TCUT_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  dw->add_option("--decision-tol", dwo.decisionTol, "Cut-tail threshold offset above 1")
      ->envname("TCUT_DECISION_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* sim = dw->add_option("--simulate", dwo.simulate,
                             "Random switching search: trials horizon seed");
  dw->add_option("--csv", dwo.csv, "Norm along the worst law found by --simulate")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  dwo.simulateGiven = sim->count() > 0;
  if (dwo.simulateGiven) {
    if (std::get<0>(dwo.simulate) < 1) throw UsageError("--simulate: trials must be at least 1");
    if (!(std::get<1>(dwo.simulate) > 0.0)) throw UsageError("--simulate: horizon must be positive");
  }

  Report rep;
  if (tc->parsed()) {
    rep = cmd_tcut(to, original);
  } else if (ld->parsed()) {
    rep = cmd_least_deviation(lo, original);
  } else {
    rep = cmd_dwell(dwo, original);
  }
  rep.body["timings"] = rep.timings;
  const std::string text = rep.body.dump(2) + "\n";
  if (reportPath.empty()) {
    out << text;
  } else {
    std::ofstream f(reportPath);
    if (!f) throw InputError(reportPath + ": cannot write report");
    f << text;
  }
  if (rep.exitCode != kOk) throw NotHurwitz(rep.errorLine);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out);
  } catch (const UsageError& e) {
    emit_error(err, "usage", e.what());
    return kUsage;
  } catch (const InputError& e) {
    emit_error(err, "input", e.what());
    return kUsage;
  } catch (const ValidationError& e) {
    emit_error(err, "validation", e.what());
    return kUsage;
  } catch (const NotHurwitz& e) {
    emit_error(err, "not_hurwitz", e.what());
    return kNotHurwitz;
  } catch (const Error& e) {
    emit_error(err, "numerical", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what());
    return kNumerical;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace tcut::app
