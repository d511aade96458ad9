#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "ntle/analytics.hpp"
#include "ntle/distribution.hpp"
#include "ntle/error.hpp"
#include "ntle/estimation.hpp"
#include "ntle/gof.hpp"
#include "ntle/io.hpp"
#include "ntle/simulation.hpp"

namespace ntle::cli {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kEvalTargets = {
    "pdf",     "cdf",    "sf",  "hazard", "quantile", "mode",       "entropy",        "renyi",
    "moment",  "mrl",    "rrl", "lorenz", "bonferroni", "stress_strength"};

struct ParamFlags {
  std::optional<double> lambda;
  std::optional<double> beta;
  std::optional<double> delta;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--lambda", lambda, "rate lambda > 0");
    cmd->add_option("--beta", beta, "shape beta > 0");
    cmd->add_option("--delta", delta, "transmutation delta in (-1, 1)");
  }

  NtleParams get(const std::string& context) const {
    for (const auto& [name, value] : {std::pair{"--lambda", lambda}, std::pair{"--beta", beta},
                                      std::pair{"--delta", delta}}) {
      if (!value) throw ParseError(context + ": " + name + " is required");
    }
    return NtleParams(*lambda, *beta, *delta);
  }
};

struct EvalArgs {
  std::string target;
  ParamFlags params;
  std::vector<double> y;
  std::vector<double> prob;
  std::vector<double> t;
  std::vector<double> order;
  std::string grid;
  std::optional<double> delta1;
  std::optional<double> delta2;
  std::optional<double> lambda2;
  std::optional<double> beta2;
};

struct FitArgs {
  std::string data;
  std::string method = "mle";
  std::string format = "text";
  std::string pce_domain = "quantile";
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::optional<int> burn_in;
  std::string output;
};

struct SimulateArgs {
  std::string config;
  std::string out_dir = ".";
  std::string prefix = "simulation";
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<unsigned> threads;
};

struct CompareArgs {
  std::string data;
  std::vector<std::string> methods = {"mle", "mgfe"};
  std::string out_dir = ".";
  std::string prefix = "compare";
  std::size_t grid = 200;
};

struct SampleArgs {
  ParamFlags params;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string output;
};

std::string txt(double x) { return format_text(x, 12); }

void print_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "\t" : "") << cells[i];
  out << "\n";
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw ParseError("--grid expects start:stop:count, got '" + spec + "'");
  double a = 0.0;
  double b = 0.0;
  long count = 0;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    count = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw ParseError("--grid expects start:stop:count, got '" + spec + "'");
  }
  if (count < 1 || count > 10000000) throw ParseError("--grid count must be in [1, 1e7]");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) {
    out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

std::vector<double> points(const EvalArgs& a, const std::vector<double>& explicit_values,
                           const char* flag) {
  std::vector<double> out = explicit_values;
  if (!a.grid.empty()) {
    const auto g = parse_grid(a.grid);
    out.insert(out.end(), g.begin(), g.end());
  }
  if (out.empty()) {
    throw ParseError("eval " + a.target + ": supply " + flag + " values or --grid start:stop:count");
  }
  return out;
}

void cmd_eval(const EvalArgs& a, std::ostream& out) {
  const std::string& target = a.target;
  if (target == "stress_strength") {
    if (!a.params.lambda || !a.params.beta) {
      throw ParseError("eval stress_strength: --lambda and --beta are required");
    }
    if (!a.delta1 || !a.delta2) {
      throw ParseError("eval stress_strength: --delta1 (strength) and --delta2 (stress) are required");
    }
    const NtleParams strength(*a.params.lambda, *a.params.beta, *a.delta1);
    const NtleParams stress(a.lambda2.value_or(*a.params.lambda), a.beta2.value_or(*a.params.beta),
                            *a.delta2);
    print_row(out, {"stress_strength"});
    print_row(out, {txt(ntle::stress_strength(strength, stress))});
    return;
  }

  const NtleParams p = a.params.get("eval " + target);
  if (target == "pdf" || target == "cdf" || target == "sf" || target == "hazard") {
    print_row(out, {"y", target});
    for (double y : points(a, a.y, "--y")) {
      const double v = target == "pdf"   ? pdf(p, y)
                       : target == "cdf" ? cdf(p, y)
                       : target == "sf"  ? survival(p, y)
                                         : hazard(p, y);
      print_row(out, {txt(y), txt(v)});
    }
  } else if (target == "quantile") {
    print_row(out, {"p", "quantile"});
    for (double prob : points(a, a.prob, "--p")) print_row(out, {txt(prob), txt(quantile(p, prob))});
  } else if (target == "lorenz" || target == "bonferroni") {
    print_row(out, {"p", target});
    for (double prob : points(a, a.prob, "--p")) {
      const CurvePoint c = target == "lorenz" ? lorenz_curve(p, prob) : bonferroni_curve(p, prob);
      print_row(out, {txt(prob), txt(c.value)});
    }
  } else if (target == "mode") {
    const ModeResult m = mode(p);
    print_row(out, {"mode", "kind"});
    print_row(out, {txt(m.location), std::string(to_string(m.kind))});
  } else if (target == "entropy") {
    const EntropyResult h = shannon_entropy(p);
    print_row(out, {"entropy", "j_term", "k_term"});
    print_row(out, {txt(h.value), txt(h.j_term), txt(h.k_term)});
  } else if (target == "renyi") {
    if (a.order.empty()) throw ParseError("eval renyi: supply --order values");
    print_row(out, {"order", "renyi", "method"});
    for (double rho : a.order) {
      const bool integer = rho >= 2.0 && std::floor(rho) == rho;
      const double v = integer ? renyi_entropy_integer(p, static_cast<int>(rho))
                               : renyi_entropy_numeric(p, rho);
      print_row(out, {txt(rho), txt(v), integer ? "closed_form" : "quadrature"});
    }
  } else if (target == "moment") {
    if (a.order.empty()) throw ParseError("eval moment: supply --order values");
    std::vector<int> orders;
    for (double k : a.order) {
      if (std::floor(k) != k || k < 1) throw DomainError("eval moment: --order must be integers >= 1");
      orders.push_back(static_cast<int>(k));
    }
    if (a.t.empty()) {
      print_row(out, {"order", "moment"});
      for (int k : orders) print_row(out, {std::to_string(k), txt(raw_moment(p, k))});
    } else {
      print_row(out, {"order", "t", "incomplete_moment"});
      for (int k : orders) {
        for (double t : a.t) print_row(out, {std::to_string(k), txt(t), txt(incomplete_moment(p, k, t))});
      }
    }
  } else if (target == "mrl" || target == "rrl") {
    std::vector<double> ts = a.t;
    ts.insert(ts.end(), a.y.begin(), a.y.end());
    print_row(out, {"t", target});
    for (double t : points(a, ts, "--t")) {
      print_row(out, {txt(t), txt(target == "mrl" ? mean_residual_life(p, t)
                                                  : reversed_residual_life(p, t))});
    }
  }
}

FitOptions fit_options(const FitArgs& a) {
  FitOptions o;
  if (a.pce_domain == "cdf") o.pce_domain = PceDomain::cdf;
  if (a.seed) o.bayes.seed = *a.seed;
  if (a.iterations) o.bayes.iterations = *a.iterations;
  if (a.burn_in) o.bayes.burn_in = *a.burn_in;
  return o;
}

void cmd_fit(const FitArgs& a, std::ostream& out) {
  const auto method = parse_method(a.method);
  if (!method) throw ParseError("fit: unknown method '" + a.method + "'");
  const Sample s = load_dataset(a.data);
  const FitOptions options = fit_options(a);
  if (*method == EstimationMethod::BAYES) options.bayes.validate();
  const FitResult result = fit(*method, s, options);
  if (a.format == "json") {
    out << fit_json(result, s.size()) << "\n";
  } else {
    write_fit_text(out, result, s.size());
  }
  if (!a.output.empty()) {
    std::ofstream file(a.output);
    if (!file) throw ParseError("cannot write '" + a.output + "'");
    file << fit_json(result, s.size()) << "\n";
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream file(path);
  if (!file) throw ParseError("cannot write '" + path.string() + "'");
  return file;
}

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  SimulationConfig config = load_simulation_config(a.config);
  if (a.seed) config.base_seed = *a.seed;
  if (a.replications) config.replications = *a.replications;
  if (a.threads) config.threads = *a.threads;
  config.validate();
  out << "base_seed=" << config.base_seed << "\n";

  const SimulationReport report = run_campaign(config);
  fs::create_directories(a.out_dir);
  const fs::path csv = fs::path(a.out_dir) / (a.prefix + ".csv");
  const fs::path json = fs::path(a.out_dir) / (a.prefix + ".json");
  {
    auto file = open_output(csv);
    write_simulation_csv(file, report);
  }
  {
    auto file = open_output(json);
    write_simulation_json(file, report);
  }

  print_row(out, {"method", "n", "parameter", "bias", "mse", "rmse", "mc_std_error", "failures"});
  for (const SimulationRow& r : report.rows) {
    print_row(out, {std::string(to_string(r.method)), std::to_string(r.n),
                    std::string(to_string(r.parameter)), txt(r.metrics.bias), txt(r.metrics.mse),
                    txt(r.metrics.rmse), txt(r.metrics.mc_std_error), std::to_string(r.failures)});
  }
  for (const SimulationCell& c : report.cells) {
    if (c.diagnostic) out << "warning: " << *c.diagnostic << "\n";
  }
  out << "wrote " << csv.string() << "\n" << "wrote " << json.string() << "\n";
}

void cmd_compare(const CompareArgs& a, std::ostream& out) {
  std::vector<EstimationMethod> methods;
  for (const auto& name : a.methods) {
    const auto m = parse_method(name);
    if (!m) throw ParseError("compare: unknown method '" + name + "'");
    methods.push_back(*m);
  }
  const Sample s = load_dataset(a.data);
  const GofReport report = compare_models(s, methods);
  const PlotData plot = emit_plot_data(report, s, a.grid);

  fs::create_directories(a.out_dir);
  const fs::path base(a.out_dir);
  const std::vector<std::pair<fs::path, std::function<void(std::ostream&)>>> files = {
      {base / (a.prefix + "_table.txt"), [&](std::ostream& o) { write_gof_table(o, report); }},
      {base / (a.prefix + ".json"), [&](std::ostream& o) { write_gof_json(o, report); }},
      {base / (a.prefix + "_plot.csv"), [&](std::ostream& o) { write_plot_csv(o, plot); }},
      {base / (a.prefix + "_histogram.csv"),
       [&](std::ostream& o) { write_histogram_csv(o, plot.histogram); }}};
  write_gof_table(out, report);
  for (const auto& [path, writer] : files) {
    auto file = open_output(path);
    writer(file);
    out << "wrote " << path.string() << "\n";
  }
}

void cmd_sample(const SampleArgs& a, std::ostream& out) {
  const NtleParams p = a.params.get("sample");
  if (a.n < 1) throw DomainError("sample: --n must be >= 1");
  const auto values = sample(p, a.n, a.seed);
  if (a.output.empty()) {
    for (double v : values) out << format_shortest(v) << "\n";
    return;
  }
  auto file = open_output(a.output);
  for (double v : values) file << format_shortest(v) << "\n";
  out << "wrote " << a.n << " values to " << a.output << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmuted logistic-exponential distribution toolkit", "ntle"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ntle 0.1.0");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate distribution functions and analytics");
  eval_cmd->add_option("target", eval.target, "What to evaluate")
      ->required()
      ->check(CLI::IsMember(kEvalTargets));
  eval.params.add_to(eval_cmd);
  eval_cmd->add_option("--y", eval.y, "Points y >= 0")->delimiter(',');
  eval_cmd->add_option("--p", eval.prob, "Probabilities in (0, 1)")->delimiter(',');
  eval_cmd->add_option("--t", eval.t, "Times t for mrl, rrl and incomplete moments")->delimiter(',');
  eval_cmd->add_option("--order", eval.order, "Renyi order or moment order")->delimiter(',');
  eval_cmd->add_option("--grid", eval.grid, "Uniform grid start:stop:count");
  eval_cmd->add_option("--delta1", eval.delta1, "stress_strength: strength delta");
  eval_cmd->add_option("--delta2", eval.delta2, "stress_strength: stress delta");
  eval_cmd->add_option("--lambda2", eval.lambda2, "stress_strength: stress lambda (default --lambda)");
  eval_cmd->add_option("--beta2", eval.beta2, "stress_strength: stress beta (default --beta)");

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the distribution to a dataset");
  fit_cmd->add_option("--data", fit_args.data, "Dataset file")->required();
  fit_cmd->add_option("--method", fit_args.method, "mle, mme, lse, wlse, mps, bayes, ade, cvme, pce or mgfe");
  fit_cmd->add_option("--format", fit_args.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  fit_cmd->add_option("--pce-domain", fit_args.pce_domain, "quantile or cdf")
      ->check(CLI::IsMember({"quantile", "cdf"}));
  fit_cmd->add_option("--seed", fit_args.seed, "Seed of the Bayes chain");
  fit_cmd->add_option("--iterations", fit_args.iterations, "Bayes iterations including burn-in");
  fit_cmd->add_option("--burn-in", fit_args.burn_in, "Bayes burn-in iterations");
  fit_cmd->add_option("--output", fit_args.output, "Also write the result as JSON to this file");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo estimator campaign");
  sim_cmd->add_option("--config", sim.config, "Campaign JSON config")->required();
  sim_cmd->add_option("--out-dir", sim.out_dir, "Directory for the CSV and JSON reports");
  sim_cmd->add_option("--prefix", sim.prefix, "Report file name prefix");
  sim_cmd->add_option("--seed", sim.seed, "Override base_seed");
  sim_cmd->add_option("--replications", sim.replications, "Override replications");
  sim_cmd->add_option("--threads", sim.threads, "Override worker threads (0 = all cores)");

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare exponential, LE and NTLE fits");
  cmp_cmd->add_option("--data", cmp.data, "Dataset file")->required();
  cmp_cmd->add_option("--methods", cmp.methods, "NTLE estimation methods")->delimiter(',');
  cmp_cmd->add_option("--out-dir", cmp.out_dir, "Directory for report and plot files");
  cmp_cmd->add_option("--prefix", cmp.prefix, "Output file name prefix");
  cmp_cmd->add_option("--grid", cmp.grid, "Plot grid size")->check(CLI::Range(2, 1000000));

  SampleArgs smp;
  auto* smp_cmd = app.add_subcommand("sample", "Draw random variates");
  smp.params.add_to(smp_cmd);
  smp_cmd->add_option("--n", smp.n, "Number of draws")->required();
  smp_cmd->add_option("--seed", smp.seed, "Random seed")->required();
  smp_cmd->add_option("--output", smp.output, "Write to this file instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (eval_cmd->parsed()) cmd_eval(eval, out);
    if (fit_cmd->parsed()) cmd_fit(fit_args, out);
    if (sim_cmd->parsed()) cmd_simulate(sim, out);
    if (cmp_cmd->parsed()) cmd_compare(cmp, out);
    if (smp_cmd->parsed()) cmd_sample(smp, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace ntle::cli
