#include "ntle/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "ntle/error.hpp"

namespace ntle {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_number(std::string token) {
  if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
    token = trim(std::string_view(token).substr(1, token.size() - 2));
  }
  std::string_view view(token);
  if (!view.empty() && view.front() == '+') view.remove_prefix(1);
  if (view.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
  if (ec != std::errc() || ptr != view.data() + view.size()) return std::nullopt;
  return value;
}

json number(double x) {
  return std::isfinite(x) ? json(x) : json(nullptr);
}

json triple(const std::array<double, 3>& t) {
  return json{{"lambda", number(t[0])}, {"beta", number(t[1])}, {"delta", number(t[2])}};
}

json params_json(const NtleParams& p) {
  return triple({p.lambda(), p.beta(), p.delta()});
}

void reject_unknown(const json& object, std::initializer_list<std::string_view> known,
                    const std::string& prefix) {
  for (const auto& item : object.items()) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || item.key() == k;
    if (!ok) throw ParseError("config: unknown key '" + prefix + item.key() + "'");
  }
}

double get_real(const json& j, const std::string& key) {
  if (!j.is_number()) throw ParseError("config: '" + key + "' must be a number");
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ParseError("config: '" + key + "' must be an integer");
  return j.get<long long>();
}

NtleParams parse_true_params(const json& j) {
  if (!j.is_object()) throw ParseError("config: 'true_params' must be an object");
  reject_unknown(j, {"lambda", "beta", "delta"}, "true_params.");
  for (const char* k : {"lambda", "beta", "delta"}) {
    if (!j.contains(k)) throw ParseError(std::string("config: missing key 'true_params.") + k + "'");
  }
  try {
    return NtleParams(get_real(j["lambda"], "true_params.lambda"),
                      get_real(j["beta"], "true_params.beta"),
                      get_real(j["delta"], "true_params.delta"));
  } catch (const DomainError& e) {
    throw ParseError(std::string("config: true_params: ") + e.what());
  }
}

BayesConfig parse_bayes(const json& j) {
  if (!j.is_object()) throw ParseError("config: 'bayes' must be an object");
  reject_unknown(j,
                 {"prior_shape_lambda", "prior_rate_lambda", "prior_shape_beta", "prior_rate_beta",
                  "iterations", "burn_in", "proposal_scales", "adapt", "seed"},
                 "bayes.");
  BayesConfig b;
  auto real = [&](const char* key, double& field) {
    if (j.contains(key)) field = get_real(j[key], std::string("bayes.") + key);
  };
  real("prior_shape_lambda", b.prior_shape_lambda);
  real("prior_rate_lambda", b.prior_rate_lambda);
  real("prior_shape_beta", b.prior_shape_beta);
  real("prior_rate_beta", b.prior_rate_beta);
  if (j.contains("iterations")) b.iterations = static_cast<int>(get_integer(j["iterations"], "bayes.iterations"));
  if (j.contains("burn_in")) b.burn_in = static_cast<int>(get_integer(j["burn_in"], "bayes.burn_in"));
  if (j.contains("proposal_scales")) {
    const json& s = j["proposal_scales"];
    if (!s.is_array() || s.size() != 3) {
      throw ParseError("config: 'bayes.proposal_scales' must be an array of three numbers");
    }
    for (int i = 0; i < 3; ++i) b.proposal_scales[i] = get_real(s[i], "bayes.proposal_scales");
  }
  if (j.contains("adapt")) {
    if (!j["adapt"].is_boolean()) throw ParseError("config: 'bayes.adapt' must be a boolean");
    b.adapt = j["adapt"].get<bool>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw ParseError("config: 'bayes.seed' must be a non-negative integer");
    }
    b.seed = j["seed"].get<std::uint64_t>();
  }
  try {
    b.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return b;
}

}  // namespace

std::vector<double> parse_dataset(std::istream& in, std::string_view source) {
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const bool first = !seen_content;
    seen_content = true;
    std::string cell = text;
    if (const auto comma = text.find(','); comma != std::string::npos) {
      if (!trim(std::string_view(text).substr(comma + 1)).empty()) {
        throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                         ": expected a single column, got '" + text + "'");
      }
      cell = trim(std::string_view(text).substr(0, comma));
    }
    const auto value = parse_number(cell);
    if (!value) {
      if (first) continue;  // header
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                       ": not a number: '" + cell + "'");
    }
    if (!std::isfinite(*value) || !(*value > 0.0)) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                       ": observations must be finite and > 0, got '" + cell + "'");
    }
    values.push_back(*value);
  }
  if (values.empty()) throw ParseError(std::string(source) + ": no observations");
  return values;
}

Sample load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset '" + path.string() + "'");
  auto values = parse_dataset(in, path.string());
  if (values.size() < Sample::kMinSize) {
    throw ParseError(path.string() + ": need at least " + std::to_string(Sample::kMinSize) +
                     " observations, got " + std::to_string(values.size()));
  }
  return Sample(std::move(values));
}

SimulationConfig parse_simulation_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config: top level must be a JSON object");
  reject_unknown(j,
                 {"true_params", "sample_sizes", "methods", "replications", "base_seed", "bayes",
                  "threads"},
                 "");
  for (const char* k : {"true_params", "sample_sizes", "methods"}) {
    if (!j.contains(k)) throw ParseError(std::string("config: missing key '") + k + "'");
  }

  SimulationConfig c;
  c.true_params = parse_true_params(j["true_params"]);

  if (!j["sample_sizes"].is_array()) throw ParseError("config: 'sample_sizes' must be an array");
  for (const json& n : j["sample_sizes"]) {
    const long long v = get_integer(n, "sample_sizes");
    if (v < static_cast<long long>(Sample::kMinSize)) {
      throw ParseError("config: every sample size must be >= 3, got " + std::to_string(v));
    }
    c.sample_sizes.push_back(static_cast<std::size_t>(v));
  }

  if (!j["methods"].is_array()) throw ParseError("config: 'methods' must be an array");
  for (const json& m : j["methods"]) {
    if (!m.is_string()) throw ParseError("config: 'methods' entries must be strings");
    const auto method = parse_method(m.get<std::string>());
    if (!method) throw ParseError("config: unknown method '" + m.get<std::string>() + "'");
    c.methods.push_back(*method);
  }

  if (j.contains("replications")) {
    const long long r = get_integer(j["replications"], "replications");
    if (r < 1 || r > 100000000) throw ParseError("config: 'replications' must be >= 1");
    c.replications = static_cast<int>(r);
  }
  if (j.contains("base_seed")) {
    if (!j["base_seed"].is_number_unsigned()) {
      throw ParseError("config: 'base_seed' must be a non-negative integer");
    }
    c.base_seed = j["base_seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    const long long t = get_integer(j["threads"], "threads");
    if (t < 0) throw ParseError("config: 'threads' must be >= 0");
    c.threads = static_cast<unsigned>(t);
  }
  if (j.contains("bayes")) c.bayes = parse_bayes(j["bayes"]);

  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return c;
}

SimulationConfig load_simulation_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_simulation_config(buffer.str());
}

std::string format_shortest(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string format_text(double x, int significant_digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", significant_digits, x);
  return buf.data();
}

std::string fit_json(const FitResult& fit, std::size_t n) {
  json j{{"method", std::string(to_string(fit.method))},
         {"n", n},
         {"params", params_json(fit.params)},
         {"objective", number(fit.objective)},
         {"converged", fit.converged},
         {"iterations", fit.iterations}};
  if (fit.std_error) j["stderr"] = triple(*fit.std_error);
  if (fit.ci95) {
    json ci;
    const char* names[] = {"lambda", "beta", "delta"};
    for (int i = 0; i < 3; ++i) {
      ci[names[i]] = json::array({number((*fit.ci95)[i].lower), number((*fit.ci95)[i].upper)});
    }
    j["ci95"] = ci;
  }
  if (fit.acceptance_rate) j["acceptance_rate"] = number(*fit.acceptance_rate);
  if (!fit.alternatives.empty()) {
    json alts = json::array();
    for (const auto& a : fit.alternatives) alts.push_back(params_json(a));
    j["alternatives"] = alts;
  }
  j["warnings"] = fit.warnings;
  return j.dump(2);
}

void write_fit_text(std::ostream& out, const FitResult& fit, std::size_t n) {
  const char* names[] = {"lambda", "beta", "delta"};
  const std::array<double, 3> theta = {fit.params.lambda(), fit.params.beta(), fit.params.delta()};
  out << "method      " << to_string(fit.method) << "\n"
      << "n           " << n << "\n"
      << "converged   " << (fit.converged ? "true" : "false") << "\n"
      << "iterations  " << fit.iterations << "\n"
      << "objective   " << format_text(fit.objective) << "\n";
  if (fit.acceptance_rate) out << "acceptance  " << format_text(*fit.acceptance_rate) << "\n";
  out << "\n" << std::left << std::setw(10) << "parameter" << std::setw(20) << "estimate";
  if (fit.std_error) out << std::setw(20) << "stderr";
  if (fit.ci95) out << "95% interval";
  out << "\n";
  for (int i = 0; i < 3; ++i) {
    out << std::setw(10) << names[i] << std::setw(20) << format_text(theta[i]);
    if (fit.std_error) out << std::setw(20) << format_text((*fit.std_error)[i]);
    if (fit.ci95) {
      out << "[" << format_text((*fit.ci95)[i].lower) << ", " << format_text((*fit.ci95)[i].upper)
          << "]";
    }
    out << "\n";
  }
  for (const auto& a : fit.alternatives) out << "alternative " << a.to_string() << "\n";
  for (const auto& w : fit.warnings) out << "warning: " << w << "\n";
}

void write_simulation_csv(std::ostream& out, const SimulationReport& report) {
  out << "method,n,parameter,bias,mse,rmse,mc_std_error,failures,used\n";
  for (const SimulationRow& r : report.rows) {
    out << to_string(r.method) << ',' << r.n << ',' << to_string(r.parameter) << ','
        << format_shortest(r.metrics.bias) << ',' << format_shortest(r.metrics.mse) << ','
        << format_shortest(r.metrics.rmse) << ',' << format_shortest(r.metrics.mc_std_error) << ','
        << r.failures << ',' << r.used << '\n';
  }
}

void write_simulation_json(std::ostream& out, const SimulationReport& report) {
  const SimulationConfig& c = report.config;
  json config{{"true_params", params_json(c.true_params)},
              {"sample_sizes", c.sample_sizes},
              {"replications", c.replications},
              {"base_seed", c.base_seed}};
  json methods = json::array();
  for (EstimationMethod m : c.methods) methods.push_back(std::string(to_string(m)));
  config["methods"] = methods;
  if (c.bayes) {
    const BayesConfig& b = *c.bayes;
    config["bayes"] = {{"prior_shape_lambda", b.prior_shape_lambda},
                       {"prior_rate_lambda", b.prior_rate_lambda},
                       {"prior_shape_beta", b.prior_shape_beta},
                       {"prior_rate_beta", b.prior_rate_beta},
                       {"iterations", b.iterations},
                       {"burn_in", b.burn_in},
                       {"proposal_scales", b.proposal_scales},
                       {"adapt", b.adapt},
                       {"seed", b.seed}};
  }

  json cells = json::array();
  for (const SimulationCell& cell : report.cells) {
    json parameters;
    for (const SimulationRow& r : report.rows) {
      if (r.method != cell.method || r.n != cell.n) continue;
      parameters[std::string(to_string(r.parameter))] = {{"bias", number(r.metrics.bias)},
                                                         {"mse", number(r.metrics.mse)},
                                                         {"rmse", number(r.metrics.rmse)},
                                                         {"mc_std_error", number(r.metrics.mc_std_error)}};
    }
    json j{{"method", std::string(to_string(cell.method))},
           {"n", cell.n},
           {"failures", cell.failures},
           {"used", c.replications - cell.failures},
           {"elapsed_seconds", cell.elapsed_seconds},
           {"parameters", parameters}};
    if (cell.diagnostic) j["diagnostic"] = *cell.diagnostic;
    cells.push_back(j);
  }
  json root{{"config", config},
            {"failure_policy", std::string(SimulationReport::kFailurePolicy)},
            {"cells", cells}};
  out << root.dump(2) << '\n';
}

void write_gof_table(std::ostream& out, const GofReport& report) {
  out << "m = " << report.m << "\n";
  out << std::left << std::setw(22) << "model" << std::right;
  for (const char* h : {"lambda", "beta", "delta", "loglik", "AIC", "BIC", "CAIC", "HQIC", "KS",
                        "KS p-value"}) {
    out << std::setw(14) << h;
  }
  out << "\n";
  auto cell = [&](double x) { out << std::setw(14) << format_text(x, 8); };
  for (const GofRow& r : report.rows) {
    out << std::left << std::setw(22) << r.model.label() << std::right;
    if (r.failure) {
      out << "  failed: " << *r.failure << "\n";
      continue;
    }
    cell(r.model.params.lambda());
    cell(r.model.params.beta());
    cell(r.model.params.delta());
    cell(r.loglik);
    cell(r.criteria.aic);
    cell(r.criteria.bic);
    cell(r.criteria.caic);
    cell(r.criteria.hqic);
    cell(r.ks_stat);
    cell(r.ks_pvalue);
    if (!r.converged) out << "  (not converged)";
    out << "\n";
  }
}

void write_gof_json(std::ostream& out, const GofReport& report) {
  json rows = json::array();
  for (const GofRow& r : report.rows) {
    json j{{"model", r.model.label()},
           {"kind", std::string(to_string(r.model.kind))},
           {"method", std::string(to_string(r.model.method))},
           {"parameter_count", r.model.parameter_count()},
           {"converged", r.converged}};
    if (r.failure) {
      j["failure"] = *r.failure;
    } else {
      j["params"] = params_json(r.model.params);
      j["loglik"] = number(r.loglik);
      j["aic"] = number(r.criteria.aic);
      j["bic"] = number(r.criteria.bic);
      j["caic"] = number(r.criteria.caic);
      j["hqic"] = number(r.criteria.hqic);
      j["ks_stat"] = number(r.ks_stat);
      j["ks_pvalue"] = number(r.ks_pvalue);
    }
    rows.push_back(j);
  }
  out << json{{"m", report.m}, {"models", rows}}.dump(2) << '\n';
}

void write_plot_csv(std::ostream& out, const PlotData& plot) {
  out << "y,empirical_cdf";
  for (const auto& l : plot.labels) out << ",cdf_" << l;
  for (const auto& l : plot.labels) out << ",pdf_" << l;
  out << '\n';
  for (std::size_t i = 0; i < plot.y.size(); ++i) {
    out << format_shortest(plot.y[i]) << ',' << format_shortest(plot.empirical_cdf[i]);
    for (const auto& c : plot.cdf) out << ',' << format_shortest(c[i]);
    for (const auto& d : plot.pdf) out << ',' << format_shortest(d[i]);
    out << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "left,right,count,density\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out << format_shortest(h.edges[b]) << ',' << format_shortest(h.edges[b + 1]) << ','
        << h.counts[b] << ',' << format_shortest(h.density[b]) << '\n';
  }
}

}  // namespace ntle
