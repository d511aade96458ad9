#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ntle/error.hpp"
#include "ntle/io.hpp"

namespace {

using ntle::ParseError;

std::vector<double> parse(const std::string& text) {
  std::istringstream in(text);
  return ntle::parse_dataset(in, "data.csv");
}

std::string message_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(Dataset, PlainAndCsv) {
  EXPECT_EQ(parse("1.5\n2\n\n# comment\n3e1\n"), (std::vector<double>{1.5, 2, 30}));
  EXPECT_EQ(parse("deaths\n4,\n5\n"), (std::vector<double>{4, 5}));
  EXPECT_EQ(parse("  7  \r\n8\r\n"), (std::vector<double>{7, 8}));
}

TEST(Dataset, RejectsWithLineNumbers) {
  EXPECT_EQ(message_of("1\n2\n-3\n"),
            "data.csv:3: observations must be finite and > 0, got '-3'");
  EXPECT_NE(message_of("1\n0\n").find("data.csv:2"), std::string::npos);
  EXPECT_NE(message_of("1\nabc\n").find("data.csv:2: not a number"), std::string::npos);
  EXPECT_NE(message_of("1,2\n").find("single column"), std::string::npos);
  EXPECT_NE(message_of("x\n1\ny\n").find("data.csv:3"), std::string::npos);
  EXPECT_NE(message_of("inf\n").find("data.csv:1"), std::string::npos);
  EXPECT_EQ(message_of(""), "data.csv: no observations");
  EXPECT_EQ(message_of("header\n# nothing\n"), "data.csv: no observations");
}

TEST(Dataset, LoadRequiresThreeValues) {
  EXPECT_THROW(ntle::load_dataset("/nonexistent/file.txt"), ParseError);
}

constexpr const char* kConfig = R"({
  "true_params": {"lambda": 1.0, "beta": 1.5, "delta": 0.5},
  "sample_sizes": [20, 50],
  "methods": ["mle", "BAYES"],
  "replications": 7,
  "base_seed": 18446744073709551615,
  "bayes": {"iterations": 500, "burn_in": 100, "proposal_scales": [0.2, 0.2, 0.3], "seed": 3}
})";

TEST(Config, ParsesAllKeys) {
  const auto c = ntle::parse_simulation_config(kConfig);
  EXPECT_EQ(c.true_params, ntle::NtleParams(1.0, 1.5, 0.5));
  EXPECT_EQ(c.sample_sizes, (std::vector<std::size_t>{20, 50}));
  EXPECT_EQ(c.methods.size(), 2u);
  EXPECT_EQ(c.methods[1], ntle::EstimationMethod::BAYES);
  EXPECT_EQ(c.replications, 7);
  EXPECT_EQ(c.base_seed, std::numeric_limits<std::uint64_t>::max());
  ASSERT_TRUE(c.bayes.has_value());
  EXPECT_EQ(c.bayes->iterations, 500);
  EXPECT_EQ(c.bayes->proposal_scales[2], 0.3);
  EXPECT_EQ(c.bayes->seed, 3u);
}

TEST(Config, Defaults) {
  const auto c = ntle::parse_simulation_config(
      R"({"true_params": {"lambda": 2, "beta": 1, "delta": 0}, "sample_sizes": [10], "methods": ["LSE"]})");
  EXPECT_EQ(c.replications, 1000);
  EXPECT_EQ(c.base_seed, 0u);
  EXPECT_FALSE(c.bayes.has_value());
}

TEST(Config, ErrorsNameTheKey) {
  auto error_of = [](const std::string& text) {
    try {
      ntle::parse_simulation_config(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string base =
      R"("true_params": {"lambda": 1, "beta": 1, "delta": 0}, "sample_sizes": [10], "methods": ["MLE"])";
  EXPECT_EQ(error_of("{" + base + R"(, "replicatons": 3})"), "config: unknown key 'replicatons'");
  EXPECT_EQ(error_of("{" + base + R"(, "bayes": {"sed": 1}})"), "config: unknown key 'bayes.sed'");
  EXPECT_NE(error_of(R"({"sample_sizes": [10], "methods": ["MLE"]})").find("true_params"),
            std::string::npos);
  EXPECT_NE(error_of("{" + base + R"(, "replications": 0})").find("replications"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"true_params": {"lambda": -1, "beta": 1, "delta": 0}, "sample_sizes": [10], "methods": ["MLE"]})")
                .find("lambda"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"true_params": {"lambda": 1, "beta": 1, "delta": 0}, "sample_sizes": [10], "methods": ["OLS"]})")
                .find("OLS"),
            std::string::npos);
  EXPECT_NE(error_of("{").find("invalid JSON"), std::string::npos);
}

TEST(Format, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5e17}) {
    EXPECT_EQ(std::stod(ntle::format_shortest(x)), x);
  }
  EXPECT_EQ(ntle::format_shortest(0.1), "0.1");
  EXPECT_EQ(ntle::format_shortest(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(ntle::format_shortest(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(ntle::format_shortest(std::nan("")), "nan");
  EXPECT_EQ(ntle::format_text(1.0 / 3.0), "0.333333333333");
}

TEST(Output, FitJson) {
  ntle::FitResult fit{{1, 2, 0.5}, ntle::EstimationMethod::MLE, -12.5, true, 40,
                      std::array<double, 3>{0.1, 0.2, 0.3},
                      std::array<ntle::Interval, 3>{{{0.8, 1.2}, {1.6, 2.4}, {0, 0.9}}},
                      {}, std::nullopt, {}};
  const auto j = nlohmann::json::parse(ntle::fit_json(fit, 25));
  EXPECT_EQ(j["method"], "MLE");
  EXPECT_EQ(j["n"], 25);
  EXPECT_EQ(j["params"]["beta"], 2.0);
  EXPECT_EQ(j["objective"], -12.5);
  EXPECT_EQ(j["ci95"]["lambda"][1], 1.2);
  EXPECT_EQ(j["stderr"]["delta"], 0.3);
}

TEST(Output, SimulationCsvAndJson) {
  ntle::SimulationConfig c;
  c.sample_sizes = {10};
  c.methods = {ntle::EstimationMethod::LSE};
  c.replications = 2;
  const auto report = ntle::run_campaign(c, [&](ntle::EstimationMethod m, const ntle::Sample&, std::uint64_t) {
    return ntle::FitResult{{1.1, 1.5, 0.5}, m, 0.0, true, 1, std::nullopt, std::nullopt, {}, std::nullopt, {}};
  });
  std::ostringstream csv;
  ntle::write_simulation_csv(csv, report);
  std::istringstream lines(csv.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "method,n,parameter,bias,mse,rmse,mc_std_error,failures,used");
  EXPECT_EQ(first.substr(0, 16), "LSE,10,lambda,0.");
  std::ostringstream js;
  ntle::write_simulation_json(js, report);
  const auto j = nlohmann::json::parse(js.str());
  EXPECT_EQ(j["config"]["replications"], 2);
  EXPECT_TRUE(j.contains("failure_policy"));
  EXPECT_EQ(j["cells"].size(), 1u);
}

}  // namespace
