#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ntle/estimation.hpp"
#include "ntle/gof.hpp"
#include "ntle/sample.hpp"
#include "ntle/simulation.hpp"

namespace ntle {

/// Malformed input file: dataset, config or command arguments.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Datasets: one observation per line, or a single-column CSV whose first
// line may be a header. Blank lines and lines starting with '#' are skipped.
// Errors cite "<source>:<line>".
std::vector<double> parse_dataset(std::istream& in, std::string_view source = "<input>");
Sample load_dataset(const std::filesystem::path& path);

// Campaign configs are JSON objects with keys true_params {lambda, beta,
// delta}, sample_sizes, methods, and optionally replications (1000),
// base_seed (0), threads (0) and a bayes block with the BayesConfig fields.
// Unknown keys are rejected by name.
SimulationConfig parse_simulation_config(std::string_view json_text);
SimulationConfig load_simulation_config(const std::filesystem::path& path);

/// Shortest decimal string that reads back to the same double; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_shortest(double x);
/// %.{digits}g
std::string format_text(double x, int significant_digits = 12);

std::string fit_json(const FitResult& fit, std::size_t n);
void write_fit_text(std::ostream& out, const FitResult& fit, std::size_t n);

void write_simulation_csv(std::ostream& out, const SimulationReport& report);
void write_simulation_json(std::ostream& out, const SimulationReport& report);

void write_gof_table(std::ostream& out, const GofReport& report);
void write_gof_json(std::ostream& out, const GofReport& report);

/// Header: y,empirical_cdf,cdf_<label>...,pdf_<label>...
void write_plot_csv(std::ostream& out, const PlotData& plot);
/// Header: left,right,count,density
void write_histogram_csv(std::ostream& out, const Histogram& histogram);

}  // namespace ntle
