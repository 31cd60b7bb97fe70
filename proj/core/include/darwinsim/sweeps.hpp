#pragma once

#include "darwinsim/branchstate.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace darwinsim {

enum class OutputFormat { csv, json };

// One run request: model parameters plus everything the drivers need. The
// JSON loader fills it from a config file; the CLI overrides single fields.
struct RunConfig {
  ModelParams params;
  std::optional<double> jx;  // dense-reference overrides used by verify
  std::optional<double> jy;
  std::vector<double> time_grid;        // empty -> {params.t}
  std::vector<int> fragments;           // empty -> 1..N
  std::vector<std::string> quantities;  // empty -> all time-sweep columns
  OutputFormat format = OutputFormat::csv;
  std::string output_path;  // empty -> stdout
  unsigned seed = 12345;
  int draws = 20;
  double plateau_tol = 1e-3;
  double nullity_tol = 1e-8;
  int threads = 0;  // 0 -> DARWINSIM_THREADS env var, else 1
  bool inject_amplitude_fault = false;
};

// "0.5", "pi", "-pi/2", "3pi/4", "2*pi/3" -> radians.
double parse_angle(const std::string& text);

// Reads a JSON config file; unknown keys are rejected so typos surface.
RunConfig load_run_config(const std::string& path);

// Column-major-naive numeric table; every driver output funnels through it.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Names accepted in RunConfig::quantities, in output order.
const std::vector<std::string>& time_sweep_quantities();

// One row per grid time: mutual information with one environment qubit,
// system entropy, l1 coherences, the two forward discords and the backward
// block residual. Rows are independent and computed in parallel.
Table run_time_sweep(const RunConfig& cfg);

// One row per fragment size m: I(S1S2:E_m), I(S1:E_m) and their ratios to
// the corresponding marginal entropies.
Table run_fraction_sweep(const RunConfig& cfg);

// JSON text with the block-certificate residuals and the plateau scan at
// cfg.params.
std::string run_classicality(const RunConfig& cfg);

// %.17g rendering used for all CSV payloads, exact round trip for doubles.
std::string format_double(double v);

void write_table_csv(const Table& table, std::ostream& out);
void write_table_json(const Table& table, std::ostream& out);

}  // namespace darwinsim
