#include "darwinsim/sweeps.hpp"

#include "darwinsim/classicality.hpp"
#include "darwinsim/infomeasures.hpp"

#include <json.hpp>

#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

namespace darwinsim {

namespace {

constexpr double kPi = 3.141592653589793;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DARWINSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// Runs fn(0..n-1) on up to `threads` workers; results must not depend on the
// execution order.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

double json_angle(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_angle(v.get<std::string>());
  throw std::invalid_argument("config: '" + key + "' must be a number or an angle string");
}

using Evaluator = std::function<double(const BranchState&)>;

const std::map<std::string, Evaluator>& evaluators() {
  static const std::map<std::string, Evaluator> table = {
      {"mi_s1s2_e1",
       [](const BranchState& s) {
         return mutual_information(s, SubsystemSelector::system(), SubsystemSelector::env(1));
       }},
      {"entropy_s1s2",
       [](const BranchState& s) { return selection_entropy(s, SubsystemSelector::system()); }},
      {"coherence_s1s2",
       [](const BranchState& s) { return l1_coherence(reduce(s, SubsystemSelector::system())); }},
      {"coherence_e1",
       [](const BranchState& s) { return l1_coherence(reduce(s, SubsystemSelector::env(1))); }},
      {"discord_s1s2_measured_s1",
       [](const BranchState& s) {
         return discord_measured_on_qubit(reduce(s, SubsystemSelector::system()), 0).discord;
       }},
      {"discord_s1e1_measured_s1",
       [](const BranchState& s) {
         return discord_measured_on_qubit(reduce(s, SubsystemSelector::s1_plus_env(1)), 0).discord;
       }},
      {"backward_nullity_residual",
       [](const BranchState& s) {
         const DensityMatrix rho = reduce(s, SubsystemSelector::system_plus_env(1));
         return nullity_certificate(decompose(rho)).max_residual_backward;
       }},
  };
  return table;
}

std::string known_quantities_message() {
  std::string msg = "known quantities:";
  for (const std::string& name : time_sweep_quantities()) msg += " " + name;
  return msg;
}

std::vector<std::string> resolve_quantities(const std::vector<std::string>& requested) {
  if (requested.empty()) return time_sweep_quantities();
  for (const std::string& name : requested)
    if (evaluators().find(name) == evaluators().end())
      throw std::invalid_argument("unknown quantity '" + name + "'; " +
                                  known_quantities_message());
  // Canonical output order regardless of the request order.
  std::vector<std::string> out;
  for (const std::string& name : time_sweep_quantities())
    for (const std::string& want : requested)
      if (want == name) {
        out.push_back(name);
        break;
      }
  return out;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const auto fail = [&text]() -> double {
    throw std::invalid_argument("parse_angle: expected a number or c*pi/d, got '" + text + "'");
  };
  if (s.empty()) return fail();

  const std::size_t pos = s.find("pi");
  const auto full_stod = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != part.size()) fail();
    return v;
  };
  if (pos == std::string::npos) return full_stod(s);

  std::string head = s.substr(0, pos);
  if (!head.empty() && head.back() == '*') head.pop_back();
  double coeff = 1.0;
  if (head == "-")
    coeff = -1.0;
  else if (!head.empty())
    coeff = full_stod(head);

  const std::string tail = s.substr(pos + 2);
  if (tail.empty()) return coeff * kPi;
  if (tail[0] != '/') return fail();
  const double denom = full_stod(tail.substr(1));
  if (denom == 0.0) return fail();
  return coeff * kPi / denom;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");

  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "params") {
      if (!value.is_object()) throw std::invalid_argument("config: 'params' must be an object");
      for (const auto& [pk, pv] : value.items()) {
        if (pk == "theta1")
          cfg.params.theta1 = json_angle(pv, pk);
        else if (pk == "theta2")
          cfg.params.theta2 = json_angle(pv, pk);
        else if (pk == "j")
          cfg.params.j = json_angle(pv, pk);
        else if (pk == "jz")
          cfg.params.jz = json_angle(pv, pk);
        else if (pk == "jse")
          cfg.params.jse = json_angle(pv, pk);
        else if (pk == "jx")
          cfg.jx = json_angle(pv, pk);
        else if (pk == "jy")
          cfg.jy = json_angle(pv, pk);
        else if (pk == "n_env")
          cfg.params.n_env = pv.get<int>();
        else if (pk == "t")
          cfg.params.t = json_angle(pv, pk);
        else
          throw std::invalid_argument("config: unknown params key '" + pk + "'");
      }
    } else if (key == "time_grid") {
      if (value.is_array()) {
        for (const auto& v : value) cfg.time_grid.push_back(json_angle(v, "time_grid"));
      } else if (value.is_object()) {
        const double start = json_angle(value.at("start"), "time_grid.start");
        const double stop = json_angle(value.at("stop"), "time_grid.stop");
        const int count = value.at("count").get<int>();
        if (count < 2) throw std::invalid_argument("config: time_grid.count must be >= 2");
        for (const auto& [gk, gv] : value.items())
          if (gk != "start" && gk != "stop" && gk != "count")
            throw std::invalid_argument("config: unknown time_grid key '" + gk + "'");
        for (int i = 0; i < count; ++i)
          cfg.time_grid.push_back(start + (stop - start) * i / (count - 1));
      } else {
        throw std::invalid_argument("config: 'time_grid' must be an array or {start,stop,count}");
      }
    } else if (key == "fragments") {
      for (const auto& v : value) cfg.fragments.push_back(v.get<int>());
    } else if (key == "quantities") {
      for (const auto& v : value) cfg.quantities.push_back(v.get<std::string>());
    } else if (key == "format") {
      const std::string f = value.get<std::string>();
      if (f == "csv")
        cfg.format = OutputFormat::csv;
      else if (f == "json")
        cfg.format = OutputFormat::json;
      else
        throw std::invalid_argument("config: format must be 'csv' or 'json', got '" + f + "'");
    } else if (key == "output") {
      cfg.output_path = value.get<std::string>();
    } else if (key == "seed") {
      cfg.seed = value.get<unsigned>();
    } else if (key == "draws") {
      cfg.draws = value.get<int>();
    } else if (key == "plateau_tol") {
      cfg.plateau_tol = value.get<double>();
    } else if (key == "nullity_tol") {
      cfg.nullity_tol = value.get<double>();
    } else if (key == "threads") {
      cfg.threads = value.get<int>();
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

const std::vector<std::string>& time_sweep_quantities() {
  static const std::vector<std::string> names = {
      "mi_s1s2_e1",    "entropy_s1s2",
      "coherence_s1s2", "coherence_e1",
      "discord_s1s2_measured_s1", "discord_s1e1_measured_s1",
      "backward_nullity_residual"};
  return names;
}

Table run_time_sweep(const RunConfig& cfg) {
  const std::vector<double> grid = cfg.time_grid.empty()
                                       ? std::vector<double>{cfg.params.t}
                                       : cfg.time_grid;
  const std::vector<std::string> selected = resolve_quantities(cfg.quantities);

  Table table;
  table.columns.push_back("t");
  for (const std::string& name : selected) table.columns.push_back(name);
  table.rows.assign(grid.size(), std::vector<double>(table.columns.size(), 0.0));

  const int threads = resolve_threads(cfg.threads);
  parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
    ModelParams p = cfg.params;
    p.t = grid[static_cast<std::size_t>(i)];
    const BranchState s = build_state(p);
    std::vector<double>& row = table.rows[static_cast<std::size_t>(i)];
    row[0] = p.t;
    for (std::size_t q = 0; q < selected.size(); ++q)
      row[q + 1] = evaluators().at(selected[q])(s);
  });
  return table;
}

Table run_fraction_sweep(const RunConfig& cfg) {
  std::vector<int> fragments = cfg.fragments;
  if (fragments.empty())
    for (int m = 1; m <= cfg.params.n_env; ++m) fragments.push_back(m);
  for (int m : fragments)
    if (m < 1 || m > cfg.params.n_env)
      throw std::invalid_argument("fraction sweep: fragment size " + std::to_string(m) +
                                  " outside [1, N]");

  const BranchState s = build_state(cfg.params);
  const double s_sys = selection_entropy(s, SubsystemSelector::system());
  const double s_s1 = selection_entropy(s, SubsystemSelector::s1());

  Table table;
  table.columns = {"f", "m", "mi_s1s2_em", "ratio_s1s2", "mi_s1_em", "ratio_s1"};
  for (int m : fragments) {
    const double mi_sys =
        mutual_information(s, SubsystemSelector::system(), SubsystemSelector::env(m));
    const double mi_s1 = mutual_information(s, SubsystemSelector::s1(), SubsystemSelector::env(m));
    table.rows.push_back({static_cast<double>(m) / cfg.params.n_env, static_cast<double>(m),
                          mi_sys, s_sys > 0 ? mi_sys / s_sys : 0.0, mi_s1,
                          s_s1 > 0 ? mi_s1 / s_s1 : 0.0});
  }
  return table;
}

std::string run_classicality(const RunConfig& cfg) {
  const BranchState s = build_state(cfg.params);
  const DensityMatrix rho = reduce(s, SubsystemSelector::system_plus_env(1));
  const ClassicalityReport cert = nullity_certificate(decompose(rho), cfg.nullity_tol);
  const double s_sys = selection_entropy(s, SubsystemSelector::system());

  nlohmann::ordered_json doc;
  doc["params"] = {{"theta1", cfg.params.theta1}, {"theta2", cfg.params.theta2},
                   {"j", cfg.params.j},           {"jz", cfg.params.jz},
                   {"jse", cfg.params.jse},       {"n_env", cfg.params.n_env},
                   {"t", cfg.params.t}};
  doc["entropy_s1s2"] = s_sys;
  doc["nullity"] = {{"forward_residual", cert.max_residual_forward},
                    {"backward_residual", cert.max_residual_backward},
                    {"forward_classical", cert.forward_classical},
                    {"backward_classical", cert.backward_classical},
                    {"tolerance", cert.tolerance}};
  if (cfg.params.n_env < 3) {
    doc["plateau_skipped"] = "need at least 3 environment qubits";
  } else if (s_sys < 1e-12) {
    doc["plateau_skipped"] = "degenerate system entropy";
    doc["degenerate_entropy"] = true;
  } else {
    const PlateauReport plateau = detect_plateau(s, cfg.plateau_tol);
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (const auto& [f, ratio] : plateau.fraction_curve) curve.push_back({f, ratio});
    doc["plateau"] = {{"detected", plateau.plateau_detected},
                      {"level", plateau.plateau_level},
                      {"deviation", plateau.deviation},
                      {"tolerance", cfg.plateau_tol},
                      {"curve", curve}};
  }
  return doc.dump(2) + "\n";
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_table_csv(const Table& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const std::vector<double>& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
}

void write_table_json(const Table& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const std::vector<double>& row : table.rows) rows.push_back(row);
  doc["rows"] = rows;
  out << doc.dump(2) << "\n";
}

}  // namespace darwinsim
