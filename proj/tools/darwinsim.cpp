#include "darwinsim/sweeps.hpp"
#include "darwinsim/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace darwinsim;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

// Raw flag values; build_config only applies the ones that were passed.
struct Flags {
  std::string config;
  std::string theta1, theta2, t;  // angle expressions
  double j = 0.0, jz = 0.0, jse = 0.0;
  double jx = 0.0, jy = 0.0;
  int n_env = 0;
  std::string times, time_grid, fractions, quantities;
  std::string format, out;
  int threads = 0;
  unsigned seed = 0;
  int draws = 0;
  double plateau_tol = 0.0, nullity_tol = 0.0;
  bool inject_amplitude_fault = false;
};

void add_model_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; explicit flags override its values");
  sub->add_option("--theta1", f.theta1, "first system qubit angle (radians, or forms like pi/6)");
  sub->add_option("--theta2", f.theta2, "second system qubit angle");
  sub->add_option("--j", f.j, "intra-system exchange coupling (Jx = Jy)");
  sub->add_option("--jz", f.jz, "intra-system Ising coupling");
  sub->add_option("--jse", f.jse, "system-environment dephasing coupling");
  sub->add_option("--n-env", f.n_env, "number of environment qubits")->check(CLI::PositiveNumber);
  sub->add_option("--time", f.t, "evolution time (radians, or forms like pi/4)");
}

void add_output_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", f.out, "output file (default: stdout)");
}

// count() throws for options a subcommand never registered; probe first.
bool given(const CLI::App* sub, const std::string& name) {
  const CLI::Option* opt = sub->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

RunConfig build_config(const CLI::App* sub, const Flags& f) {
  RunConfig cfg;
  if (given(sub, "--config")) cfg = load_run_config(f.config);
  if (given(sub, "--theta1")) cfg.params.theta1 = parse_angle(f.theta1);
  if (given(sub, "--theta2")) cfg.params.theta2 = parse_angle(f.theta2);
  if (given(sub, "--j")) cfg.params.j = f.j;
  if (given(sub, "--jz")) cfg.params.jz = f.jz;
  if (given(sub, "--jse")) cfg.params.jse = f.jse;
  if (given(sub, "--n-env")) cfg.params.n_env = f.n_env;
  if (given(sub, "--time")) cfg.params.t = parse_angle(f.t);
  if (given(sub, "--jx")) cfg.jx = f.jx;
  if (given(sub, "--jy")) cfg.jy = f.jy;
  if (given(sub, "--times")) {
    cfg.time_grid.clear();
    for (const std::string& part : split(f.times, ',')) cfg.time_grid.push_back(parse_angle(part));
  }
  if (given(sub, "--time-grid")) {
    const std::vector<std::string> parts = split(f.time_grid, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("--time-grid expects start:stop:count, got '" + f.time_grid +
                                  "'");
    const double start = parse_angle(parts[0]);
    const double stop = parse_angle(parts[1]);
    const int count = std::stoi(parts[2]);
    if (count < 2) throw std::invalid_argument("--time-grid count must be >= 2");
    cfg.time_grid.clear();
    for (int i = 0; i < count; ++i)
      cfg.time_grid.push_back(start + (stop - start) * i / (count - 1));
  }
  if (given(sub, "--fractions")) {
    cfg.fragments.clear();
    for (const std::string& part : split(f.fractions, ',')) cfg.fragments.push_back(std::stoi(part));
  }
  if (given(sub, "--quantities")) {
    cfg.quantities.clear();
    for (const std::string& part : split(f.quantities, ',')) cfg.quantities.push_back(part);
  }
  if (given(sub, "--format")) cfg.format = f.format == "json" ? OutputFormat::json : OutputFormat::csv;
  if (given(sub, "--out")) cfg.output_path = f.out;
  if (given(sub, "--threads")) cfg.threads = f.threads;
  if (given(sub, "--seed")) cfg.seed = f.seed;
  if (given(sub, "--draws")) cfg.draws = f.draws;
  if (given(sub, "--plateau-tol")) cfg.plateau_tol = f.plateau_tol;
  if (given(sub, "--nullity-tol")) cfg.nullity_tol = f.nullity_tol;
  if (f.inject_amplitude_fault) cfg.inject_amplitude_fault = true;
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
}

std::string render(const Table& table, OutputFormat format) {
  std::ostringstream out;
  if (format == OutputFormat::csv)
    write_table_csv(table, out);
  else
    write_table_json(table, out);
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Observables of two exchange-coupled qubits decohering into an N-qubit "
      "dephasing environment"};
  app.require_subcommand(1);

  Flags tf, ff, cf, vf;

  CLI::App* time_sweep =
      app.add_subcommand("time-sweep", "evaluate observables on a time grid");
  add_model_flags(time_sweep, tf);
  add_output_flags(time_sweep, tf);
  time_sweep->add_option("--times", tf.times, "comma-separated times (angle forms allowed)");
  time_sweep->add_option("--time-grid", tf.time_grid, "uniform grid start:stop:count");
  time_sweep->add_option("--quantities", tf.quantities,
                         "comma-separated subset of the output columns");
  time_sweep->add_option("--threads", tf.threads,
                         "worker threads (default: DARWINSIM_THREADS or 1)");

  CLI::App* fraction_sweep = app.add_subcommand(
      "fraction-sweep", "mutual information against environment fragment size");
  add_model_flags(fraction_sweep, ff);
  add_output_flags(fraction_sweep, ff);
  fraction_sweep->add_option("--fractions", ff.fractions,
                             "comma-separated fragment sizes (default: 1..N)");

  CLI::App* classicality =
      app.add_subcommand("classicality", "block certificates and plateau scan (JSON)");
  add_model_flags(classicality, cf);
  classicality->add_option("--out", cf.out, "output file (default: stdout)");
  classicality->add_option("--plateau-tol", cf.plateau_tol, "plateau detection tolerance");
  classicality->add_option("--nullity-tol", cf.nullity_tol, "block residual tolerance");

  CLI::App* verify = app.add_subcommand(
      "verify", "self-check battery (JSON report, nonzero exit on failure)");
  add_model_flags(verify, vf);
  verify->add_option("--jx", vf.jx, "exchange coupling along x for the dense reference");
  verify->add_option("--jy", vf.jy, "exchange coupling along y for the dense reference");
  verify->add_option("--out", vf.out, "output file (default: stdout)");
  verify->add_option("--seed", vf.seed, "seed for the random parameter draws");
  verify->add_option("--draws", vf.draws, "number of random parameter draws");
  verify->add_option("--plateau-tol", vf.plateau_tol, "plateau detection tolerance");
  verify->add_option("--nullity-tol", vf.nullity_tol, "block residual tolerance");
  verify->add_flag("--inject-amplitude-fault", vf.inject_amplitude_fault)->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (time_sweep->parsed()) {
      const RunConfig cfg = build_config(time_sweep, tf);
      emit(render(run_time_sweep(cfg), cfg.format), cfg.output_path);
    } else if (fraction_sweep->parsed()) {
      const RunConfig cfg = build_config(fraction_sweep, ff);
      emit(render(run_fraction_sweep(cfg), cfg.format), cfg.output_path);
    } else if (classicality->parsed()) {
      const RunConfig cfg = build_config(classicality, cf);
      emit(run_classicality(cfg), cfg.output_path);
    } else if (verify->parsed()) {
      const RunConfig cfg = build_config(verify, vf);
      VerifyOptions opt;
      opt.params = DenseParams::from(cfg.params);
      if (cfg.jx) opt.params.jx = *cfg.jx;
      if (cfg.jy) opt.params.jy = *cfg.jy;
      opt.seed = cfg.seed;
      opt.draws = cfg.draws;
      opt.plateau_tol = cfg.plateau_tol;
      opt.nullity_tol = cfg.nullity_tol;
      opt.inject_amplitude_fault = cfg.inject_amplitude_fault;
      const VerifyReport report = run_verify(opt);
      emit(verify_report_json(report), cfg.output_path);
      return report.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
