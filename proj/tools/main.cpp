// nvsim: reproducible NV-center readout experiments from a JSON config.

#include <CLI11.hpp>
#include <json.hpp>

#include "nvsim/analytics.hpp"
#include "nvsim/engine.hpp"
#include "nvsim/fitting.hpp"
#include "nvsim/io.hpp"
#include "nvsim/sequences.hpp"
#include "nvsim/tomography.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nvsim;

namespace {

struct Cli {
  std::string config_path;
  std::string out_override;
  int threads = 1;
  std::optional<std::uint64_t> seed_override;
  std::string command_line;
};

RunConfig effective_config(const Cli& cli) {
  RunConfig cfg = cli.config_path.empty() ? RunConfig::parse("{}")
                                          : RunConfig::load(cli.config_path);
  if (!cli.out_override.empty()) cfg.out_dir = cli.out_override;
  if (cli.seed_override) cfg.seed = *cli.seed_override;
  return cfg;
}

// worker pool over [0, n); tasks claim indices from a shared counter so
// output order stays (field, time)-sorted regardless of completion order
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::vector<double> fields_of(const RunConfig& cfg) {
  if (cfg.field_G) return {*cfg.field_G};
  return cfg.sweep.values();
}

void write_manifest(const RunConfig& cfg, const Cli& cli,
                    const std::vector<fs::path>& outputs,
                    std::chrono::steady_clock::time_point t0) {
  RunManifest m;
  m.config_echo = cfg.to_json();
  m.command = cli.command_line;
  m.wall_clock_s = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  for (const fs::path& f : outputs)
    m.outputs.emplace_back(f.filename().string(), file_checksum(f));
  m.write(cfg.out_dir);
}

fs::path out_file(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

void write_json_file(const fs::path& file, const json& j) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

// ---- subcommands -----------------------------------------------------------

int cmd_contrast_sweep(const Cli& cli) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = effective_config(cli);
  const std::vector<double> fields = fields_of(cfg);

  std::vector<std::array<double, 9>> rows(fields.size());
  parallel_for(static_cast<int>(fields.size()), cli.threads, [&](int k) {
    PropagatorCache cache;
    for (int ms = 0; ms < 3; ++ms)
      for (int mi = 0; mi < 3; ++mi)
        rows[k][ms * 3 + mi] =
            contrast(ms, mi, cfg.params, cfg.rates, fields[k], 0.35, &cache);
  });

  const char* ms_tag[3] = {"+1", "0", "-1"};
  std::vector<std::string> header{"field_G"};
  for (int ms = 0; ms < 3; ++ms)
    for (int mi = 0; mi < 3; ++mi)
      header.push_back(std::string("C_ms") + ms_tag[ms] + "_mi" + ms_tag[mi]);

  const fs::path file = out_file(cfg, "contrast_sweep.csv");
  CsvWriter w(file, header);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    std::vector<double> row{fields[k]};
    row.insert(row.end(), rows[k].begin(), rows[k].end());
    w.row(row);
  }
  w.close();
  write_manifest(cfg, cli, {file}, t0);
  return 0;
}

int cmd_repump(const Cli& cli) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = effective_config(cli);
  const std::vector<double> fields = fields_of(cfg);

  const std::pair<RamseyKind, const char*> kinds[] = {
      {RamseyKind::kLongitudinal, "repump_longitudinal.csv"},
      {RamseyKind::kTransverse, "repump_transverse.csv"},
      {RamseyKind::kControl, "repump_control.csv"},
  };
  std::vector<fs::path> files;
  for (const auto& [kind, name] : kinds) {
    std::vector<std::vector<RepumpPoint>> scans(fields.size());
    parallel_for(static_cast<int>(fields.size()), cli.threads, [&](int k) {
      SimContext ctx(cfg.params, cfg.rates, fields[k]);
      ctx.t2star_us = cfg.t2star_us;
      scans[k] = repump_scan(cfg.repump_times_us, kind, ctx, cfg.theta_count);
    });
    const fs::path file = out_file(cfg, name);
    CsvWriter w(file, {"field_G", "repump_us", "visibility", "phase_rad",
                       "fit_residual"});
    for (std::size_t k = 0; k < fields.size(); ++k)
      for (const RepumpPoint& pt : scans[k])
        w.row({fields[k], pt.time, pt.visibility, pt.phase, pt.residual});
    w.close();
    files.push_back(file);
  }
  write_manifest(cfg, cli, files, t0);
  return 0;
}

int cmd_fidelity_map(const Cli& cli) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = effective_config(cli);
  const std::vector<double> fields = fields_of(cfg);

  std::vector<std::vector<double>> grid(fields.size());
  parallel_for(static_cast<int>(fields.size()), cli.threads, [&](int k) {
    grid[k] = nuclear_fidelity_map({fields[k]}, cfg.pump_times_us, cfg.params,
                                   cfg.rates)[0];
  });

  const fs::path file = out_file(cfg, "fidelity_map.csv");
  CsvWriter w(file, {"field_G", "pump_us", "F"});
  for (std::size_t k = 0; k < fields.size(); ++k)
    for (std::size_t j = 0; j < cfg.pump_times_us.size(); ++j)
      w.row({fields[k], cfg.pump_times_us[j], grid[k][j]});
  w.close();
  write_manifest(cfg, cli, {file}, t0);
  return 0;
}

int cmd_phase_susceptibility(const Cli& cli) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = effective_config(cli);
  const std::vector<double> fields = fields_of(cfg);

  std::vector<std::pair<double, double>> rows(fields.size());
  parallel_for(static_cast<int>(fields.size()), cli.threads, [&](int k) {
    rows[k] = {phase_susceptibility(cfg.params, fields[k], cfg.T_es_us),
               phase_susceptibility_per_pump_us(cfg.params, cfg.rates,
                                                fields[k], 1.0, cfg.T_es_us)};
  });

  const fs::path file = out_file(cfg, "phase_susceptibility.csv");
  CsvWriter w(file, {"field_G", "chi_phi", "chi_phi_per_pump_us"});
  for (std::size_t k = 0; k < fields.size(); ++k)
    w.row({fields[k], rows[k].first, rows[k].second});
  w.close();
  write_manifest(cfg, cli, {file}, t0);
  return 0;
}

int cmd_tomography(const Cli& cli) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = effective_config(cli);
  const double B = cfg.field_G.value_or(500.0);

  SimContext ctx(cfg.params, cfg.rates, B);
  const Matrix thermal = prepare_thermal(ctx.init_state(), ctx);
  const QstResult res =
      qst_qutrit(ctx, thermal, cfg.readout_noise_sigma, cfg.seed);

  json j;
  j["field_G"] = B;
  j["readout_noise_sigma"] = cfg.readout_noise_sigma;
  j["seed"] = cfg.seed;
  json re = json::array(), im = json::array();
  for (int a = 0; a < 3; ++a) {
    json rrow = json::array(), irow = json::array();
    for (int b = 0; b < 3; ++b) {
      rrow.push_back(res.rho(a, b).real());
      irow.push_back(res.rho(a, b).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  j["rho_re"] = re;
  j["rho_im"] = im;
  j["fidelity_vs_thermal"] =
      state_fidelity(res.rho, Matrix::Identity(3, 3) / 3.0);
  j["c_plus"] = res.c_plus;
  j["c_minus"] = res.c_minus;
  j["lambda_expectations"] = res.lambda_expectations;

  const fs::path file = out_file(cfg, "tomography.json");
  write_json_file(file, j);
  write_manifest(cfg, cli, {file}, t0);
  return 0;
}

int cmd_polarization(const Cli& cli) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = effective_config(cli);
  const std::vector<double> fields = fields_of(cfg);

  std::vector<double> pol(fields.size());
  parallel_for(static_cast<int>(fields.size()), cli.threads, [&](int k) {
    PropagatorCache cache;
    pol[k] = pump_polarization(cfg.params, cfg.rates, fields[k], 20.0, &cache);
  });

  const fs::path file = out_file(cfg, "polarization.csv");
  CsvWriter w(file, {"field_G", "P"});
  for (std::size_t k = 0; k < fields.size(); ++k) w.row({fields[k], pol[k]});
  w.close();
  write_manifest(cfg, cli, {file}, t0);
  return 0;
}

int cmd_eslac(const Cli& cli) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = effective_config(cli);

  json j;
  j["eslac_field_G"] = find_eslac(cfg.params);
  j["four_level_resonance_field_G"] = four_level_resonance_field(cfg.params);

  const fs::path file = out_file(cfg, "eslac.json");
  write_json_file(file, j);
  write_manifest(cfg, cli, {file}, t0);
  return 0;
}

std::pair<std::vector<double>, std::vector<double>> read_xy_csv(
    const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::vector<double> xs, ys;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string xa, ya;
    if (!std::getline(ss, xa, ',') || !std::getline(ss, ya, ','))
      throw std::runtime_error("malformed CSV row: " + line);
    if (first) {
      first = false;  // mandatory header row
      continue;
    }
    try {
      xs.push_back(std::stod(xa));
      ys.push_back(std::stod(ya));
    } catch (const std::exception&) {
      throw std::runtime_error("malformed CSV row: " + line);
    }
  }
  if (xs.empty()) throw std::runtime_error("CSV has no data rows");
  return {xs, ys};
}

int cmd_fit(const Cli& cli, const std::string& model,
            const std::string& input, bool literal_saturation) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = effective_config(cli);
  const auto [xs, ys] = read_xy_csv(input);

  FitResult fit;
  if (model == "ramsey")
    fit = fit_ramsey(xs, ys);
  else if (model == "saturation")
    fit = fit_saturation(xs, ys, literal_saturation);
  else if (model == "odmr")
    fit = fit_odmr_triplet(xs, ys);
  else
    fit = fit_t2star(xs, ys, cfg.params.C_par);

  json j;
  j["model"] = model;
  j["input"] = input;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["residual_norm"] = fit.residual_norm;
  j["convention"] = fit.convention;
  json params = json::object();
  for (std::size_t k = 0; k < fit.names.size(); ++k)
    params[fit.names[k]] = fit.params(static_cast<int>(k));
  j["params"] = params;
  if (model == "odmr") {
    const auto ints = odmr_intensities(fit);
    j["intensities"] = ints;
    j["polarization"] = polarization_metric(ints[1], ints[2], ints[0]);
  }

  const fs::path file = out_file(cfg, "fit.json");
  write_json_file(file, j);
  write_manifest(cfg, cli, {file}, t0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  {
    std::ostringstream cmd;
    for (int k = 0; k < argc; ++k) cmd << (k ? " " : "") << argv[k];
    cli.command_line = cmd.str();
  }

  CLI::App app{
      "nvsim: nitrogen-vacancy nuclear-spin readout simulator.\n"
      "Each subcommand reproduces one published result set:\n"
      "  contrast-sweep       basis-state optical contrasts vs field\n"
      "  repump               Ramsey visibility/phase vs repump duration\n"
      "  fidelity-map         nuclear storage fidelity vs (field, pump time)\n"
      "  phase-susceptibility analytic phase slope chi_phi vs field\n"
      "  tomography           qutrit state tomography of the thermal prep\n"
      "  polarization         optically pumped nuclear polarization vs field\n"
      "  eslac                locate the excited-state level anti-crossing\n"
      "  fit                  batch curve fitting on an x,y CSV file"};
  app.require_subcommand(1);
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cli.config_path, "JSON config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", cli.out_override, "output directory");
    sub->add_option("--threads", cli.threads, "worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed_value, "override the config seed")
        ->each([&](const std::string&) { cli.seed_override = seed_value; });
  };

  CLI::App* sweep = app.add_subcommand(
      "contrast-sweep", "readout contrast of all 9 ground basis states");
  CLI::App* repump = app.add_subcommand(
      "repump", "Ramsey fringe visibility and phase vs optical repump time");
  CLI::App* fmap = app.add_subcommand(
      "fidelity-map", "nuclear process fidelity over (field, pump time)");
  CLI::App* chi = app.add_subcommand(
      "phase-susceptibility", "closed-form chi_phi(B) sweep");
  CLI::App* tomo = app.add_subcommand(
      "tomography", "qutrit tomography of the artificial thermal state");
  CLI::App* pol = app.add_subcommand(
      "polarization", "pumped nuclear polarization vs field");
  CLI::App* eslac = app.add_subcommand(
      "eslac", "locate the level anti-crossing field");
  CLI::App* fit = app.add_subcommand("fit", "fit a model to an x,y CSV");
  for (CLI::App* sub : {sweep, repump, fmap, chi, tomo, pol, eslac, fit})
    add_common(sub);

  std::string fit_model, fit_input;
  bool literal_saturation = false;
  fit->add_option("--model", fit_model, "ramsey|saturation|odmr|t2star")
      ->required()
      ->check(CLI::IsMember({"ramsey", "saturation", "odmr", "t2star"}));
  fit->add_option("--input", fit_input, "CSV file with x,y columns")
      ->required();
  fit->add_flag("--literal-saturation", literal_saturation,
                "fit the decreasing saturation form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) return cmd_contrast_sweep(cli);
    if (repump->parsed()) return cmd_repump(cli);
    if (fmap->parsed()) return cmd_fidelity_map(cli);
    if (chi->parsed()) return cmd_phase_susceptibility(cli);
    if (tomo->parsed()) return cmd_tomography(cli);
    if (pol->parsed()) return cmd_polarization(cli);
    if (eslac->parsed()) return cmd_eslac(cli);
    if (fit->parsed()) return cmd_fit(cli, fit_model, fit_input,
                                      literal_saturation);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
