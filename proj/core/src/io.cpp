#include "nvsim/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nvsim {

using nlohmann::json;

std::vector<double> FieldSweep::values() const {
  if (step <= 0.0) throw std::invalid_argument("sweep step must be positive");
  std::vector<double> out;
  for (double b = start; b <= stop + 1e-9; b += step) out.push_back(b);
  return out;
}

namespace {

void require_known(const json& obj, const std::set<std::string>& known,
                   const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("unknown config key '" + it.key() +
                                  "' in " + where);
}

double num(const json& obj, const char* key, double fallback) {
  return obj.contains(key) ? obj.at(key).get<double>() : fallback;
}

std::vector<double> grid_or_list(const json& j, const std::string& where) {
  if (j.is_array()) return j.get<std::vector<double>>();
  require_known(j, {"start", "stop", "step"}, where);
  FieldSweep g{j.at("start").get<double>(), j.at("stop").get<double>(),
               j.at("step").get<double>()};
  return g.values();
}

}  // namespace

RunConfig RunConfig::parse(const std::string& json_text) {
  const json j = json::parse(json_text);
  require_known(j, {"params", "rates", "field_G", "field_sweep_G",
                    "repump_times_us", "pump_times_us", "theta_count",
                    "pump_horizon_us", "t2star_us", "readout_noise_sigma",
                    "T_es_us", "seed", "out_dir"},
                "config root");
  RunConfig cfg;
  if (j.contains("params")) {
    const json& p = j.at("params");
    require_known(p, {"D_gs_MHz", "D_es_MHz", "gamma_e_MHz_per_G",
                      "gamma_n_MHz_per_G", "P_quad_MHz", "A_par_MHz",
                      "A_perp_MHz", "C_par_MHz", "C_perp_MHz"},
                  "params");
    cfg.params.D_gs = num(p, "D_gs_MHz", cfg.params.D_gs);
    cfg.params.D_es = num(p, "D_es_MHz", cfg.params.D_es);
    cfg.params.gamma_e = num(p, "gamma_e_MHz_per_G", cfg.params.gamma_e);
    cfg.params.gamma_n = num(p, "gamma_n_MHz_per_G", cfg.params.gamma_n);
    cfg.params.P_quad = num(p, "P_quad_MHz", cfg.params.P_quad);
    cfg.params.A_par = num(p, "A_par_MHz", cfg.params.A_par);
    cfg.params.A_perp = num(p, "A_perp_MHz", cfg.params.A_perp);
    cfg.params.C_par = num(p, "C_par_MHz", cfg.params.C_par);
    cfg.params.C_perp = num(p, "C_perp_MHz", cfg.params.C_perp);
  }
  if (j.contains("rates")) {
    const json& r = j.at("rates");
    require_known(r, {"Gamma0_MHz", "Gamma1_MHz", "Gamma2_MHz", "Gamma3_MHz",
                      "Gamma4_MHz", "Gamma5_MHz", "Gamma6_MHz", "Gamma7_MHz",
                      "T1_gs_us", "T2_gs_us", "T1_es_us", "T2_es_us"},
                  "rates");
    cfg.rates.Gamma0 = num(r, "Gamma0_MHz", cfg.rates.Gamma0);
    cfg.rates.Gamma1 = num(r, "Gamma1_MHz", cfg.rates.Gamma1);
    cfg.rates.Gamma2 = num(r, "Gamma2_MHz", cfg.rates.Gamma2);
    cfg.rates.Gamma3 = num(r, "Gamma3_MHz", cfg.rates.Gamma3);
    cfg.rates.Gamma4 = num(r, "Gamma4_MHz", cfg.rates.Gamma4);
    cfg.rates.Gamma5 = num(r, "Gamma5_MHz", cfg.rates.Gamma5);
    cfg.rates.Gamma6 = num(r, "Gamma6_MHz", cfg.rates.Gamma6);
    cfg.rates.Gamma7 = num(r, "Gamma7_MHz", cfg.rates.Gamma7);
    cfg.rates.T1_gs = num(r, "T1_gs_us", cfg.rates.T1_gs);
    cfg.rates.T2_gs = num(r, "T2_gs_us", cfg.rates.T2_gs);
    cfg.rates.T1_es = num(r, "T1_es_us", cfg.rates.T1_es);
    cfg.rates.T2_es = num(r, "T2_es_us", cfg.rates.T2_es);
  }
  if (j.contains("field_G")) cfg.field_G = j.at("field_G").get<double>();
  if (j.contains("field_sweep_G")) {
    const json& s = j.at("field_sweep_G");
    require_known(s, {"start", "stop", "step"}, "field_sweep_G");
    cfg.sweep = {s.at("start").get<double>(), s.at("stop").get<double>(),
                 s.at("step").get<double>()};
    if (cfg.sweep.step <= 0.0)
      throw std::invalid_argument("sweep step must be positive");
  }
  if (j.contains("repump_times_us"))
    cfg.repump_times_us = grid_or_list(j.at("repump_times_us"),
                                       "repump_times_us");
  if (j.contains("pump_times_us"))
    cfg.pump_times_us = grid_or_list(j.at("pump_times_us"), "pump_times_us");
  cfg.theta_count = static_cast<int>(num(j, "theta_count", cfg.theta_count));
  cfg.pump_horizon_us = num(j, "pump_horizon_us", cfg.pump_horizon_us);
  cfg.t2star_us = num(j, "t2star_us", cfg.t2star_us);
  cfg.readout_noise_sigma = num(j, "readout_noise_sigma",
                                cfg.readout_noise_sigma);
  cfg.T_es_us = num(j, "T_es_us", cfg.T_es_us);
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();

  if (cfg.repump_times_us.empty())
    for (double t = 0.0; t <= 2.6 + 1e-9; t += 0.2)
      cfg.repump_times_us.push_back(t);
  if (cfg.pump_times_us.empty())
    for (double t = 0.0; t <= 2.0 + 1e-9; t += 0.1)
      cfg.pump_times_us.push_back(t);
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::to_json() const {
  json j;
  j["params"] = {{"D_gs_MHz", params.D_gs},
                 {"D_es_MHz", params.D_es},
                 {"gamma_e_MHz_per_G", params.gamma_e},
                 {"gamma_n_MHz_per_G", params.gamma_n},
                 {"P_quad_MHz", params.P_quad},
                 {"A_par_MHz", params.A_par},
                 {"A_perp_MHz", params.A_perp},
                 {"C_par_MHz", params.C_par},
                 {"C_perp_MHz", params.C_perp}};
  j["rates"] = {{"Gamma0_MHz", rates.Gamma0}, {"Gamma1_MHz", rates.Gamma1},
                {"Gamma2_MHz", rates.Gamma2}, {"Gamma3_MHz", rates.Gamma3},
                {"Gamma4_MHz", rates.Gamma4}, {"Gamma5_MHz", rates.Gamma5},
                {"Gamma6_MHz", rates.Gamma6}, {"Gamma7_MHz", rates.Gamma7},
                {"T1_gs_us", rates.T1_gs},    {"T2_gs_us", rates.T2_gs},
                {"T1_es_us", rates.T1_es},    {"T2_es_us", rates.T2_es}};
  if (field_G) j["field_G"] = *field_G;
  j["field_sweep_G"] = {{"start", sweep.start}, {"stop", sweep.stop},
                        {"step", sweep.step}};
  j["repump_times_us"] = repump_times_us;
  j["pump_times_us"] = pump_times_us;
  j["theta_count"] = theta_count;
  j["pump_horizon_us"] = pump_horizon_us;
  j["t2star_us"] = t2star_us;
  j["readout_noise_sigma"] = readout_noise_sigma;
  j["T_es_us"] = T_es_us;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  return j.dump(2);
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& file,
                     const std::vector<std::string>& header)
    : path_(file), out_(file, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot open " + file.string());
  for (std::size_t k = 0; k < header.size(); ++k)
    out_ << (k ? "," : "") << header[k];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t k = 0; k < values.size(); ++k)
    out_ << (k ? "," : "") << format_g17(values[k]);
  out_ << '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k)
    out_ << (k ? "," : "") << cells[k];
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t file_checksum(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot checksum " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

void RunManifest::write(const std::filesystem::path& out_dir) const {
  json j;
  j["version"] = version;
  j["command"] = command;
  j["wall_clock_s"] = wall_clock_s;
  j["config"] = json::parse(config_echo);
  json outs = json::array();
  for (const auto& [file, sum] : outputs) {
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(sum));
    outs.push_back({{"file", file}, {"fnv1a64", hex}});
  }
  j["outputs"] = outs;
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest");
  out << j.dump(2) << '\n';
}

}  // namespace nvsim
