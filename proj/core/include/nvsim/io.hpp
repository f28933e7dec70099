#pragma once

// Run configuration (strict JSON), CSV emission and run manifests.

#include "nvsim/nvmodel.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace nvsim {

struct FieldSweep {
  double start = 200.0, stop = 800.0, step = 25.0;  // Gauss
  std::vector<double> values() const;
};

struct RunConfig {
  ModelParams params;
  RateTable rates;
  std::optional<double> field_G;
  FieldSweep sweep;                      // used when field_G is absent
  std::vector<double> repump_times_us;   // default 0..2.6 step 0.2
  std::vector<double> pump_times_us;     // fidelity-map grid, 0..2 step 0.1
  int theta_count = 12;
  double pump_horizon_us = 2.0;
  double t2star_us = 0.0;                // CNOT inhomogeneous broadening, 0=off
  double readout_noise_sigma = 0.0;
  double T_es_us = 0.01;                 // analytic-model ES lifetime
  std::uint64_t seed = 1;
  std::string out_dir = ".";

  // Parses the JSON text; unknown keys anywhere are rejected.
  static RunConfig parse(const std::string& json_text);
  static RunConfig load(const std::filesystem::path& file);
  std::string to_json() const;  // round-trip echo for manifests
};

// 17-significant-digit representation, '.' decimal separator.
std::string format_g17(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file,
            const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  void close();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t file_checksum(const std::filesystem::path& file);

struct RunManifest {
  std::string config_echo;  // JSON text of the effective config
  std::string command;
  std::string version = "0.1.0";
  double wall_clock_s = 0.0;
  std::vector<std::pair<std::string, std::uint64_t>> outputs;  // file, fnv64

  void write(const std::filesystem::path& out_dir) const;
};

}  // namespace nvsim
