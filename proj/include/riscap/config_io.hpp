// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "riscap/channel_model.hpp"
#include "riscap/phase_optimizer.hpp"

// Flat `key = value` experiment configs and the CSV output format shared by
// the command-line tools.
namespace riscap::config_io {

enum class PhaseMode { random, zero, optimized };

const char* phase_mode_name(PhaseMode mode);

struct ExperimentConfig {
    channel_model::SystemConfig system;
    std::vector<double> snr_grid_db = {-10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40};
    std::vector<long> m_grid = {16, 32, 64, 128, 256};
    long mc_trials = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    PhaseMode phase_mode = PhaseMode::random;
    std::string output_path = "riscap.csv";
    double res_snr_db = 10.0;  // element sweeps: fixed SNR (mode a) or total energy (mode b)
    long offset_mc_trials = 100000;
    phase_optimizer::GaParams ga;

    void validate() const;  // throws ConfigError
};

// Parse a config file: one `key = value` per line, `#` comments, unknown keys
// rejected. Missing keys keep their defaults. Throws ConfigError with the
// offending line number.
ExperimentConfig load_experiment_config(const std::string& path);

// Apply one key/value pair; used by the loader and by CLI overrides.
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

// All settings as key/value text, in the file-format keys. Used to echo the
// effective config into CSV header comments so outputs are self-describing.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config);

// Path angles/gains as key/value text for the same purpose (full precision,
// so a run is reproducible from its output header alone).
std::vector<std::pair<std::string, std::string>> path_entries(const channel_model::PathSet& paths);

// `digits` significant digits, shortest form.
std::string format_number(double value, int digits);

// CSV with `#` comment lines before the header row; numeric cells carry 10
// significant digits.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    void comment(const std::string& text);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);
    static std::string cell(double value);
    static std::string cell(long value);
    bool good() const { return out_.good(); }

  private:
    std::ofstream out_;
    bool header_written_ = false;
};

}  // namespace riscap::config_io
