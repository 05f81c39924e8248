// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include "riscap/config_io.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

#include "riscap/errors.hpp"

namespace riscap::config_io {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    long v = parse_long(key, value);
    if (v < -2147483647L || v > 2147483647L)
        throw ConfigError(key + ": value out of range: '" + value + "'");
    return int(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size() || value[0] == '-') throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a nonnegative integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const std::string& item : split_list(value)) out.push_back(parse_double(key, item));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

std::vector<long> parse_long_list(const std::string& key, const std::string& value) {
    std::vector<long> out;
    for (const std::string& item : split_list(value)) out.push_back(parse_long(key, item));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

PhaseMode parse_phase_mode(const std::string& value) {
    if (value == "random") return PhaseMode::random;
    if (value == "zero") return PhaseMode::zero;
    if (value == "optimized") return PhaseMode::optimized;
    throw ConfigError("phase_mode: expected random, zero, or optimized, got '" + value + "'");
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    return out;
}

std::string double_list(const std::vector<double>& v, int digits) {
    std::vector<std::string> cells;
    cells.reserve(v.size());
    for (double x : v) cells.push_back(format_number(x, digits));
    return join(cells);
}

std::string long_list(const std::vector<long>& v) {
    std::vector<std::string> cells;
    cells.reserve(v.size());
    for (long x : v) cells.push_back(std::to_string(x));
    return join(cells);
}

}  // namespace

const char* phase_mode_name(PhaseMode mode) {
    switch (mode) {
        case PhaseMode::random: return "random";
        case PhaseMode::zero: return "zero";
        case PhaseMode::optimized: return "optimized";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    try {
        system.validate();
        ga.validate(system.ris_elements());
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (snr_grid_db.empty()) throw ConfigError("snr_grid_db: needs at least one point");
    if (m_grid.empty()) throw ConfigError("m_grid: needs at least one element count");
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        if (m_grid[i] < 1) throw ConfigError("m_grid: element counts must be positive");
        if (i > 0 && m_grid[i] <= m_grid[i - 1])
            throw ConfigError("m_grid: element counts must be strictly increasing");
    }
    if (mc_trials < 2) throw ConfigError("mc_trials: need at least two trials");
    if (offset_mc_trials < 2) throw ConfigError("offset_mc_trials: need at least two trials");
    if (threads < 1) throw ConfigError("threads: must be positive");
    if (output_path.empty()) throw ConfigError("output_path: must not be empty");
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "n_tx") config.system.n_tx = parse_int(key, value);
    else if (key == "n_rx") config.system.n_rx = parse_int(key, value);
    else if (key == "m_h") config.system.m_h = parse_int(key, value);
    else if (key == "m_v") config.system.m_v = parse_int(key, value);
    else if (key == "d_t") config.system.d_t = parse_double(key, value);
    else if (key == "d_r") config.system.d_r = parse_double(key, value);
    else if (key == "d_h") config.system.d_h = parse_double(key, value);
    else if (key == "d_v") config.system.d_v = parse_double(key, value);
    else if (key == "beta_t") config.system.beta_t = parse_double(key, value);
    else if (key == "beta_r") config.system.beta_r = parse_double(key, value);
    else if (key == "beta_d") config.system.beta_d = parse_double(key, value);
    else if (key == "los_power_r") config.system.los_power_r = parse_double(key, value);
    else if (key == "los_power_h") config.system.los_power_h = parse_double(key, value);
    else if (key == "n_paths_t") config.system.n_paths_t = parse_int(key, value);
    else if (key == "n_paths_r") config.system.n_paths_r = parse_int(key, value);
    else if (key == "n_paths_h") config.system.n_paths_h = parse_int(key, value);
    else if (key == "snr_grid_db") config.snr_grid_db = parse_double_list(key, value);
    else if (key == "m_grid") config.m_grid = parse_long_list(key, value);
    else if (key == "mc_trials") config.mc_trials = parse_long(key, value);
    else if (key == "seed") config.seed = parse_u64(key, value);
    else if (key == "threads") config.threads = parse_int(key, value);
    else if (key == "phase_mode") config.phase_mode = parse_phase_mode(value);
    else if (key == "output_path") config.output_path = value;
    else if (key == "res_snr_db") config.res_snr_db = parse_double(key, value);
    else if (key == "offset_mc_trials") config.offset_mc_trials = parse_long(key, value);
    else if (key == "ga_population") config.ga.population = parse_int(key, value);
    else if (key == "ga_generations") config.ga.generations = parse_int(key, value);
    else if (key == "ga_tournament") config.ga.tournament = parse_int(key, value);
    else if (key == "ga_crossover_rate") config.ga.crossover_rate = parse_double(key, value);
    else if (key == "ga_mutation_rate") config.ga.mutation_rate = parse_double(key, value);
    else if (key == "ga_mutation_sigma") config.ga.mutation_sigma = parse_double(key, value);
    else if (key == "ga_elitism") config.ga.elitism = parse_int(key, value);
    else throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");

    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
        try {
            apply_config_entry(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    auto num = [](double v) { return format_number(v, 17); };
    out.emplace_back("n_tx", std::to_string(c.system.n_tx));
    out.emplace_back("n_rx", std::to_string(c.system.n_rx));
    out.emplace_back("m_h", std::to_string(c.system.m_h));
    out.emplace_back("m_v", std::to_string(c.system.m_v));
    out.emplace_back("d_t", num(c.system.d_t));
    out.emplace_back("d_r", num(c.system.d_r));
    out.emplace_back("d_h", num(c.system.d_h));
    out.emplace_back("d_v", num(c.system.d_v));
    out.emplace_back("beta_t", num(c.system.beta_t));
    out.emplace_back("beta_r", num(c.system.beta_r));
    out.emplace_back("beta_d", num(c.system.beta_d));
    out.emplace_back("los_power_r", num(c.system.los_power_r));
    out.emplace_back("los_power_h", num(c.system.los_power_h));
    out.emplace_back("n_paths_t", std::to_string(c.system.n_paths_t));
    out.emplace_back("n_paths_r", std::to_string(c.system.n_paths_r));
    out.emplace_back("n_paths_h", std::to_string(c.system.n_paths_h));
    out.emplace_back("snr_grid_db", double_list(c.snr_grid_db, 17));
    out.emplace_back("m_grid", long_list(c.m_grid));
    out.emplace_back("mc_trials", std::to_string(c.mc_trials));
    out.emplace_back("seed", std::to_string(c.seed));
    out.emplace_back("threads", std::to_string(c.threads));
    out.emplace_back("phase_mode", phase_mode_name(c.phase_mode));
    out.emplace_back("output_path", c.output_path);
    out.emplace_back("res_snr_db", num(c.res_snr_db));
    out.emplace_back("offset_mc_trials", std::to_string(c.offset_mc_trials));
    out.emplace_back("ga_population", std::to_string(c.ga.population));
    out.emplace_back("ga_generations", std::to_string(c.ga.generations));
    out.emplace_back("ga_tournament", std::to_string(c.ga.tournament));
    out.emplace_back("ga_crossover_rate", num(c.ga.crossover_rate));
    out.emplace_back("ga_mutation_rate", num(c.ga.mutation_rate));
    out.emplace_back("ga_mutation_sigma", num(c.ga.mutation_sigma));
    out.emplace_back("ga_elitism", std::to_string(c.ga.elitism));
    return out;
}

std::vector<std::pair<std::string, std::string>> path_entries(
    const channel_model::PathSet& paths) {
    std::vector<std::pair<std::string, std::string>> out;
    auto gains = [](const std::vector<std::complex<double>>& g, bool real) {
        std::vector<double> v;
        v.reserve(g.size());
        for (const auto& x : g) v.push_back(real ? x.real() : x.imag());
        return double_list(v, 17);
    };
    out.emplace_back("t_azimuth_aoa", double_list(paths.t_azimuth_aoa, 17));
    out.emplace_back("t_elevation_aoa", double_list(paths.t_elevation_aoa, 17));
    out.emplace_back("t_aod", double_list(paths.t_aod, 17));
    out.emplace_back("t_gain_re", gains(paths.t_gain, true));
    out.emplace_back("t_gain_im", gains(paths.t_gain, false));
    out.emplace_back("r_aoa", double_list(paths.r_aoa, 17));
    out.emplace_back("r_azimuth_aod", double_list(paths.r_azimuth_aod, 17));
    out.emplace_back("r_elevation_aod", double_list(paths.r_elevation_aod, 17));
    out.emplace_back("r_gain_re", gains(paths.r_gain, true));
    out.emplace_back("r_gain_im", gains(paths.r_gain, false));
    out.emplace_back("h_aoa", double_list(paths.h_aoa, 17));
    out.emplace_back("h_aod", double_list(paths.h_aod, 17));
    out.emplace_back("h_gain_re", gains(paths.h_gain, true));
    out.emplace_back("h_gain_im", gains(paths.h_gain, false));
    return out;
}

std::string format_number(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw ConfigError("cannot open output file '" + path + "'");
}

void CsvWriter::comment(const std::string& text) {
    if (header_written_) throw Error("csv: comments must precede the header");
    out_ << "# " << text << '\n';
}

void CsvWriter::header(const std::vector<std::string>& names) {
    if (header_written_) throw Error("csv: header already written");
    out_ << join(names) << '\n';
    header_written_ = true;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (!header_written_) throw Error("csv: header must precede rows");
    out_ << join(cells) << '\n';
}

std::string CsvWriter::cell(double value) { return format_number(value, 10); }

std::string CsvWriter::cell(long value) { return std::to_string(value); }

}  // namespace riscap::config_io
