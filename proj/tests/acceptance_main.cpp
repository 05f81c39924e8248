// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

// Acceptance harness: runs every validation suite at full strength with the
// pinned seed, then checks that the command-line tools are byte-deterministic.
// One pass/fail line per criterion; exit status 0 only if all of them hold.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "riscap/errors.hpp"
#include "riscap/validation.hpp"

namespace {

namespace fs = std::filesystem;
using riscap::validation::SuiteOptions;
using riscap::validation::SuiteResult;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_quiet(const std::string& cmd) {
    int raw = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// Re-runs every subcommand with an identical config and seed and demands
// byte-identical output files.
SuiteResult determinism_criterion(const std::string& cli) {
    SuiteResult result;
    result.name = "cli-determinism";
    result.limit = 0.0;

    if (cli.empty()) {
        result.detail = "no command-line binary supplied";
        return result;
    }

    fs::path dir = fs::temp_directory_path() /
                   ("riscap_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    std::string cfg = (dir / "run.cfg").string();
    {
        std::ofstream out(cfg);
        out << "n_tx = 2\n"
               "n_rx = 2\n"
               "m_h = 2\n"
               "m_v = 2\n"
               "snr_grid_db = 0, 10, 20\n"
               "m_grid = 4, 8\n"
               "mc_trials = 400\n"
               "offset_mc_trials = 1000\n"
               "ga_population = 10\n"
               "ga_generations = 4\n"
               "ga_elitism = 1\n"
               "seed = 3\n";
    }

    struct Case {
        const char* label;
        std::string args;
        bool with_phases;
    };
    std::string out_csv = (dir / "out.csv").string();
    std::vector<Case> cases = {
        {"sweep-snr", "sweep-snr", false},
        {"sweep-res mode a", "sweep-res --mode a", false},
        {"sweep-res mode b", "sweep-res --mode b", false},
        {"optimize", "optimize", true},
    };

    int mismatches = 0;
    std::string notes;
    for (const Case& c : cases) {
        std::string cmd = "\"" + cli + "\" " + c.args + " --config \"" + cfg + "\" --out \"" +
                          out_csv + "\"";
        bool ok = true;
        std::string first, first_phases;
        for (int rep = 0; rep < 2 && ok; ++rep) {
            if (run_quiet(cmd) != 0) {
                notes += std::string(c.label) + " exited nonzero; ";
                ok = false;
                break;
            }
            std::string body = read_file(out_csv);
            std::string phases = c.with_phases ? read_file(out_csv + ".phases") : "";
            if (rep == 0) {
                first = body;
                first_phases = phases;
            } else if (body != first || phases != first_phases) {
                notes += std::string(c.label) + " differed between runs; ";
                ok = false;
            }
        }
        if (!ok) ++mismatches;
    }

    std::error_code ec;
    fs::remove_all(dir, ec);

    result.worst = double(mismatches);
    result.pass = mismatches == 0;
    result.detail = result.pass
                        ? "4 subcommands re-run with identical config and seed, byte-identical"
                        : notes;
    return result;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    SuiteOptions options;  // pinned: seed 1, full trial scale, one worker
    options.seed = 1;
    options.trial_scale = 1.0;
    options.threads = 1;

    struct Entry {
        const char* name;
        SuiteResult (*fn)(const SuiteOptions&);
    };
    const std::vector<Entry> suites = {
        {"minor-expansion-identity", riscap::validation::minor_expansion_suite},
        {"det-moment-oracle", riscap::validation::det_moment_suite},
        {"logdet-moment-oracle", riscap::validation::logdet_moment_suite},
        {"eigenvalue-sandwich", riscap::validation::eigenvalue_sandwich_suite},
        {"bound-ordering", riscap::validation::bound_ordering_suite},
        {"upper-bound-tightness", riscap::validation::upper_tightness_suite},
        {"lower-bound-high-snr", riscap::validation::lower_high_snr_suite},
        {"affine-growth", riscap::validation::affine_growth_suite},
        {"offset-interval", riscap::validation::offset_interval_suite},
        {"large-surface-convergence", riscap::validation::large_surface_convergence_suite},
        {"power-scaling", riscap::validation::power_scaling_suite},
        {"surface-doubling-offset", riscap::validation::surface_scaling_offset_suite},
        {"optimizer-sanity", riscap::validation::optimizer_sanity_suite},
    };

    int passed = 0;
    int criterion = 0;
    for (const Entry& entry : suites) {
        ++criterion;
        SuiteResult result;
        try {
            result = entry.fn(options);
        } catch (const riscap::Error& e) {
            result.name = entry.name;
            result.pass = false;
            result.detail = std::string("raised: ") + e.what();
        }
        if (result.pass) ++passed;
        std::printf("criterion %2d %s\n", criterion,
                    riscap::validation::format_suite_result(result).c_str());
        std::fflush(stdout);
    }

    SuiteResult determinism = determinism_criterion(cli);
    ++criterion;
    if (determinism.pass) ++passed;
    std::printf("criterion %2d %s\n", criterion,
                riscap::validation::format_suite_result(determinism).c_str());

    std::printf("%d/%d criteria passed\n", passed, criterion);
    return passed == criterion ? 0 : 1;
}
