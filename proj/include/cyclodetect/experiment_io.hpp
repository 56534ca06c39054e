#pragma once

#include <string>
#include <vector>

#include "cyclodetect/montecarlo.hpp"
#include "cyclodetect/stats.hpp"

namespace cyclodetect {

enum class ExperimentKind { Roc, NullCdf, Sweep, AucGrid, PmdVsSnr };

// A parsed experiment file: which experiment to run, its Monte Carlo
// configuration, and the experiment-specific parameter lists.
struct ExperimentFile {
    ExperimentKind kind = ExperimentKind::Roc;
    ExperimentConfig config;
    std::vector<double> sigma_list;  // sweep
    std::vector<double> lambda_grid; // auc-grid
    std::vector<double> mu_grid;     // auc-grid
};

// JSON loader; throws InvalidSpec with the offending key in the message.
ExperimentFile load_experiment_file(const std::string& path);

// String forms used by config files and CLI flags.
NoiseStructureCase parse_structure_case(const std::string& s);
DetectorKind::Stat parse_stat(const std::string& s);

// CSV artifacts. All writers emit a header line and fixed "%.12g" number
// formatting, so outputs are byte-stable for fixed inputs.
void write_roc_csv(const std::string& path,
                   const std::vector<std::string>& labels,
                   const std::vector<RocCurve>& curves);
void write_auc_csv(const std::string& path,
                   const std::vector<std::string>& labels,
                   const std::vector<double>& aucs);
void write_grid_csv(const std::string& path, const AucGridResult& grid);
void write_cdf_csv(const std::string& path, const NullCdfResult& cdf);
void write_sweep_csv(const std::string& path, const SweepResult& sweep);
void write_pmd_csv(const std::string& path, const PmdVsSnrResult& pmd);

} // namespace cyclodetect
