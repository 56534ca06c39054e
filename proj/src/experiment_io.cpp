#include "cyclodetect/experiment_io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cyclodetect/errors.hpp"

namespace cyclodetect {

namespace {

using nlohmann::json;

[[noreturn]] void bad_key(const std::string& key, const std::string& why)
{
    throw InvalidSpec("config key '" + key + "': " + why);
}

template <typename T>
T require(const json& j, const std::string& key)
{
    if (!j.contains(key)) {
        bad_key(key, "missing");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad_key(key, "wrong type");
    }
}

template <typename T>
T optional(const json& j, const std::string& key, T fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad_key(key, "wrong type");
    }
}

std::vector<double> number_list(const json& j, const std::string& key)
{
    const json& v = j.at(key);
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
        return out;
    }
    if (!v.is_array()) {
        bad_key(key, "expected a number or an array of numbers");
    }
    for (const auto& e : v) {
        if (!e.is_number()) {
            bad_key(key, "array entries must be numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

SignalSpec parse_signal(const json& j, int cycle_period)
{
    SignalSpec spec;
    if (!j.is_object()) {
        bad_key("signal", "expected an object");
    }
    const auto kind = require<std::string>(j, "kind");
    if (kind == "qpsk") {
        spec.kind = SignalSpec::Kind::QpskSingleCarrier;
        spec.samples_per_symbol = optional<int>(j, "samples_per_symbol",
                                                cycle_period);
        const auto pulse = optional<std::string>(j, "pulse", "rect");
        if (pulse == "rect") {
            spec.pulse = SignalSpec::Pulse::Rect;
        } else if (pulse == "rrc") {
            spec.pulse = SignalSpec::Pulse::Rrc;
            spec.rrc_rolloff = optional<double>(j, "rolloff", 0.25);
        } else {
            bad_key("signal.pulse", "must be 'rect' or 'rrc'");
        }
    } else if (kind == "ofdm") {
        spec.kind = SignalSpec::Kind::Ofdm;
        spec.n_subcarriers = optional<int>(j, "subcarriers", 16);
        spec.cp_len = optional<int>(j, "cp", 4);
    } else {
        bad_key("signal.kind", "must be 'qpsk' or 'ofdm'");
    }
    return spec;
}

NoiseSpec parse_noise(const json& j, int n_antennas)
{
    NoiseSpec spec;
    if (j.contains("temporal")) {
        const json& t = j.at("temporal");
        if (t.is_string()) {
            if (t.get<std::string>() != "white") {
                bad_key("noise.temporal",
                        "string form must be 'white' (use {\"ma\": n} or "
                        "{\"exp_sigma\": s} for colored noise)");
            }
        } else if (t.is_object() && t.contains("ma")) {
            spec = NoiseSpec::ma_colored(require<int>(t, "ma"));
        } else if (t.is_object() && t.contains("exp_sigma")) {
            spec = NoiseSpec::exp_colored(require<double>(t, "exp_sigma"));
        } else {
            bad_key("noise.temporal", "unrecognized form");
        }
    }
    if (j.contains("spatial")) {
        const json& s = j.at("spatial");
        if (s.is_string()) {
            if (s.get<std::string>() != "uncorrelated") {
                bad_key("noise.spatial", "string form must be 'uncorrelated'");
            }
        } else if (s.is_object() && s.contains("rho")) {
            spec = spec.with_spatial(exponential_correlation(
                n_antennas, require<double>(s, "rho")));
        } else if (s.is_object() && s.contains("matrix")) {
            const auto rows =
                require<std::vector<std::vector<double>>>(s, "matrix");
            CMatrix k(n_antennas, n_antennas);
            if (static_cast<int>(rows.size()) != n_antennas) {
                bad_key("noise.spatial.matrix", "must be L x L");
            }
            for (int i = 0; i < n_antennas; ++i) {
                if (static_cast<int>(rows[static_cast<std::size_t>(i)].size())
                    != n_antennas) {
                    bad_key("noise.spatial.matrix", "must be L x L");
                }
                for (int c = 0; c < n_antennas; ++c) {
                    k(i, c) = rows[static_cast<std::size_t>(i)]
                                  [static_cast<std::size_t>(c)];
                }
            }
            spec = spec.with_spatial(k);
        } else {
            bad_key("noise.spatial", "unrecognized form");
        }
    }
    return spec;
}

std::vector<DetectorSetup> parse_detectors(const json& j)
{
    if (!j.is_array() || j.empty()) {
        bad_key("detectors", "expected a non-empty array");
    }
    std::vector<DetectorSetup> out;
    for (const auto& d : j) {
        DetectorSetup det;
        det.kind.stat = parse_stat(require<std::string>(d, "stat"));
        det.structure = parse_structure_case(require<std::string>(d, "case"));
        det.label = optional<std::string>(d, "label", "");
        if (det.kind.stat == DetectorKind::Stat::Combined) {
            det.kind.lambda = optional<double>(d, "lambda", 0.0);
            det.kind.mu = optional<double>(d, "mu", 0.0);
        }
        out.push_back(std::move(det));
    }
    return out;
}

FILE* open_csv(const std::string& path)
{
    FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) {
        throw FileFormatError("cannot open CSV output " + path);
    }
    return f;
}

} // namespace

NoiseStructureCase parse_structure_case(const std::string& s)
{
    if (s == "colored-correlated") return NoiseStructureCase::ColoredCorrelated;
    if (s == "colored-uncorrelated")
        return NoiseStructureCase::ColoredUncorrelated;
    if (s == "white-correlated") return NoiseStructureCase::WhiteCorrelated;
    if (s == "white-uncorrelated") return NoiseStructureCase::WhiteUncorrelated;
    throw InvalidSpec("unknown structure case '" + s
                      + "' (expected colored-correlated, colored-uncorrelated, "
                        "white-correlated or white-uncorrelated)");
}

DetectorKind::Stat parse_stat(const std::string& s)
{
    if (s == "glrt") return DetectorKind::Stat::Glrt;
    if (s == "frob-sum") return DetectorKind::Stat::FrobeniusSum;
    if (s == "frob-avg") return DetectorKind::Stat::FrobeniusAvg;
    if (s == "combined") return DetectorKind::Stat::Combined;
    throw InvalidSpec("unknown statistic '" + s
                      + "' (expected glrt, frob-sum, frob-avg or combined)");
}

ExperimentFile load_experiment_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidSpec("cannot open config file " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidSpec("config parse error in " + path + ": " + e.what());
    }

    ExperimentFile file;
    const auto kind = optional<std::string>(j, "experiment", "roc");
    if (kind == "roc") {
        file.kind = ExperimentKind::Roc;
    } else if (kind == "cdf") {
        file.kind = ExperimentKind::NullCdf;
    } else if (kind == "sweep") {
        file.kind = ExperimentKind::Sweep;
    } else if (kind == "auc-grid") {
        file.kind = ExperimentKind::AucGrid;
    } else if (kind == "pmd-vs-snr") {
        file.kind = ExperimentKind::PmdVsSnr;
    } else {
        bad_key("experiment",
                "must be roc, cdf, sweep, auc-grid or pmd-vs-snr");
    }

    ExperimentConfig& cfg = file.config;
    cfg.dims.n_antennas = require<int>(j, "L");
    cfg.dims.cycle_period = require<int>(j, "P");
    cfg.dims.n_blocks = require<int>(j, "N");
    cfg.dims.n_snapshots = require<int>(j, "M");
    if (j.contains("snr_db")) {
        cfg.snr_db = number_list(j, "snr_db");
    }
    cfg.trials = optional<int>(j, "trials", cfg.trials);
    if (cfg.trials < 1) {
        bad_key("trials", "must be >= 1");
    }
    cfg.pfa = optional<double>(j, "pfa", cfg.pfa);
    cfg.root_seed = optional<std::uint64_t>(j, "seed", cfg.root_seed);
    cfg.single_long_observation =
        optional<bool>(j, "single_long_observation", false);
    cfg.threads = optional<int>(j, "threads", 0);

    if (j.contains("signal")) {
        cfg.signal = parse_signal(j.at("signal"), cfg.dims.cycle_period);
    } else {
        cfg.signal.samples_per_symbol = cfg.dims.cycle_period;
    }
    cfg.channel.n_antennas = cfg.dims.n_antennas;
    if (j.contains("channel")) {
        cfg.channel.n_taps = optional<int>(j.at("channel"), "taps", 6);
        cfg.channel.delay_decay =
            optional<double>(j.at("channel"), "delay_decay", 2.0);
    }
    if (j.contains("noise")) {
        cfg.noise = parse_noise(j.at("noise"), cfg.dims.n_antennas);
    }
    cfg.detectors = parse_detectors(
        j.contains("detectors") ? j.at("detectors") : json::array());

    if (j.contains("sigma_list")) {
        file.sigma_list = number_list(j, "sigma_list");
    }
    if (j.contains("lambda_grid")) {
        file.lambda_grid = number_list(j, "lambda_grid");
    }
    if (j.contains("mu_grid")) {
        file.mu_grid = number_list(j, "mu_grid");
    }
    if (file.kind == ExperimentKind::Sweep && file.sigma_list.empty()) {
        bad_key("sigma_list", "required for sweep experiments");
    }
    if (file.kind == ExperimentKind::AucGrid
        && (file.lambda_grid.empty() || file.mu_grid.empty())) {
        bad_key("lambda_grid/mu_grid", "required for auc-grid experiments");
    }

    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw InvalidSpec("config " + path + ": " + e.what());
    }
    return file;
}

void write_roc_csv(const std::string& path,
                   const std::vector<std::string>& labels,
                   const std::vector<RocCurve>& curves)
{
    FILE* f = open_csv(path);
    std::fprintf(f, "detector,pfa,pd\n");
    for (std::size_t d = 0; d < curves.size(); ++d) {
        for (std::size_t i = 0; i < curves[d].pfa.size(); ++i) {
            std::fprintf(f, "%s,%.12g,%.12g\n", labels[d].c_str(),
                         curves[d].pfa[i], curves[d].pd[i]);
        }
    }
    std::fclose(f);
}

void write_auc_csv(const std::string& path,
                   const std::vector<std::string>& labels,
                   const std::vector<double>& aucs)
{
    FILE* f = open_csv(path);
    std::fprintf(f, "detector,auc\n");
    for (std::size_t d = 0; d < labels.size(); ++d) {
        std::fprintf(f, "%s,%.12g\n", labels[d].c_str(), aucs[d]);
    }
    std::fclose(f);
}

void write_grid_csv(const std::string& path, const AucGridResult& grid)
{
    FILE* f = open_csv(path);
    std::fprintf(f, "label,lambda,mu,auc\n");
    for (std::size_t a = 0; a < grid.lambda_grid.size(); ++a) {
        for (std::size_t b = 0; b < grid.mu_grid.size(); ++b) {
            std::fprintf(f, "combined,%.12g,%.12g,%.12g\n", grid.lambda_grid[a],
                         grid.mu_grid[b], grid.auc[a][b]);
        }
    }
    std::fprintf(f, "glrt,,,%.12g\n", grid.glrt_auc);
    std::fclose(f);
}

void write_cdf_csv(const std::string& path, const NullCdfResult& cdf)
{
    FILE* f = open_csv(path);
    std::fprintf(f, "detector,dof,score\n");
    for (std::size_t d = 0; d < cdf.samples.size(); ++d) {
        for (double v : cdf.samples[d]) {
            std::fprintf(f, "%s,%d,%.12g\n", cdf.labels[d].c_str(), cdf.dof[d],
                         v);
        }
    }
    std::fclose(f);
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep)
{
    FILE* f = open_csv(path);
    std::fprintf(f, "detector,sigma,pd\n");
    for (std::size_t d = 0; d < sweep.pd.size(); ++d) {
        for (std::size_t i = 0; i < sweep.sigma.size(); ++i) {
            std::fprintf(f, "%s,%.12g,%.12g\n", sweep.labels[d].c_str(),
                         sweep.sigma[i], sweep.pd[d][i]);
        }
    }
    std::fclose(f);
}

void write_pmd_csv(const std::string& path, const PmdVsSnrResult& pmd)
{
    FILE* f = open_csv(path);
    std::fprintf(f, "detector,snr_db,pmd\n");
    for (std::size_t d = 0; d < pmd.pmd.size(); ++d) {
        for (std::size_t s = 0; s < pmd.snr_db.size(); ++s) {
            std::fprintf(f, "%s,%.12g,%.12g\n", pmd.labels[d].c_str(),
                         pmd.snr_db[s], pmd.pmd[d][s]);
        }
    }
    std::fclose(f);
}

} // namespace cyclodetect
