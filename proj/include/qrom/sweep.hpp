#ifndef QROM_SWEEP_HPP
#define QROM_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrom/qrom.hpp"
#include "qrom/simulate.hpp"
#include "qrom/transpile.hpp"

namespace qrom {

/// One compiled-circuit metrics row of a sweep CSV.
struct SweepRecord {
    int n = 0;
    std::string builder;
    std::string config;    // canonical config string, or "-"
    std::string strategy;  // recursive | vchain
    double wall_time_s = 0.0;
    int depth = 0;
    std::uint64_t total_gates = 0;
    int qubit_total = 0;
    double overhead_ratio = 0.0;
    std::optional<double> mean_fidelity;

    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

struct SweepParams {
    int n_min = 2;
    int n_max = 8;
    int d = 4;
    std::vector<std::string> builders{"naive", "sawtooth", "predecoded"};
    /// "optimal", "all", or an explicit config string list ("2P+2P,4P").
    std::string configs = "optimal";
    McxStrategyKind strategy = McxStrategyKind::RecursiveNoAncilla;
    std::uint64_t seed = 12345;
    /// 0 disables the fidelity column; rows whose circuits exceed the
    /// simulator cap leave it empty rather than failing.
    std::uint64_t shots = 0;
    double p2 = 0.001;
    /// Record measured compile wall time. Off by default so repeated runs
    /// are byte-identical.
    bool timing = false;
};

std::vector<SweepRecord> run_sweep(const SweepParams& params, const CouplingMap* coupling);

std::string sweep_to_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> sweep_from_csv(const std::string& text);

/// Per-seed fidelity benchmark row; `seed_label` is the seed value, or
/// "summary" for the mean +- sample-std aggregate across seeds.
struct FidelityRow {
    int n = 0;
    std::string builder;
    std::string config;
    std::string connectivity;
    std::string seed_label;
    std::uint64_t shots = 0;
    double p2 = 0.0;
    std::optional<double> mean_fidelity;
    std::optional<double> fidelity_std;
    std::string status;  // "ok" or "skipped_qubit_cap"
};

struct FidelityBenchParams {
    int n_min = 2;
    int n_max = 5;
    int d = 4;
    std::vector<std::string> builders{"sawtooth", "predecoded"};
    /// Config for the predecoded builder; unset means optimal_config(n).
    std::optional<PartitionConfig> config;
    McxStrategyKind strategy = McxStrategyKind::RecursiveNoAncilla;
    std::uint64_t shots = 1000;
    int repeats = 5;
    std::uint64_t seed = 12345;
    double p1 = 0.0;
    double p2 = 0.001;
};

std::vector<FidelityRow> run_fidelity_bench(const FidelityBenchParams& params,
                                            const CouplingMap* coupling);

std::string fidelity_to_csv(const std::vector<FidelityRow>& rows);

/// Aggregates derived from a sweep CSV: per-builder growth between
/// consecutive address widths, and reduction factors versus naive.
struct Report {
    struct Growth {
        std::string builder;
        int n_from = 0;
        int n_to = 0;
        double gate_ratio = 0.0;
        double depth_ratio = 0.0;
        friend bool operator==(const Growth&, const Growth&) = default;
    };
    struct Reduction {
        int n = 0;
        std::string builder;
        std::string config;
        double gate_ratio = 0.0;   // naive gates / builder gates
        double depth_ratio = 0.0;  // naive depth / builder depth
        friend bool operator==(const Reduction&, const Reduction&) = default;
    };
    std::vector<Growth> growth;
    std::vector<Reduction> reductions;

    friend bool operator==(const Report&, const Report&) = default;
};

/// Throws std::invalid_argument when the records are empty.
Report build_report(const std::vector<SweepRecord>& records);

std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
std::string render_report_table(const Report& report);

}  // namespace qrom

#endif
