#ifndef QROM_QROM_HPP
#define QROM_QROM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrom/circuit.hpp"

namespace qrom {

/// Stored-data description: n address lines, d data lines, and the 2^n
/// d-bit words held by the memory.
struct QromSpec {
    int n = 0;
    int d = 4;
    std::vector<std::uint32_t> data;

    /// Throws std::invalid_argument unless n >= 1, d >= 1, data has exactly
    /// 2^n entries and every word fits in d bits.
    void validate() const;

    /// Parse from JSON text {"n":..,"d":..,"data":[..]} and validate.
    static QromSpec from_json(const std::string& text);
    std::string to_json() const;
};

/// Seeded random table: 2^n words uniform in [0, 2^d).
QromSpec random_spec(int n, int d, std::uint64_t seed);

/// Address-line group handling: pre-decoded groups compute all of their
/// minterms onto ancilla qubits up front; undecoded lines feed the
/// per-address control gates directly.
enum class GroupMode : std::uint8_t { Predecode, Undecoded };

struct Group {
    int size = 0;
    GroupMode mode = GroupMode::Undecoded;

    friend bool operator==(const Group&, const Group&) = default;
};

/// Ordered list of address-line groups, assigned to address lines MSB-first
/// in listed order (the first group owns the highest address bits).
struct PartitionConfig {
    std::vector<Group> groups;

    int total_lines() const;
    int predecoded_lines() const;

    /// Canonical text form, e.g. "2P+2P+1U".
    std::string str() const;

    /// Undecoded groups split into singletons (their grouping carries no
    /// meaning), then pre-decoded groups sorted by descending size ahead of
    /// the undecoded singletons.
    PartitionConfig normalized() const;

    friend bool operator==(const PartitionConfig&, const PartitionConfig&) = default;
};

/// Parse strings like "2P+2P+1U" (case-insensitive). Throws
/// std::invalid_argument on malformed tokens or zero sizes.
PartitionConfig parse_config(const std::string& text);

/// All normalized configs over n address lines, sorted by canonical string.
/// Throws unless 1 <= n <= 12.
std::vector<PartitionConfig> enumerate_configs(int n);

/// The balanced two-group split: ceil(n/2)P + floor(n/2)P.
PartitionConfig optimal_config(int n);

/// How intermediate lines are returned to |0>: MIRROR repeats the computing
/// gates, RESET uses non-unitary reset operations.
enum class Uncompute : std::uint8_t { Mirror, Reset };

struct BuilderOptions {
    /// Unset means the builder's own default: naive and sawtooth use MIRROR,
    /// predecoded uses RESET.
    std::optional<Uncompute> uncompute;
};

/// One MCX(n+1) per address (conjugated by X gates selecting the address),
/// fanning the stored word onto the data lines through a shared control
/// qubit. Registers: read, address, cnot_ctrl, data.
Circuit build_naive(const QromSpec& spec, const BuilderOptions& options = {});

/// Replaces each MCX(n+1) with a ladder of n Toffolis over n-1 interleaved
/// ancilla qubits. Registers: read, address, ladder_anc, cnot_ctrl, data.
/// For n = 1 the ladder degenerates and the naive form is emitted.
Circuit build_sawtooth(const QromSpec& spec, const BuilderOptions& options = {});

/// Computes every minterm of each pre-decoded group onto ancilla qubits
/// once, so the per-address gate needs one control per group instead of one
/// per line. Registers: read, address, predecode_anc<g> per P-group,
/// cnot_ctrl, data.
Circuit build_predecoded(const QromSpec& spec, const PartitionConfig& config,
                         const BuilderOptions& options = {});

struct QubitOverhead {
    int naive_qubits = 0;   // n + d + 2
    int extra_qubits = 0;   // sum of 2^size over pre-decoded groups
    double overhead_ratio = 0.0;
};

QubitOverhead qubit_overhead(const QromSpec& spec, const PartitionConfig& config);

}  // namespace qrom

#endif
