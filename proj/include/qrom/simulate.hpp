#ifndef QROM_SIMULATE_HPP
#define QROM_SIMULATE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrom/circuit.hpp"
#include "qrom/qrom.hpp"
#include "qrom/transpile.hpp"
#include "qrom/unitary.hpp"

namespace qrom {

/// Depolarizing error probabilities applied after each gate: p1 after
/// single-qubit gates (uniform over the 3 non-identity Paulis), p2 after
/// two-qubit gates (uniform over the 15 non-identity Pauli pairs).
struct NoiseModel {
    double p1 = 0.0;
    double p2 = 0.001;

    void validate() const;
};

struct ShotResult {
    std::map<std::string, std::uint64_t> counts;  // bitstring (MSB-first) -> count
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

/// Noiseless dense statevector of the circuit applied to |0...0>.
/// Up to 24 qubits. RESET is allowed only where the collapse is
/// deterministic (the qubit holds a basis state); MEASURE is rejected.
std::vector<cplx> run_statevector(const Circuit& circuit);

/// Monte-Carlo trajectory sampler over the basis gate set
/// {X, SX, ID, RZ, CX, RESET, MEASURE}. Each shot draws its own RNG stream
/// from (seed, shot index); identical inputs give identical counts.
/// Bitstrings collect the MEASURE outcomes in gate order, first-measured
/// bit least significant, rendered MSB-first.
ShotResult run_shots(const Circuit& circuit, const NoiseModel& noise, std::uint64_t shots,
                     std::uint64_t seed);

struct FidelityReport {
    std::string builder;
    int n = 0;
    int d = 0;
    std::string config;        // "-" for builders without one
    std::string strategy;      // recursive | vchain
    std::string connectivity;  // "full" or the coupling map name
    std::uint64_t seed = 0;
    std::uint64_t shots = 0;
    double p1 = 0.0;
    double p2 = 0.0;
    std::vector<std::pair<std::uint64_t, double>> per_address;
    double mean_fidelity = 0.0;

    std::string to_json() const;
};

/// For every address: prepare read=1 and the address bits, run the stored
/// circuit, measure the data register, and count the fraction of shots that
/// return the stored word. Routing (when a coupling map is given) happens
/// before noise is applied, so inserted SWAPs cost fidelity.
FidelityReport read_fidelity(const QromSpec& spec, const std::string& builder_id,
                             const std::optional<PartitionConfig>& config,
                             const McxStrategy& strategy, const CouplingMap* coupling,
                             const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed);

}  // namespace qrom

#endif
