#ifndef QROM_TRANSPILE_HPP
#define QROM_TRANSPILE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrom/circuit.hpp"

namespace qrom {

/// How multi-controlled X gates are lowered.
///  - RecursiveNoAncilla: controlled-square-root identity, no extra qubits;
///    gate count grows steeply with the control count.
///  - VChain: Toffoli chain over clean ancilla qubits, 2(k-2)+1 Toffolis for
///    k controls.
enum class McxStrategyKind : std::uint8_t { RecursiveNoAncilla, VChain };

struct McxStrategy {
    McxStrategyKind kind = McxStrategyKind::RecursiveNoAncilla;
    /// VChain scratch qubits. When unset, to_basis appends a fresh
    /// "decomp_anc" register sized for the largest gate present.
    std::optional<Register> ancilla;

    static McxStrategy recursive() { return {McxStrategyKind::RecursiveNoAncilla, std::nullopt}; }
    static McxStrategy v_chain() { return {McxStrategyKind::VChain, std::nullopt}; }
    static McxStrategy v_chain(Register anc) { return {McxStrategyKind::VChain, std::move(anc)}; }
};

std::string strategy_name(McxStrategyKind kind);
McxStrategyKind parse_strategy(const std::string& text);

/// Standalone gate description (owning its qubit list) used by the
/// decomposition helpers, which operate outside any circuit.
struct GateSpec {
    GateOp op = GateOp::X;
    double theta = 0.0;
    int controls = 0;
    int root_exp = 0;
    bool dagger = false;
    std::vector<int> qubits;
};

GateSpec to_gate_spec(const Gate& gate);

/// Expand one MCX(k) / MCXRoot(k,s) into {CX, CCX, MCXRoot} gates.
/// Gates with k <= 2 controls (k <= 1 for roots) pass through unchanged.
/// VChain requires strategy.ancilla to cover k-2 (MCX) or k-1 (MCXRoot)
/// clean qubits disjoint from the gate's own.
std::vector<GateSpec> decompose_mcx(const GateSpec& gate, const McxStrategy& strategy);

/// The standard 6-CX Toffoli network over {CX, H, RZ}.
std::vector<GateSpec> decompose_toffoli(const GateSpec& gate);

/// Lower every gate to the hardware basis {RZ, X, SX, CX, ID}; RESET and
/// MEASURE pass through. VChain lowering may append a "decomp_anc" register.
Circuit to_basis(const Circuit& circuit, const McxStrategy& strategy);

/// Undirected physical-qubit adjacency. Guaranteed connected, simple, and
/// self-loop free after construction.
class CouplingMap {
public:
    /// Edge-list file: lines "u v" (0-indexed), '#' starts a comment.
    static CouplingMap from_file(const std::string& path);
    static CouplingMap from_edges(int num_qubits, const std::vector<std::pair<int, int>>& edges,
                                  std::string name = "");

    int num_qubits() const { return static_cast<int>(adj_.size()); }
    bool has_edge(int u, int v) const;
    /// Sorted ascending; drives deterministic tie-breaking in route().
    const std::vector<int>& neighbors(int u) const { return adj_.at(static_cast<std::size_t>(u)); }
    const std::string& name() const { return name_; }
    int num_edges() const { return num_edges_; }

private:
    std::vector<std::vector<int>> adj_;
    std::string name_;
    int num_edges_ = 0;
};

struct RouteResult {
    Circuit circuit;                // single "phys" register; may contain SWAP gates
    std::vector<int> final_layout;  // logical qubit -> physical qubit
    int swaps_inserted = 0;
};

/// Insert SWAPs so every 2-qubit gate acts on coupled qubits. Requires a
/// lowered circuit (gates touch at most 2 qubits). The first operand is
/// moved along a BFS shortest path toward the second; ties are broken by
/// the lower physical index. initial_layout empty means identity.
RouteResult route(const Circuit& circuit, const CouplingMap& coupling,
                  const std::vector<int>& initial_layout = {});

/// Replace each SWAP with 3 CX gates.
Circuit lower_swaps(const Circuit& circuit);

/// Drop qubits no gate touches, compacting indices and replacing the
/// register map with a single "q" register. Measurement key order is
/// unchanged (counts are keyed by measure order, not qubit index).
Circuit compact_unused(const Circuit& circuit);

struct CompilationReport {
    double wall_time_s = 0.0;
    int depth = 0;
    std::uint64_t total_gates = 0;
    std::map<std::string, std::uint64_t> basis_gate_counts;
    int num_qubits = 0;
    int swaps_inserted = 0;
};

struct CompileResult {
    Circuit circuit;
    CompilationReport report;
};

/// to_basis, then (when a coupling map is given) route and lower the
/// inserted SWAPs. Wall time is measured around the pipeline with a
/// monotonic clock and is always > 0.
CompileResult compile(const Circuit& circuit, const McxStrategy& strategy,
                      const CouplingMap* coupling = nullptr);

}  // namespace qrom

#endif
