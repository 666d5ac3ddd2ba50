#include "qrom/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "qrom/rng.hpp"

namespace qrom {

void NoiseModel::validate() const {
    if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0))
        throw std::invalid_argument("NoiseModel: probabilities must lie in [0, 1]");
}

// ---------------------------------------------------------------------------
// Dense statevector

std::vector<cplx> run_statevector(const Circuit& circuit) {
    if (circuit.num_qubits() > 24)
        throw std::invalid_argument("run_statevector: capped at 24 qubits");
    const std::uint64_t dim = std::uint64_t{1} << circuit.num_qubits();
    std::vector<cplx> state(dim, cplx{0.0, 0.0});
    state[0] = 1.0;

    for (std::size_t i = 0; i < circuit.size(); ++i) {
        const Gate g = circuit.gate(i);
        if (g.op == GateOp::Measure)
            throw std::invalid_argument("run_statevector: MEASURE not supported, use run_shots");
        if (g.op == GateOp::Reset) {
            const std::uint64_t mask = std::uint64_t{1} << g.qubits[0];
            double p1 = 0.0;
            for (std::uint64_t idx = 0; idx < dim; ++idx)
                if (idx & mask) p1 += std::norm(state[idx]);
            if (p1 > 1e-9 && p1 < 1.0 - 1e-9)
                throw std::runtime_error(
                    "run_statevector: nondeterministic RESET collapse, use run_shots");
            const bool was_one = p1 >= 0.5;
            if (was_one) {
                for (std::uint64_t idx = 0; idx < dim; ++idx) {
                    if (idx & mask) {
                        state[idx & ~mask] = state[idx];
                        state[idx] = 0.0;
                    }
                }
            } else {
                for (std::uint64_t idx = 0; idx < dim; ++idx)
                    if (idx & mask) state[idx] = 0.0;
            }
            double norm2 = 0.0;
            for (const cplx& a : state) norm2 += std::norm(a);
            const double scale = 1.0 / std::sqrt(norm2);
            for (cplx& a : state) a *= scale;
            continue;
        }
        detail::apply_gate_dense(state, circuit.num_qubits(), g);
    }
    return state;
}

// ---------------------------------------------------------------------------
// Sparse trajectory engine
//
// QROM trajectories stay close to a computational basis state: X/CX permute
// component indices, RZ adds phases, and only SX (from lowered H gates)
// briefly splits components. States are kept as index-sorted
// (basis index, amplitude) pairs.

namespace {

struct Component {
    std::uint64_t idx;
    cplx amp;
};

class SparseState {
public:
    void reset_to_zero() {
        comps_.assign(1, {0, cplx{1.0, 0.0}});
    }

    void apply_x(std::uint64_t mask) {
        for (Component& c : comps_) c.idx ^= mask;
        resort();
    }

    void apply_z(std::uint64_t mask) {
        for (Component& c : comps_)
            if (c.idx & mask) c.amp = -c.amp;
    }

    void apply_y(std::uint64_t mask) {
        // Y = iXZ: |0> -> i|1>, |1> -> -i|0>
        for (Component& c : comps_) {
            c.amp *= (c.idx & mask) ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
            c.idx ^= mask;
        }
        resort();
    }

    void apply_rz(std::uint64_t mask, double theta) {
        const cplx phase0 = std::polar(1.0, -theta / 2.0);
        const cplx phase1 = std::polar(1.0, theta / 2.0);
        for (Component& c : comps_) c.amp *= (c.idx & mask) ? phase1 : phase0;
    }

    void apply_cx(std::uint64_t cmask, std::uint64_t tmask) {
        for (Component& c : comps_)
            if (c.idx & cmask) c.idx ^= tmask;
        resort();
    }

    void apply_sx(std::uint64_t mask) {
        constexpr cplx m00{0.5, 0.5}, m01{0.5, -0.5};
        scratch_.clear();
        for (const Component& c : comps_) {
            const std::uint64_t i0 = c.idx & ~mask;
            const std::uint64_t i1 = c.idx | mask;
            const bool b = (c.idx & mask) != 0;
            // column b of SX: [m00 m01; m01 m00]
            scratch_.push_back({i0, (b ? m01 : m00) * c.amp});
            scratch_.push_back({i1, (b ? m00 : m01) * c.amp});
        }
        comps_.swap(scratch_);
        merge_and_prune();
    }

    double prob_one(std::uint64_t mask) const {
        double p = 0.0;
        for (const Component& c : comps_)
            if (c.idx & mask) p += std::norm(c.amp);
        return p;
    }

    /// Project qubit to `bit` and renormalize.
    void project(std::uint64_t mask, bool bit) {
        scratch_.clear();
        double norm2 = 0.0;
        for (const Component& c : comps_) {
            if (((c.idx & mask) != 0) == bit) {
                scratch_.push_back(c);
                norm2 += std::norm(c.amp);
            }
        }
        comps_.swap(scratch_);
        const double scale = 1.0 / std::sqrt(norm2);
        for (Component& c : comps_) c.amp *= scale;
    }

    void clear_bit(std::uint64_t mask) {
        for (Component& c : comps_) c.idx &= ~mask;
        resort();
    }

    std::size_t size() const { return comps_.size(); }

private:
    void resort() {
        std::sort(comps_.begin(), comps_.end(),
                  [](const Component& a, const Component& b) { return a.idx < b.idx; });
    }

    void merge_and_prune() {
        resort();
        std::size_t out = 0;
        for (std::size_t i = 0; i < comps_.size();) {
            std::uint64_t idx = comps_[i].idx;
            cplx amp = comps_[i].amp;
            std::size_t j = i + 1;
            while (j < comps_.size() && comps_[j].idx == idx) {
                amp += comps_[j].amp;
                ++j;
            }
            if (std::norm(amp) > 1e-24) comps_[out++] = {idx, amp};
            i = j;
        }
        comps_.resize(out);
    }

    std::vector<Component> comps_;
    std::vector<Component> scratch_;
};

void apply_pauli(SparseState& state, int pauli, std::uint64_t mask) {
    switch (pauli) {
        case 1: state.apply_x(mask); break;
        case 2: state.apply_y(mask); break;
        case 3: state.apply_z(mask); break;
        default: break;
    }
}

}  // namespace

ShotResult run_shots(const Circuit& circuit, const NoiseModel& noise, std::uint64_t shots,
                     std::uint64_t seed) {
    noise.validate();
    if (shots == 0) throw std::invalid_argument("run_shots: shots must be positive");
    if (circuit.num_qubits() > 24)
        throw std::invalid_argument("run_shots: capped at 24 qubits");
    for (std::size_t i = 0; i < circuit.size(); ++i) {
        switch (circuit.gate(i).op) {
            case GateOp::X:
            case GateOp::Sx:
            case GateOp::Id:
            case GateOp::Rz:
            case GateOp::Cx:
            case GateOp::Reset:
            case GateOp::Measure:
                break;
            default:
                throw std::invalid_argument("run_shots: circuit contains a non-basis gate '" +
                                            gate_label(circuit.gate(i)) + "'");
        }
    }

    ShotResult result;
    result.shots = shots;
    result.seed = seed;

    SparseState state;
    std::string bits;
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        SplitMix64 rng(derive_seed(seed, shot));
        state.reset_to_zero();
        bits.clear();

        for (std::size_t i = 0; i < circuit.size(); ++i) {
            const Gate g = circuit.gate(i);
            const std::uint64_t m0 = std::uint64_t{1} << g.qubits[0];
            switch (g.op) {
                case GateOp::X: state.apply_x(m0); break;
                case GateOp::Sx: state.apply_sx(m0); break;
                case GateOp::Id: break;
                case GateOp::Rz: state.apply_rz(m0, g.theta); break;
                case GateOp::Cx: state.apply_cx(m0, std::uint64_t{1} << g.qubits[1]); break;
                case GateOp::Reset: {
                    const double p1 = state.prob_one(m0);
                    const bool was_one = rng.next_double() < p1;
                    state.project(m0, was_one);
                    if (was_one) state.clear_bit(m0);
                    break;
                }
                case GateOp::Measure: {
                    const double p1 = state.prob_one(m0);
                    const bool one = rng.next_double() < p1;
                    state.project(m0, one);
                    bits.push_back(one ? '1' : '0');
                    break;
                }
                default: break;
            }
            if (g.op == GateOp::Cx && noise.p2 > 0.0 && rng.next_double() < noise.p2) {
                // one of the 15 non-identity two-qubit Paulis, uniform
                const int pair = static_cast<int>(rng.next_below(15)) + 1;
                apply_pauli(state, pair / 4, m0);
                apply_pauli(state, pair % 4, std::uint64_t{1} << g.qubits[1]);
            } else if ((g.op == GateOp::X || g.op == GateOp::Sx || g.op == GateOp::Id ||
                        g.op == GateOp::Rz) &&
                       noise.p1 > 0.0 && rng.next_double() < noise.p1) {
                apply_pauli(state, static_cast<int>(rng.next_below(3)) + 1, m0);
            }
        }

        std::reverse(bits.begin(), bits.end());  // first-measured bit is the LSB
        ++result.counts[bits];
    }
    return result;
}

// ---------------------------------------------------------------------------
// Read fidelity

std::string FidelityReport::to_json() const {
    nlohmann::ordered_json j;
    j["builder"] = builder;
    j["n"] = n;
    j["d"] = d;
    j["config"] = config;
    j["strategy"] = strategy;
    j["connectivity"] = connectivity;
    j["seed"] = seed;
    j["shots"] = shots;
    j["p1"] = p1;
    j["p2"] = p2;
    j["mean_fidelity"] = mean_fidelity;
    j["per_address"] = nlohmann::ordered_json::array();
    for (const auto& [address, fidelity] : per_address)
        j["per_address"].push_back({{"address", address}, {"fidelity", fidelity}});
    return j.dump();
}

FidelityReport read_fidelity(const QromSpec& spec, const std::string& builder_id,
                             const std::optional<PartitionConfig>& config,
                             const McxStrategy& strategy, const CouplingMap* coupling,
                             const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed) {
    spec.validate();
    noise.validate();
    if (shots == 0) throw std::invalid_argument("read_fidelity: shots must be positive");

    Circuit stored = [&] {
        if (builder_id == "naive") return build_naive(spec);
        if (builder_id == "sawtooth") return build_sawtooth(spec);
        if (builder_id == "predecoded") {
            if (!config)
                throw std::invalid_argument("read_fidelity: predecoded builder needs a config");
            return build_predecoded(spec, *config);
        }
        throw std::invalid_argument("read_fidelity: unknown builder '" + builder_id + "'");
    }();

    FidelityReport report;
    report.builder = builder_id;
    report.n = spec.n;
    report.d = spec.d;
    report.config = config ? config->str() : "-";
    report.strategy = strategy_name(strategy.kind);
    report.connectivity = coupling ? (coupling->name().empty() ? "coupled" : coupling->name())
                                   : "full";
    report.seed = seed;
    report.shots = shots;
    report.p1 = noise.p1;
    report.p2 = noise.p2;

    const int read = stored.reg("read").offset;
    const int addr = stored.reg("address").offset;
    const int data = stored.reg("data").offset;

    double sum = 0.0;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << spec.n); ++a) {
        std::vector<std::pair<std::string, int>> regs;
        for (const Register& r : stored.registers()) regs.push_back({r.name, r.len});
        Circuit full = Circuit::with_registers(regs);
        full.x(read);
        for (int i = 0; i < spec.n; ++i)
            if ((a >> i) & 1) full.x(addr + i);
        for (std::size_t i = 0; i < stored.size(); ++i) full.append(stored.gate(i));
        for (int j = 0; j < spec.d; ++j) full.measure(data + j);

        CompileResult compiled = compile(full, strategy, coupling);
        const Circuit run_circuit =
            coupling ? compact_unused(compiled.circuit) : std::move(compiled.circuit);

        const ShotResult res =
            run_shots(run_circuit, noise, shots, derive_seed(seed, a));

        std::string expected;
        for (int j = spec.d - 1; j >= 0; --j)
            expected.push_back(((spec.data[a] >> j) & 1) ? '1' : '0');
        const auto it = res.counts.find(expected);
        const double fidelity =
            it == res.counts.end()
                ? 0.0
                : static_cast<double>(it->second) / static_cast<double>(shots);
        report.per_address.push_back({a, fidelity});
        sum += fidelity;
    }
    report.mean_fidelity = sum / static_cast<double>(report.per_address.size());
    return report;
}

}  // namespace qrom
