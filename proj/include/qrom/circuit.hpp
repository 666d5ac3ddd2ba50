#ifndef QROM_CIRCUIT_HPP
#define QROM_CIRCUIT_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrom {

/// Gate vocabulary. MCX(1) is semantically a CX and MCX(2) a CCX; the kinds
/// stay distinct in histograms and serialized form. McxRoot(k, s) is the
/// k-controlled X^(1/2^s) (dagger flag for the inverse root); k = 0 is the
/// bare single-qubit root, s = 0 is rejected.
enum class GateOp : std::uint8_t {
    X,
    Sx,
    Id,
    Rz,
    H,
    Swap,
    Cx,
    Ccx,
    Mcx,
    McxRoot,
    Reset,
    Measure,
};

/// Read-only view of one gate. `qubits` points into the owning circuit's
/// storage; controls come first, target last (for controlled kinds).
struct Gate {
    GateOp op;
    double theta;    // Rz only
    int controls;    // Mcx / McxRoot
    int root_exp;    // McxRoot: s in X^(1/2^s)
    bool dagger;     // McxRoot
    std::span<const int> qubits;
};

/// Named contiguous qubit range. Registers of a circuit tile [0, num_qubits)
/// exactly, without gaps or overlap.
struct Register {
    std::string name;
    int offset = 0;
    int len = 0;
};

struct GateCounts {
    std::map<std::string, std::uint64_t> by_kind;
    std::uint64_t total = 0;
};

/// Histogram / serialization key for a gate ("cx", "mcx3", "mcxroot2s1dg", ...).
std::string gate_label(const Gate& g);

/// Ordered gate list over a fixed register layout. Appends validate qubit
/// arity, range and duplicates; a qubit that has been measured accepts no
/// further gates. Gate storage is a flat arena so multi-million-gate circuits
/// stay cheap to build and scan.
class Circuit {
  public:
    /// Registers must tile [0, total) contiguously when sorted by offset.
    explicit Circuit(std::vector<Register> registers);

    /// Convenience: assign sequential offsets in the order given.
    static Circuit with_registers(const std::vector<std::pair<std::string, int>>& name_len);

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] const std::vector<Register>& registers() const { return registers_; }
    /// Lookup by name; throws std::out_of_range if absent.
    [[nodiscard]] const Register& reg(std::string_view name) const;
    [[nodiscard]] bool has_reg(std::string_view name) const;

    [[nodiscard]] std::size_t size() const { return recs_.size(); }
    [[nodiscard]] Gate gate(std::size_t i) const;

    void x(int q);
    void sx(int q);
    void id(int q);
    void rz(double theta, int q);
    void h(int q);
    void swap(int a, int b);
    void cx(int control, int target);
    void ccx(int c0, int c1, int target);
    void mcx(std::span<const int> controls, int target);
    void mcx_root(std::span<const int> controls, int target, int root_exp, bool dagger = false);
    void reset(int q);
    void measure(int q);
    /// Re-append a gate view (possibly from another circuit) under this
    /// circuit's validation.
    void append(const Gate& g);

    /// Greedy ASAP layering: a gate lands one past the deepest layer already
    /// occupied on any of its qubits. Reset and Measure are depth-1 ops like
    /// any other. Empty circuit has depth 0.
    [[nodiscard]] std::uint64_t depth() const;
    [[nodiscard]] GateCounts gate_counts() const;

    /// Serialized form: {"num_qubits", "registers", "gates"} with gates as
    /// {"kind", "params"?, "qubits"}. Field order is fixed; doubles round-trip.
    [[nodiscard]] std::string to_json() const;
    static Circuit from_json(const std::string& text);

  private:
    struct GateRec {
        double theta;
        std::uint64_t qubit_offset;
        std::uint32_t qubit_count;
        std::uint16_t controls;
        std::uint16_t root_exp;
        GateOp op;
        bool dagger;
    };

    void append_raw(GateOp op, double theta, int controls, int root_exp, bool dagger,
                    std::span<const int> qubits);

    int num_qubits_ = 0;
    std::vector<Register> registers_;
    std::vector<GateRec> recs_;
    std::vector<int> qubit_arena_;
    std::vector<char> measured_;
};

}  // namespace qrom

#endif
