#include "qrom/transpile.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <deque>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qrom/unitary.hpp"

namespace qrom {

std::string strategy_name(McxStrategyKind kind) {
    return kind == McxStrategyKind::RecursiveNoAncilla ? "recursive" : "vchain";
}

McxStrategyKind parse_strategy(const std::string& text) {
    if (text == "recursive") return McxStrategyKind::RecursiveNoAncilla;
    if (text == "vchain") return McxStrategyKind::VChain;
    throw std::invalid_argument("unknown mcx strategy '" + text + "' (want recursive|vchain)");
}

GateSpec to_gate_spec(const Gate& gate) {
    GateSpec spec;
    spec.op = gate.op;
    spec.theta = gate.theta;
    spec.controls = gate.controls;
    spec.root_exp = gate.root_exp;
    spec.dagger = gate.dagger;
    spec.qubits.assign(gate.qubits.begin(), gate.qubits.end());
    return spec;
}

namespace {

constexpr double kPi = std::numbers::pi;

GateSpec g1(GateOp op, int q, double theta = 0.0) {
    GateSpec g;
    g.op = op;
    g.theta = theta;
    g.qubits = {q};
    return g;
}

GateSpec gcx(int c, int t) {
    GateSpec g;
    g.op = GateOp::Cx;
    g.qubits = {c, t};
    return g;
}

GateSpec gccx(int a, int b, int t) {
    GateSpec g;
    g.op = GateOp::Ccx;
    g.qubits = {a, b, t};
    return g;
}

GateSpec gmcxroot(std::vector<int> qubits, int root_exp, bool dagger) {
    GateSpec g;
    g.op = GateOp::McxRoot;
    g.controls = static_cast<int>(qubits.size()) - 1;
    g.root_exp = root_exp;
    g.dagger = dagger;
    g.qubits = std::move(qubits);
    return g;
}

// --- controlled-square-root recursion -------------------------------------
// Time order of C^kX: C^{k-1}V(c1..c_{k-1} -> t), C^{k-1}X(-> c_k),
// CV'(c_k -> t), C^{k-1}X, CV(c_k -> t), with V = X^(1/2). The X branches
// recurse down to Toffolis; root branches stay as MCXRoot gates.
void expand_mcx_recursive(const std::vector<int>& ctrls, int t, std::vector<GateSpec>& out) {
    const int k = static_cast<int>(ctrls.size());
    if (k == 1) {
        out.push_back(gcx(ctrls[0], t));
        return;
    }
    if (k == 2) {
        out.push_back(gccx(ctrls[0], ctrls[1], t));
        return;
    }
    std::vector<int> head(ctrls.begin(), ctrls.end() - 1);
    std::vector<int> head_t = head;
    head_t.push_back(t);
    out.push_back(gmcxroot(head_t, 1, false));
    expand_mcx_recursive(head, ctrls.back(), out);
    out.push_back(gmcxroot({ctrls.back(), t}, 1, true));
    expand_mcx_recursive(head, ctrls.back(), out);
    out.push_back(gmcxroot({ctrls.back(), t}, 1, false));
}

// Same identity applied to C^k X^(1/2^s): the root branches deepen to s+1.
// A daggered input is the reverse sequence with every root's dagger flipped.
void expand_root_recursive(const std::vector<int>& ctrls, int t, int s, bool dagger,
                           std::vector<GateSpec>& out) {
    const int k = static_cast<int>(ctrls.size());
    if (k <= 1) {
        std::vector<int> qs(ctrls);
        qs.push_back(t);
        out.push_back(gmcxroot(qs, s, dagger));
        return;
    }
    std::vector<GateSpec> seq;
    std::vector<int> head(ctrls.begin(), ctrls.end() - 1);
    std::vector<int> head_t = head;
    head_t.push_back(t);
    seq.push_back(gmcxroot(head_t, s + 1, false));
    expand_mcx_recursive(head, ctrls.back(), seq);
    seq.push_back(gmcxroot({ctrls.back(), t}, s + 1, true));
    expand_mcx_recursive(head, ctrls.back(), seq);
    seq.push_back(gmcxroot({ctrls.back(), t}, s + 1, false));
    if (dagger) {
        std::reverse(seq.begin(), seq.end());
        for (GateSpec& g : seq)
            if (g.op == GateOp::McxRoot) g.dagger = !g.dagger;
    }
    for (GateSpec& g : seq) out.push_back(std::move(g));
}

// --- clean-ancilla Toffoli chain -------------------------------------------
void expand_mcx_vchain(const std::vector<int>& ctrls, int t, const std::vector<int>& anc,
                       std::vector<GateSpec>& out) {
    const int k = static_cast<int>(ctrls.size());
    if (static_cast<int>(anc.size()) < k - 2)
        throw std::invalid_argument("v-chain lowering needs k-2 clean ancilla qubits");
    std::vector<GateSpec> fwd;
    fwd.push_back(gccx(ctrls[0], ctrls[1], anc[0]));
    for (int i = 2; i <= k - 2; ++i) fwd.push_back(gccx(ctrls[i], anc[i - 2], anc[i - 1]));
    for (const GateSpec& g : fwd) out.push_back(g);
    out.push_back(gccx(ctrls[k - 1], anc[k - 3], t));
    for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) out.push_back(*it);
}

// Conjunction of all k controls is computed onto the chain head, one
// single-controlled root fires from it, then the chain unwinds.
void expand_root_vchain(const std::vector<int>& ctrls, int t, int s, bool dagger,
                        const std::vector<int>& anc, std::vector<GateSpec>& out) {
    const int k = static_cast<int>(ctrls.size());
    if (static_cast<int>(anc.size()) < k - 1)
        throw std::invalid_argument("v-chain root lowering needs k-1 clean ancilla qubits");
    std::vector<GateSpec> fwd;
    fwd.push_back(gccx(ctrls[0], ctrls[1], anc[0]));
    for (int i = 2; i <= k - 1; ++i) fwd.push_back(gccx(ctrls[i], anc[i - 2], anc[i - 1]));
    for (const GateSpec& g : fwd) out.push_back(g);
    out.push_back(gmcxroot({anc[k - 2], t}, s, dagger));
    for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) out.push_back(*it);
}

std::vector<int> vchain_scratch(const McxStrategy& strategy, const GateSpec& gate, int need) {
    if (!strategy.ancilla)
        throw std::invalid_argument("decompose_mcx: v-chain strategy needs an ancilla register");
    std::vector<int> anc;
    for (int i = 0; i < strategy.ancilla->len; ++i) {
        const int q = strategy.ancilla->offset + i;
        if (std::find(gate.qubits.begin(), gate.qubits.end(), q) != gate.qubits.end()) continue;
        anc.push_back(q);
    }
    if (static_cast<int>(anc.size()) < need)
        throw std::invalid_argument("decompose_mcx: v-chain ancilla register too small");
    return anc;
}

// --- gray-code multi-controlled phase network -------------------------------
// MCP(theta) over qubits qs: every rotation has magnitude theta/2^(m-1); the
// CX pattern walks the Gray code of each prefix so each subset parity is
// rotated exactly once.
void emit_mcp(double theta, const std::vector<int>& qs, std::vector<GateSpec>& out) {
    const int m = static_cast<int>(qs.size());
    const double unit = theta / static_cast<double>(1u << (m - 1));
    for (int M = 0; M < m; ++M) {
        if (M == 0) {
            out.push_back(g1(GateOp::Rz, qs[0], unit));
            continue;
        }
        unsigned prev = 0;
        for (unsigned i = 0; i < (1u << M); ++i) {
            const unsigned g = i ^ (i >> 1);
            if (i > 0) {
                const unsigned diff = g ^ prev;
                const int j = std::bit_width(diff) - 1;
                out.push_back(gcx(qs[j], qs[M]));
            }
            prev = g;
            const int size = std::popcount(g) + 1;
            const double sign = (size % 2 == 1) ? 1.0 : -1.0;
            out.push_back(g1(GateOp::Rz, qs[M], sign * unit));
        }
        out.push_back(gcx(qs[M - 1], qs[M]));
    }
}

// C^k X^(1/2^s) = (H on target) C^k P(+-pi/2^s) (H on target).
void expand_root_basis(const std::vector<int>& ctrls, int t, int s, bool dagger,
                       std::vector<GateSpec>& out) {
    const double theta = (dagger ? -1.0 : 1.0) * kPi / static_cast<double>(1u << s);
    out.push_back(g1(GateOp::H, t));
    std::vector<int> qs(ctrls);
    qs.push_back(t);
    emit_mcp(theta, qs, out);
    out.push_back(g1(GateOp::H, t));
}

// --- single-qubit ZSX lowering ----------------------------------------------
struct Mat2 {
    cplx m00, m01, m10, m11;
};

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

Mat2 rz_mat(double theta) {
    return {std::polar(1.0, -theta / 2.0), 0.0, 0.0, std::polar(1.0, theta / 2.0)};
}

Mat2 sx_mat() {
    return {cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5)};
}

bool mat_phase_equal(const Mat2& a, const Mat2& b, double tol) {
    const cplx* av[4] = {&a.m00, &a.m01, &a.m10, &a.m11};
    const cplx* bv[4] = {&b.m00, &b.m01, &b.m10, &b.m11};
    int anchor = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(*av[i]) > std::abs(*av[anchor])) anchor = i;
    if (std::abs(*bv[anchor]) < 1e-12) return false;
    const cplx phase = *av[anchor] / *bv[anchor];
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(*av[i] - phase * *bv[i]));
    return worst < tol;
}

// Lower a 2x2 unitary to {RZ, SX, X} up to global phase: diagonal and
// anti-diagonal matrices need no SX; |m00| = 1/sqrt(2) admits the short
// RZ-SX-RZ form (verified before use); anything else gets the generic
// RZ-SX-RZ-SX-RZ Euler form.
void emit_euler(const Mat2& M, int q, std::vector<GateSpec>& out) {
    constexpr double eps = 1e-10;
    const auto ang = [](cplx z) { return std::arg(z); };
    if (std::abs(M.m01) < eps && std::abs(M.m10) < eps) {
        const double theta = ang(M.m11) - ang(M.m00);
        if (std::abs(theta) >= eps) out.push_back(g1(GateOp::Rz, q, theta));
        return;
    }
    if (std::abs(M.m00) < eps && std::abs(M.m11) < eps) {
        const double d = ang(M.m01) - ang(M.m10);
        if (std::abs(d) >= eps) out.push_back(g1(GateOp::Rz, q, d));
        out.push_back(g1(GateOp::X, q));
        return;
    }
    if (std::abs(std::abs(M.m00) - 1.0 / std::sqrt(2.0)) < 1e-9) {
        const double p = ang(M.m11) - ang(M.m00);
        const double r = ang(M.m10) - ang(M.m01);
        const double a = (p + r) / 2.0;
        const double b = (p - r) / 2.0;
        const Mat2 candidate = mat_mul(rz_mat(a), mat_mul(sx_mat(), rz_mat(b)));
        if (mat_phase_equal(candidate, M, 1e-8)) {
            out.push_back(g1(GateOp::Rz, q, b));
            out.push_back(g1(GateOp::Sx, q));
            out.push_back(g1(GateOp::Rz, q, a));
            return;
        }
    }
    const double theta = 2.0 * std::atan2(std::abs(M.m10), std::abs(M.m00));
    const double g = ang(M.m00);
    const double phi = ang(M.m10) - g;
    const double lam = ang(-M.m01) - g;
    out.push_back(g1(GateOp::Rz, q, lam));
    out.push_back(g1(GateOp::Sx, q));
    out.push_back(g1(GateOp::Rz, q, theta + kPi));
    out.push_back(g1(GateOp::Sx, q));
    out.push_back(g1(GateOp::Rz, q, phi + kPi));
}

std::vector<GateSpec> toffoli_sequence(int a, int b, int t) {
    const double T = kPi / 4.0;
    return {
        g1(GateOp::H, t),  gcx(b, t), g1(GateOp::Rz, t, -T), gcx(a, t), g1(GateOp::Rz, t, T),
        gcx(b, t),         g1(GateOp::Rz, t, -T), gcx(a, t), g1(GateOp::Rz, b, T),
        g1(GateOp::Rz, t, T), g1(GateOp::H, t),   gcx(a, b), g1(GateOp::Rz, b, -T),
        gcx(a, b),         g1(GateOp::Rz, a, T),
    };
}

void split_controls(const GateSpec& gate, std::vector<int>& ctrls, int& target) {
    ctrls.assign(gate.qubits.begin(), gate.qubits.end() - 1);
    target = gate.qubits.back();
}

}  // namespace

std::vector<GateSpec> decompose_mcx(const GateSpec& gate, const McxStrategy& strategy) {
    if (gate.op != GateOp::Mcx && gate.op != GateOp::McxRoot)
        throw std::invalid_argument("decompose_mcx: gate must be MCX or MCXRoot");
    std::vector<int> ctrls;
    int target = 0;
    split_controls(gate, ctrls, target);
    const int k = static_cast<int>(ctrls.size());

    if (gate.op == GateOp::Mcx && k <= 2) return {gate};
    if (gate.op == GateOp::McxRoot && k <= 1) return {gate};

    std::vector<GateSpec> out;
    if (strategy.kind == McxStrategyKind::RecursiveNoAncilla) {
        if (gate.op == GateOp::Mcx)
            expand_mcx_recursive(ctrls, target, out);
        else
            expand_root_recursive(ctrls, target, gate.root_exp, gate.dagger, out);
    } else {
        const int need = gate.op == GateOp::Mcx ? k - 2 : k - 1;
        const std::vector<int> anc = vchain_scratch(strategy, gate, need);
        if (gate.op == GateOp::Mcx)
            expand_mcx_vchain(ctrls, target, anc, out);
        else
            expand_root_vchain(ctrls, target, gate.root_exp, gate.dagger, anc, out);
    }
    return out;
}

std::vector<GateSpec> decompose_toffoli(const GateSpec& gate) {
    if (gate.op != GateOp::Ccx || gate.qubits.size() != 3)
        throw std::invalid_argument("decompose_toffoli: gate must be CCX");
    return toffoli_sequence(gate.qubits[0], gate.qubits[1], gate.qubits[2]);
}

// ---------------------------------------------------------------------------
// to_basis

namespace {

void append_basis_spec(Circuit& out, const GateSpec& g) {
    switch (g.op) {
        case GateOp::X: out.x(g.qubits[0]); break;
        case GateOp::Sx: out.sx(g.qubits[0]); break;
        case GateOp::Id: out.id(g.qubits[0]); break;
        case GateOp::Rz: out.rz(g.theta, g.qubits[0]); break;
        case GateOp::Cx: out.cx(g.qubits[0], g.qubits[1]); break;
        case GateOp::Reset: out.reset(g.qubits[0]); break;
        case GateOp::Measure: out.measure(g.qubits[0]); break;
        default: throw std::logic_error("append_basis_spec: not a basis gate");
    }
}

class BasisLowerer {
public:
    BasisLowerer(Circuit& out, McxStrategyKind kind, std::vector<int> anc)
        : out_(out), kind_(kind), anc_(std::move(anc)) {}

    void lower(const GateSpec& g) {
        switch (g.op) {
            case GateOp::X:
            case GateOp::Sx:
            case GateOp::Id:
            case GateOp::Rz:
            case GateOp::Cx:
            case GateOp::Reset:
            case GateOp::Measure:
                append_basis_spec(out_, g);
                return;
            case GateOp::H:
                out_.rz(kPi / 2.0, g.qubits[0]);
                out_.sx(g.qubits[0]);
                out_.rz(kPi / 2.0, g.qubits[0]);
                return;
            case GateOp::Swap:
                out_.cx(g.qubits[0], g.qubits[1]);
                out_.cx(g.qubits[1], g.qubits[0]);
                out_.cx(g.qubits[0], g.qubits[1]);
                return;
            case GateOp::Ccx:
                for (const GateSpec& sub : toffoli_sequence(g.qubits[0], g.qubits[1], g.qubits[2]))
                    lower(sub);
                return;
            case GateOp::Mcx:
                lower_mcx(g);
                return;
            case GateOp::McxRoot:
                lower_root(g);
                return;
        }
        throw std::invalid_argument("to_basis: unknown gate kind");
    }

private:
    void lower_mcx(const GateSpec& g) {
        std::vector<int> ctrls;
        int target = 0;
        split_controls(g, ctrls, target);
        const int k = static_cast<int>(ctrls.size());
        if (k == 1) {
            out_.cx(ctrls[0], target);
            return;
        }
        if (k == 2) {
            for (const GateSpec& sub : toffoli_sequence(ctrls[0], ctrls[1], target)) lower(sub);
            return;
        }
        std::vector<GateSpec> sub;
        if (kind_ == McxStrategyKind::RecursiveNoAncilla)
            expand_mcx_recursive(ctrls, target, sub);
        else
            expand_mcx_vchain(ctrls, target, scratch_for(g, k - 2), sub);
        for (const GateSpec& s : sub) lower(s);
    }

    void lower_root(const GateSpec& g) {
        std::vector<int> ctrls;
        int target = 0;
        split_controls(g, ctrls, target);
        const int k = static_cast<int>(ctrls.size());
        if (k == 0) {
            cplx v[4];
            detail::xroot_matrix(g.root_exp, g.dagger, v);
            std::vector<GateSpec> sub;
            emit_euler({v[0], v[1], v[2], v[3]}, target, sub);
            for (const GateSpec& s : sub) append_basis_spec(out_, s);
            return;
        }
        if (kind_ == McxStrategyKind::VChain && k >= 2) {
            std::vector<GateSpec> sub;
            expand_root_vchain(ctrls, target, g.root_exp, g.dagger, scratch_for(g, k - 1), sub);
            for (const GateSpec& s : sub) lower(s);
            return;
        }
        std::vector<GateSpec> sub;
        expand_root_basis(ctrls, target, g.root_exp, g.dagger, sub);
        for (const GateSpec& s : sub) lower(s);
    }

    std::vector<int> scratch_for(const GateSpec& g, int need) {
        std::vector<int> avail;
        for (int q : anc_)
            if (std::find(g.qubits.begin(), g.qubits.end(), q) == g.qubits.end()) avail.push_back(q);
        if (static_cast<int>(avail.size()) < need)
            throw std::invalid_argument("to_basis: v-chain ancilla register too small");
        return avail;
    }

    Circuit& out_;
    McxStrategyKind kind_;
    std::vector<int> anc_;
};

}  // namespace

Circuit to_basis(const Circuit& circuit, const McxStrategy& strategy) {
    int need = 0;
    if (strategy.kind == McxStrategyKind::VChain) {
        for (std::size_t i = 0; i < circuit.size(); ++i) {
            const Gate g = circuit.gate(i);
            if (g.op == GateOp::Mcx && g.controls >= 3) need = std::max(need, g.controls - 2);
            if (g.op == GateOp::McxRoot && g.controls >= 2) need = std::max(need, g.controls - 1);
        }
    }

    std::vector<std::pair<std::string, int>> regs;
    for (const Register& r : circuit.registers()) regs.push_back({r.name, r.len});
    std::vector<int> anc;
    if (need > 0) {
        if (strategy.ancilla) {
            const Register& r = *strategy.ancilla;
            if (r.offset == circuit.num_qubits()) {
                regs.push_back({r.name, r.len});
            } else if (!(r.offset >= 0 && r.offset + r.len <= circuit.num_qubits())) {
                throw std::invalid_argument(
                    "to_basis: ancilla register must lie inside the circuit or tile its end");
            }
            for (int i = 0; i < r.len; ++i) anc.push_back(r.offset + i);
        } else {
            regs.push_back({"decomp_anc", need});
            for (int i = 0; i < need; ++i) anc.push_back(circuit.num_qubits() + i);
        }
    }

    Circuit out = Circuit::with_registers(regs);
    BasisLowerer lowerer(out, strategy.kind, anc);
    for (std::size_t i = 0; i < circuit.size(); ++i) lowerer.lower(to_gate_spec(circuit.gate(i)));
    return out;
}

// ---------------------------------------------------------------------------
// CouplingMap

CouplingMap CouplingMap::from_edges(int num_qubits, const std::vector<std::pair<int, int>>& edges,
                                    std::string name) {
    if (num_qubits < 1) throw std::invalid_argument("CouplingMap: need at least one qubit");
    CouplingMap cm;
    cm.name_ = std::move(name);
    cm.adj_.resize(static_cast<std::size_t>(num_qubits));
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= num_qubits || v >= num_qubits)
            throw std::invalid_argument("CouplingMap: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("CouplingMap: self-loop");
        const auto key = std::minmax(u, v);
        if (!seen.insert({key.first, key.second}).second)
            throw std::invalid_argument("CouplingMap: duplicate edge");
        cm.adj_[static_cast<std::size_t>(u)].push_back(v);
        cm.adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    cm.num_edges_ = static_cast<int>(seen.size());
    for (auto& nbrs : cm.adj_) std::sort(nbrs.begin(), nbrs.end());

    // Connectivity check (routing needs a path between any two qubits).
    std::vector<char> visited(static_cast<std::size_t>(num_qubits), 0);
    std::deque<int> queue{0};
    visited[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : cm.adj_[static_cast<std::size_t>(u)]) {
            if (!visited[static_cast<std::size_t>(v)]) {
                visited[static_cast<std::size_t>(v)] = 1;
                ++reached;
                queue.push_back(v);
            }
        }
    }
    if (reached != num_qubits) throw std::invalid_argument("CouplingMap: graph is disconnected");
    return cm;
}

CouplingMap CouplingMap::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("CouplingMap: cannot open '" + path + "'");
    std::vector<std::pair<int, int>> edges;
    int max_index = -1;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int u = 0, v = 0;
        if (!(ls >> u)) continue;  // blank or comment-only line
        if (!(ls >> v)) throw std::invalid_argument("CouplingMap: malformed line '" + line + "'");
        int extra = 0;
        if (ls >> extra) throw std::invalid_argument("CouplingMap: malformed line '" + line + "'");
        edges.push_back({u, v});
        max_index = std::max({max_index, u, v});
    }
    if (edges.empty()) throw std::invalid_argument("CouplingMap: no edges in '" + path + "'");
    return from_edges(max_index + 1, edges, path);
}

bool CouplingMap::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= num_qubits() || v >= num_qubits()) return false;
    const auto& nbrs = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

// ---------------------------------------------------------------------------
// Routing

namespace {

// BFS shortest path; neighbors expand in ascending order so the first path
// found is the lexicographically lowest among shortest paths.
std::vector<int> bfs_path(const CouplingMap& cm, int src, int dst) {
    std::vector<int> parent(static_cast<std::size_t>(cm.num_qubits()), -1);
    std::deque<int> queue{src};
    parent[static_cast<std::size_t>(src)] = src;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        if (u == dst) break;
        for (int v : cm.neighbors(u)) {
            if (parent[static_cast<std::size_t>(v)] == -1) {
                parent[static_cast<std::size_t>(v)] = u;
                queue.push_back(v);
            }
        }
    }
    std::vector<int> path;
    for (int v = dst; v != src; v = parent[static_cast<std::size_t>(v)]) path.push_back(v);
    path.push_back(src);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

RouteResult route(const Circuit& circuit, const CouplingMap& coupling,
                  const std::vector<int>& initial_layout) {
    const int num_logical = circuit.num_qubits();
    const int num_physical = coupling.num_qubits();
    if (num_logical > num_physical)
        throw std::invalid_argument("route: more logical qubits than physical qubits");

    std::vector<int> layout;  // logical -> physical
    if (initial_layout.empty()) {
        layout.resize(static_cast<std::size_t>(num_logical));
        for (int i = 0; i < num_logical; ++i) layout[static_cast<std::size_t>(i)] = i;
    } else {
        if (static_cast<int>(initial_layout.size()) != num_logical)
            throw std::invalid_argument("route: initial layout size mismatch");
        layout = initial_layout;
    }
    std::vector<int> phys2log(static_cast<std::size_t>(num_physical), -1);
    for (int l = 0; l < num_logical; ++l) {
        const int p = layout[static_cast<std::size_t>(l)];
        if (p < 0 || p >= num_physical || phys2log[static_cast<std::size_t>(p)] != -1)
            throw std::invalid_argument("route: initial layout is not injective into the device");
        phys2log[static_cast<std::size_t>(p)] = l;
    }

    RouteResult result{Circuit::with_registers({{"phys", num_physical}}), {}, 0};
    Circuit& out = result.circuit;

    const auto swap_physical = [&](int pa, int pb) {
        out.swap(pa, pb);
        const int la = phys2log[static_cast<std::size_t>(pa)];
        const int lb = phys2log[static_cast<std::size_t>(pb)];
        std::swap(phys2log[static_cast<std::size_t>(pa)], phys2log[static_cast<std::size_t>(pb)]);
        if (la != -1) layout[static_cast<std::size_t>(la)] = pb;
        if (lb != -1) layout[static_cast<std::size_t>(lb)] = pa;
        ++result.swaps_inserted;
    };

    for (std::size_t i = 0; i < circuit.size(); ++i) {
        const Gate g = circuit.gate(i);
        if (g.qubits.size() > 2)
            throw std::invalid_argument("route: circuit must be lowered to <= 2-qubit gates first");
        if (g.qubits.size() == 2) {
            int p0 = layout[static_cast<std::size_t>(g.qubits[0])];
            const int p1 = layout[static_cast<std::size_t>(g.qubits[1])];
            if (!coupling.has_edge(p0, p1)) {
                const std::vector<int> path = bfs_path(coupling, p0, p1);
                for (std::size_t step = 0; step + 2 < path.size(); ++step)
                    swap_physical(path[step], path[step + 1]);
                p0 = layout[static_cast<std::size_t>(g.qubits[0])];
            }
            GateSpec spec = to_gate_spec(g);
            spec.qubits = {p0, layout[static_cast<std::size_t>(g.qubits[1])]};
            Gate mapped{spec.op, spec.theta, spec.controls, spec.root_exp, spec.dagger,
                        std::span<const int>(spec.qubits)};
            out.append(mapped);
        } else {
            GateSpec spec = to_gate_spec(g);
            spec.qubits = {layout[static_cast<std::size_t>(g.qubits[0])]};
            Gate mapped{spec.op, spec.theta, spec.controls, spec.root_exp, spec.dagger,
                        std::span<const int>(spec.qubits)};
            out.append(mapped);
        }
    }
    result.final_layout = std::move(layout);
    return result;
}

Circuit lower_swaps(const Circuit& circuit) {
    std::vector<std::pair<std::string, int>> regs;
    for (const Register& r : circuit.registers()) regs.push_back({r.name, r.len});
    Circuit out = Circuit::with_registers(regs);
    for (std::size_t i = 0; i < circuit.size(); ++i) {
        const Gate g = circuit.gate(i);
        if (g.op == GateOp::Swap) {
            out.cx(g.qubits[0], g.qubits[1]);
            out.cx(g.qubits[1], g.qubits[0]);
            out.cx(g.qubits[0], g.qubits[1]);
        } else {
            out.append(g);
        }
    }
    return out;
}

Circuit compact_unused(const Circuit& circuit) {
    std::vector<char> used(static_cast<std::size_t>(circuit.num_qubits()), 0);
    for (std::size_t i = 0; i < circuit.size(); ++i)
        for (int q : circuit.gate(i).qubits) used[static_cast<std::size_t>(q)] = 1;
    std::vector<int> remap(static_cast<std::size_t>(circuit.num_qubits()), -1);
    int next = 0;
    for (int q = 0; q < circuit.num_qubits(); ++q)
        if (used[static_cast<std::size_t>(q)]) remap[static_cast<std::size_t>(q)] = next++;
    if (next == 0) return Circuit::with_registers({{"q", 1}});

    Circuit out = Circuit::with_registers({{"q", next}});
    std::vector<int> qs;
    for (std::size_t i = 0; i < circuit.size(); ++i) {
        const Gate g = circuit.gate(i);
        qs.clear();
        for (int q : g.qubits) qs.push_back(remap[static_cast<std::size_t>(q)]);
        Gate mapped{g.op, g.theta, g.controls, g.root_exp, g.dagger, std::span<const int>(qs)};
        out.append(mapped);
    }
    return out;
}

// ---------------------------------------------------------------------------
// compile

CompileResult compile(const Circuit& circuit, const McxStrategy& strategy,
                      const CouplingMap* coupling) {
    const auto t0 = std::chrono::steady_clock::now();
    Circuit lowered = to_basis(circuit, strategy);
    int swaps = 0;
    if (coupling != nullptr) {
        RouteResult routed = route(lowered, *coupling);
        swaps = routed.swaps_inserted;
        lowered = lower_swaps(routed.circuit);
    }
    const auto t1 = std::chrono::steady_clock::now();

    CompileResult result{std::move(lowered), {}};
    CompilationReport& report = result.report;
    report.wall_time_s = std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9);
    report.depth = result.circuit.depth();
    const GateCounts counts = result.circuit.gate_counts();
    report.total_gates = counts.total;
    report.basis_gate_counts = counts.by_kind;
    report.num_qubits = result.circuit.num_qubits();
    report.swaps_inserted = swaps;
    return result;
}

}  // namespace qrom
