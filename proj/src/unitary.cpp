#include "qrom/unitary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrom {

namespace detail {

void xroot_matrix(int root_exp, bool dagger, cplx out[4]) {
    const double alpha = (dagger ? -1.0 : 1.0) / static_cast<double>(1ULL << root_exp);
    const cplx w = std::polar(1.0, std::numbers::pi * alpha);
    out[0] = 0.5 * (1.0 + w);
    out[1] = 0.5 * (1.0 - w);
    out[2] = 0.5 * (1.0 - w);
    out[3] = 0.5 * (1.0 + w);
}

namespace {

void apply_1q(std::vector<cplx>& amps, int q, const cplx u[4]) {
    const std::uint64_t bit = 1ULL << q;
    const std::uint64_t dim = amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const cplx a0 = amps[i];
        const cplx a1 = amps[i | bit];
        amps[i] = u[0] * a0 + u[1] * a1;
        amps[i | bit] = u[2] * a0 + u[3] * a1;
    }
}

void apply_ctrl_1q(std::vector<cplx>& amps, std::uint64_t cmask, int target, const cplx u[4]) {
    const std::uint64_t bit = 1ULL << target;
    const std::uint64_t dim = amps.size();
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        if ((i & cmask) != cmask) continue;
        const cplx a0 = amps[i];
        const cplx a1 = amps[i | bit];
        amps[i] = u[0] * a0 + u[1] * a1;
        amps[i | bit] = u[2] * a0 + u[3] * a1;
    }
}

}  // namespace

void apply_gate_dense(std::vector<cplx>& amps, int num_qubits, const Gate& g) {
    const std::uint64_t dim = amps.size();
    (void)num_qubits;
    switch (g.op) {
        case GateOp::Id:
            return;
        case GateOp::X: {
            const std::uint64_t bit = 1ULL << g.qubits[0];
            for (std::uint64_t i = 0; i < dim; ++i)
                if (!(i & bit)) std::swap(amps[i], amps[i | bit]);
            return;
        }
        case GateOp::Sx: {
            const cplx u[4] = {{0.5, 0.5}, {0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}};
            apply_1q(amps, g.qubits[0], u);
            return;
        }
        case GateOp::H: {
            const double r = 1.0 / std::sqrt(2.0);
            const cplx u[4] = {{r, 0}, {r, 0}, {r, 0}, {-r, 0}};
            apply_1q(amps, g.qubits[0], u);
            return;
        }
        case GateOp::Rz: {
            const std::uint64_t bit = 1ULL << g.qubits[0];
            const cplx p0 = std::polar(1.0, -g.theta / 2.0);
            const cplx p1 = std::polar(1.0, g.theta / 2.0);
            for (std::uint64_t i = 0; i < dim; ++i) amps[i] *= (i & bit) ? p1 : p0;
            return;
        }
        case GateOp::Swap: {
            const std::uint64_t ba = 1ULL << g.qubits[0];
            const std::uint64_t bb = 1ULL << g.qubits[1];
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & ba) && !(i & bb)) std::swap(amps[i], amps[(i ^ ba) | bb]);
            return;
        }
        case GateOp::Cx: {
            const std::uint64_t cb = 1ULL << g.qubits[0];
            const std::uint64_t tb = 1ULL << g.qubits[1];
            for (std::uint64_t i = 0; i < dim; ++i)
                if ((i & cb) && !(i & tb)) std::swap(amps[i], amps[i | tb]);
            return;
        }
        case GateOp::Ccx:
        case GateOp::Mcx: {
            std::uint64_t cmask = 0;
            for (std::size_t k = 0; k + 1 < g.qubits.size(); ++k) cmask |= 1ULL << g.qubits[k];
            const std::uint64_t tb = 1ULL << g.qubits.back();
            for (std::uint64_t i = 0; i < dim; ++i)
                if (!(i & tb) && (i & cmask) == cmask) std::swap(amps[i], amps[i | tb]);
            return;
        }
        case GateOp::McxRoot: {
            std::uint64_t cmask = 0;
            for (std::size_t k = 0; k + 1 < g.qubits.size(); ++k) cmask |= 1ULL << g.qubits[k];
            cplx v[4];
            xroot_matrix(g.root_exp, g.dagger, v);
            apply_ctrl_1q(amps, cmask, g.qubits.back(), v);
            return;
        }
        case GateOp::Reset:
        case GateOp::Measure:
            throw std::invalid_argument("reset/measure have no unitary action");
    }
}

}  // namespace detail

Unitary unitary_of(const Circuit& c) {
    if (c.num_qubits() > 12)
        throw std::invalid_argument("unitary_of supports at most 12 qubits, got " +
                                    std::to_string(c.num_qubits()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        const GateOp op = c.gate(i).op;
        if (op == GateOp::Reset || op == GateOp::Measure)
            throw std::invalid_argument("unitary_of refuses circuits with reset or measure");
    }
    const int dim = 1 << c.num_qubits();
    Unitary u(dim);
    std::vector<cplx> col(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
        std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
        col[static_cast<std::size_t>(j)] = 1.0;
        for (std::size_t i = 0; i < c.size(); ++i)
            detail::apply_gate_dense(col, c.num_qubits(), c.gate(i));
        for (int r = 0; r < dim; ++r) u.at(r, j) = col[static_cast<std::size_t>(r)];
    }
    return u;
}

bool approx_equal_up_to_phase(const Unitary& a, const Unitary& b, double tol) {
    if (a.dim != b.dim) return false;
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < a.m.size(); ++i) {
        const double mag = std::abs(a.m[i]);
        if (mag > best) {
            best = mag;
            imax = i;
        }
    }
    if (best <= 0.0) return false;
    if (std::abs(b.m[imax]) < 1e-12) return false;
    const cplx phase = a.m[imax] / b.m[imax];
    for (std::size_t i = 0; i < a.m.size(); ++i)
        if (std::abs(a.m[i] - phase * b.m[i]) > tol) return false;
    return true;
}

}  // namespace qrom
