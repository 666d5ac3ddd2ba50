#ifndef QROM_UNITARY_HPP
#define QROM_UNITARY_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "qrom/circuit.hpp"

namespace qrom {

using cplx = std::complex<double>;

/// Dense row-major complex matrix of dimension 2^n.
struct Unitary {
    int dim = 0;
    std::vector<cplx> m;

    explicit Unitary(int d) : dim(d), m(static_cast<std::size_t>(d) * d, cplx{0.0, 0.0}) {}
    cplx& at(int row, int col) { return m[static_cast<std::size_t>(row) * dim + col]; }
    [[nodiscard]] const cplx& at(int row, int col) const {
        return m[static_cast<std::size_t>(row) * dim + col];
    }
};

/// Full unitary of a circuit, column by column, in the little-endian basis
/// convention (qubit 0 is the least significant bit of the basis index).
/// Limited to 12 qubits; Reset and Measure are refused.
Unitary unitary_of(const Circuit& c);

/// True when max|A - e^{i phi} B| <= tol for the best global phase phi.
bool approx_equal_up_to_phase(const Unitary& a, const Unitary& b, double tol);

namespace detail {
/// Apply one unitary gate in place to a dense amplitude vector (size 2^n).
/// Reset/Measure are not handled here.
void apply_gate_dense(std::vector<cplx>& amps, int num_qubits, const Gate& g);
/// 2x2 matrix of X^(1/2^root_exp) (daggered per flag), row-major.
void xroot_matrix(int root_exp, bool dagger, cplx out[4]);
}  // namespace detail

}  // namespace qrom

#endif
