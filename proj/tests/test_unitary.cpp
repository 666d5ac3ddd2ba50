#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qrom/circuit.hpp"
#include "qrom/rng.hpp"
#include "qrom/unitary.hpp"

namespace {

qrom::Unitary matmul(const qrom::Unitary& a, const qrom::Unitary& b) {
    REQUIRE(a.dim == b.dim);
    qrom::Unitary out(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int k = 0; k < a.dim; ++k) {
            const qrom::cplx aik = a.at(i, k);
            if (std::abs(aik) == 0.0) continue;
            for (int j = 0; j < a.dim; ++j) out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

bool is_identity(const qrom::Unitary& u, double tol) {
    for (int i = 0; i < u.dim; ++i)
        for (int j = 0; j < u.dim; ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(u.at(i, j) - want) > tol) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("single-qubit gate matrices") {
    using qrom::cplx;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    {
        qrom::Circuit c = qrom::Circuit::with_registers({{"q", 1}});
        c.x(0);
        const qrom::Unitary u = qrom::unitary_of(c);
        CHECK(std::abs(u.at(0, 1) - 1.0) < 1e-12);
        CHECK(std::abs(u.at(1, 0) - 1.0) < 1e-12);
        CHECK(std::abs(u.at(0, 0)) < 1e-12);
    }
    {
        qrom::Circuit c = qrom::Circuit::with_registers({{"q", 1}});
        c.h(0);
        const qrom::Unitary u = qrom::unitary_of(c);
        CHECK(std::abs(u.at(0, 0) - inv_sqrt2) < 1e-12);
        CHECK(std::abs(u.at(0, 1) - inv_sqrt2) < 1e-12);
        CHECK(std::abs(u.at(1, 0) - inv_sqrt2) < 1e-12);
        CHECK(std::abs(u.at(1, 1) + inv_sqrt2) < 1e-12);
    }
    {
        const double theta = 0.7;
        qrom::Circuit c = qrom::Circuit::with_registers({{"q", 1}});
        c.rz(theta, 0);
        const qrom::Unitary u = qrom::unitary_of(c);
        CHECK(std::abs(u.at(0, 0) - std::exp(cplx(0, -theta / 2))) < 1e-12);
        CHECK(std::abs(u.at(1, 1) - std::exp(cplx(0, theta / 2))) < 1e-12);
        CHECK(std::abs(u.at(0, 1)) < 1e-12);
    }
    {
        qrom::Circuit c = qrom::Circuit::with_registers({{"q", 1}});
        c.sx(0);
        const qrom::Unitary u = qrom::unitary_of(c);
        CHECK(std::abs(u.at(0, 0) - cplx(0.5, 0.5)) < 1e-12);
        CHECK(std::abs(u.at(0, 1) - cplx(0.5, -0.5)) < 1e-12);
        CHECK(std::abs(u.at(1, 0) - cplx(0.5, -0.5)) < 1e-12);
        CHECK(std::abs(u.at(1, 1) - cplx(0.5, 0.5)) < 1e-12);
        // sx . sx = x
        qrom::Circuit cc = qrom::Circuit::with_registers({{"q", 1}});
        cc.sx(0);
        cc.sx(0);
        const qrom::Unitary u2 = qrom::unitary_of(cc);
        CHECK(std::abs(u2.at(1, 0) - 1.0) < 1e-12);
        CHECK(std::abs(u2.at(0, 0)) < 1e-12);
    }
    {
        qrom::Circuit c = qrom::Circuit::with_registers({{"q", 1}});
        c.id(0);
        CHECK(is_identity(qrom::unitary_of(c), 1e-15));
    }
}

TEST_CASE("basis indices are little-endian in qubit order") {
    // X on qubit 0 of a 2-qubit circuit maps |00> -> index 1, not index 2.
    qrom::Circuit c = qrom::Circuit::with_registers({{"q", 2}});
    c.x(0);
    const qrom::Unitary u = qrom::unitary_of(c);
    CHECK(std::abs(u.at(1, 0) - 1.0) < 1e-12);
    CHECK(std::abs(u.at(2, 0)) < 1e-12);

    // CX control q0 target q1: index 1 (q0=1) -> index 3; index 2 untouched.
    qrom::Circuit cc = qrom::Circuit::with_registers({{"q", 2}});
    cc.cx(0, 1);
    const qrom::Unitary v = qrom::unitary_of(cc);
    CHECK(std::abs(v.at(3, 1) - 1.0) < 1e-12);
    CHECK(std::abs(v.at(2, 2) - 1.0) < 1e-12);
    CHECK(std::abs(v.at(1, 1)) < 1e-12);

    // SWAP exchanges indices 1 and 2.
    qrom::Circuit cs = qrom::Circuit::with_registers({{"q", 2}});
    cs.swap(0, 1);
    const qrom::Unitary w = qrom::unitary_of(cs);
    CHECK(std::abs(w.at(2, 1) - 1.0) < 1e-12);
    CHECK(std::abs(w.at(1, 2) - 1.0) < 1e-12);
}

TEST_CASE("involutions and inverses") {
    qrom::Circuit xx = qrom::Circuit::with_registers({{"q", 1}});
    xx.x(0);
    xx.x(0);
    CHECK(is_identity(qrom::unitary_of(xx), 1e-12));

    // Square root of X applied twice equals CX when controlled.
    qrom::Circuit roots = qrom::Circuit::with_registers({{"q", 2}});
    const std::vector<int> ctl{0};
    roots.mcx_root(ctl, 1, 1);
    roots.mcx_root(ctl, 1, 1);
    qrom::Circuit cx = qrom::Circuit::with_registers({{"q", 2}});
    cx.cx(0, 1);
    CHECK(qrom::approx_equal_up_to_phase(qrom::unitary_of(roots), qrom::unitary_of(cx), 1e-12));

    // Root times its dagger is the identity, for several exponents and arities.
    for (int k = 0; k <= 2; ++k) {
        for (int s = 1; s <= 3; ++s) {
            qrom::Circuit c = qrom::Circuit::with_registers({{"q", k + 1}});
            std::vector<int> controls;
            for (int i = 0; i < k; ++i) controls.push_back(i);
            c.mcx_root(controls, k, s);
            c.mcx_root(controls, k, s, true);
            CHECK(is_identity(qrom::unitary_of(c), 1e-12));
        }
    }

    // 2^s-th power of the root recovers a plain controlled X.
    for (int s = 1; s <= 3; ++s) {
        qrom::Circuit c = qrom::Circuit::with_registers({{"q", 2}});
        for (int i = 0; i < (1 << s); ++i) c.mcx_root(ctl, 1, s);
        qrom::Circuit ref = qrom::Circuit::with_registers({{"q", 2}});
        ref.cx(0, 1);
        CHECK(qrom::approx_equal_up_to_phase(qrom::unitary_of(c), qrom::unitary_of(ref), 1e-10));
    }
}

TEST_CASE("mcx implements the exact permutation truth table") {
    for (int k = 2; k <= 5; ++k) {
        const int nq = k + 1;
        qrom::Circuit c = qrom::Circuit::with_registers({{"q", nq}});
        std::vector<int> controls;
        for (int i = 0; i < k; ++i) controls.push_back(i);
        c.mcx(controls, k);
        const qrom::Unitary u = qrom::unitary_of(c);
        const int dim = 1 << nq;
        const int all_controls = (1 << k) - 1;
        for (int b = 0; b < dim; ++b) {
            const bool fire = (b & all_controls) == all_controls;
            const int expect = fire ? (b ^ (1 << k)) : b;
            for (int r = 0; r < dim; ++r) {
                const double want = (r == expect) ? 1.0 : 0.0;
                CHECK(std::abs(u.at(r, b) - want) < 1e-12);
            }
        }
    }
}

TEST_CASE("circuit concatenation multiplies unitaries") {
    qrom::SplitMix64 rng{20250817};
    for (int trial = 0; trial < 10; ++trial) {
        const int nq = 3;
        qrom::Circuit first = qrom::Circuit::with_registers({{"q", nq}});
        qrom::Circuit second = qrom::Circuit::with_registers({{"q", nq}});
        qrom::Circuit whole = qrom::Circuit::with_registers({{"q", nq}});
        auto add_random = [&](qrom::Circuit& target, bool also_whole) {
            const int a = static_cast<int>(rng.next_below(nq));
            int b = static_cast<int>(rng.next_below(nq));
            while (b == a) b = static_cast<int>(rng.next_below(nq));
            switch (rng.next_below(4)) {
                case 0: target.h(a); if (also_whole) whole.h(a); break;
                case 1: {
                    const double t = 0.3 * static_cast<double>(1 + rng.next_below(5));
                    target.rz(t, a);
                    if (also_whole) whole.rz(t, a);
                    break;
                }
                case 2: target.cx(a, b); if (also_whole) whole.cx(a, b); break;
                default: target.swap(a, b); if (also_whole) whole.swap(a, b); break;
            }
        };
        for (int i = 0; i < 5; ++i) add_random(first, true);
        for (int i = 0; i < 5; ++i) add_random(second, true);
        const qrom::Unitary product = matmul(qrom::unitary_of(second), qrom::unitary_of(first));
        CHECK(qrom::approx_equal_up_to_phase(qrom::unitary_of(whole), product, 1e-10));
    }
}

TEST_CASE("unitary_of refuses non-unitary ops and oversized circuits") {
    qrom::Circuit m = qrom::Circuit::with_registers({{"q", 1}});
    m.measure(0);
    CHECK_THROWS_AS((void)qrom::unitary_of(m), std::invalid_argument);

    qrom::Circuit r = qrom::Circuit::with_registers({{"q", 1}});
    r.reset(0);
    CHECK_THROWS_AS((void)qrom::unitary_of(r), std::invalid_argument);

    qrom::Circuit big = qrom::Circuit::with_registers({{"q", 13}});
    CHECK_THROWS_AS((void)qrom::unitary_of(big), std::invalid_argument);
}

TEST_CASE("phase-insensitive comparison tolerates exactly a global phase") {
    qrom::Circuit a = qrom::Circuit::with_registers({{"q", 1}});
    a.h(0);
    const qrom::Unitary ua = qrom::unitary_of(a);

    qrom::Unitary shifted = ua;
    const qrom::cplx phase = std::exp(qrom::cplx(0, 1.234));
    for (auto& v : shifted.m) v *= phase;
    CHECK(qrom::approx_equal_up_to_phase(ua, shifted, 1e-12));

    qrom::Unitary bent = ua;
    bent.at(0, 0) += 0.01;
    CHECK_FALSE(qrom::approx_equal_up_to_phase(ua, bent, 1e-4));

    // Relative phases between entries are not forgiven.
    qrom::Unitary relphase = ua;
    relphase.at(1, 1) *= std::exp(qrom::cplx(0, 0.5));
    CHECK_FALSE(qrom::approx_equal_up_to_phase(ua, relphase, 1e-4));
}
