#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "qrom/circuit.hpp"
#include "qrom/qrom.hpp"
#include "qrom/rng.hpp"
#include "qrom/simulate.hpp"

namespace {

// Number of integer partitions of n into parts in descending order; used as
// an independent count for the config enumeration (each config is one
// partition of its pre-decoded lines plus undecoded singletons).
int partition_count(int n) {
    std::vector<std::vector<int>> memo(static_cast<std::size_t>(n) + 1,
                                       std::vector<int>(static_cast<std::size_t>(n) + 1, -1));
    auto count = [&](auto&& self, int rest, int maxpart) -> int {
        if (rest == 0) return 1;
        if (maxpart == 0) return 0;
        int& slot = memo[static_cast<std::size_t>(rest)][static_cast<std::size_t>(maxpart)];
        if (slot >= 0) return slot;
        int total = self(self, rest, maxpart - 1);
        if (rest >= maxpart) total += self(self, rest - maxpart, maxpart);
        return slot = total;
    };
    return count(count, n, n);
}

// Index of the lone basis state a deterministic circuit ends in, or -1 when
// the state is not a single basis vector.
long long lone_basis_state(const std::vector<qrom::cplx>& amps) {
    long long hit = -1;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double mag = std::abs(amps[i]);
        if (mag > 1e-9) {
            if (hit >= 0 || std::abs(mag - 1.0) > 1e-9) return -1;
            hit = static_cast<long long>(i);
        }
    }
    return hit;
}

qrom::Circuit build_by(const std::string& id, const qrom::QromSpec& spec,
                       const std::optional<qrom::PartitionConfig>& config,
                       qrom::Uncompute mode) {
    qrom::BuilderOptions opt;
    opt.uncompute = mode;
    if (id == "naive") return qrom::build_naive(spec, opt);
    if (id == "sawtooth") return qrom::build_sawtooth(spec, opt);
    return qrom::build_predecoded(spec, *config, opt);
}

// Runs every address through the lookup circuit on the statevector engine
// and checks the read flag, address and ancillas are restored while the data
// register holds the stored word, exactly.
void check_readback(const std::string& id, const qrom::QromSpec& spec,
                    const std::optional<qrom::PartitionConfig>& config, qrom::Uncompute mode) {
    const qrom::Circuit stored = build_by(id, spec, config, mode);
    const qrom::Register read = stored.reg("read");
    const qrom::Register addr = stored.reg("address");
    const qrom::Register data = stored.reg("data");
    for (std::uint32_t a = 0; a < (1u << spec.n); ++a) {
        qrom::Circuit run(stored.registers());
        run.x(read.offset);
        for (int b = 0; b < spec.n; ++b)
            if (a & (1u << b)) run.x(addr.offset + b);
        for (std::size_t i = 0; i < stored.size(); ++i) run.append(stored.gate(i));
        const long long state = lone_basis_state(qrom::run_statevector(run));
        long long expect = 1ll << read.offset;
        expect |= static_cast<long long>(a) << addr.offset;
        expect |= static_cast<long long>(spec.data[a]) << data.offset;
        CHECK_MESSAGE(state == expect, id, " mode=", static_cast<int>(mode), " n=", spec.n,
                      " address=", a, " got state ", state, " expected ", expect);
        if (state != expect) return;  // one detailed failure per table is enough
    }
}

}  // namespace

TEST_CASE("memory spec validation") {
    CHECK_THROWS_AS((qrom::QromSpec{0, 4, {}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((qrom::QromSpec{1, 0, {0, 1}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((qrom::QromSpec{2, 4, {1, 2, 3}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((qrom::QromSpec{1, 2, {4, 0}}.validate()),
                    std::invalid_argument);  // word too wide
    const qrom::QromSpec ok{2, 4, {5, 7, 2, 1}};
    ok.validate();
    const qrom::QromSpec back = qrom::QromSpec::from_json(ok.to_json());
    CHECK(back.n == 2);
    CHECK(back.d == 4);
    CHECK(back.data == ok.data);
    CHECK_THROWS_AS(qrom::QromSpec::from_json("{\"n\":1}"), std::invalid_argument);
}

TEST_CASE("seeded random tables are deterministic and in range") {
    const qrom::QromSpec a = qrom::random_spec(3, 4, 42);
    const qrom::QromSpec b = qrom::random_spec(3, 4, 42);
    CHECK(a.data == b.data);
    CHECK(a.data.size() == 8);
    for (std::uint32_t w : a.data) CHECK(w < 16);
    const qrom::QromSpec c = qrom::random_spec(3, 4, 43);
    CHECK(a.data != c.data);
    const qrom::QromSpec wide = qrom::random_spec(2, 8, 42);
    for (std::uint32_t w : wide.data) CHECK(w < 256);
}

TEST_CASE("partition config parsing and canonical text") {
    const qrom::PartitionConfig c = qrom::parse_config("2P+2P+1U");
    REQUIRE(c.groups.size() == 3);
    CHECK(c.groups[0] == qrom::Group{2, qrom::GroupMode::Predecode});
    CHECK(c.groups[2] == qrom::Group{1, qrom::GroupMode::Undecoded});
    CHECK(c.str() == "2P+2P+1U");
    CHECK(c.total_lines() == 5);
    CHECK(c.predecoded_lines() == 4);

    CHECK(qrom::parse_config("2p+3u").str() == "2P+3U");
    CHECK(qrom::parse_config(" 1P + 1U ").str() == "1P+1U");

    CHECK_THROWS_AS(qrom::parse_config(""), std::invalid_argument);
    CHECK_THROWS_AS(qrom::parse_config("2P+0U"), std::invalid_argument);
    CHECK_THROWS_AS(qrom::parse_config("P"), std::invalid_argument);
    CHECK_THROWS_AS(qrom::parse_config("3"), std::invalid_argument);
    CHECK_THROWS_AS(qrom::parse_config("2X"), std::invalid_argument);
    CHECK_THROWS_AS(qrom::parse_config("2P++1U"), std::invalid_argument);
    CHECK_THROWS_AS(qrom::parse_config("25P"), std::invalid_argument);
}

TEST_CASE("config normalization splits undecoded groups and sorts") {
    CHECK(qrom::parse_config("1U+2P").normalized().str() == "2P+1U");
    CHECK(qrom::parse_config("3U").normalized().str() == "1U+1U+1U");
    CHECK(qrom::parse_config("1P+3P+2U").normalized().str() == "3P+1P+1U+1U");
    const qrom::PartitionConfig once = qrom::parse_config("2U+1P+2P").normalized();
    CHECK(once.normalized() == once);
}

TEST_CASE("config enumeration is complete, canonical and sorted") {
    const std::vector<qrom::PartitionConfig> two = qrom::enumerate_configs(2);
    std::set<std::string> names;
    for (const auto& c : two) names.insert(c.str());
    CHECK(names == std::set<std::string>{"1P+1P", "1P+1U", "1U+1U", "2P"});

    for (int n = 1; n <= 6; ++n) {
        const std::vector<qrom::PartitionConfig> configs = qrom::enumerate_configs(n);
        // One config per partition of j pre-decoded lines, j = 0..n.
        int expect = 0;
        for (int j = 0; j <= n; ++j) expect += partition_count(j);
        CHECK(static_cast<int>(configs.size()) == expect);

        std::set<std::string> seen;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            const qrom::PartitionConfig& c = configs[i];
            CHECK(c.total_lines() == n);
            CHECK(c.normalized() == c);
            CHECK(seen.insert(c.str()).second);
            if (i > 0) CHECK(configs[i - 1].str() < c.str());
        }
    }
    CHECK_THROWS_AS(qrom::enumerate_configs(0), std::invalid_argument);
    CHECK_THROWS_AS(qrom::enumerate_configs(13), std::invalid_argument);
}

TEST_CASE("balanced two-group default config") {
    CHECK(qrom::optimal_config(1).str() == "1P");
    CHECK(qrom::optimal_config(2).str() == "1P+1P");
    CHECK(qrom::optimal_config(5).str() == "3P+2P");
    CHECK(qrom::optimal_config(8).str() == "4P+4P");
}

TEST_CASE("plain builder: registers, census and gate order") {
    const qrom::QromSpec spec{2, 4, {5, 7, 2, 1}};
    qrom::BuilderOptions mirror;
    mirror.uncompute = qrom::Uncompute::Mirror;
    const qrom::Circuit c = qrom::build_naive(spec, mirror);

    CHECK(c.num_qubits() == 8);
    CHECK(c.reg("read").offset == 0);
    CHECK(c.reg("address").offset == 1);
    CHECK(c.reg("cnot_ctrl").offset == 3);
    CHECK(c.reg("data").offset == 4);

    // Address 0 prologue: select both zero address bits, fire the wide gate,
    // deselect, then copy word 5 = 0b0101 onto data bits 0 and 2.
    REQUIRE(c.size() >= 7);
    CHECK(c.gate(0).op == qrom::GateOp::X);
    CHECK(c.gate(0).qubits[0] == 1);
    CHECK(c.gate(1).op == qrom::GateOp::X);
    CHECK(c.gate(1).qubits[0] == 2);
    CHECK(c.gate(2).op == qrom::GateOp::Mcx);
    CHECK(c.gate(2).controls == 3);
    CHECK(c.gate(2).qubits[0] == 0);  // read flag is the first control
    CHECK(c.gate(2).qubits[3] == 3);  // shared control target
    CHECK(c.gate(3).op == qrom::GateOp::X);
    CHECK(c.gate(4).op == qrom::GateOp::X);
    CHECK(c.gate(5).op == qrom::GateOp::Cx);
    CHECK(c.gate(5).qubits[0] == 3);
    CHECK(c.gate(5).qubits[1] == 4);
    CHECK(c.gate(6).op == qrom::GateOp::Cx);
    CHECK(c.gate(6).qubits[1] == 6);
}

TEST_CASE("ladder builder: two Toffolis per address and n=1 fallback") {
    const qrom::QromSpec spec{2, 4, {5, 7, 2, 1}};
    qrom::BuilderOptions mirror;
    mirror.uncompute = qrom::Uncompute::Mirror;
    const qrom::Circuit c = qrom::build_sawtooth(spec, mirror);

    CHECK(c.num_qubits() == 9);
    CHECK(c.reg("ladder_anc").len == 1);
    const qrom::GateCounts g = c.gate_counts();
    CHECK(g.by_kind.at("ccx") == 16);  // 2 per address, computed and mirrored
    CHECK(g.by_kind.count("mcx3") == 0);
    CHECK(g.by_kind.at("cx") == 7);

    // Reset flavor uncomputed by measurement-free resets instead.
    qrom::BuilderOptions reset;
    reset.uncompute = qrom::Uncompute::Reset;
    const qrom::GateCounts gr = qrom::build_sawtooth(spec, reset).gate_counts();
    CHECK(gr.by_kind.at("ccx") == 8);
    CHECK(gr.by_kind.at("reset") == 8);  // shared control + ladder ancilla, per address

    // One address line leaves nothing to ladder over.
    const qrom::QromSpec one{1, 3, {6, 1}};
    CHECK(qrom::build_sawtooth(one, mirror).to_json() == qrom::build_naive(one, mirror).to_json());
}

TEST_CASE("predecode stage computes minterms in ancilla-index order") {
    const qrom::QromSpec spec{2, 4, {5, 7, 2, 1}};
    const qrom::Circuit c =
        qrom::build_predecoded(spec, qrom::parse_config("2P"), qrom::BuilderOptions{});

    // Registers: read(0), address(1..2), predecode_anc0(3..6), ctrl(7), data(8..11).
    CHECK(c.num_qubits() == 12);
    const qrom::Register anc = c.reg("predecode_anc0");
    CHECK(anc.offset == 3);
    CHECK(anc.len == 4);
    CHECK(c.reg("cnot_ctrl").offset == 7);

    // Stage 1, minterm v: flip the group lines whose bit of v is zero, AND the
    // group onto ancilla v, flip back. Line for bit 0 is address qubit 1.
    struct Minterm {
        std::vector<int> flips;
        int target;
    };
    const std::vector<Minterm> expect = {
        {{1, 2}, 3}, {{2}, 4}, {{1}, 5}, {{}, 6}};
    std::size_t gi = 0;
    for (const Minterm& m : expect) {
        for (int f : m.flips) {
            CHECK(c.gate(gi).op == qrom::GateOp::X);
            CHECK(c.gate(gi).qubits[0] == f);
            ++gi;
        }
        CHECK(c.gate(gi).op == qrom::GateOp::Mcx);
        CHECK(c.gate(gi).controls == 2);
        CHECK(c.gate(gi).qubits[0] == 1);
        CHECK(c.gate(gi).qubits[1] == 2);
        CHECK(c.gate(gi).qubits[2] == m.target);
        ++gi;
        gi += m.flips.size();  // unwind flips
    }

    // Stage 2 first address: AND of read and minterm-0 ancilla onto the ctrl.
    CHECK(c.gate(gi).op == qrom::GateOp::Mcx);
    CHECK(c.gate(gi).controls == 2);
    CHECK(c.gate(gi).qubits[0] == 0);
    CHECK(c.gate(gi).qubits[1] == 3);
    CHECK(c.gate(gi).qubits[2] == 7);
}

TEST_CASE("predecoded groups own address lines top-down in listed order") {
    // 2P+1U over n=3: first group owns bits 2..1, the undecoded line is bit 0.
    const qrom::QromSpec spec{3, 4, {1, 2, 3, 4, 5, 6, 7, 0}};
    const qrom::Circuit c =
        qrom::build_predecoded(spec, qrom::parse_config("2P+1U"), qrom::BuilderOptions{});
    const qrom::Register anc = c.reg("predecode_anc0");
    CHECK(anc.len == 4);
    // Stage-1 minterm 0 of the leading group: flips on address bits 1 and 2
    // (qubits 2 and 3), never on bit 0 (qubit 1).
    CHECK(c.gate(0).op == qrom::GateOp::X);
    CHECK(c.gate(0).qubits[0] == 2);
    CHECK(c.gate(1).op == qrom::GateOp::X);
    CHECK(c.gate(1).qubits[0] == 3);
    CHECK(c.gate(2).op == qrom::GateOp::Mcx);
    CHECK(c.gate(2).qubits[0] == 2);
    CHECK(c.gate(2).qubits[1] == 3);
    CHECK(c.gate(2).qubits[2] == anc.offset);

    // Per-address gate arity: read + one ancilla + one undecoded line.
    bool found = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const qrom::Gate g = c.gate(i);
        if (g.op == qrom::GateOp::Mcx && g.qubits.back() == c.reg("cnot_ctrl").offset) {
            CHECK(g.controls == 3);
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("builders only ever control from the read and address lines") {
    const qrom::QromSpec spec = qrom::random_spec(3, 4, 7);
    const std::vector<std::pair<std::string, std::optional<qrom::PartitionConfig>>> cases = {
        {"naive", std::nullopt},
        {"sawtooth", std::nullopt},
        {"predecoded", qrom::parse_config("2P+1U")},
    };
    for (const auto& [id, config] : cases) {
        for (qrom::Uncompute mode : {qrom::Uncompute::Mirror, qrom::Uncompute::Reset}) {
            const qrom::Circuit c = build_by(id, spec, config, mode);
            const qrom::Register read = c.reg("read");
            const qrom::Register addr = c.reg("address");
            const qrom::Register data = c.reg("data");
            auto in_reg = [](const qrom::Register& r, int q) {
                return q >= r.offset && q < r.offset + r.len;
            };
            for (std::size_t i = 0; i < c.size(); ++i) {
                const qrom::Gate g = c.gate(i);
                switch (g.op) {
                    case qrom::GateOp::X:
                        // Only the address-select conjugation writes X.
                        CHECK(in_reg(addr, g.qubits[0]));
                        break;
                    case qrom::GateOp::Cx:
                    case qrom::GateOp::Ccx:
                    case qrom::GateOp::Mcx: {
                        const int target = g.qubits.back();
                        CHECK_FALSE(in_reg(read, target));
                        CHECK_FALSE(in_reg(addr, target));
                        break;
                    }
                    case qrom::GateOp::Reset:
                        CHECK_FALSE(in_reg(read, g.qubits[0]));
                        CHECK_FALSE(in_reg(addr, g.qubits[0]));
                        CHECK_FALSE(in_reg(data, g.qubits[0]));
                        break;
                    default:
                        FAIL("unexpected gate kind in builder output: ", qrom::gate_label(g));
                }
            }
        }
    }
}

TEST_CASE("every builder reads back the stored table exactly") {
    for (int n = 1; n <= 3; ++n) {
        const qrom::QromSpec spec = qrom::random_spec(n, 3, qrom::derive_seed(99, n));
        for (qrom::Uncompute mode : {qrom::Uncompute::Mirror, qrom::Uncompute::Reset}) {
            check_readback("naive", spec, std::nullopt, mode);
            check_readback("sawtooth", spec, std::nullopt, mode);
            check_readback("predecoded", spec, qrom::optimal_config(n), mode);
        }
    }
    // Wider predecode shapes at n=3, including fully undecoded and one whole
    // group, in both uncompute flavors.
    const qrom::QromSpec spec3 = qrom::random_spec(3, 3, 1234);
    for (qrom::Uncompute mode : {qrom::Uncompute::Mirror, qrom::Uncompute::Reset}) {
        for (const char* cfg : {"3P", "2P+1U", "1P+1P+1P", "1U+1U+1U"}) {
            check_readback("predecoded", spec3, qrom::parse_config(cfg), mode);
        }
    }
}

TEST_CASE("a read flag of zero leaves every qubit untouched") {
    const qrom::QromSpec spec = qrom::random_spec(2, 4, 5);
    const std::vector<std::pair<std::string, std::optional<qrom::PartitionConfig>>> cases = {
        {"naive", std::nullopt},
        {"sawtooth", std::nullopt},
        {"predecoded", qrom::optimal_config(2)},
    };
    for (const auto& [id, config] : cases) {
        const qrom::Circuit stored = build_by(id, spec, config, qrom::Uncompute::Reset);
        for (std::uint32_t a = 0; a < 4; ++a) {
            qrom::Circuit run(stored.registers());
            const qrom::Register addr = stored.reg("address");
            for (int b = 0; b < 2; ++b)
                if (a & (1u << b)) run.x(addr.offset + b);
            for (std::size_t i = 0; i < stored.size(); ++i) run.append(stored.gate(i));
            const long long state = lone_basis_state(qrom::run_statevector(run));
            CHECK(state == static_cast<long long>(a) << addr.offset);
        }
    }
}

TEST_CASE("ancilla cost of pre-decoding") {
    const qrom::QubitOverhead a =
        qrom::qubit_overhead(qrom::QromSpec{2, 4, {0, 0, 0, 0}}, qrom::parse_config("2P"));
    CHECK(a.naive_qubits == 8);
    CHECK(a.extra_qubits == 4);
    CHECK(a.overhead_ratio == doctest::Approx(0.5).epsilon(1e-12));

    const qrom::QromSpec s3{3, 4, std::vector<std::uint32_t>(8, 0)};
    const qrom::QubitOverhead b = qrom::qubit_overhead(s3, qrom::parse_config("2P+1U"));
    CHECK(b.naive_qubits == 9);
    CHECK(b.extra_qubits == 4);
    CHECK(b.overhead_ratio == doctest::Approx(4.0 / 9.0).epsilon(1e-12));

    const qrom::QromSpec s8{8, 4, std::vector<std::uint32_t>(256, 0)};
    const qrom::QubitOverhead c = qrom::qubit_overhead(s8, qrom::parse_config("4P+4P"));
    CHECK(c.naive_qubits == 14);
    CHECK(c.extra_qubits == 32);
    CHECK(c.overhead_ratio > 2.27);
    CHECK(c.overhead_ratio < 2.30);

    // Undecoded lines cost nothing.
    const qrom::QubitOverhead d = qrom::qubit_overhead(s3, qrom::parse_config("1U+1U+1U"));
    CHECK(d.extra_qubits == 0);
    CHECK(d.overhead_ratio == 0.0);
}

TEST_CASE("builder rejects configs that do not cover the address lines") {
    const qrom::QromSpec spec{3, 4, {1, 2, 3, 4, 5, 6, 7, 0}};
    CHECK_THROWS_AS(
        (void)qrom::build_predecoded(spec, qrom::parse_config("2P"), qrom::BuilderOptions{}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)qrom::build_predecoded(spec, qrom::parse_config("2P+2P"), qrom::BuilderOptions{}),
        std::invalid_argument);
}
