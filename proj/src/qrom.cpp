#include "qrom/qrom.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "json.hpp"
#include "qrom/rng.hpp"

namespace qrom {

namespace {

std::uint64_t pow2(int e) { return std::uint64_t{1} << e; }

}  // namespace

// ---------------------------------------------------------------------------
// QromSpec

void QromSpec::validate() const {
    if (n < 1) throw std::invalid_argument("QromSpec: n must be >= 1");
    if (d < 1) throw std::invalid_argument("QromSpec: d must be >= 1");
    if (n > 30) throw std::invalid_argument("QromSpec: n too large");
    if (d > 30) throw std::invalid_argument("QromSpec: d too large");
    if (data.size() != pow2(n))
        throw std::invalid_argument("QromSpec: data must hold exactly 2^n words");
    for (std::uint32_t w : data)
        if (w >= pow2(d))
            throw std::invalid_argument("QromSpec: data word does not fit in d bits");
}

QromSpec QromSpec::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("QromSpec: bad JSON: ") + e.what());
    }
    QromSpec spec;
    try {
        spec.n = j.at("n").get<int>();
        spec.d = j.value("d", 4);
        spec.data = j.at("data").get<std::vector<std::uint32_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("QromSpec: bad fields: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string QromSpec::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["d"] = d;
    j["data"] = data;
    return j.dump();
}

QromSpec random_spec(int n, int d, std::uint64_t seed) {
    QromSpec spec;
    spec.n = n;
    spec.d = d;
    SplitMix64 rng(derive_seed(seed, (static_cast<std::uint64_t>(n) << 8) | static_cast<std::uint64_t>(d)));
    spec.data.resize(pow2(n));
    for (auto& w : spec.data) w = static_cast<std::uint32_t>(rng.next_below(pow2(d)));
    spec.validate();
    return spec;
}

// ---------------------------------------------------------------------------
// PartitionConfig

int PartitionConfig::total_lines() const {
    int total = 0;
    for (const Group& g : groups) total += g.size;
    return total;
}

int PartitionConfig::predecoded_lines() const {
    int total = 0;
    for (const Group& g : groups)
        if (g.mode == GroupMode::Predecode) total += g.size;
    return total;
}

std::string PartitionConfig::str() const {
    std::string out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (i) out += '+';
        out += std::to_string(groups[i].size);
        out += groups[i].mode == GroupMode::Predecode ? 'P' : 'U';
    }
    return out;
}

PartitionConfig PartitionConfig::normalized() const {
    std::vector<Group> ps;
    int undecoded = 0;
    for (const Group& g : groups) {
        if (g.mode == GroupMode::Predecode)
            ps.push_back(g);
        else
            undecoded += g.size;
    }
    std::stable_sort(ps.begin(), ps.end(),
                     [](const Group& a, const Group& b) { return a.size > b.size; });
    PartitionConfig out;
    out.groups = std::move(ps);
    for (int i = 0; i < undecoded; ++i) out.groups.push_back({1, GroupMode::Undecoded});
    return out;
}

PartitionConfig parse_config(const std::string& text) {
    PartitionConfig config;
    std::size_t pos = 0;
    while (true) {
        std::size_t end = text.find('+', pos);
        std::string token = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        // Trim surrounding whitespace.
        std::size_t first = token.find_first_not_of(" \t");
        std::size_t last = token.find_last_not_of(" \t");
        if (first == std::string::npos)
            throw std::invalid_argument("parse_config: empty group token in '" + text + "'");
        token = token.substr(first, last - first + 1);

        std::size_t digits = 0;
        while (digits < token.size() && std::isdigit(static_cast<unsigned char>(token[digits]))) ++digits;
        if (digits == 0 || digits + 1 != token.size())
            throw std::invalid_argument("parse_config: malformed group '" + token + "'");
        char flag = static_cast<char>(std::toupper(static_cast<unsigned char>(token[digits])));
        if (flag != 'P' && flag != 'U')
            throw std::invalid_argument("parse_config: group flag must be P or U in '" + token + "'");
        int size = 0;
        try {
            size = std::stoi(token.substr(0, digits));
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_config: bad group size in '" + token + "'");
        }
        if (size < 1) throw std::invalid_argument("parse_config: group size must be >= 1");
        if (size > 24) throw std::invalid_argument("parse_config: group size too large");
        config.groups.push_back({size, flag == 'P' ? GroupMode::Predecode : GroupMode::Undecoded});

        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return config;
}

namespace {

void partitions_desc(int remaining, int max_part, std::vector<int>& current,
                     std::vector<std::vector<int>>& out) {
    if (remaining == 0) {
        out.push_back(current);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        current.push_back(part);
        partitions_desc(remaining - part, part, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<PartitionConfig> enumerate_configs(int n) {
    if (n < 1 || n > 12) throw std::invalid_argument("enumerate_configs: n must be in [1, 12]");
    std::vector<PartitionConfig> configs;
    // Choose how many lines are pre-decoded (j), partition them into group
    // sizes, and leave the rest as undecoded singletons.
    for (int j = 0; j <= n; ++j) {
        std::vector<std::vector<int>> parts;
        std::vector<int> current;
        partitions_desc(j, j == 0 ? 1 : j, current, parts);
        for (const auto& sizes : parts) {
            PartitionConfig config;
            for (int size : sizes) config.groups.push_back({size, GroupMode::Predecode});
            for (int i = 0; i < n - j; ++i) config.groups.push_back({1, GroupMode::Undecoded});
            configs.push_back(std::move(config));
        }
    }
    std::sort(configs.begin(), configs.end(),
              [](const PartitionConfig& a, const PartitionConfig& b) { return a.str() < b.str(); });
    return configs;
}

PartitionConfig optimal_config(int n) {
    if (n < 1) throw std::invalid_argument("optimal_config: n must be >= 1");
    PartitionConfig config;
    config.groups.push_back({(n + 1) / 2, GroupMode::Predecode});
    if (n / 2 > 0) config.groups.push_back({n / 2, GroupMode::Predecode});
    return config;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

/// X gates on the address qubits whose bit of `a` is 0, restricted to bit
/// positions [lo, hi); emitting the same gates again undoes the flip.
void conjugate_address(Circuit& c, int addr_offset, std::uint64_t a, int lo, int hi) {
    for (int i = lo; i < hi; ++i)
        if (((a >> i) & 1) == 0) c.x(addr_offset + i);
}

void fan_out_word(Circuit& c, int ctrl, int data_offset, std::uint32_t word, int d) {
    for (int j = 0; j < d; ++j)
        if ((word >> j) & 1) c.cx(ctrl, data_offset + j);
}

}  // namespace

Circuit build_naive(const QromSpec& spec, const BuilderOptions& options) {
    spec.validate();
    const Uncompute uncompute = options.uncompute.value_or(Uncompute::Mirror);
    const int n = spec.n;

    Circuit c = Circuit::with_registers(
        {{"read", 1}, {"address", n}, {"cnot_ctrl", 1}, {"data", spec.d}});
    const int read = c.reg("read").offset;
    const int addr = c.reg("address").offset;
    const int ctrl = c.reg("cnot_ctrl").offset;
    const int data = c.reg("data").offset;

    std::vector<int> controls;
    controls.push_back(read);
    for (int i = 0; i < n; ++i) controls.push_back(addr + i);

    for (std::uint64_t a = 0; a < pow2(n); ++a) {
        conjugate_address(c, addr, a, 0, n);
        c.mcx(controls, ctrl);
        conjugate_address(c, addr, a, 0, n);
        fan_out_word(c, ctrl, data, spec.data[a], spec.d);
        if (uncompute == Uncompute::Mirror) {
            conjugate_address(c, addr, a, 0, n);
            c.mcx(controls, ctrl);
            conjugate_address(c, addr, a, 0, n);
        } else {
            c.reset(ctrl);
        }
    }
    return c;
}

namespace {

/// The Toffoli ladder that ANDs read with all address lines (MSB first)
/// through the interleaved ancilla qubits, finally targeting `ctrl`.
/// Gate i of the result must stay adjacent to gate i±1 for the mirrored
/// uncompute to cancel, so the ladder is emitted through a list.
void sawtooth_ladder(Circuit& c, int read, int addr, int n, int anc, int ctrl, bool reversed) {
    struct Step {
        int c0, c1, target;
    };
    std::vector<Step> steps;
    steps.push_back({read, addr + n - 1, anc + 0});
    for (int i = 1; i <= n - 2; ++i) steps.push_back({anc + i - 1, addr + (n - 1 - i), anc + i});
    steps.push_back({anc + n - 2, addr + 0, ctrl});
    if (reversed) std::reverse(steps.begin(), steps.end());
    for (const Step& s : steps) c.ccx(s.c0, s.c1, s.target);
}

}  // namespace

Circuit build_sawtooth(const QromSpec& spec, const BuilderOptions& options) {
    spec.validate();
    const int n = spec.n;
    if (n < 2) return build_naive(spec, options);  // ladder degenerates
    const Uncompute uncompute = options.uncompute.value_or(Uncompute::Mirror);

    Circuit c = Circuit::with_registers({{"read", 1},
                                         {"address", n},
                                         {"ladder_anc", n - 1},
                                         {"cnot_ctrl", 1},
                                         {"data", spec.d}});
    const int read = c.reg("read").offset;
    const int addr = c.reg("address").offset;
    const int anc = c.reg("ladder_anc").offset;
    const int ctrl = c.reg("cnot_ctrl").offset;
    const int data = c.reg("data").offset;

    for (std::uint64_t a = 0; a < pow2(n); ++a) {
        conjugate_address(c, addr, a, 0, n);
        sawtooth_ladder(c, read, addr, n, anc, ctrl, /*reversed=*/false);
        fan_out_word(c, ctrl, data, spec.data[a], spec.d);
        if (uncompute == Uncompute::Mirror) {
            sawtooth_ladder(c, read, addr, n, anc, ctrl, /*reversed=*/true);
        } else {
            c.reset(ctrl);
            for (int i = 0; i < n - 1; ++i) c.reset(anc + i);
        }
        conjugate_address(c, addr, a, 0, n);
    }
    return c;
}

namespace {

struct PredecodeGroup {
    int lo = 0;     // lowest address bit owned by the group
    int size = 0;   // number of address lines
    int anc = 0;    // offset of the group's 2^size minterm ancilla qubits
};

}  // namespace

Circuit build_predecoded(const QromSpec& spec, const PartitionConfig& config,
                         const BuilderOptions& options) {
    spec.validate();
    const int n = spec.n;
    if (config.groups.empty() || config.total_lines() != n)
        throw std::invalid_argument("build_predecoded: config group sizes must sum to n");
    const Uncompute uncompute = options.uncompute.value_or(Uncompute::Reset);

    // Groups own address bits MSB-first in listed order.
    std::vector<std::pair<int, int>> group_range;  // (lo, size) per listed group
    int hi = n;
    for (const Group& g : config.groups) {
        group_range.push_back({hi - g.size, g.size});
        hi -= g.size;
    }

    std::vector<std::pair<std::string, int>> regs{{"read", 1}, {"address", n}};
    std::vector<PredecodeGroup> pgroups;
    int pg_index = 0;
    for (std::size_t gi = 0; gi < config.groups.size(); ++gi) {
        if (config.groups[gi].mode != GroupMode::Predecode) continue;
        const auto [lo, size] = group_range[gi];
        if (size > 20) throw std::invalid_argument("build_predecoded: group too large");
        regs.push_back({"predecode_anc" + std::to_string(pg_index), static_cast<int>(pow2(size))});
        pgroups.push_back({lo, size, 0});
        ++pg_index;
    }
    regs.push_back({"cnot_ctrl", 1});
    regs.push_back({"data", spec.d});

    Circuit c = Circuit::with_registers(regs);
    const int read = c.reg("read").offset;
    const int addr = c.reg("address").offset;
    const int ctrl = c.reg("cnot_ctrl").offset;
    const int data = c.reg("data").offset;
    for (std::size_t g = 0; g < pgroups.size(); ++g)
        pgroups[g].anc = c.reg("predecode_anc" + std::to_string(g)).offset;

    // Stage 1: compute each group's minterms onto its ancilla qubits.
    // Minterm v lands on ancilla index v (group bits read as a binary number).
    auto emit_stage1 = [&](bool reversed) {
        struct MintermOp {
            int group;
            std::uint64_t v;
        };
        std::vector<MintermOp> ops;
        for (std::size_t g = 0; g < pgroups.size(); ++g)
            for (std::uint64_t v = 0; v < pow2(pgroups[g].size); ++v)
                ops.push_back({static_cast<int>(g), v});
        if (reversed) std::reverse(ops.begin(), ops.end());
        for (const MintermOp& op : ops) {
            const PredecodeGroup& pg = pgroups[op.group];
            for (int t = 0; t < pg.size; ++t)
                if (((op.v >> t) & 1) == 0) c.x(addr + pg.lo + t);
            std::vector<int> controls;
            for (int t = 0; t < pg.size; ++t) controls.push_back(addr + pg.lo + t);
            c.mcx(controls, pg.anc + static_cast<int>(op.v));
            for (int t = 0; t < pg.size; ++t)
                if (((op.v >> t) & 1) == 0) c.x(addr + pg.lo + t);
        }
    };
    emit_stage1(/*reversed=*/false);

    // Undecoded bit positions, ascending.
    std::vector<int> undecoded_bits;
    for (std::size_t gi = 0; gi < config.groups.size(); ++gi) {
        if (config.groups[gi].mode != GroupMode::Undecoded) continue;
        const auto [lo, size] = group_range[gi];
        for (int t = 0; t < size; ++t) undecoded_bits.push_back(lo + t);
    }
    std::sort(undecoded_bits.begin(), undecoded_bits.end());

    // Stage 2: one control gate per address, controls = read + one minterm
    // ancilla per group + the (conjugated) undecoded lines.
    for (std::uint64_t a = 0; a < pow2(n); ++a) {
        std::vector<int> controls;
        controls.push_back(read);
        for (const PredecodeGroup& pg : pgroups) {
            const std::uint64_t v = (a >> pg.lo) & (pow2(pg.size) - 1);
            controls.push_back(pg.anc + static_cast<int>(v));
        }
        for (int bit : undecoded_bits) controls.push_back(addr + bit);

        auto conj_undecoded = [&] {
            for (int bit : undecoded_bits)
                if (((a >> bit) & 1) == 0) c.x(addr + bit);
        };
        conj_undecoded();
        c.mcx(controls, ctrl);
        conj_undecoded();
        fan_out_word(c, ctrl, data, spec.data[a], spec.d);
        if (uncompute == Uncompute::Reset) {
            c.reset(ctrl);
        } else {
            conj_undecoded();
            c.mcx(controls, ctrl);
            conj_undecoded();
        }
    }

    // The minterm ancillas persist across addresses and are cleared once.
    if (uncompute == Uncompute::Reset) {
        for (const PredecodeGroup& pg : pgroups)
            for (std::uint64_t v = 0; v < pow2(pg.size); ++v)
                c.reset(pg.anc + static_cast<int>(v));
    } else {
        emit_stage1(/*reversed=*/true);
    }
    return c;
}

QubitOverhead qubit_overhead(const QromSpec& spec, const PartitionConfig& config) {
    spec.validate();
    if (config.total_lines() != spec.n)
        throw std::invalid_argument("qubit_overhead: config group sizes must sum to n");
    QubitOverhead out;
    out.naive_qubits = spec.n + spec.d + 2;
    for (const Group& g : config.groups)
        if (g.mode == GroupMode::Predecode) out.extra_qubits += static_cast<int>(pow2(g.size));
    out.overhead_ratio = static_cast<double>(out.extra_qubits) / static_cast<double>(out.naive_qubits);
    return out;
}

}  // namespace qrom
