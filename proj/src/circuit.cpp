#include "qrom/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace qrom {

namespace {

int expected_arity(GateOp op, int controls) {
    switch (op) {
        case GateOp::X:
        case GateOp::Sx:
        case GateOp::Id:
        case GateOp::Rz:
        case GateOp::H:
        case GateOp::Reset:
        case GateOp::Measure:
            return 1;
        case GateOp::Swap:
        case GateOp::Cx:
            return 2;
        case GateOp::Ccx:
            return 3;
        case GateOp::Mcx:
        case GateOp::McxRoot:
            return controls + 1;
    }
    throw std::invalid_argument("unknown gate op");
}

const char* op_name(GateOp op) {
    switch (op) {
        case GateOp::X: return "x";
        case GateOp::Sx: return "sx";
        case GateOp::Id: return "id";
        case GateOp::Rz: return "rz";
        case GateOp::H: return "h";
        case GateOp::Swap: return "swap";
        case GateOp::Cx: return "cx";
        case GateOp::Ccx: return "ccx";
        case GateOp::Mcx: return "mcx";
        case GateOp::McxRoot: return "mcxroot";
        case GateOp::Reset: return "reset";
        case GateOp::Measure: return "measure";
    }
    return "?";
}

}  // namespace

std::string gate_label(const Gate& g) {
    std::string label = op_name(g.op);
    if (g.op == GateOp::Mcx) {
        label += std::to_string(g.controls);
    } else if (g.op == GateOp::McxRoot) {
        label += std::to_string(g.controls) + "s" + std::to_string(g.root_exp);
        if (g.dagger) label += "dg";
    }
    return label;
}

Circuit::Circuit(std::vector<Register> registers) : registers_(std::move(registers)) {
    if (registers_.empty()) throw std::invalid_argument("circuit needs at least one register");
    std::vector<const Register*> sorted;
    sorted.reserve(registers_.size());
    for (const auto& r : registers_) {
        if (r.name.empty()) throw std::invalid_argument("register name must be non-empty");
        if (r.len <= 0)
            throw std::invalid_argument("register '" + r.name + "' must have positive length");
        if (r.offset < 0)
            throw std::invalid_argument("register '" + r.name + "' has negative offset");
        for (const auto& other : registers_) {
            if (&other != &r && other.name == r.name)
                throw std::invalid_argument("duplicate register name '" + r.name + "'");
        }
        sorted.push_back(&r);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Register* a, const Register* b) { return a->offset < b->offset; });
    int expect = 0;
    for (const Register* r : sorted) {
        if (r->offset != expect)
            throw std::invalid_argument("registers must tile qubits contiguously; register '" +
                                        r->name + "' starts at " + std::to_string(r->offset) +
                                        ", expected " + std::to_string(expect));
        expect = r->offset + r->len;
    }
    num_qubits_ = expect;
    measured_.assign(static_cast<std::size_t>(num_qubits_), 0);
}

Circuit Circuit::with_registers(const std::vector<std::pair<std::string, int>>& name_len) {
    std::vector<Register> regs;
    regs.reserve(name_len.size());
    int offset = 0;
    for (const auto& [name, len] : name_len) {
        regs.push_back(Register{name, offset, len});
        offset += len;
    }
    return Circuit(std::move(regs));
}

const Register& Circuit::reg(std::string_view name) const {
    for (const auto& r : registers_)
        if (r.name == name) return r;
    throw std::out_of_range("no register named '" + std::string(name) + "'");
}

bool Circuit::has_reg(std::string_view name) const {
    for (const auto& r : registers_)
        if (r.name == name) return true;
    return false;
}

Gate Circuit::gate(std::size_t i) const {
    const GateRec& r = recs_.at(i);
    return Gate{r.op,
                r.theta,
                static_cast<int>(r.controls),
                static_cast<int>(r.root_exp),
                r.dagger,
                std::span<const int>(qubit_arena_.data() + r.qubit_offset, r.qubit_count)};
}

void Circuit::append_raw(GateOp op, double theta, int controls, int root_exp, bool dagger,
                         std::span<const int> qubits) {
    if (op == GateOp::Mcx && controls < 1)
        throw std::invalid_argument("mcx needs at least one control");
    if (op == GateOp::McxRoot) {
        if (controls < 0) throw std::invalid_argument("mcxroot control count must be >= 0");
        if (root_exp < 1) throw std::invalid_argument("mcxroot requires root exponent >= 1");
    }
    if (op == GateOp::Rz && !std::isfinite(theta))
        throw std::invalid_argument("rz angle must be finite");
    const int arity = expected_arity(op, controls);
    if (static_cast<int>(qubits.size()) != arity)
        throw std::invalid_argument(std::string(op_name(op)) + " expects " +
                                    std::to_string(arity) + " qubits, got " +
                                    std::to_string(qubits.size()));
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        const int q = qubits[i];
        if (q < 0 || q >= num_qubits_)
            throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " +
                                    std::to_string(num_qubits_) + "-qubit circuit");
        if (measured_[static_cast<std::size_t>(q)])
            throw std::invalid_argument("qubit " + std::to_string(q) +
                                        " was measured; no further gates allowed on it");
        for (std::size_t j = i + 1; j < qubits.size(); ++j)
            if (qubits[j] == q)
                throw std::invalid_argument("duplicate qubit " + std::to_string(q) + " in " +
                                            op_name(op) + " gate");
    }
    GateRec rec;
    rec.theta = theta;
    rec.qubit_offset = qubit_arena_.size();
    rec.qubit_count = static_cast<std::uint32_t>(qubits.size());
    rec.controls = static_cast<std::uint16_t>(controls);
    rec.root_exp = static_cast<std::uint16_t>(root_exp);
    rec.op = op;
    rec.dagger = dagger;
    qubit_arena_.insert(qubit_arena_.end(), qubits.begin(), qubits.end());
    recs_.push_back(rec);
    if (op == GateOp::Measure) measured_[static_cast<std::size_t>(qubits[0])] = 1;
}

void Circuit::x(int q) {
    const int qs[] = {q};
    append_raw(GateOp::X, 0.0, 0, 0, false, qs);
}
void Circuit::sx(int q) {
    const int qs[] = {q};
    append_raw(GateOp::Sx, 0.0, 0, 0, false, qs);
}
void Circuit::id(int q) {
    const int qs[] = {q};
    append_raw(GateOp::Id, 0.0, 0, 0, false, qs);
}
void Circuit::rz(double theta, int q) {
    const int qs[] = {q};
    append_raw(GateOp::Rz, theta, 0, 0, false, qs);
}
void Circuit::h(int q) {
    const int qs[] = {q};
    append_raw(GateOp::H, 0.0, 0, 0, false, qs);
}
void Circuit::swap(int a, int b) {
    const int qs[] = {a, b};
    append_raw(GateOp::Swap, 0.0, 0, 0, false, qs);
}
void Circuit::cx(int control, int target) {
    const int qs[] = {control, target};
    append_raw(GateOp::Cx, 0.0, 0, 0, false, qs);
}
void Circuit::ccx(int c0, int c1, int target) {
    const int qs[] = {c0, c1, target};
    append_raw(GateOp::Ccx, 0.0, 0, 0, false, qs);
}

void Circuit::mcx(std::span<const int> controls, int target) {
    std::vector<int> qs(controls.begin(), controls.end());
    qs.push_back(target);
    append_raw(GateOp::Mcx, 0.0, static_cast<int>(controls.size()), 0, false, qs);
}

void Circuit::mcx_root(std::span<const int> controls, int target, int root_exp, bool dagger) {
    std::vector<int> qs(controls.begin(), controls.end());
    qs.push_back(target);
    append_raw(GateOp::McxRoot, 0.0, static_cast<int>(controls.size()), root_exp, dagger, qs);
}

void Circuit::reset(int q) {
    const int qs[] = {q};
    append_raw(GateOp::Reset, 0.0, 0, 0, false, qs);
}
void Circuit::measure(int q) {
    const int qs[] = {q};
    append_raw(GateOp::Measure, 0.0, 0, 0, false, qs);
}

void Circuit::append(const Gate& g) {
    append_raw(g.op, g.theta, g.controls, g.root_exp, g.dagger, g.qubits);
}

std::uint64_t Circuit::depth() const {
    std::vector<std::uint64_t> layer(static_cast<std::size_t>(num_qubits_), 0);
    std::uint64_t deepest = 0;
    for (const GateRec& r : recs_) {
        std::uint64_t at = 0;
        for (std::uint32_t i = 0; i < r.qubit_count; ++i)
            at = std::max(at, layer[static_cast<std::size_t>(qubit_arena_[r.qubit_offset + i])]);
        ++at;
        for (std::uint32_t i = 0; i < r.qubit_count; ++i)
            layer[static_cast<std::size_t>(qubit_arena_[r.qubit_offset + i])] = at;
        deepest = std::max(deepest, at);
    }
    return deepest;
}

GateCounts Circuit::gate_counts() const {
    GateCounts counts;
    for (std::size_t i = 0; i < recs_.size(); ++i) {
        ++counts.by_kind[gate_label(gate(i))];
        ++counts.total;
    }
    return counts;
}

std::string Circuit::to_json() const {
    nlohmann::ordered_json j;
    j["num_qubits"] = num_qubits_;
    auto regs = nlohmann::ordered_json::array();
    for (const auto& r : registers_) {
        nlohmann::ordered_json jr;
        jr["name"] = r.name;
        jr["offset"] = r.offset;
        jr["len"] = r.len;
        regs.push_back(std::move(jr));
    }
    j["registers"] = std::move(regs);
    auto gates = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < recs_.size(); ++i) {
        const Gate g = gate(i);
        nlohmann::ordered_json jg;
        jg["kind"] = op_name(g.op);
        if (g.op == GateOp::Rz) {
            jg["params"] = {g.theta};
        } else if (g.op == GateOp::Mcx) {
            jg["params"] = {g.controls};
        } else if (g.op == GateOp::McxRoot) {
            jg["params"] = {g.controls, g.root_exp, g.dagger ? 1 : 0};
        }
        jg["qubits"] = std::vector<int>(g.qubits.begin(), g.qubits.end());
        gates.push_back(std::move(jg));
    }
    j["gates"] = std::move(gates);
    return j.dump();
}

Circuit Circuit::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("circuit JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("num_qubits") || !j.contains("registers") ||
        !j.contains("gates"))
        throw std::invalid_argument("circuit JSON needs num_qubits, registers and gates");
    std::vector<Register> regs;
    for (const auto& jr : j.at("registers"))
        regs.push_back(Register{jr.at("name").get<std::string>(), jr.at("offset").get<int>(),
                                jr.at("len").get<int>()});
    Circuit c(std::move(regs));
    if (j.at("num_qubits").get<int>() != c.num_qubits())
        throw std::invalid_argument("circuit JSON num_qubits disagrees with registers");
    for (const auto& jg : j.at("gates")) {
        const std::string kind = jg.at("kind").get<std::string>();
        const std::vector<int> qs = jg.at("qubits").get<std::vector<int>>();
        auto params = [&]() -> std::vector<double> {
            if (!jg.contains("params")) return {};
            return jg.at("params").get<std::vector<double>>();
        }();
        if (kind == "x") c.x(qs.at(0));
        else if (kind == "sx") c.sx(qs.at(0));
        else if (kind == "id") c.id(qs.at(0));
        else if (kind == "h") c.h(qs.at(0));
        else if (kind == "rz") c.rz(params.at(0), qs.at(0));
        else if (kind == "swap") c.swap(qs.at(0), qs.at(1));
        else if (kind == "cx") c.cx(qs.at(0), qs.at(1));
        else if (kind == "ccx") c.ccx(qs.at(0), qs.at(1), qs.at(2));
        else if (kind == "reset") c.reset(qs.at(0));
        else if (kind == "measure") c.measure(qs.at(0));
        else if (kind == "mcx") {
            if (qs.size() < 2) throw std::invalid_argument("mcx gate needs >= 2 qubits");
            c.mcx(std::span<const int>(qs.data(), qs.size() - 1), qs.back());
        } else if (kind == "mcxroot") {
            if (params.size() != 3) throw std::invalid_argument("mcxroot expects params [k,s,dg]");
            c.mcx_root(std::span<const int>(qs.data(), qs.size() - 1), qs.back(),
                       static_cast<int>(params[1]), params[2] != 0.0);
        } else {
            throw std::invalid_argument("unknown gate kind '" + kind + "'");
        }
    }
    return c;
}

}  // namespace qrom
