#include "qrom/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qrom/rng.hpp"

namespace qrom {

namespace {

std::string fmt6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = text.find(sep, pos);
        out.push_back(text.substr(pos, end == std::string::npos ? std::string::npos : end - pos));
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return out;
}

void check_builders(const std::vector<std::string>& builders) {
    if (builders.empty()) throw std::invalid_argument("builder list is empty");
    for (const std::string& b : builders)
        if (b != "naive" && b != "sawtooth" && b != "predecoded")
            throw std::invalid_argument("unknown builder '" + b + "'");
}

Circuit build_by_id(const std::string& builder, const QromSpec& spec,
                    const std::optional<PartitionConfig>& config) {
    if (builder == "naive") return build_naive(spec);
    if (builder == "sawtooth") return build_sawtooth(spec);
    if (!config) throw std::invalid_argument("predecoded builder needs a config");
    return build_predecoded(spec, *config);
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepParams& params, const CouplingMap* coupling) {
    if (params.n_min < 1 || params.n_max < params.n_min)
        throw std::invalid_argument("run_sweep: bad n range");
    check_builders(params.builders);
    const McxStrategy strategy{params.strategy, std::nullopt};

    std::vector<SweepRecord> records;
    for (int n = params.n_min; n <= params.n_max; ++n) {
        const QromSpec spec = random_spec(n, params.d, params.seed);
        for (const std::string& builder : params.builders) {
            std::vector<std::optional<PartitionConfig>> configs;
            if (builder == "predecoded") {
                if (params.configs == "optimal") {
                    configs.push_back(optimal_config(n));
                } else if (params.configs == "all") {
                    for (const PartitionConfig& c : enumerate_configs(n)) configs.push_back(c);
                } else {
                    for (const std::string& token : split(params.configs, ','))
                        configs.push_back(parse_config(token));
                }
            } else {
                configs.push_back(std::nullopt);
            }

            for (const std::optional<PartitionConfig>& config : configs) {
                const Circuit built = build_by_id(builder, spec, config);
                const CompileResult compiled = compile(built, strategy, coupling);

                SweepRecord rec;
                rec.n = n;
                rec.builder = builder;
                rec.config = config ? config->str() : "-";
                rec.strategy = strategy_name(params.strategy);
                rec.wall_time_s = params.timing ? compiled.report.wall_time_s : 0.0;
                rec.depth = compiled.report.depth;
                rec.total_gates = compiled.report.total_gates;
                rec.qubit_total = compiled.report.num_qubits;
                const int naive_qubits = n + params.d + 2;
                rec.overhead_ratio =
                    static_cast<double>(built.num_qubits() - naive_qubits) / naive_qubits;
                if (params.shots > 0) {
                    try {
                        rec.mean_fidelity =
                            read_fidelity(spec, builder, config, strategy, coupling,
                                          NoiseModel{0.0, params.p2}, params.shots, params.seed)
                                .mean_fidelity;
                    } catch (const std::exception&) {
                        rec.mean_fidelity = std::nullopt;  // over the simulator cap
                    }
                }
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

constexpr const char* kSweepHeader =
    "n,builder,config,strategy,wall_time_s,depth,total_gates,qubit_total,overhead_ratio,"
    "mean_fidelity";

constexpr const char* kFidelityHeader =
    "n,builder,config,connectivity,seed,shots,p2,mean_fidelity,fidelity_std,status";

}  // namespace

std::string sweep_to_csv(const std::vector<SweepRecord>& records) {
    std::string out = kSweepHeader;
    out += '\n';
    for (const SweepRecord& r : records) {
        out += std::to_string(r.n);
        out += ',';
        out += r.builder;
        out += ',';
        out += r.config;
        out += ',';
        out += r.strategy;
        out += ',';
        out += fmt6(r.wall_time_s);
        out += ',';
        out += std::to_string(r.depth);
        out += ',';
        out += std::to_string(r.total_gates);
        out += ',';
        out += std::to_string(r.qubit_total);
        out += ',';
        out += fmt6(r.overhead_ratio);
        out += ',';
        if (r.mean_fidelity) out += fmt6(*r.mean_fidelity);
        out += '\n';
    }
    return out;
}

std::vector<SweepRecord> sweep_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("sweep CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kSweepHeader) throw std::invalid_argument("sweep CSV: unexpected header");

    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 10) throw std::invalid_argument("sweep CSV: bad row '" + line + "'");
        SweepRecord r;
        try {
            r.n = std::stoi(f[0]);
            r.builder = f[1];
            r.config = f[2];
            r.strategy = f[3];
            r.wall_time_s = std::stod(f[4]);
            r.depth = std::stoi(f[5]);
            r.total_gates = std::stoull(f[6]);
            r.qubit_total = std::stoi(f[7]);
            r.overhead_ratio = std::stod(f[8]);
            if (!f[9].empty()) r.mean_fidelity = std::stod(f[9]);
        } catch (const std::exception&) {
            throw std::invalid_argument("sweep CSV: bad row '" + line + "'");
        }
        records.push_back(std::move(r));
    }
    if (records.empty()) throw std::invalid_argument("sweep CSV: no data rows");
    return records;
}

// ---------------------------------------------------------------------------
// Fidelity bench

std::vector<FidelityRow> run_fidelity_bench(const FidelityBenchParams& params,
                                            const CouplingMap* coupling) {
    if (params.n_min < 1 || params.n_max < params.n_min)
        throw std::invalid_argument("fidelity bench: bad n range");
    if (params.shots == 0) throw std::invalid_argument("fidelity bench: shots must be positive");
    if (params.repeats < 1) throw std::invalid_argument("fidelity bench: repeats must be >= 1");
    check_builders(params.builders);
    const McxStrategy strategy{params.strategy, std::nullopt};
    const NoiseModel noise{params.p1, params.p2};
    const std::string connectivity =
        coupling ? (coupling->name().empty() ? "coupled" : coupling->name()) : "full";

    std::vector<FidelityRow> rows;
    for (int n = params.n_min; n <= params.n_max; ++n) {
        const QromSpec spec = random_spec(n, params.d, params.seed);
        for (const std::string& builder : params.builders) {
            std::optional<PartitionConfig> config;
            if (builder == "predecoded")
                config = params.config ? *params.config : optimal_config(n);

            FidelityRow base;
            base.n = n;
            base.builder = builder;
            base.config = config ? config->str() : "-";
            base.connectivity = connectivity;
            base.shots = params.shots;
            base.p2 = params.p2;

            std::vector<double> means;
            bool skipped = false;
            for (int r = 0; r < params.repeats && !skipped; ++r) {
                const std::uint64_t seed_r = derive_seed(params.seed, static_cast<std::uint64_t>(r));
                try {
                    const FidelityReport rep = read_fidelity(spec, builder, config, strategy,
                                                             coupling, noise, params.shots, seed_r);
                    FidelityRow row = base;
                    row.seed_label = std::to_string(seed_r);
                    row.mean_fidelity = rep.mean_fidelity;
                    row.status = "ok";
                    rows.push_back(std::move(row));
                    means.push_back(rep.mean_fidelity);
                } catch (const std::exception&) {
                    skipped = true;  // circuit exceeds the simulator qubit cap
                }
            }
            if (skipped) {
                FidelityRow row = base;
                row.seed_label = "-";
                row.status = "skipped_qubit_cap";
                rows.push_back(std::move(row));
                continue;
            }
            FidelityRow summary = base;
            summary.seed_label = "summary";
            double mean = 0.0;
            for (double m : means) mean += m;
            mean /= static_cast<double>(means.size());
            double var = 0.0;
            for (double m : means) var += (m - mean) * (m - mean);
            summary.mean_fidelity = mean;
            summary.fidelity_std =
                means.size() > 1 ? std::sqrt(var / static_cast<double>(means.size() - 1)) : 0.0;
            summary.status = "ok";
            rows.push_back(std::move(summary));
        }
    }
    return rows;
}

std::string fidelity_to_csv(const std::vector<FidelityRow>& rows) {
    std::string out = kFidelityHeader;
    out += '\n';
    for (const FidelityRow& r : rows) {
        out += std::to_string(r.n);
        out += ',';
        out += r.builder;
        out += ',';
        out += r.config;
        out += ',';
        out += r.connectivity;
        out += ',';
        out += r.seed_label;
        out += ',';
        out += std::to_string(r.shots);
        out += ',';
        out += fmt6(r.p2);
        out += ',';
        if (r.mean_fidelity) out += fmt6(*r.mean_fidelity);
        out += ',';
        if (r.fidelity_std) out += fmt6(*r.fidelity_std);
        out += ',';
        out += r.status;
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report aggregation

Report build_report(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw std::invalid_argument("report: no records");

    // Best row (minimum total gates) per builder and n; builders keep
    // first-appearance order.
    std::vector<std::string> builder_order;
    std::map<std::string, std::map<int, const SweepRecord*>> best;
    for (const SweepRecord& r : records) {
        if (best.find(r.builder) == best.end()) builder_order.push_back(r.builder);
        auto& per_n = best[r.builder];
        const auto it = per_n.find(r.n);
        if (it == per_n.end() || r.total_gates < it->second->total_gates) per_n[r.n] = &r;
    }

    Report report;
    for (const std::string& builder : builder_order) {
        const auto& per_n = best[builder];
        for (auto it = per_n.begin(); it != per_n.end(); ++it) {
            const auto next = per_n.find(it->first + 1);
            if (next == per_n.end()) continue;
            Report::Growth g;
            g.builder = builder;
            g.n_from = it->first;
            g.n_to = next->first;
            g.gate_ratio = static_cast<double>(next->second->total_gates) /
                           static_cast<double>(it->second->total_gates);
            g.depth_ratio =
                static_cast<double>(next->second->depth) / static_cast<double>(it->second->depth);
            report.growth.push_back(std::move(g));
        }
    }

    const auto naive_it = best.find("naive");
    if (naive_it != best.end()) {
        for (const auto& [n, naive_row] : naive_it->second) {
            for (const std::string& builder : builder_order) {
                if (builder == "naive") continue;
                const auto& per_n = best[builder];
                const auto it = per_n.find(n);
                if (it == per_n.end()) continue;
                Report::Reduction red;
                red.n = n;
                red.builder = builder;
                red.config = it->second->config;
                red.gate_ratio = static_cast<double>(naive_row->total_gates) /
                                 static_cast<double>(it->second->total_gates);
                red.depth_ratio =
                    static_cast<double>(naive_row->depth) / static_cast<double>(it->second->depth);
                report.reductions.push_back(std::move(red));
            }
        }
    }
    return report;
}

std::string report_to_json(const Report& report) {
    nlohmann::ordered_json j;
    j["growth"] = nlohmann::ordered_json::array();
    for (const Report::Growth& g : report.growth) {
        nlohmann::ordered_json item;
        item["builder"] = g.builder;
        item["n_from"] = g.n_from;
        item["n_to"] = g.n_to;
        item["gate_ratio"] = g.gate_ratio;
        item["depth_ratio"] = g.depth_ratio;
        j["growth"].push_back(std::move(item));
    }
    j["reductions"] = nlohmann::ordered_json::array();
    for (const Report::Reduction& r : report.reductions) {
        nlohmann::ordered_json item;
        item["n"] = r.n;
        item["builder"] = r.builder;
        item["config"] = r.config;
        item["gate_ratio"] = r.gate_ratio;
        item["depth_ratio"] = r.depth_ratio;
        j["reductions"].push_back(std::move(item));
    }
    return j.dump(2);
}

Report report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("report JSON: ") + e.what());
    }
    Report report;
    try {
        for (const auto& item : j.at("growth")) {
            Report::Growth g;
            g.builder = item.at("builder").get<std::string>();
            g.n_from = item.at("n_from").get<int>();
            g.n_to = item.at("n_to").get<int>();
            g.gate_ratio = item.at("gate_ratio").get<double>();
            g.depth_ratio = item.at("depth_ratio").get<double>();
            report.growth.push_back(std::move(g));
        }
        for (const auto& item : j.at("reductions")) {
            Report::Reduction r;
            r.n = item.at("n").get<int>();
            r.builder = item.at("builder").get<std::string>();
            r.config = item.at("config").get<std::string>();
            r.gate_ratio = item.at("gate_ratio").get<double>();
            r.depth_ratio = item.at("depth_ratio").get<double>();
            report.reductions.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("report JSON: ") + e.what());
    }
    return report;
}

std::string render_report_table(const Report& report) {
    std::string out;
    char buf[160];
    out += "growth per added address line (best row per builder and n)\n";
    out += "builder      n->n+1   gate_ratio   depth_ratio\n";
    for (const Report::Growth& g : report.growth) {
        std::snprintf(buf, sizeof(buf), "%-12s %d->%-5d %10.3f %12.3f\n", g.builder.c_str(),
                      g.n_from, g.n_to, g.gate_ratio, g.depth_ratio);
        out += buf;
    }
    out += "\nreduction vs naive at equal n\n";
    out += "n   builder      config           gate_ratio   depth_ratio\n";
    for (const Report::Reduction& r : report.reductions) {
        std::snprintf(buf, sizeof(buf), "%-3d %-12s %-16s %10.3f %12.3f\n", r.n,
                      r.builder.c_str(), r.config.c_str(), r.gate_ratio, r.depth_ratio);
        out += buf;
    }
    return out;
}

}  // namespace qrom
