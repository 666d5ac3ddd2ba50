// qromopt: build, benchmark, and simulate table-lookup (QROM) circuits.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrom/qrom.hpp"
#include "qrom/simulate.hpp"
#include "qrom/sweep.hpp"
#include "qrom/transpile.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + *path + "'");
    out << text;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = text.find(',', pos);
        out.push_back(text.substr(pos, end == std::string::npos ? std::string::npos : end - pos));
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return out;
}

struct BuildArgs {
    std::string spec_path;
    std::string builder;
    std::string config;
    std::string uncompute;
    std::optional<std::string> out;
};

int cmd_build(const BuildArgs& args) {
    const qrom::QromSpec spec = qrom::QromSpec::from_json(read_file(args.spec_path));
    qrom::BuilderOptions options;
    if (args.uncompute == "mirror") options.uncompute = qrom::Uncompute::Mirror;
    else if (args.uncompute == "reset") options.uncompute = qrom::Uncompute::Reset;
    else if (!args.uncompute.empty())
        throw std::invalid_argument("--uncompute must be mirror or reset");

    qrom::Circuit circuit = [&] {
        if (args.builder == "naive") return qrom::build_naive(spec, options);
        if (args.builder == "sawtooth") return qrom::build_sawtooth(spec, options);
        if (args.builder == "predecoded") {
            if (args.config.empty())
                throw std::invalid_argument("predecoded builder needs --config");
            return qrom::build_predecoded(spec, qrom::parse_config(args.config), options);
        }
        throw std::invalid_argument("unknown builder '" + args.builder + "'");
    }();
    write_output(args.out, circuit.to_json() + "\n");
    return 0;
}

struct SweepArgs {
    qrom::SweepParams params;
    std::string builders = "naive,sawtooth,predecoded";
    std::string mcx = "recursive";
    std::string coupling;
    std::optional<std::string> out;
};

int cmd_sweep(SweepArgs& args) {
    args.params.builders = split_csv(args.builders);
    args.params.strategy = qrom::parse_strategy(args.mcx);
    std::optional<qrom::CouplingMap> coupling;
    if (!args.coupling.empty()) coupling = qrom::CouplingMap::from_file(args.coupling);
    const auto records = qrom::run_sweep(args.params, coupling ? &*coupling : nullptr);
    write_output(args.out, qrom::sweep_to_csv(records));
    return 0;
}

struct FidelityArgs {
    qrom::FidelityBenchParams params;
    std::string builders = "sawtooth,predecoded";
    std::string config;
    std::string mcx = "recursive";
    std::string connectivity = "full";
    std::optional<std::string> out;
};

int cmd_fidelity(FidelityArgs& args) {
    args.params.builders = split_csv(args.builders);
    args.params.strategy = qrom::parse_strategy(args.mcx);
    if (!args.config.empty()) args.params.config = qrom::parse_config(args.config);
    std::optional<qrom::CouplingMap> coupling;
    if (args.connectivity != "full")
        coupling = qrom::CouplingMap::from_file(args.connectivity);
    const auto rows = qrom::run_fidelity_bench(args.params, coupling ? &*coupling : nullptr);
    write_output(args.out, qrom::fidelity_to_csv(rows));
    return 0;
}

struct ReportArgs {
    std::string in_path;
    std::string format = "table";
    std::optional<std::string> out;
};

int cmd_report(const ReportArgs& args) {
    const auto records = qrom::sweep_from_csv(read_file(args.in_path));
    const qrom::Report report = qrom::build_report(records);
    if (args.format == "table") {
        write_output(args.out, qrom::render_report_table(report));
    } else if (args.format == "json") {
        write_output(args.out, qrom::report_to_json(report) + "\n");
    } else {
        throw std::invalid_argument("--format must be table or json");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"table-lookup (QROM) circuit construction, transpilation, and noisy simulation"};
    app.require_subcommand(1);

    BuildArgs build_args;
    CLI::App* build = app.add_subcommand("build", "emit one circuit as JSON");
    build->add_option("--spec", build_args.spec_path, "memory spec JSON {n,d,data}")->required();
    build->add_option("--builder", build_args.builder, "naive|sawtooth|predecoded")->required();
    build->add_option("--config", build_args.config, "partition config, e.g. 2P+2P");
    build->add_option("--uncompute", build_args.uncompute, "mirror|reset (builder default if unset)");
    std::string build_out;
    build->add_option("--out", build_out, "output path (stdout if unset)");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "compiled-metrics sweep CSV");
    sweep->add_option("--n-min", sweep_args.params.n_min, "smallest address width");
    sweep->add_option("--n-max", sweep_args.params.n_max, "largest address width");
    sweep->add_option("--data-width", sweep_args.params.d, "data lines (default 4)");
    sweep->add_option("--builders", sweep_args.builders, "comma list of builders");
    sweep->add_option("--configs", sweep_args.params.configs,
                      "optimal|all|explicit comma list for predecoded");
    sweep->add_option("--mcx", sweep_args.mcx, "recursive|vchain");
    sweep->add_option("--coupling", sweep_args.coupling, "coupling-map edge file (routes circuits)");
    sweep->add_option("--seed", sweep_args.params.seed, "random-table seed");
    sweep->add_option("--shots", sweep_args.params.shots,
                      "fill mean_fidelity column with this many shots (0 = off)");
    sweep->add_option("--p2", sweep_args.params.p2, "two-qubit depolarizing probability");
    sweep->add_flag("--timing", sweep_args.params.timing,
                    "record wall time (off keeps runs byte-identical)");
    std::string sweep_out;
    sweep->add_option("--out", sweep_out, "output path (stdout if unset)");

    FidelityArgs fid_args;
    CLI::App* fid = app.add_subcommand("fidelity", "per-seed read-fidelity CSV");
    fid->add_option("--n-min", fid_args.params.n_min, "smallest address width");
    fid->add_option("--n-max", fid_args.params.n_max, "largest address width");
    fid->add_option("--data-width", fid_args.params.d, "data lines (default 4)");
    fid->add_option("--builders", fid_args.builders, "comma list of builders");
    fid->add_option("--config", fid_args.config,
                    "partition config for predecoded (default: balanced split)");
    fid->add_option("--mcx", fid_args.mcx, "recursive|vchain");
    fid->add_option("--connectivity", fid_args.connectivity, "full or a coupling-map edge file");
    fid->add_option("--shots", fid_args.params.shots, "shots per circuit");
    fid->add_option("--repeats", fid_args.params.repeats, "seeds per (n, builder)");
    fid->add_option("--seed", fid_args.params.seed, "master seed");
    fid->add_option("--p1", fid_args.params.p1, "single-qubit depolarizing probability");
    fid->add_option("--p2", fid_args.params.p2, "two-qubit depolarizing probability");
    std::string fid_out;
    fid->add_option("--out", fid_out, "output path (stdout if unset)");

    ReportArgs report_args;
    CLI::App* report = app.add_subcommand("report", "aggregate a sweep CSV");
    report->add_option("--in", report_args.in_path, "sweep CSV path")->required();
    report->add_option("--format", report_args.format, "table|json");
    std::string report_out;
    report->add_option("--out", report_out, "output path (stdout if unset)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*build) {
            if (!build_out.empty()) build_args.out = build_out;
            return cmd_build(build_args);
        }
        if (*sweep) {
            if (!sweep_out.empty()) sweep_args.out = sweep_out;
            return cmd_sweep(sweep_args);
        }
        if (*fid) {
            if (!fid_out.empty()) fid_args.out = fid_out;
            return cmd_fidelity(fid_args);
        }
        if (*report) {
            if (!report_out.empty()) report_args.out = report_out;
            return cmd_report(report_args);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
