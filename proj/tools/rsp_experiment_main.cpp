// Experiment driver. Subcommands:
//   run            run an experiment, emit records + summary (CSV or JSON)
//   verify         run an experiment and check its Monte Carlo output
//                  against the analytic bounds; exit 1 on any failed check
//   dump-instance  write a weighted instance in the plain-text format
//   dump-clusters  cluster one instance and write the JSON cluster dump
//
// Exit codes: 0 success / all checks pass, 1 bound-check failure,
// 2 configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsp/clustering.hpp"
#include "rsp/experiment.hpp"
#include "rsp/metric.hpp"
#include "rsp/weighted_graph.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string experiment;
    std::string n_csv;
    long trials = -1;
    std::string seed_text;
    std::vector<std::string> param_kv;
    std::string out_path;
    std::string format;
    int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Declarative JSON config file");
    cmd->add_option("--experiment", args.experiment, "Experiment name");
    cmd->add_option("--n", args.n_csv, "Vertex count or comma-separated list");
    cmd->add_option("--trials", args.trials, "Trials per parameter tuple");
    cmd->add_option("--seed", args.seed_text, "Master seed (64-bit unsigned)");
    cmd->add_option("--param", args.param_kv, "Experiment param key=value (repeatable)");
    cmd->add_option("--out", args.out_path, "Output path (default stdout)");
    cmd->add_option("--format", args.format, "csv or json");
    cmd->add_option("--workers", args.workers, "Worker threads (0 = hardware)");
}

// Config file first, then flag overrides.
rsp::ExperimentConfig resolve_config(const CommonArgs& args) {
    rsp::ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = rsp::parse_config_file(args.config_path);
    if (!args.experiment.empty()) cfg.experiment = args.experiment;
    if (!args.n_csv.empty()) {
        cfg.n_values.clear();
        std::istringstream in(args.n_csv);
        std::string piece;
        while (std::getline(in, piece, ',')) {
            try {
                cfg.n_values.push_back(std::stoi(piece));
            } catch (const std::exception&) {
                throw rsp::ConfigError("--n: expected an integer, got '" + piece + "'");
            }
        }
    }
    if (args.trials >= 0) cfg.trials = static_cast<int>(args.trials);
    if (!args.seed_text.empty()) {
        try {
            cfg.seed = std::stoull(args.seed_text);
        } catch (const std::exception&) {
            throw rsp::ConfigError("--seed: expected a 64-bit unsigned integer");
        }
    }
    for (const std::string& kv : args.param_kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw rsp::ConfigError("--param expects key=value, got '" + kv + "'");
        cfg.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (!args.out_path.empty()) cfg.out_path = args.out_path;
    if (!args.format.empty()) {
        if (args.format == "csv")
            cfg.format = rsp::OutputFormat::Csv;
        else if (args.format == "json")
            cfg.format = rsp::OutputFormat::Json;
        else
            throw rsp::ConfigError("--format must be csv or json");
    }
    if (args.workers >= 0) cfg.workers = args.workers;
    if (cfg.experiment.empty()) throw rsp::ConfigError("no experiment selected");
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

int cmd_run(const CommonArgs& args) {
    rsp::ExperimentConfig cfg = resolve_config(args);
    rsp::ExperimentResult result = rsp::run_experiment(cfg);
    if (cfg.format == rsp::OutputFormat::Json) {
        emit(cfg.out_path, rsp::result_json(result));
    } else {
        std::ostringstream out;
        rsp::write_records_csv(result, out);
        emit(cfg.out_path, out.str());
    }
    return 0;
}

int cmd_verify(const CommonArgs& args) {
    rsp::ExperimentConfig cfg = resolve_config(args);
    rsp::BoundReport report = rsp::verify_bounds(cfg);
    if (cfg.format == rsp::OutputFormat::Json) {
        emit(cfg.out_path, rsp::bound_report_json(report));
    } else {
        std::ostringstream out;
        rsp::write_bound_report_csv(report, out);
        emit(cfg.out_path, out.str());
    }
    std::cerr << (report.all_pass ? "verify: all checks passed\n"
                                  : "verify: at least one check FAILED\n");
    return report.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random shortest path metric experiments"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment and emit records");
    add_common(run_cmd, run_args);

    CommonArgs verify_args;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Run an experiment and check analytic bounds");
    add_common(verify_cmd, verify_args);

    int dump_n = 10;
    std::string dump_seed = "0";
    std::string dump_dist = "exp";
    std::string dump_out;
    CLI::App* dump_cmd = app.add_subcommand("dump-instance", "Write a weighted instance");
    dump_cmd->add_option("--n", dump_n, "Vertex count")->required();
    dump_cmd->add_option("--seed", dump_seed, "Instance seed");
    dump_cmd->add_option("--dist", dump_dist, "exp or uniform");
    dump_cmd->add_option("--out", dump_out, "Output path (default stdout)");

    int cl_n = 50;
    std::string cl_seed = "0";
    double cl_delta = 0.1;
    std::string cl_out;
    CLI::App* cluster_cmd =
        app.add_subcommand("dump-clusters", "Cluster one instance, write JSON");
    cluster_cmd->add_option("--n", cl_n, "Vertex count")->required();
    cluster_cmd->add_option("--seed", cl_seed, "Instance seed");
    cluster_cmd->add_option("--delta", cl_delta, "Cluster radius parameter")->required();
    cluster_cmd->add_option("--out", cl_out, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(run_args);
        if (verify_cmd->parsed()) return cmd_verify(verify_args);
        if (dump_cmd->parsed()) {
            rsp::WeightedGraph g = rsp::generate_weights(
                dump_n, rsp::weight_distribution_from_string(dump_dist), std::stoull(dump_seed));
            std::ostringstream out;
            rsp::dump_instance(g, out);
            emit(dump_out, out.str());
            return 0;
        }
        if (cluster_cmd->parsed()) {
            rsp::RandomMetric m = rsp::random_metric(
                cl_n, rsp::WeightDistribution::Exponential1, std::stoull(cl_seed));
            rsp::ClusteringResult r = rsp::build_clusters(m, cl_delta);
            emit(cl_out, rsp::cluster_dump_json(r) + "\n");
            return 0;
        }
    } catch (const rsp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
