#ifndef RSP_EXPERIMENT_HPP
#define RSP_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rsp {

/// Invalid experiment name, parameter, or config file. Maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

/// One experiment run: a name, the n sweep, trial count, master seed, and
/// experiment-specific params. Everything is validated before any work
/// starts.
struct ExperimentConfig {
    std::string experiment;
    std::vector<int> n_values{100};
    int trials = 1;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> params;
    std::string out_path; // empty: stdout
    OutputFormat format = OutputFormat::Csv;
    int workers = 0; // 0: hardware concurrency
};

/// Known experiment names.
const std::vector<std::string>& experiment_names();

/// One trial's measurements. Statistic values are a deterministic function
/// of the config; wall_ms is not. The substream id never repeats across
/// records of a run: hash(master seed, experiment, param tuple, trial).
struct ExperimentRecord {
    std::string param_tuple;
    int trial = 0;
    std::uint64_t substream = 0;
    std::vector<std::pair<std::string, double>> stats;
    double wall_ms = 0.0;
    bool skipped = false; // an oracle was skipped for capability reasons
    std::string skip_reason;
};

struct SummaryRow {
    std::string param_tuple;
    std::string statistic;
    long count = 0;
    double mean = 0.0;
    double se = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ExperimentRecord> records; // sorted by (param tuple order, trial)
    std::vector<SummaryRow> summary;

    const SummaryRow* find_summary(const std::string& tuple, const std::string& stat) const;
};

/// Validate, run all trials (parallel across trials only), aggregate.
/// Byte-identical statistic values for identical configs, independent of
/// the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Throws ConfigError on any invalid field or param.
void validate_config(const ExperimentConfig& cfg);

struct BoundCheckRow {
    std::string param_tuple;
    std::string check; // cdf_lower / cdf_upper / lemma2_cdf / ball_small / ball_large / diam_tail
    double x = 0.0;        // grid point or threshold the check is evaluated at
    double empirical = 0.0;
    double bound = 0.0;    // bound value after any documented slack
    double band = 0.0;     // statistical allowance added on top
    bool pass = false;
};

struct BoundReport {
    ExperimentResult base;
    std::vector<BoundCheckRow> rows;
    bool all_pass = false;
};

/// Bound-vs-Monte-Carlo verdicts. Only cdf-sandwich, ball-tails and
/// diameter support verification.
BoundReport verify_bounds(const ExperimentConfig& cfg);

/// CSV with the fixed header experiment,param_tuple,trial,statistic,value;
/// one row per statistic, then summary rows with trial = -1 and the
/// statistic suffixed :mean/:se/:min/:max/:count. Floats carry 17
/// significant digits.
void write_records_csv(const ExperimentResult& result, std::ostream& out);

/// {config, records[], summary[]} document; validates against the shipped
/// schema (share/experiment_output.schema.json).
std::string result_json(const ExperimentResult& result);

void write_bound_report_csv(const BoundReport& report, std::ostream& out);
std::string bound_report_json(const BoundReport& report);

/// Embedded copy of the shipped output schema.
const char* output_schema_json();

/// Read a declarative config file (JSON object with the ExperimentConfig
/// fields). Throws ConfigError on malformed input.
ExperimentConfig parse_config_file(const std::string& path);

/// Shortest round-trip decimal formatting (param tuples, statistic names).
std::string format_double(double x);

} // namespace rsp

#endif
