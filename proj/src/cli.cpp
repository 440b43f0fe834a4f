#include "thaad/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thaad/abstraction.hpp"
#include "thaad/bench.hpp"
#include "thaad/errors.hpp"
#include "thaad/evaluation.hpp"
#include "thaad/io.hpp"
#include "thaad/pipeline.hpp"
#include "thaad/synth.hpp"

namespace thaad {
namespace {

/// Pipeline knobs shared by abstract, detect and sweep. Only flags the user
/// actually passed override the config file.
struct PipelineFlags {
    std::int64_t alpha = 0;
    double beta = 0.0;
    int x = 0;
    std::string metric;
    std::string matcher;
    std::int64_t sample_period = 0;
    std::int64_t max_duration = 0;
    int window = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "per-element tolerance in code units");
        cmd->add_option("--beta", beta, "aggregate distance tolerance");
        cmd->add_option("--x", x, "pattern length in codes");
        cmd->add_option("--metric", metric, "aggregate metric: L1 or L2");
        cmd->add_option("--matcher", matcher, "matching backend: indexed or hash_exact");
        cmd->add_option("--sample-period", sample_period, "time units between samples");
        cmd->add_option("--max-duration", max_duration, "longest reportable candidate span");
        cmd->add_option("--window", window, "trend window length t");
    }

    void apply(const CLI::App* cmd, PipelineConfig& cfg) const {
        if (cmd->count("--alpha") > 0) cfg.alpha = alpha;
        if (cmd->count("--beta") > 0) cfg.beta = beta;
        if (cmd->count("--x") > 0) cfg.pattern_length = x;
        if (cmd->count("--metric") > 0) cfg.metric = metric_from_string(metric);
        if (cmd->count("--matcher") > 0) cfg.matcher = matcher_from_string(matcher);
        if (cmd->count("--sample-period") > 0) cfg.sample_period = sample_period;
        if (cmd->count("--max-duration") > 0) cfg.max_candidate_duration = max_duration;
        if (cmd->count("--window") > 0) cfg.abstraction.window_length = window;
    }
};

RunConfig load_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return RunConfig::from_json_file(path);
}

/// Flag value if given, config fallback otherwise; missing both is an error.
std::string require_path(const std::string& flag_value, const std::string& config_value,
                         const char* flag, const char* what) {
    if (!flag_value.empty()) return flag_value;
    if (!config_value.empty()) return config_value;
    throw ConfigError(std::string("missing ") + what + " path: pass " + flag +
                      " or set it in the config");
}

/// A non-empty config variable list acts as an allowlist.
void apply_variable_filter(std::vector<TimePointSeries>& series,
                           const std::vector<std::string>& variables) {
    if (variables.empty()) return;
    std::erase_if(series, [&](const TimePointSeries& s) {
        return std::find(variables.begin(), variables.end(), s.variable) == variables.end();
    });
}

std::string fmt_rate3(const std::optional<double>& rate) {
    if (!rate.has_value()) return "na";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *rate);
    return buf;
}

std::uint64_t resolve_seed(std::uint64_t base) { return env_seed_override().value_or(base); }

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"trend anomaly detection over symbolic event strings", "thaad"};
    app.require_subcommand(1);

    auto* abstract_cmd = app.add_subcommand("abstract", "turn series into trend intervals");
    std::string abstract_config, abstract_input, abstract_output;
    PipelineFlags abstract_flags;
    abstract_cmd->add_option("--config", abstract_config, "JSON settings file");
    abstract_cmd->add_option("--input", abstract_input, "time-points CSV to read");
    abstract_cmd->add_option("--output", abstract_output, "intervals CSV to write");
    abstract_flags.attach(abstract_cmd);

    auto* detect_cmd = app.add_subcommand("detect", "report anomalies in a time-points file");
    std::string detect_config, detect_input, detect_output;
    int detect_cycles = 1;
    PipelineFlags detect_flags;
    detect_cmd->add_option("--config", detect_config, "JSON settings file");
    detect_cmd->add_option("--input", detect_input, "time-points CSV to read");
    detect_cmd->add_option("--output", detect_output, "reports CSV to write");
    detect_cmd->add_option("--cycles", detect_cycles, "ingest batches per entity");
    detect_flags.attach(detect_cmd);

    auto* eval_cmd = app.add_subcommand("eval", "score a reports file against truth");
    std::string eval_config, eval_reports, eval_truth;
    eval_cmd->add_option("--config", eval_config, "JSON settings file");
    eval_cmd->add_option("--reports", eval_reports, "reports CSV to score");
    eval_cmd->add_option("--truth", eval_truth, "truth CSV to score against");

    auto* sweep_cmd = app.add_subcommand("sweep", "score a tolerance grid over one data set");
    std::string sweep_config, sweep_input, sweep_truth, sweep_output;
    std::vector<std::int64_t> sweep_alphas;
    std::vector<double> sweep_betas, sweep_mults;
    std::vector<int> sweep_xs;
    std::vector<std::string> sweep_metrics;
    PipelineFlags sweep_flags;
    sweep_cmd->add_option("--config", sweep_config, "JSON settings file");
    sweep_cmd->add_option("--input", sweep_input, "time-points CSV to read");
    sweep_cmd->add_option("--truth", sweep_truth, "truth CSV to score against");
    sweep_cmd->add_option("--output", sweep_output, "sweep CSV to write");
    sweep_cmd->add_option("--alphas", sweep_alphas, "alpha grid")->delimiter(',');
    auto* betas_opt =
        sweep_cmd->add_option("--betas", sweep_betas, "absolute beta grid")->delimiter(',');
    auto* mults_opt =
        sweep_cmd->add_option("--beta-mults", sweep_mults, "beta grid as multiples of alpha")
            ->delimiter(',');
    betas_opt->excludes(mults_opt);
    mults_opt->excludes(betas_opt);
    sweep_cmd->add_option("--xs", sweep_xs, "pattern length grid")->delimiter(',');
    sweep_cmd->add_option("--metrics", sweep_metrics, "metric grid, e.g. L1,L2")->delimiter(',');
    sweep_flags.attach(sweep_cmd);

    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic data set plus truth");
    std::string synth_config, synth_output, synth_truth_out;
    int synth_entities = 20;
    int synth_days = 7;
    int synth_anomalies = 0;
    double synth_magnitude = 3.0;
    double synth_noise = 0.01;
    std::int64_t synth_duration = 30;
    std::uint64_t synth_seed = 0;
    synth_cmd->add_option("--config", synth_config, "JSON settings file");
    synth_cmd->add_option("--output", synth_output, "time-points CSV to write");
    synth_cmd->add_option("--truth-output", synth_truth_out, "truth CSV to write");
    synth_cmd->add_option("--entities", synth_entities, "entity count");
    synth_cmd->add_option("--days", synth_days, "days of per-minute samples");
    synth_cmd->add_option("--noise", synth_noise, "relative noise amplitude");
    synth_cmd->add_option("--anomalies", synth_anomalies, "spike count to inject");
    synth_cmd->add_option("--magnitude", synth_magnitude, "spike peak factor");
    synth_cmd->add_option("--anomaly-duration", synth_duration, "spike length in samples");
    synth_cmd->add_option("--seed", synth_seed, "generator seed");

    auto* bench_cmd = app.add_subcommand("bench", "time the scan matcher against the index");
    std::string bench_config, bench_output, bench_metric;
    std::vector<std::int64_t> bench_sizes;
    int bench_x = 0;
    int bench_queries = 0;
    std::int64_t bench_alpha = 0;
    double bench_beta = 0.0;
    std::uint64_t bench_seed = 0;
    bench_cmd->add_option("--config", bench_config, "JSON settings file");
    bench_cmd->add_option("--output", bench_output, "bench CSV to write");
    bench_cmd->add_option("--sizes", bench_sizes, "text sizes in codes")->delimiter(',');
    bench_cmd->add_option("--x", bench_x, "pattern length in codes");
    bench_cmd->add_option("--alpha", bench_alpha, "per-element tolerance in code units");
    bench_cmd->add_option("--beta", bench_beta, "aggregate distance tolerance");
    bench_cmd->add_option("--metric", bench_metric, "aggregate metric: L1 or L2");
    bench_cmd->add_option("--queries", bench_queries, "queries per size");
    bench_cmd->add_option("--seed", bench_seed, "workload seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (abstract_cmd->parsed()) {
            RunConfig rc = load_config(abstract_config);
            abstract_flags.apply(abstract_cmd, rc.pipeline);
            rc.pipeline.validate();
            auto series =
                load_time_points(require_path(abstract_input, rc.points_path, "--input", "input"));
            apply_variable_filter(series, rc.variables);
            std::vector<IntervalRow> rows;
            for (const auto& s : series) {
                for (const auto& iv : abstract_series(s, rc.pipeline.abstraction))
                    rows.push_back({s.entity, iv});
            }
            write_intervals(require_path(abstract_output, rc.output_path, "--output", "output"),
                            rows);
            out << "intervals=" << rows.size() << "\n";
        } else if (detect_cmd->parsed()) {
            RunConfig rc = load_config(detect_config);
            detect_flags.apply(detect_cmd, rc.pipeline);
            rc.pipeline.validate();
            if (detect_cycles < 1) throw InvalidInputError("--cycles must be at least 1");
            auto series =
                load_time_points(require_path(detect_input, rc.points_path, "--input", "input"));
            apply_variable_filter(series, rc.variables);
            const auto reports = detect_series(series, rc.pipeline, detect_cycles);
            write_reports(require_path(detect_output, rc.output_path, "--output", "output"),
                          reports);
            out << "reports=" << reports.size() << "\n";
        } else if (eval_cmd->parsed()) {
            RunConfig rc = load_config(eval_config);
            const auto reports =
                load_reports(require_path(eval_reports, rc.output_path, "--reports", "reports"));
            const auto truth =
                load_truth(require_path(eval_truth, rc.truth_path, "--truth", "truth"));
            const EvalResult r = score(reports, truth);
            out << "tp=" << r.tp << " fp=" << r.fp << " fn=" << r.fn
                << " tpr=" << fmt_rate3(r.tpr) << " fnr=" << fmt_rate3(r.fnr)
                << " f1=" << fmt_rate3(r.f1) << "\n";
        } else if (sweep_cmd->parsed()) {
            RunConfig rc = load_config(sweep_config);
            sweep_flags.apply(sweep_cmd, rc.pipeline);
            rc.pipeline.validate();
            auto series =
                load_time_points(require_path(sweep_input, rc.points_path, "--input", "input"));
            apply_variable_filter(series, rc.variables);
            const auto truth =
                load_truth(require_path(sweep_truth, rc.truth_path, "--truth", "truth"));

            const std::vector<std::int64_t> alphas =
                sweep_alphas.empty() ? std::vector<std::int64_t>{0, 1, 100, 200, 450, 750}
                                     : sweep_alphas;
            const bool mults = sweep_betas.empty();
            const std::vector<double> betas =
                mults ? (sweep_mults.empty() ? std::vector<double>{1, 2, 3, 4} : sweep_mults)
                      : sweep_betas;
            const std::vector<int> xs =
                sweep_xs.empty() ? std::vector<int>{rc.pipeline.pattern_length} : sweep_xs;
            std::vector<Metric> metrics;
            if (sweep_metrics.empty()) {
                metrics.push_back(rc.pipeline.metric);
            } else {
                for (const auto& name : sweep_metrics) metrics.push_back(metric_from_string(name));
            }

            const auto cases = sweep_grid(alphas, betas, mults, xs, metrics);
            const auto rows = sweep(series, truth, cases, rc.pipeline);
            write_sweep(require_path(sweep_output, rc.output_path, "--output", "output"), rows);
            out << "rows=" << rows.size() << "\n";
        } else if (synth_cmd->parsed()) {
            RunConfig rc = load_config(synth_config);
            SynthSpec spec;
            spec.seed = resolve_seed(synth_cmd->count("--seed") > 0 ? synth_seed : rc.seed);
            spec.n_entities = synth_entities;
            spec.days = synth_days;
            spec.noise_fraction = synth_noise;
            if (synth_anomalies > 0)
                spec.injections =
                    place_injections(spec, synth_anomalies, synth_magnitude, synth_duration);
            const SynthResult result = generate_synthetic(spec);
            write_time_points(require_path(synth_output, rc.points_path, "--output", "output"),
                              result.series);
            write_truth(require_path(synth_truth_out, rc.truth_path, "--truth-output",
                                     "truth output"),
                        result.truth);
            out << "series=" << result.series.size() << " truth=" << result.truth.size() << "\n";
        } else if (bench_cmd->parsed()) {
            RunConfig rc = load_config(bench_config);
            BenchSpec spec = BenchSpec::defaults();
            if (bench_cmd->count("--sizes") > 0) spec.sizes = bench_sizes;
            if (bench_cmd->count("--x") > 0) spec.pattern_length = bench_x;
            if (bench_cmd->count("--alpha") > 0) spec.alpha = bench_alpha;
            if (bench_cmd->count("--beta") > 0) spec.beta = bench_beta;
            if (!bench_metric.empty()) spec.metric = metric_from_string(bench_metric);
            if (bench_cmd->count("--queries") > 0) spec.queries_per_size = bench_queries;
            if (bench_cmd->count("--seed") > 0) spec.seed = bench_seed;
            spec.seed = resolve_seed(spec.seed);
            const auto rows = run_bench(spec);
            write_bench(require_path(bench_output, rc.output_path, "--output", "output"), rows);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", fitted_exponent(rows));
            out << "rows=" << rows.size() << " fitted_exponent=" << buf << "\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace thaad
