#include "thaad/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace thaad {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

void expect_header(const std::vector<std::string>& lines, const std::string& header,
                   const std::string& path) {
    if (lines.empty())
        throw ParseError("missing header in " + path + ", expected: " + header, 1);
    if (lines.front() != header)
        throw ParseError("bad header in " + path + ", expected: " + header, 1);
}

std::vector<std::string> fields_of(const std::string& line, std::size_t n_fields,
                                   std::size_t line_no) {
    if (line.empty())
        throw ParseError("empty row", line_no);
    auto fields = split_fields(line);
    if (fields.size() != n_fields)
        throw ParseError("expected " + std::to_string(n_fields) + " fields, got " +
                             std::to_string(fields.size()),
                         line_no);
    return fields;
}

std::int64_t parse_int(const std::string& s, std::size_t line_no) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("not an integer: '" + s + "'", line_no);
    return v;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("not a number: '" + s + "'", line_no);
    return v;
}

/// Shortest decimal form that parses back to exactly the same double.
std::string fmt_double(double v) {
    char buf[64];
    // Integral values stay in plain notation; everything else gets the
    // shortest form that parses back to the same bits.
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0;
        std::from_chars(buf, buf + std::strlen(buf), back);
        if (back == v) return buf;
    }
    return buf;
}

std::string fmt_rate(const std::optional<double>& v) { return v ? fmt_double(*v) : "na"; }

std::optional<double> parse_rate(const std::string& s, std::size_t line_no) {
    if (s == "na") return std::nullopt;
    return parse_double(s, line_no);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open file for writing: " + path);
    return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out)
        throw Error("write failed: " + path);
}

} // namespace

std::vector<TimePointSeries> load_time_points(const std::string& path) {
    const auto lines = read_lines(path);
    expect_header(lines, "entity,variable,timestamp,value", path);

    struct Row {
        Timestamp ts;
        double value;
        std::size_t line_no;
    };
    std::map<std::pair<std::string, std::string>, std::vector<Row>> groups;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        auto f = fields_of(lines[i], 4, line_no);
        const double value = parse_double(f[3], line_no);
        if (!std::isfinite(value))
            throw ParseError("value must be finite", line_no);
        groups[{std::move(f[0]), std::move(f[1])}].push_back(
            {parse_int(f[2], line_no), value, line_no});
    }

    std::vector<TimePointSeries> out;
    out.reserve(groups.size());
    for (auto& [key, rows] : groups) {
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            return a.ts < b.ts || (a.ts == b.ts && a.line_no < b.line_no);
        });
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].ts == rows[i - 1].ts)
                throw ParseError("duplicate time point for " + key.first + "/" + key.second,
                                 std::max(rows[i].line_no, rows[i - 1].line_no));
        TimePointSeries s;
        s.entity = key.first;
        s.variable = key.second;
        s.points.reserve(rows.size());
        for (const Row& r : rows) s.points.push_back({r.ts, r.value});
        out.push_back(std::move(s));
    }
    return out;
}

void write_time_points(const std::string& path, std::span<const TimePointSeries> series) {
    auto out = open_out(path);
    out << "entity,variable,timestamp,value\n";
    for (const auto& s : series)
        for (const auto& p : s.points)
            out << s.entity << ',' << s.variable << ',' << p.timestamp << ','
                << fmt_double(p.value) << '\n';
    finish_out(out, path);
}

std::vector<GroundTruthEvent> load_truth(const std::string& path) {
    const auto lines = read_lines(path);
    expect_header(lines, "entity,start,end,label", path);
    std::vector<GroundTruthEvent> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        auto f = fields_of(lines[i], 4, line_no);
        GroundTruthEvent e{std::move(f[0]), parse_int(f[1], line_no), parse_int(f[2], line_no),
                           std::move(f[3])};
        if (e.start > e.end)
            throw ParseError("truth interval is inverted", line_no);
        out.push_back(std::move(e));
    }
    return out;
}

void write_truth(const std::string& path, std::span<const GroundTruthEvent> truth) {
    auto out = open_out(path);
    out << "entity,start,end,label\n";
    for (const auto& e : truth)
        out << e.entity << ',' << e.start << ',' << e.end << ',' << e.label << '\n';
    finish_out(out, path);
}

std::vector<IntervalRow> load_intervals(const std::string& path) {
    const auto lines = read_lines(path);
    expect_header(lines, "entity,variable,begin,finish,symbol", path);
    std::vector<IntervalRow> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        auto f = fields_of(lines[i], 5, line_no);
        IntervalRow row;
        row.entity = std::move(f[0]);
        row.interval.variable = std::move(f[1]);
        row.interval.begin = parse_int(f[2], line_no);
        row.interval.finish = parse_int(f[3], line_no);
        try {
            row.interval.symbol = symbol_from_string(f[4]);
        } catch (const InvalidInputError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (row.interval.begin > row.interval.finish)
            throw ParseError("interval is inverted", line_no);
        out.push_back(std::move(row));
    }
    return out;
}

void write_intervals(const std::string& path, std::span<const IntervalRow> rows) {
    auto out = open_out(path);
    out << "entity,variable,begin,finish,symbol\n";
    for (const auto& r : rows)
        out << r.entity << ',' << r.interval.variable << ',' << r.interval.begin << ','
            << r.interval.finish << ',' << to_string(r.interval.symbol) << '\n';
    finish_out(out, path);
}

std::vector<AnomalyReport> load_reports(const std::string& path) {
    const auto lines = read_lines(path);
    expect_header(lines, "entity,start,end,origin", path);
    std::vector<AnomalyReport> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        auto f = fields_of(lines[i], 4, line_no);
        AnomalyReport r;
        r.entity = std::move(f[0]);
        r.start = parse_int(f[1], line_no);
        r.end = parse_int(f[2], line_no);
        try {
            r.origin = origin_from_string(f[3]);
        } catch (const InvalidInputError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (r.start > r.end)
            throw ParseError("report interval is inverted", line_no);
        out.push_back(std::move(r));
    }
    return out;
}

void write_reports(const std::string& path, std::span<const AnomalyReport> reports) {
    auto out = open_out(path);
    out << "entity,start,end,origin\n";
    for (const auto& r : reports)
        out << r.entity << ',' << r.start << ',' << r.end << ',' << to_string(r.origin) << '\n';
    finish_out(out, path);
}

std::vector<SweepRow> load_sweep(const std::string& path) {
    const auto lines = read_lines(path);
    expect_header(lines, "alpha,beta,x,metric,tp,fp,fn,tpr,fnr,f1", path);
    std::vector<SweepRow> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        auto f = fields_of(lines[i], 10, line_no);
        SweepRow row;
        row.params.alpha = parse_int(f[0], line_no);
        row.params.beta = parse_double(f[1], line_no);
        row.params.pattern_length = static_cast<int>(parse_int(f[2], line_no));
        try {
            row.params.metric = metric_from_string(f[3]);
        } catch (const InvalidInputError& e) {
            throw ParseError(e.what(), line_no);
        }
        row.result.tp = parse_int(f[4], line_no);
        row.result.fp = parse_int(f[5], line_no);
        row.result.fn = parse_int(f[6], line_no);
        row.result.tpr = parse_rate(f[7], line_no);
        row.result.fnr = parse_rate(f[8], line_no);
        row.result.f1 = parse_rate(f[9], line_no);
        out.push_back(std::move(row));
    }
    return out;
}

void write_sweep(const std::string& path, std::span<const SweepRow> rows) {
    auto out = open_out(path);
    out << "alpha,beta,x,metric,tp,fp,fn,tpr,fnr,f1\n";
    for (const auto& r : rows)
        out << r.params.alpha << ',' << fmt_double(r.params.beta) << ','
            << r.params.pattern_length << ',' << to_string(r.params.metric) << ',' << r.result.tp
            << ',' << r.result.fp << ',' << r.result.fn << ',' << fmt_rate(r.result.tpr) << ','
            << fmt_rate(r.result.fnr) << ',' << fmt_rate(r.result.f1) << '\n';
    finish_out(out, path);
}

std::vector<BenchRow> load_bench(const std::string& path) {
    const auto lines = read_lines(path);
    expect_header(lines, "n,x,alpha,beta,oracle_ns,index_ns", path);
    std::vector<BenchRow> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        auto f = fields_of(lines[i], 6, line_no);
        BenchRow row;
        row.n = parse_int(f[0], line_no);
        row.x = static_cast<int>(parse_int(f[1], line_no));
        row.alpha = parse_int(f[2], line_no);
        row.beta = parse_double(f[3], line_no);
        row.oracle_ns = parse_int(f[4], line_no);
        row.index_ns = parse_int(f[5], line_no);
        out.push_back(row);
    }
    return out;
}

void write_bench(const std::string& path, std::span<const BenchRow> rows) {
    auto out = open_out(path);
    out << "n,x,alpha,beta,oracle_ns,index_ns\n";
    for (const auto& r : rows)
        out << r.n << ',' << r.x << ',' << r.alpha << ',' << fmt_double(r.beta) << ','
            << r.oracle_ns << ',' << r.index_ns << '\n';
    finish_out(out, path);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad config JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");

    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "pattern_length") {
                cfg.pipeline.pattern_length = value.get<int>();
            } else if (key == "alpha") {
                cfg.pipeline.alpha = value.get<std::int64_t>();
            } else if (key == "beta") {
                cfg.pipeline.beta = value.get<double>();
            } else if (key == "metric") {
                try {
                    cfg.pipeline.metric = metric_from_string(value.get<std::string>());
                } catch (const InvalidInputError& e) {
                    throw ConfigError(e.what());
                }
            } else if (key == "matcher") {
                try {
                    cfg.pipeline.matcher = matcher_from_string(value.get<std::string>());
                } catch (const InvalidInputError& e) {
                    throw ConfigError(e.what());
                }
            } else if (key == "sample_period") {
                cfg.pipeline.sample_period = value.get<std::int64_t>();
            } else if (key == "max_candidate_duration") {
                cfg.pipeline.max_candidate_duration = value.get<std::int64_t>();
            } else if (key == "window_length") {
                cfg.pipeline.abstraction.window_length = value.get<int>();
            } else if (key == "high_slope_thresh") {
                cfg.pipeline.abstraction.high_slope_thresh = value.get<double>();
            } else if (key == "low_slope_thresh") {
                cfg.pipeline.abstraction.low_slope_thresh = value.get<double>();
            } else if (key == "high_relation_thresh") {
                cfg.pipeline.abstraction.high_relation_thresh = value.get<double>();
            } else if (key == "low_relation_thresh") {
                cfg.pipeline.abstraction.low_relation_thresh = value.get<double>();
            } else if (key == "stable_relation_epsilon") {
                cfg.pipeline.abstraction.stable_relation_epsilon = value.get<double>();
            } else if (key == "variables") {
                cfg.variables = value.get<std::vector<std::string>>();
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "points_path") {
                cfg.points_path = value.get<std::string>();
            } else if (key == "truth_path") {
                cfg.truth_path = value.get<std::string>();
            } else if (key == "output_path") {
                cfg.output_path = value.get<std::string>();
            } else {
                throw ConfigError("unknown config key: " + key);
            }
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("config key '" + key + "' has the wrong type");
        }
    }
    cfg.pipeline.validate();
    return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::optional<std::uint64_t> env_seed_override() {
    const char* raw = std::getenv("THAAD_SEED");
    if (raw == nullptr) return std::nullopt;
    const std::string s(raw);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ConfigError("THAAD_SEED must be an unsigned integer");
    return v;
}

} // namespace thaad
