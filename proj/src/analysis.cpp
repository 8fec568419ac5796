#include "wigner/analysis.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wigner {

void CountSet::validate() const {
    if (i_min > i_max) throw std::invalid_argument("i_min exceeds i_max");
}

SigmaConvention parse_sigma_convention(std::string_view label) {
    if (label == "scaled") return SigmaConvention::scaled;
    if (label == "unscaled") return SigmaConvention::unscaled;
    throw std::invalid_argument("unknown sigma convention '" + std::string(label) + "' (expected scaled|unscaled)");
}

std::string to_string(SigmaConvention c) { return c == SigmaConvention::scaled ? "scaled" : "unscaled"; }

double poisson_sigma(std::uint64_t n) { return std::sqrt(static_cast<double>(n)); }

double compensated_minimum(std::uint64_t i_min, std::uint64_t i_max, double p_min, double p_max) {
    if (i_max == 0) throw std::invalid_argument("compensation needs i_max > 0");
    if (!(p_max > 0.0)) throw std::invalid_argument("compensation needs p_max > 0");
    if (!(p_min >= 0.0)) throw std::invalid_argument("p_min must be >= 0");
    return static_cast<double>(i_min) - static_cast<double>(i_max) * (p_min / p_max);
}

double propagate_sigma(const CountSet& c, double p_min, double p_max, SigmaConvention convention) {
    const double base = static_cast<double>(c.i13) + static_cast<double>(c.i12) + static_cast<double>(c.i23) +
                        static_cast<double>(c.i_min);
    double max_term = static_cast<double>(c.i_max);
    if (convention == SigmaConvention::scaled) {
        if (!(p_max > 0.0)) throw std::invalid_argument("scaled sigma needs p_max > 0");
        const double ratio = p_min / p_max;
        max_term *= ratio * ratio;
    }
    return std::sqrt(base + max_term);
}

ViolationReport evaluate_violation(const CountSet& c, double p_min, double p_max, SigmaConvention convention) {
    c.validate();
    ViolationReport r;
    r.convention = convention;
    if (c.all_zero()) {
        r.degenerate = true;
        return r;
    }
    r.compensated_min = compensated_minimum(c.i_min, c.i_max, p_min, p_max);
    r.negative_compensated_min = r.compensated_min < 0.0;
    r.lhs = static_cast<double>(c.i13) - r.compensated_min;
    r.rhs = static_cast<double>(c.i12) + static_cast<double>(c.i23);
    r.violation = r.lhs - r.rhs;
    r.sigma = propagate_sigma(c, p_min, p_max, convention);
    r.significance = r.sigma > 0.0 ? r.violation / r.sigma : 0.0;
    return r;
}

double significance(const ViolationReport& report) {
    if (!(report.sigma > 0.0)) throw std::domain_error("significance undefined for sigma = 0");
    return report.violation / report.sigma;
}

nlohmann::json to_json(const ViolationReport& r) {
    return {{"compensated_min", r.compensated_min},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"violation", r.violation},
            {"sigma", r.sigma},
            {"significance", r.significance},
            {"convention", to_string(r.convention)},
            {"degenerate", r.degenerate},
            {"negative_compensated_min", r.negative_compensated_min}};
}

// ---------------------------------------------------------------------------
// Input parsing. All three formats are flattened to "section.key" -> text so
// that numbers go through one conversion path.

namespace {

struct Field {
    std::string text;
    bool quoted = false;
    int line = 0;
};

using FieldMap = std::map<std::string, Field>;

class Context {
public:
    explicit Context(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(int line, std::string_view field, std::string_view what) const {
        std::string msg(source_);
        if (line > 0) msg += ":" + std::to_string(line);
        msg += ": ";
        if (!field.empty()) msg += "field '" + std::string(field) + "': ";
        msg += what;
        throw InputError(msg);
    }

private:
    std::string source_;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view strip_comment(std::string_view line) {
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quotes = !in_quotes;
        if (line[i] == '#' && !in_quotes) return line.substr(0, i);
    }
    return line;
}

bool valid_key(std::string_view key) {
    if (key.empty()) return false;
    for (char ch : key) {
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '-')) return false;
    }
    return true;
}

void put(FieldMap& fields, const Context& ctx, const std::string& key, Field f) {
    if (!valid_key(key)) ctx.fail(f.line, key, "invalid key");
    if (!fields.emplace(key, f).second) ctx.fail(f.line, key, "duplicate field");
}

Field parse_scalar(std::string_view raw, int line, const Context& ctx, const std::string& key) {
    raw = trim(raw);
    if (raw.empty()) ctx.fail(line, key, "missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') ctx.fail(line, key, "unterminated string");
        return Field{std::string(raw.substr(1, raw.size() - 2)), true, line};
    }
    if (raw.front() == '[' || raw.front() == '{') ctx.fail(line, key, "arrays and inline tables are not supported");
    return Field{std::string(raw), false, line};
}

FieldMap flatten_toml(std::string_view text, const Context& ctx) {
    FieldMap fields;
    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw_line;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string_view line = trim(strip_comment(raw_line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.starts_with("[[")) ctx.fail(line_no, "", "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!valid_key(section)) ctx.fail(line_no, section, "invalid section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) ctx.fail(line_no, "", "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string full = section.empty() ? key : section + "." + key;
        put(fields, ctx, full, parse_scalar(line.substr(eq + 1), line_no, ctx, full));
    }
    return fields;
}

FieldMap flatten_csv(std::string_view text, const Context& ctx) {
    FieldMap fields;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw_line;
    bool first = true;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string_view line = trim(strip_comment(raw_line));
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) ctx.fail(line_no, "", "expected 'key,value'");
        const std::string key(trim(line.substr(0, comma)));
        const std::string_view value = trim(line.substr(comma + 1));
        if (first && key == "key" && value == "value") {
            first = false;
            continue;
        }
        first = false;
        if (value.find(',') != std::string_view::npos) ctx.fail(line_no, key, "expected exactly two columns");
        put(fields, ctx, key, parse_scalar(value, line_no, ctx, key));
    }
    return fields;
}

FieldMap flatten_json(const nlohmann::json& j, const Context& ctx) {
    if (!j.is_object()) ctx.fail(0, "", "top-level JSON value must be an object");
    FieldMap fields;
    for (const auto& [section, body] : j.items()) {
        if (!body.is_object()) ctx.fail(0, section, "expected an object");
        for (const auto& [key, value] : body.items()) {
            const std::string full = section + "." + key;
            if (value.is_string()) {
                put(fields, ctx, full, Field{value.get<std::string>(), true, 0});
            } else if (value.is_number() || value.is_boolean()) {
                put(fields, ctx, full, Field{value.dump(), false, 0});
            } else if (value.is_null()) {
                continue;
            } else {
                ctx.fail(0, full, "expected a scalar");
            }
        }
    }
    return fields;
}

class FieldReader {
public:
    FieldReader(const FieldMap& fields, const Context& ctx) : fields_(fields), ctx_(ctx) {}

    bool has(const std::string& key) const { return fields_.count(key) != 0; }

    const Field& require(const std::string& key) {
        used_.insert(key);
        const auto it = fields_.find(key);
        if (it == fields_.end()) ctx_.fail(0, key, "missing required field");
        return it->second;
    }

    std::int64_t integer(const std::string& key) {
        const Field& f = require(key);
        std::int64_t v = 0;
        const char* first = f.text.data();
        const char* last = first + f.text.size();
        if (!f.text.empty() && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (f.quoted || ec != std::errc() || ptr != last) ctx_.fail(f.line, key, "expected an integer, got '" + f.text + "'");
        return v;
    }

    std::uint64_t count(const std::string& key) {
        const std::int64_t v = integer(key);
        if (v < 0) ctx_.fail(fields_.at(key).line, key, "negative count " + std::to_string(v));
        return static_cast<std::uint64_t>(v);
    }

    double real(const std::string& key) {
        const Field& f = require(key);
        double v = 0.0;
        const char* first = f.text.data();
        const char* last = first + f.text.size();
        if (!f.text.empty() && *first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (f.quoted || ec != std::errc() || ptr != last || !std::isfinite(v)) {
            ctx_.fail(f.line, key, "expected a number, got '" + f.text + "'");
        }
        return v;
    }

    std::optional<double> optional_real(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return real(key);
    }

    int line_of(const std::string& key) const {
        const auto it = fields_.find(key);
        return it == fields_.end() ? 0 : it->second.line;
    }

    void reject_unknown() const {
        for (const auto& [key, f] : fields_) {
            if (!used_.count(key)) ctx_.fail(f.line, key, "unknown field");
        }
    }

    void mark(const std::string& key) { used_.insert(key); }

private:
    const FieldMap& fields_;
    const Context& ctx_;
    std::set<std::string> used_;
};

constexpr const char* kCountKeys[] = {"i13", "i12", "i23", "i_min", "i_max"};

AnalysisInput build_input(const FieldMap& fields, const Context& ctx) {
    FieldReader r(fields, ctx);
    AnalysisInput in;
    in.counts.i13 = r.count("counts.i13");
    in.counts.i12 = r.count("counts.i12");
    in.counts.i23 = r.count("counts.i23");
    in.counts.i_min = r.count("counts.i_min");
    in.counts.i_max = r.count("counts.i_max");
    if (in.counts.i_min > in.counts.i_max) ctx.fail(r.line_of("counts.i_min"), "counts.i_min", "exceeds counts.i_max");

    const std::int64_t l = r.integer("wheel.l");
    if (l < 1 || l > 1'000'000) ctx.fail(r.line_of("wheel.l"), "wheel.l", "must be a positive integer");
    in.wheel.l = static_cast<int>(l);
    in.wheel.slit_width_fraction = r.real("wheel.slit_width_fraction");
    if (!(in.wheel.slit_width_fraction > 0.0 && in.wheel.slit_width_fraction < 1.0)) {
        ctx.fail(r.line_of("wheel.slit_width_fraction"), "wheel.slit_width_fraction", "must lie in (0, 1)");
    }
    if (r.has("wheel.quadrature_points")) {
        const std::int64_t q = r.integer("wheel.quadrature_points");
        if (q < 16 || q > 4096) ctx.fail(r.line_of("wheel.quadrature_points"), "wheel.quadrature_points", "must lie in [16, 4096]");
        in.wheel.quadrature_points = static_cast<int>(q);
    }

    in.angles.phi1 = r.real("angles.phi1");
    in.angles.phi2 = r.real("angles.phi2");
    in.angles.phi3 = r.real("angles.phi3");

    in.p_min_override = r.optional_real("overrides.p_min");
    in.p_max_override = r.optional_real("overrides.p_max");
    if (in.p_min_override.has_value() != in.p_max_override.has_value()) {
        ctx.fail(0, in.p_min_override ? "overrides.p_max" : "overrides.p_min", "overrides need both p_min and p_max");
    }
    if (in.p_max_override && !(*in.p_max_override > 0.0)) {
        ctx.fail(r.line_of("overrides.p_max"), "overrides.p_max", "must be > 0");
    }
    if (in.p_min_override && !(*in.p_min_override >= 0.0)) {
        ctx.fail(r.line_of("overrides.p_min"), "overrides.p_min", "must be >= 0");
    }

    in.integration_time_s = r.optional_real("meta.integration_time_s");
    if (in.integration_time_s && !(*in.integration_time_s > 0.0)) {
        ctx.fail(r.line_of("meta.integration_time_s"), "meta.integration_time_s", "must be > 0");
    }
    // Per-entry times are accepted only to reject unequal acquisitions.
    std::optional<double> common = in.integration_time_s;
    for (const char* k : kCountKeys) {
        const std::string key = std::string("times.") + k;
        if (!r.has(key)) continue;
        const double t = r.real(key);
        if (!(t > 0.0)) ctx.fail(r.line_of(key), key, "must be > 0");
        if (common && t != *common) {
            ctx.fail(r.line_of(key), key, "unequal integration times are not supported (counts must be totals over equal time)");
        }
        common = t;
    }
    in.integration_time_s = common;

    if (r.has("reference.violation") || r.has("reference.sigma")) {
        in.reference = ReferenceResult{r.real("reference.violation"), r.real("reference.sigma")};
    }
    r.reject_unknown();
    return in;
}

std::string format_double(double v) {
    // Shortest text that parses back to the same double.
    char buf[32];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string round_note(const char* what, double from, double to) {
    return std::string(what) + " changes the violation from " + format_double(from) + " to " + format_double(to);
}

}  // namespace

AnalysisInput parse_counts_toml(std::string_view text, std::string_view source) {
    const Context ctx(source);
    return build_input(flatten_toml(text, ctx), ctx);
}

AnalysisInput parse_counts_csv(std::string_view text, std::string_view source) {
    const Context ctx(source);
    return build_input(flatten_csv(text, ctx), ctx);
}

AnalysisInput parse_counts_json(const nlohmann::json& j, std::string_view source) {
    const Context ctx(source);
    return build_input(flatten_json(j, ctx), ctx);
}

AnalysisInput ingest_counts(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InputError(path + ": cannot open file");
    std::ostringstream buf;
    buf << file.rdbuf();
    const std::string text = buf.str();

    const auto ends_with = [&](std::string_view ext) { return std::string_view(path).ends_with(ext); };
    if (ends_with(".csv")) return parse_counts_csv(text, path);
    if (ends_with(".json")) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError(path + ": malformed JSON: " + e.what());
        }
        // A full report carries its input under "input".
        if (j.is_object() && j.contains("input")) return parse_counts_json(j.at("input"), path);
        return parse_counts_json(j, path);
    }
    if (ends_with(".toml")) return parse_counts_toml(text, path);
    throw InputError(path + ": unrecognised extension (expected .toml, .csv or .json)");
}

nlohmann::json to_json(const AnalysisInput& in) {
    nlohmann::json j;
    j["counts"] = {{"i13", in.counts.i13},
                   {"i12", in.counts.i12},
                   {"i23", in.counts.i23},
                   {"i_min", in.counts.i_min},
                   {"i_max", in.counts.i_max}};
    j["wheel"] = {{"l", in.wheel.l},
                  {"slit_width_fraction", in.wheel.slit_width_fraction},
                  {"quadrature_points", in.wheel.quadrature_points}};
    j["angles"] = {{"phi1", in.angles.phi1}, {"phi2", in.angles.phi2}, {"phi3", in.angles.phi3}};
    if (in.p_min_override && in.p_max_override) {
        j["overrides"] = {{"p_min", *in.p_min_override}, {"p_max", *in.p_max_override}};
    }
    if (in.integration_time_s) j["meta"] = {{"integration_time_s", *in.integration_time_s}};
    if (in.reference) j["reference"] = {{"violation", in.reference->violation}, {"sigma", in.reference->sigma}};
    return j;
}

AnalysisRun run_analysis(const AnalysisInput& in, SigmaConvention convention, std::optional<double> p_min_override,
                         std::optional<double> p_max_override) {
    if (p_min_override.has_value() != p_max_override.has_value()) {
        throw std::invalid_argument("p_min and p_max overrides must be given together");
    }
    AnalysisRun run;
    run.input = in;
    if (p_min_override) {
        run.input.p_min_override = p_min_override;
        run.input.p_max_override = p_max_override;
    }

    SlitWheelConfig wheel = in.wheel;
    wheel.relative_angle = 0.0;
    const SlitWheelPrediction model = slitwheel_probability(wheel);

    run.p_overridden = run.input.p_min_override.has_value();
    if (run.p_overridden) {
        run.p_min = *run.input.p_min_override;
        run.p_max = *run.input.p_max_override;
        run.alternate_p_min = model.p_min;
        run.alternate_p_max = model.p_max;
    } else {
        run.p_min = model.p_min;
        run.p_max = model.p_max;
        run.alternate_p_min = std::round(model.p_min * 1000.0) / 1000.0;
        run.alternate_p_max = std::round(model.p_max * 1000.0) / 1000.0;
    }

    run.report = evaluate_violation(in.counts, run.p_min, run.p_max, convention);
    if (run.report.degenerate) {
        run.notes.push_back("degenerate input: every count is zero");
        return run;
    }
    run.alternate_violation =
        run.alternate_p_max > 0.0
            ? evaluate_violation(in.counts, run.alternate_p_min, run.alternate_p_max, convention).violation
            : run.report.violation;

    if (run.p_overridden) {
        run.notes.push_back("P extremes overridden (p_min=" + format_double(run.p_min) +
                            ", p_max=" + format_double(run.p_max) + ")");
        run.notes.push_back("sensitivity: " + round_note("using the computed slit-wheel extremes", run.report.violation,
                                                         run.alternate_violation));
    } else {
        run.notes.push_back("P extremes computed from the slit-wheel model (l=" + std::to_string(wheel.l) +
                            ", W=" + format_double(wheel.slit_width_fraction) + ")");
        run.notes.push_back("sensitivity: " + round_note("rounding P extremes to 3 decimals", run.report.violation,
                                                         run.alternate_violation));
    }
    if (run.report.negative_compensated_min) {
        run.notes.push_back("warning: compensated minimum is negative; reported without clamping");
    }
    if (in.reference) {
        run.notes.push_back("reference result " + format_double(in.reference->violation) + " +/- " +
                            format_double(in.reference->sigma) + " is not reproduced exactly: violation differs by " +
                            format_double(run.report.violation - in.reference->violation) + ", sigma by " +
                            format_double(run.report.sigma - in.reference->sigma) + " (" +
                            to_string(convention) + " convention)");
    }
    return run;
}

nlohmann::json to_json(const AnalysisRun& run) {
    nlohmann::json j = to_json(run.report);
    j["p_min"] = run.p_min;
    j["p_max"] = run.p_max;
    j["p_source"] = run.p_overridden ? "override" : "computed";
    j["input"] = to_json(run.input);
    j["notes"] = run.notes;
    j["sensitivity"] = {{"p_min", run.alternate_p_min},
                        {"p_max", run.alternate_p_max},
                        {"violation", run.alternate_violation}};
    return j;
}

}  // namespace wigner
