#include "conflev/table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "conflev/format.hpp"
#include "conflev/json_out.hpp"

namespace conflev {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string quote_csv(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::optional<double> parse_double_cell(const std::string& raw, const char* field, int line_no,
                                        std::vector<std::string>& errors) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        errors.push_back("line " + std::to_string(line_no) + ": bad " + field + " value '" +
                         s + "'");
        return std::nullopt;
    }
    return v;
}

enum class Column { Label, MeanA, MeanB, T, P, N, SE, DF, Ignore };

Column classify_header(const std::string& name) {
    const std::string h = lower(trim(name));
    if (h == "label" || h == "name") return Column::Label;
    if (h == "mean_a" || h == "mean1") return Column::MeanA;
    if (h == "mean_b" || h == "mean2") return Column::MeanB;
    if (h == "t" || h == "t_value") return Column::T;
    if (h == "p" || h == "p_value") return Column::P;
    if (h == "n" || h == "n_total") return Column::N;
    if (h == "se") return Column::SE;
    if (h == "df") return Column::DF;
    return Column::Ignore;
}

bool is_star_token(const std::string& s) {
    return !s.empty() && s.size() <= 3 &&
           std::all_of(s.begin(), s.end(), [](char c) { return c == '*'; });
}

// Whole-string double parse; rejects trailing junk, unlike std::stod.
double parse_strict_double(const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw std::invalid_argument("bad number '" + raw + "'");
    return v;
}

}  // namespace

StarConvention StarConvention::parse(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            vals.push_back(parse_strict_double(part));
        } catch (const std::exception&) {
            throw std::domain_error("star convention: bad threshold '" + part + "'");
        }
    }
    if (vals.size() != 3)
        throw std::domain_error("star convention needs exactly 3 thresholds, e.g. "
                                "'0.05,0.01,0.001'");
    for (double v : vals)
        if (!(v > 0.0 && v < 1.0))
            throw std::domain_error("star thresholds must lie in (0,1)");
    if (!(vals[0] > vals[1] && vals[1] > vals[2]))
        throw std::domain_error("star thresholds must strictly decrease");
    return StarConvention{vals[0], vals[1], vals[2]};
}

double StarConvention::threshold_for(int stars) const {
    switch (stars) {
        case 1: return one;
        case 2: return two;
        case 3: return three;
    }
    throw std::domain_error("star count must be 1-3, got " + std::to_string(stars));
}

ParseReport parse_results_csv(const std::string& csv_text, const StarConvention& stars) {
    ParseReport report;
    std::stringstream in(csv_text);
    std::string line;

    if (!std::getline(in, line))
        throw std::runtime_error("CSV input is empty: a header row is required");
    const auto header_cells = split_csv_line(trim(line));
    std::vector<Column> columns;
    bool any_recognized = false;
    for (const auto& cell : header_cells) {
        const Column c = classify_header(cell);
        columns.push_back(c);
        if (c != Column::Ignore) any_recognized = true;
    }
    if (!any_recognized)
        throw std::runtime_error("CSV header has no recognized columns (expected label, "
                                 "mean_a, mean_b, t, p, n, se, df or their aliases)");

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        const size_t before = report.errors.size();
        ResultsRow row;
        for (size_t i = 0; i < cells.size() && i < columns.size(); ++i) {
            const std::string cell = trim(cells[i]);
            switch (columns[i]) {
                case Column::Label:
                    row.label = cell;
                    break;
                case Column::MeanA:
                    row.mean_a = parse_double_cell(cell, "mean_a", line_no, report.errors);
                    break;
                case Column::MeanB:
                    row.mean_b = parse_double_cell(cell, "mean_b", line_no, report.errors);
                    break;
                case Column::T:
                    row.t_value = parse_double_cell(cell, "t", line_no, report.errors);
                    break;
                case Column::P: {
                    if (cell.empty()) break;
                    row.p_display = cell;
                    if (is_star_token(cell)) {
                        row.p_bound = stars.threshold_for(static_cast<int>(cell.size()));
                    } else if (cell.front() == '<') {
                        const auto bound = parse_double_cell(cell.substr(1), "p bound",
                                                             line_no, report.errors);
                        if (bound && *bound > 0.0 && *bound < 1.0) row.p_bound = bound;
                        else if (bound)
                            report.errors.push_back("line " + std::to_string(line_no) +
                                                    ": p bound outside (0,1)");
                    } else if (lower(cell) == "ns") {
                        // "not significant": no usable p information
                    } else {
                        const auto p = parse_double_cell(cell, "p", line_no, report.errors);
                        if (p && *p > 0.0 && *p <= 1.0) row.p_value = p;
                        else if (p)
                            report.errors.push_back("line " + std::to_string(line_no) +
                                                    ": p value outside (0,1]");
                    }
                    break;
                }
                case Column::N: {
                    const auto n = parse_double_cell(cell, "n", line_no, report.errors);
                    if (n) {
                        if (*n >= 1.0 && *n == std::floor(*n))
                            row.n_total = static_cast<long>(*n);
                        else
                            report.errors.push_back("line " + std::to_string(line_no) +
                                                    ": n must be a positive integer");
                    }
                    break;
                }
                case Column::SE:
                    row.se = parse_double_cell(cell, "se", line_no, report.errors);
                    if (row.se && !(*row.se > 0.0)) {
                        report.errors.push_back("line " + std::to_string(line_no) +
                                                ": se must be > 0");
                        row.se.reset();
                    }
                    break;
                case Column::DF:
                    row.df = parse_double_cell(cell, "df", line_no, report.errors);
                    if (row.df && !(*row.df > 0.0)) {
                        report.errors.push_back("line " + std::to_string(line_no) +
                                                ": df must be > 0");
                        row.df.reset();
                    }
                    break;
                case Column::Ignore:
                    break;
            }
        }
        if (report.errors.size() == before) report.rows.push_back(std::move(row));
    }
    return report;
}

AnnotatedRow annotate_row(const ResultsRow& row, const std::vector<Hypothesis>& hypotheses,
                          double level) {
    AnnotatedRow out;
    out.input = row;

    // Point estimate and its direction.
    std::optional<double> estimate;
    if (row.mean_a && row.mean_b) estimate = *row.mean_b - *row.mean_a;

    // Degrees of freedom: explicit column beats the n - 2 inference.
    std::optional<double> df = row.df;
    if (!df && row.n_total) {
        if (*row.n_total >= 3) {
            df = static_cast<double>(*row.n_total - 2);
            out.notes.push_back("df = n_total - 2 = " + format_number(*df));
        } else {
            out.notes.push_back("n_total too small to infer df");
        }
    }

    // Standard error: explicit column beats the back-calculation from t.
    std::optional<double> se = row.se;
    if (!se && estimate && row.t_value && *row.t_value != 0.0) {
        se = std::fabs(*estimate / *row.t_value);
        out.notes.push_back("se = |mean_b - mean_a| / t = " + format_number(*se));
    }
    if (!estimate && row.t_value && se) {
        estimate = *row.t_value * *se;
        out.notes.push_back("estimate = t * se = " + format_number(*estimate));
    }

    const EstimateSign sign = [&] {
        if (estimate) return *estimate >= 0.0 ? EstimateSign::NonNegative : EstimateSign::Negative;
        if (row.t_value)
            return *row.t_value >= 0.0 ? EstimateSign::NonNegative : EstimateSign::Negative;
        out.notes.push_back("direction assumed nonnegative (no means or t given)");
        return EstimateSign::NonNegative;
    }();

    if (estimate && se && df) {
        const SampleSummary s(*estimate, *se, DistFamily::student_t(*df), row.label);
        out.two_tailed_p = two_tailed_p(s);
        const auto cd = confidence_distribution(s);
        for (const auto& h : hypotheses) out.statements.push_back(confidence_level(cd, h));
        const auto [lo, hi] = confidence_interval(cd, level);
        out.interval = IntervalAnnotation{lo, hi, level};
        return out;
    }

    // Exact p (given, or recovered from t when the scale is missing).
    std::optional<double> p = row.p_value;
    if (!p && row.t_value && df) {
        p = two_sided_tail(DistFamily::student_t(*df), *row.t_value);
        out.notes.push_back("p recovered from t and df = " + format_number(*p));
    }
    if (p) {
        out.two_tailed_p = p;
        const auto base = p_to_confidence(*p, sign);
        for (const auto& h : hypotheses) {
            if (h == Hypothesis::greater_than(0.0)) {
                out.statements.push_back(base);
            } else if (h == Hypothesis::less_than(0.0)) {
                out.statements.emplace_back(h, 1.0 - base.confidence, StatementKind::Exact,
                                            base.source);
            } else {
                out.notes.push_back("hypothesis '" + h.text() +
                                    "' skipped: needs se and df, only p available");
            }
        }
        out.notes.push_back("p-only row: no interval available");
        return out;
    }

    if (row.p_bound) {
        const auto bound = star_bound(*row.p_bound, sign);
        out.statements.push_back(bound);
        for (const auto& h : hypotheses) {
            if (!(h == bound.hypothesis))
                out.notes.push_back("hypothesis '" + h.text() +
                                    "' skipped: star row only bounds the estimate's side of 0");
        }
        out.notes.push_back("star row: bound only, no interval");
        return out;
    }

    std::string missing;
    if (!estimate) missing += " estimate(means or t*se)";
    if (!se) missing += " se";
    if (!df) missing += " df(or n)";
    if (!row.p_value) missing += " p";
    throw std::invalid_argument("row '" + row.label + "' is unprocessable; missing:" + missing);
}

nlohmann::json hypothesis_json(const Hypothesis& h) {
    nlohmann::json j;
    switch (h.form) {
        case Hypothesis::Form::GreaterThan:
            j["form"] = "greater_than";
            j["threshold"] = h.lo;
            break;
        case Hypothesis::Form::LessThan:
            j["form"] = "less_than";
            j["threshold"] = h.lo;
            break;
        case Hypothesis::Form::Between:
            j["form"] = "between";
            j["lo"] = h.lo;
            j["hi"] = h.hi;
            break;
    }
    j["text"] = h.text();
    return j;
}

nlohmann::json statement_json(const ConfidenceStatement& st) {
    nlohmann::json s;
    s["hypothesis"] = hypothesis_json(st.hypothesis);
    s["confidence"] = st.confidence;
    s["kind"] = st.kind == StatementKind::Exact ? "exact" : "lower_bound";
    s["source"] = st.source;
    return s;
}

namespace {

using nlohmann::json;

std::string emit_json(const std::vector<AnnotatedRow>& rows) {
    json root;
    root["schema_version"] = 1;
    root["rows"] = json::array();
    for (const auto& row : rows) {
        json r;
        r["label"] = row.input.label;
        json in;
        if (row.input.mean_a) in["mean_a"] = *row.input.mean_a;
        if (row.input.mean_b) in["mean_b"] = *row.input.mean_b;
        if (row.input.t_value) in["t"] = *row.input.t_value;
        if (row.input.p_value) in["p"] = *row.input.p_value;
        if (row.input.p_bound) in["p_bound"] = *row.input.p_bound;
        if (!row.input.p_display.empty()) in["p_display"] = row.input.p_display;
        if (row.input.n_total) in["n"] = *row.input.n_total;
        if (row.input.se) in["se"] = *row.input.se;
        if (row.input.df) in["df"] = *row.input.df;
        r["input"] = std::move(in);
        if (row.two_tailed_p) r["two_tailed_p"] = *row.two_tailed_p;
        r["statements"] = json::array();
        for (const auto& st : row.statements) r["statements"].push_back(statement_json(st));
        if (row.interval) {
            r["interval"] = {{"lo", row.interval->lo},
                             {"hi", row.interval->hi},
                             {"level", row.interval->level}};
        }
        r["notes"] = row.notes;
        root["rows"].push_back(std::move(r));
    }
    return root.dump(2) + "\n";
}

std::string round3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string emit_text(const std::vector<AnnotatedRow>& rows) {
    std::string out;
    int idx = 0;
    for (const auto& row : rows) {
        ++idx;
        const std::string name =
            row.input.label.empty() ? "row " + std::to_string(idx) : row.input.label;
        out += name + ":";
        bool first = true;
        for (const auto& st : row.statements) {
            out += first ? " " : ", ";
            first = false;
            out += "confidence (" + st.hypothesis.text() + ") ";
            out += st.kind == StatementKind::Exact ? "= " : "> ";
            out += format_percent(st.confidence);
        }
        if (row.interval) {
            out += first ? " " : "; ";
            out += format_percent(row.interval->level, 0) + " interval (" +
                   round3(row.interval->lo) + ", " + round3(row.interval->hi) + ")";
        }
        out += "\n";
        for (const auto& note : row.notes) out += "  note: " + note + "\n";
    }
    return out;
}

std::string emit_csv(const std::vector<AnnotatedRow>& rows) {
    // Statement columns: one per distinct hypothesis, in first-seen order.
    std::vector<Hypothesis> hyps;
    for (const auto& row : rows)
        for (const auto& st : row.statements)
            if (std::find(hyps.begin(), hyps.end(), st.hypothesis) == hyps.end())
                hyps.push_back(st.hypothesis);

    std::string out = "label,mean_a,mean_b,t,p,n,se,df,two_tailed_p";
    for (const auto& h : hyps) out += ",conf(" + h.text() + ")";
    out += ",interval_lo,interval_hi,interval_level,notes\n";

    auto cell = [](const std::optional<double>& v) {
        return v ? format_number(*v) : std::string();
    };
    for (const auto& row : rows) {
        out += quote_csv(row.input.label);
        out += ',' + cell(row.input.mean_a);
        out += ',' + cell(row.input.mean_b);
        out += ',' + cell(row.input.t_value);
        out += ',' + quote_csv(row.input.p_display);
        out += ',' + (row.input.n_total ? std::to_string(*row.input.n_total) : std::string());
        out += ',' + cell(row.input.se);
        out += ',' + cell(row.input.df);
        out += ',' + cell(row.two_tailed_p);
        for (const auto& h : hyps) {
            out += ',';
            for (const auto& st : row.statements) {
                if (st.hypothesis == h) {
                    if (st.kind == StatementKind::LowerBound) out += '>';
                    out += format_number(st.confidence);
                    break;
                }
            }
        }
        out += ',' + (row.interval ? format_number(row.interval->lo) : std::string());
        out += ',' + (row.interval ? format_number(row.interval->hi) : std::string());
        out += ',' + (row.interval ? format_number(row.interval->level) : std::string());
        std::string notes;
        for (const auto& n : row.notes) {
            if (!notes.empty()) notes += "; ";
            notes += n;
        }
        out += ',' + quote_csv(notes) + '\n';
    }
    return out;
}

}  // namespace

std::string emit_report(const std::vector<AnnotatedRow>& rows, ReportFormat format) {
    switch (format) {
        case ReportFormat::JSON: return emit_json(rows);
        case ReportFormat::Text: return emit_text(rows);
        case ReportFormat::CSV: return emit_csv(rows);
    }
    throw std::logic_error("emit_report: unknown format");
}

Hypothesis parse_hypothesis(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("hypothesis '" + text +
                                    "': expected gt:<x>, lt:<x> or between:<a>,<b>");
    const std::string kind = lower(trim(text.substr(0, colon)));
    const std::string rest = trim(text.substr(colon + 1));
    try {
        if (kind == "gt") return Hypothesis::greater_than(parse_strict_double(rest));
        if (kind == "lt") return Hypothesis::less_than(parse_strict_double(rest));
        if (kind == "between") {
            const auto comma = rest.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("between needs two bounds");
            return Hypothesis::between(parse_strict_double(rest.substr(0, comma)),
                                       parse_strict_double(rest.substr(comma + 1)));
        }
    } catch (const std::domain_error&) {
        throw;  // lo >= hi: keep the precise message
    } catch (const std::invalid_argument&) {
        // fall through to the generic message
    }
    throw std::invalid_argument("hypothesis '" + text +
                                "': expected gt:<x>, lt:<x> or between:<a>,<b>");
}

}  // namespace conflev
