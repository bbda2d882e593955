// Command-line front end: converts p-values and summary statistics into
// confidence levels, annotates results tables, draws confidence graphs, and
// runs the grid / Monte Carlo validation harnesses.
//
// Exit codes: 0 success, 1 fatal input error, 2 partial success (a table run
// where some rows were annotated and the rest reported on stderr).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conflev/bayes_grid.hpp"
#include "conflev/calibrate.hpp"
#include "conflev/format.hpp"
#include "conflev/inference.hpp"
#include "conflev/json_out.hpp"
#include "conflev/model.hpp"
#include "conflev/plot.hpp"
#include "conflev/table.hpp"

using namespace conflev;
using nlohmann::json;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << text;
}

DistFamily family_from(const std::optional<double>& df) {
    return df ? DistFamily::student_t(*df) : DistFamily::normal();
}

std::vector<Hypothesis> hypotheses_from(const std::vector<std::string>& texts) {
    if (texts.empty()) return {Hypothesis::greater_than(0.0)};
    std::vector<Hypothesis> out;
    for (const auto& t : texts) out.push_back(parse_hypothesis(t));
    return out;
}

std::string statement_line(const ConfidenceStatement& st) {
    return "confidence (" + st.hypothesis.text() + ") " +
           (st.kind == StatementKind::Exact ? "= " : "> ") + format_percent(st.confidence);
}

// --- p2conf: Eq. 1 style conversion of a p-value or star rating ------------

int run_p2conf(const std::optional<double>& p, const std::string& star,
               const std::string& stars_text, bool negative, const std::string& format) {
    if (p.has_value() == !star.empty())
        throw std::runtime_error("give exactly one of --p or --star");
    const EstimateSign sign = negative ? EstimateSign::Negative : EstimateSign::NonNegative;

    ConfidenceStatement st = [&] {
        if (p) return p_to_confidence(*p, sign);
        size_t count = 0;
        if (star == "1" || star == "2" || star == "3") count = star[0] - '0';
        else if (!star.empty() && star.find_first_not_of('*') == std::string::npos)
            count = star.size();
        else
            throw std::runtime_error("--star takes '*', '**', '***' or a count 1-3");
        const auto convention = StarConvention::parse(stars_text);
        return star_bound(convention.threshold_for(static_cast<int>(count)), sign);
    }();

    if (format == "json") {
        json j;
        j["schema_version"] = 1;
        j["statements"] = json::array({statement_json(st)});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << statement_line(st) << "\n  source: " << st.source << "\n";
    }
    return 0;
}

// --- conf: summary statistics -> confidence statements ---------------------

int run_conf(double estimate, double se, const std::optional<double>& df,
             const std::vector<std::string>& hyp_texts, double level,
             const std::string& format) {
    const SampleSummary s(estimate, se, family_from(df));
    const auto cd = confidence_distribution(s);
    const auto hyps = hypotheses_from(hyp_texts);

    std::vector<ConfidenceStatement> sts;
    for (const auto& h : hyps) sts.push_back(confidence_level(cd, h));
    const double p = two_tailed_p(s);
    const auto [lo, hi] = confidence_interval(cd, level);

    if (format == "json") {
        json j;
        j["schema_version"] = 1;
        j["estimate"] = estimate;
        j["se"] = se;
        j["family"] = s.family.name();
        j["two_tailed_p"] = p;
        j["statements"] = json::array();
        for (const auto& st : sts) j["statements"].push_back(statement_json(st));
        j["interval"] = {{"lo", lo}, {"hi", hi}, {"level", level}};
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& st : sts) std::cout << statement_line(st) << "\n";
        std::cout << "two-tailed p = " << format_number(p) << "\n";
        std::cout << format_percent(level, 0) << " interval (" << format_number(lo) << ", "
                  << format_number(hi) << ")\n";
    }
    return 0;
}

// --- interval ---------------------------------------------------------------

int run_interval(double estimate, double se, const std::optional<double>& df, double level,
                 const std::string& format) {
    const SampleSummary s(estimate, se, family_from(df));
    const auto [lo, hi] = confidence_interval(confidence_distribution(s), level);
    if (format == "json") {
        json j;
        j["schema_version"] = 1;
        j["interval"] = {{"lo", lo}, {"hi", hi}, {"level", level}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << format_percent(level, 0) << " interval (" << format_number(lo) << ", "
                  << format_number(hi) << ")\n";
    }
    return 0;
}

// --- table: CSV in, annotated report out ------------------------------------

int run_table(const std::string& input, const std::vector<std::string>& hyp_texts, double level,
              const std::string& format, const std::string& stars_text) {
    const auto hyps = hypotheses_from(hyp_texts);
    const auto convention = StarConvention::parse(stars_text);
    const auto parsed = parse_results_csv(read_input(input), convention);

    std::vector<std::string> errors = parsed.errors;
    std::vector<AnnotatedRow> rows;
    for (const auto& row : parsed.rows) {
        try {
            rows.push_back(annotate_row(row, hyps, level));
        } catch (const std::exception& e) {
            errors.push_back(e.what());
        }
    }

    const ReportFormat fmt = format == "json" ? ReportFormat::JSON
                             : format == "csv" ? ReportFormat::CSV
                                               : ReportFormat::Text;
    std::cout << emit_report(rows, fmt);
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    if (errors.empty()) return 0;
    return rows.empty() ? 1 : 2;
}

// --- plot ---------------------------------------------------------------------

int run_plot(double estimate, double se, const std::optional<double>& df,
             const std::vector<std::string>& hyp_texts, const std::string& format,
             const std::string& out) {
    const auto hyps = hypotheses_from(hyp_texts);
    if (hyps.size() != 1) throw std::runtime_error("plot takes exactly one --hypothesis");
    const ConfidenceDistribution cd(estimate, se, family_from(df));
    const PlotFormat fmt = format == "ascii" ? PlotFormat::ASCII : PlotFormat::SVG;
    write_output(out, render_confidence_plot(cd, hyps[0], fmt));
    return 0;
}

// --- grid-check: Eq. 4 identity and grid-vs-continuous agreement -------------

int run_grid_check(double estimate, double se, const std::optional<double>& df, double grid_min,
                   double grid_max, double grid_step,
                   const std::vector<std::string>& hyp_texts, const std::string& format) {
    const ParameterGrid grid(grid_min, grid_max, grid_step);
    const auto family = family_from(df);
    const auto hyps = hypotheses_from(hyp_texts);

    const auto report = verify_shift_identity(grid, estimate, family, se);
    const auto post = posterior(grid, estimate, family, se);
    const ConfidenceDistribution cd(post.snapped_sample, se, family);

    struct Line {
        std::string text;
        double grid_conf, cont_conf;
    };
    std::vector<Line> lines;
    for (const auto& h : hyps)
        lines.push_back({h.text(), grid_confidence(post, h), confidence_level(cd, h).confidence});

    if (format == "json") {
        json j;
        j["schema_version"] = 1;
        j["grid"] = {{"min", grid.min},
                     {"max", grid.max},
                     {"step", grid.step},
                     {"points", grid.size()}};
        j["sample"] = estimate;
        j["snapped_sample"] = post.snapped_sample;
        j["snap_distance"] = post.snap_distance;
        j["truncation_mass"] = report.truncation_mass;
        j["max_discrepancy"] = report.max_discrepancy;
        j["hypotheses"] = json::array();
        for (const auto& l : lines) {
            j["hypotheses"].push_back({{"text", l.text},
                                       {"grid_confidence", l.grid_conf},
                                       {"continuous_confidence", l.cont_conf},
                                       {"abs_diff", std::fabs(l.grid_conf - l.cont_conf)}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "grid [" << format_number(grid.min) << ", " << format_number(grid.max)
                  << "] step " << format_number(grid.step) << " (" << grid.size()
                  << " points)\n";
        std::cout << "sample " << format_number(estimate) << " snapped to "
                  << format_number(post.snapped_sample) << " (distance "
                  << format_number(post.snap_distance) << ")\n";
        std::cout << "truncation mass " << format_number(report.truncation_mass) << "\n";
        std::cout << "shift identity max discrepancy " << format_number(report.max_discrepancy)
                  << "\n";
        for (const auto& l : lines)
            std::cout << "confidence (" << l.text << "): grid " << format_number(l.grid_conf)
                      << ", continuous " << format_number(l.cont_conf) << ", |diff| "
                      << format_number(std::fabs(l.grid_conf - l.cont_conf)) << "\n";
    }
    return 0;
}

// --- calibrate: Monte Carlo harnesses -----------------------------------------

int run_calibrate(const std::string& kind, long trials, std::uint64_t seed, double level,
                  double se, const std::optional<double>& df, double true_param,
                  double grid_min, double grid_max, double grid_step, double threshold,
                  int bins, const std::string& format) {
    const SampleSummary s_template(0.0, se, family_from(df));

    if (kind == "coverage") {
        const auto r = coverage_experiment(true_param, s_template, level, trials, seed);
        if (format == "json") {
            json j;
            j["schema_version"] = 1;
            j["kind"] = "coverage";
            j["nominal_level"] = r.nominal_level;
            j["coverage"] = r.coverage;
            j["binomial_se"] = r.binomial_se;
            j["trials"] = r.trials;
            j["seed"] = r.seed;
            j["algorithm"] = r.algorithm;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "coverage: nominal " << format_number(r.nominal_level) << ", observed "
                      << format_number(r.coverage) << ", binomial se "
                      << format_number(r.binomial_se) << ", trials " << r.trials << ", seed "
                      << r.seed << "\n";
            std::cout << "algorithm " << r.algorithm << "\n";
        }
        return 0;
    }

    const ParameterGrid grid(grid_min, grid_max, grid_step);
    const auto r = posterior_calibration(grid, s_template, threshold, trials, bins, seed);
    if (format == "json") {
        json j;
        j["schema_version"] = 1;
        j["kind"] = "posterior";
        j["trials"] = r.trials;
        j["seed"] = r.seed;
        j["algorithm"] = r.algorithm;
        j["all_calibrated"] = r.all_calibrated;
        j["warnings"] = r.warnings;
        j["bins"] = json::array();
        for (const auto& b : r.bins) {
            j["bins"].push_back({{"lo", b.lo},
                                 {"hi", b.hi},
                                 {"count", b.count},
                                 {"mean_stated", b.mean_stated},
                                 {"hit_fraction", b.hit_fraction},
                                 {"binomial_se", b.binomial_se},
                                 {"calibrated", b.calibrated}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "posterior calibration: trials " << r.trials << ", seed " << r.seed
                  << ", all calibrated: " << (r.all_calibrated ? "yes" : "no") << "\n";
        for (const auto& b : r.bins) {
            if (b.count == 0) continue;
            std::cout << "bin [" << format_number(b.lo) << ", " << format_number(b.hi)
                      << "): count " << b.count << ", mean stated "
                      << format_number(b.mean_stated) << ", hit fraction "
                      << format_number(b.hit_fraction) << ", se "
                      << format_number(b.binomial_se) << (b.calibrated ? ", ok" : ", OFF")
                      << "\n";
        }
        for (const auto& w : r.warnings) std::cout << "warning: " << w << "\n";
        std::cout << "algorithm " << r.algorithm << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"confidence levels for substantive hypotheses"};
    app.require_subcommand(1);

    // Shared option storage; each subcommand binds the flags it understands.
    std::optional<double> p_opt, df;
    std::string star, stars_text = "0.05,0.01,0.001";
    bool negative = false;
    std::string format = "text";
    double estimate = 0.0, se = 1.0, level = 0.95;
    std::vector<std::string> hyp_texts;
    std::string input = "-", out;
    double grid_min = -3.0, grid_max = 3.0, grid_step = 0.1;
    std::string kind = "coverage";
    long trials = 100000;
    std::uint64_t seed = 12345;
    double true_param = 0.0, threshold = 0.0;
    int bins = 10;

    auto* p2conf = app.add_subcommand("p2conf", "convert a two-tailed p or star rating into a "
                                                "confidence statement about the sign");
    p2conf->add_option("--p", p_opt, "two-tailed p-value in (0,1]");
    p2conf->add_option("--star", star, "star rating: '*', '**', '***' or a count 1-3");
    p2conf->add_option("--stars", stars_text, "star thresholds, e.g. 0.05,0.01,0.001");
    p2conf->add_flag("--negative", negative, "the estimate is negative");
    p2conf->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* conf = app.add_subcommand("conf", "confidence statements from an estimate and its "
                                            "standard error");
    conf->add_option("--estimate", estimate, "point estimate")->required();
    conf->add_option("--se", se, "standard error of the estimate")->required();
    conf->add_option("--df", df, "Student-t degrees of freedom (omit for normal)");
    conf->add_option("--hypothesis", hyp_texts,
                     "gt:<x>, lt:<x> or between:<a>,<b> (repeatable; default gt:0)");
    conf->add_option("--level", level, "interval level (default 0.95)");
    conf->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* interval = app.add_subcommand("interval", "confidence interval from an estimate and "
                                                    "its standard error");
    interval->add_option("--estimate", estimate, "point estimate")->required();
    interval->add_option("--se", se, "standard error of the estimate")->required();
    interval->add_option("--df", df, "Student-t degrees of freedom (omit for normal)");
    interval->add_option("--level", level, "interval level (default 0.95)");
    interval->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* table = app.add_subcommand("table", "annotate a CSV of published results with "
                                              "confidence statements");
    table->add_option("--input", input, "CSV file, or - for stdin (default -)");
    table->add_option("--hypothesis", hyp_texts,
                      "gt:<x>, lt:<x> or between:<a>,<b> (repeatable; default gt:0)");
    table->add_option("--level", level, "interval level (default 0.95)");
    table->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    table->add_option("--stars", stars_text, "star thresholds, e.g. 0.05,0.01,0.001");

    auto* plot = app.add_subcommand("plot", "confidence graph with one hypothesis region "
                                            "shaded");
    plot->add_option("--estimate", estimate, "point estimate")->required();
    plot->add_option("--se", se, "standard error of the estimate")->required();
    plot->add_option("--df", df, "Student-t degrees of freedom (omit for normal)");
    plot->add_option("--hypothesis", hyp_texts, "gt:<x>, lt:<x> or between:<a>,<b>");
    plot->add_option("--format", format, "svg or ascii")
        ->check(CLI::IsMember({"svg", "ascii"}));
    plot->add_option("--out", out, "output file (default stdout)");

    auto* grid_check = app.add_subcommand("grid-check", "discrete posterior vs shifted null: "
                                                        "identity and grid-vs-continuous gaps");
    grid_check->add_option("--estimate", estimate, "sample estimate")->required();
    grid_check->add_option("--se", se, "standard error of the estimate")->required();
    grid_check->add_option("--df", df, "Student-t degrees of freedom (omit for normal)");
    grid_check->add_option("--grid-min", grid_min, "grid lower edge (default -3)");
    grid_check->add_option("--grid-max", grid_max, "grid upper edge (default 3)");
    grid_check->add_option("--grid-step", grid_step, "grid spacing (default 0.1)");
    grid_check->add_option("--hypothesis", hyp_texts,
                           "gt:<x>, lt:<x> or between:<a>,<b> (repeatable; default gt:0)");
    grid_check->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* calibrate = app.add_subcommand("calibrate", "Monte Carlo checks: interval coverage "
                                                      "or posterior calibration");
    calibrate->add_option("--kind", kind, "coverage or posterior")
        ->check(CLI::IsMember({"coverage", "posterior"}));
    calibrate->add_option("--trials", trials, "number of trials (default 100000)");
    calibrate->add_option("--seed", seed, "random seed (default 12345)");
    calibrate->add_option("--level", level, "coverage: nominal interval level");
    calibrate->add_option("--se", se, "standard error of each simulated estimate (default 1)");
    calibrate->add_option("--df", df, "Student-t degrees of freedom (omit for normal)");
    calibrate->add_option("--true-param", true_param, "coverage: the true parameter value");
    calibrate->add_option("--grid-min", grid_min, "posterior: grid lower edge (default -3)");
    calibrate->add_option("--grid-max", grid_max, "posterior: grid upper edge (default 3)");
    calibrate->add_option("--grid-step", grid_step, "posterior: grid spacing (default 0.1)");
    calibrate->add_option("--threshold", threshold, "posterior: hypothesis threshold "
                                                    "(default 0)");
    calibrate->add_option("--bins", bins, "posterior: stated-confidence bins (default 10)");
    calibrate->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (p2conf->parsed())
            return run_p2conf(p_opt, star, stars_text, negative, format);
        if (conf->parsed()) return run_conf(estimate, se, df, hyp_texts, level, format);
        if (interval->parsed()) return run_interval(estimate, se, df, level, format);
        if (table->parsed()) {
            if (!table->count("--format")) format = "json";  // JSON schema is normative
            return run_table(input, hyp_texts, level, format, stars_text);
        }
        if (plot->parsed()) {
            if (!plot->count("--format")) format = "svg";
            return run_plot(estimate, se, df, hyp_texts, format, out);
        }
        if (grid_check->parsed())
            return run_grid_check(estimate, se, df, grid_min, grid_max, grid_step, hyp_texts,
                                  format);
        if (calibrate->parsed())
            return run_calibrate(kind, trials, seed, level, se, df, true_param, grid_min,
                                 grid_max, grid_step, threshold, bins, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
