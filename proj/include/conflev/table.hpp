#pragma once

// Results-table pipeline: parse published summary rows from CSV, annotate
// them with confidence statements, and emit reports (JSON / text / CSV).

#include <optional>
#include <string>
#include <vector>

#include "conflev/inference.hpp"
#include "conflev/model.hpp"

namespace conflev {

// p-value thresholds for the star tokens "*", "**", "***".
struct StarConvention {
    double one = 0.05;
    double two = 0.01;
    double three = 0.001;

    // "0.05,0.01,0.001" -> convention; thresholds must decrease.
    static StarConvention parse(const std::string& text);
    double threshold_for(int stars) const;
};

struct ResultsRow {
    std::string label;
    std::optional<double> mean_a;
    std::optional<double> mean_b;
    std::optional<double> t_value;
    std::optional<double> p_value;  // exact p
    std::optional<double> p_bound;  // star/inequality row: p < p_bound
    std::string p_display;          // p column as written (stars kept verbatim)
    std::optional<long> n_total;
    std::optional<double> se;
    std::optional<double> df;
};

struct ParseReport {
    std::vector<ResultsRow> rows;
    std::vector<std::string> errors;  // per-line recoverable problems
};

struct IntervalAnnotation {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.0;
};

struct AnnotatedRow {
    ResultsRow input;
    std::vector<ConfidenceStatement> statements;
    std::optional<IntervalAnnotation> interval;
    std::optional<double> two_tailed_p;  // derived (or echoed) two-tailed p
    std::vector<std::string> notes;      // every inference made along the way
};

enum class ReportFormat { JSON, Text, CSV };

// Header row required; recognized columns (case-insensitive): label/name,
// mean_a/mean1, mean_b/mean2, t/t_value, p/p_value, n/n_total, se, df.
// Unrecognized columns are ignored. Star tokens in the p column become
// p-bounds under the given convention. Malformed lines land in `errors`.
ParseReport parse_results_csv(const std::string& csv_text,
                              const StarConvention& stars = StarConvention());

// Attach confidence statements (and an interval when the row supports one).
// Recovery rules: df from the df column, else n_total - 2; se from the se
// column, else |mean_b - mean_a| / t; rows with only an exact p go through
// the p-conversion; star-only rows yield LowerBound statements exclusively.
AnnotatedRow annotate_row(const ResultsRow& row, const std::vector<Hypothesis>& hypotheses,
                          double level);

std::string emit_report(const std::vector<AnnotatedRow>& rows, ReportFormat format);

// "gt:0", "lt:1.5", "between:0,1" -> Hypothesis. Throws on anything else.
Hypothesis parse_hypothesis(const std::string& text);

}  // namespace conflev
