#include "conflev/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace conflev {

namespace {

double mean(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Unbiased sample variance (two-pass).
double variance(const std::vector<double>& xs, double m) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::string Hypothesis::text() const {
    switch (form) {
        case Form::GreaterThan:
            return "x > " + format_number(lo);
        case Form::LessThan:
            return "x < " + format_number(lo);
        case Form::Between:
            return format_number(lo) + " < x < " + format_number(hi);
    }
    return "";
}

SampleSummary summarize_two_groups(const TwoGroupData& data, VarianceRule rule) {
    const auto na = data.group_a.size();
    const auto nb = data.group_b.size();
    if (na < 2 || nb < 2)
        throw std::invalid_argument("summarize_two_groups: each group needs >= 2 observations");

    const double ma = mean(data.group_a);
    const double mb = mean(data.group_b);
    const double va = variance(data.group_a, ma);
    const double vb = variance(data.group_b, mb);
    if (va == 0.0 && vb == 0.0)
        throw std::domain_error("summarize_two_groups: both groups have zero variance");

    const double estimate = mb - ma;
    const double fa = static_cast<double>(na);
    const double fb = static_cast<double>(nb);

    if (rule == VarianceRule::Pooled) {
        const double df = fa + fb - 2.0;
        const double pooled = ((fa - 1.0) * va + (fb - 1.0) * vb) / df;
        const double se = std::sqrt(pooled * (1.0 / fa + 1.0 / fb));
        return SampleSummary(estimate, se, DistFamily::student_t(df));
    }

    // Welch: per-group variance with Satterthwaite degrees of freedom.
    const double ua = va / fa;
    const double ub = vb / fb;
    const double se = std::sqrt(ua + ub);
    const double df =
        (ua + ub) * (ua + ub) / (ua * ua / (fa - 1.0) + ub * ub / (fb - 1.0));
    return SampleSummary(estimate, se, DistFamily::student_t(df));
}

Hypothesis hypothesis_complement(const Hypothesis& h) {
    switch (h.form) {
        case Hypothesis::Form::GreaterThan:
            return Hypothesis::less_than(h.lo);
        case Hypothesis::Form::LessThan:
            return Hypothesis::greater_than(h.lo);
        case Hypothesis::Form::Between:
            break;
    }
    throw std::invalid_argument("hypothesis_complement: Between has no single complement");
}

}  // namespace conflev
