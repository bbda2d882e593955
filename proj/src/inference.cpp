#include "conflev/inference.hpp"

#include <cmath>

namespace conflev {

namespace {

// P(parameter > c) under the confidence distribution, computed on whichever
// side keeps tail accuracy: cdf of the reflected standardized threshold.
double mass_above(const ConfidenceDistribution& cd, double c) {
    return dist_cdf(cd.family, (cd.center - c) / cd.scale);
}

double mass_below(const ConfidenceDistribution& cd, double c) {
    return dist_cdf(cd.family, (c - cd.center) / cd.scale);
}

}  // namespace

double two_tailed_p(const SampleSummary& s, double null_value) {
    const double z = (s.estimate - null_value) / s.standard_error;
    return two_sided_tail(s.family, z);
}

ConfidenceDistribution confidence_distribution(const SampleSummary& s) {
    return ConfidenceDistribution(s.estimate, s.standard_error, s.family);
}

ConfidenceStatement confidence_level(const ConfidenceDistribution& cd, const Hypothesis& h) {
    double conf = 0.0;
    switch (h.form) {
        case Hypothesis::Form::GreaterThan:
            conf = mass_above(cd, h.lo);
            break;
        case Hypothesis::Form::LessThan:
            conf = mass_below(cd, h.lo);
            break;
        case Hypothesis::Form::Between:
            conf = mass_below(cd, h.hi) - mass_below(cd, h.lo);
            break;
    }
    return ConfidenceStatement(h, conf, StatementKind::Exact, "confidence distribution");
}

std::pair<double, double> confidence_interval(const ConfidenceDistribution& cd, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error("confidence_interval: level must be in (0,1), got " +
                                std::to_string(level));
    const double q = dist_quantile(cd.family, (1.0 - level) / 2.0);  // q < 0
    return {cd.center + cd.scale * q, cd.center - cd.scale * q};
}

ConfidenceStatement p_to_confidence(double p, EstimateSign sign) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::domain_error("p_to_confidence: p must be in (0,1], got " + std::to_string(p));
    const double conf = sign == EstimateSign::NonNegative ? 1.0 - p / 2.0 : p / 2.0;
    return ConfidenceStatement(Hypothesis::greater_than(0.0), conf, StatementKind::Exact,
                               "converted from two-tailed p");
}

double confidence_to_p(const ConfidenceStatement& c) {
    if (c.kind != StatementKind::Exact)
        throw std::invalid_argument("confidence_to_p: cannot invert a bound-only statement");
    if (!(c.confidence > 0.0 && c.confidence < 1.0))
        throw std::domain_error("confidence_to_p: confidence must be in (0,1), got " +
                                std::to_string(c.confidence));
    return c.confidence >= 0.5 ? 2.0 * (1.0 - c.confidence) : 2.0 * c.confidence;
}

ConfidenceStatement star_bound(double alpha, EstimateSign sign) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("star_bound: alpha must be in (0,1), got " +
                                std::to_string(alpha));
    // p < alpha pins at least 1 - alpha/2 of the confidence mass on the
    // estimate's side of zero; the statement names that side.
    const auto side = sign == EstimateSign::NonNegative ? Hypothesis::greater_than(0.0)
                                                        : Hypothesis::less_than(0.0);
    return ConfidenceStatement(side, 1.0 - alpha / 2.0, StatementKind::LowerBound,
                               "star inequality p < " + std::to_string(alpha));
}

ApplicabilityVerdict check_applicability(const SampleSummary&, StatisticContext context) {
    switch (context) {
        case StatisticContext::ScalarParameter:
            return {true, ""};
        case StatisticContext::NonNegativeStatistic:
            return {false,
                    "statistic measures directionless deviation (chi-square/ANOVA style) and "
                    "does not lend itself to a confidence level"};
        case StatisticContext::NonScalar:
            return {false,
                    "hypothesis concerns a shape rather than a value on a numerical scale"};
    }
    return {false, "unknown context"};
}

}  // namespace conflev
