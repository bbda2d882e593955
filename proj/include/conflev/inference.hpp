#pragma once

// The continuous inference path: two-tailed p-values from the null model,
// confidence distributions obtained by recentering the null on the sample
// estimate, and confidence levels / intervals / p-value conversions read off
// that distribution.

#include <utility>

#include "conflev/model.hpp"

namespace conflev {

enum class EstimateSign { NonNegative, Negative };

enum class StatisticContext { ScalarParameter, NonNegativeStatistic, NonScalar };

struct ApplicabilityVerdict {
    bool applicable = false;
    std::string reason;
};

// p = P(|Z| >= |estimate - null_value| / SE) under the null family. Equals 1
// when the estimate sits exactly on the null value.
double two_tailed_p(const SampleSummary& s, double null_value = 0.0);

// The null distribution slid along to center on the estimate.
ConfidenceDistribution confidence_distribution(const SampleSummary& s);

// Mass of the confidence distribution over the region where h holds.
ConfidenceStatement confidence_level(const ConfidenceDistribution& cd, const Hypothesis& h);

// Equal-tailed central interval holding `level` of the mass.
std::pair<double, double> confidence_interval(const ConfidenceDistribution& cd, double level);

// Two-tailed p for the zero null -> confidence that the parameter exceeds 0:
// 1 - p/2 when the estimate is nonnegative, p/2 otherwise.
ConfidenceStatement p_to_confidence(double p, EstimateSign sign);

// Inverse of p_to_confidence. Only exact statements can be inverted.
double confidence_to_p(const ConfidenceStatement& c);

// A star inequality "p < alpha" yields only a bound: confidence > 1 - alpha/2
// that the parameter lies on the estimate's side of 0.
ConfidenceStatement star_bound(double alpha, EstimateSign sign);

// Whether the confidence-level reading applies to this kind of statistic at
// all: it needs a scalar parameter whose estimate can fall on either side of
// a hypothesized value.
ApplicabilityVerdict check_applicability(const SampleSummary& s, StatisticContext context);

}  // namespace conflev
