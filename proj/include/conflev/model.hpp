#pragma once

// Core value types shared by every inference path: sample summaries,
// hypotheses about the parameter, confidence distributions and the
// statements produced from them.

#include <stdexcept>
#include <string>
#include <vector>

#include "conflev/specialfn.hpp"

namespace conflev {

// Sufficient statistics of the null model: point estimate, its standard
// error, and the distribution family of the standardized estimate.
struct SampleSummary {
    double estimate;
    double standard_error;
    DistFamily family;
    std::string label;

    SampleSummary(double estimate_, double standard_error_, DistFamily family_,
                  std::string label_ = "")
        : estimate(estimate_),
          standard_error(standard_error_),
          family(family_),
          label(std::move(label_)) {
        if (!(standard_error > 0.0))
            throw std::domain_error("SampleSummary: standard_error must be > 0, got " +
                                    std::to_string(standard_error));
    }
};

struct TwoGroupData {
    std::vector<double> group_a;
    std::vector<double> group_b;
};

enum class VarianceRule { Pooled, Welch };

// A one-sided or interval predicate on the population parameter.
struct Hypothesis {
    enum class Form { GreaterThan, LessThan, Between };

    Form form = Form::GreaterThan;
    double lo = 0.0;  // the threshold for one-sided forms
    double hi = 0.0;  // used by Between only

    static Hypothesis greater_than(double threshold) {
        return Hypothesis{Form::GreaterThan, threshold, threshold};
    }
    static Hypothesis less_than(double threshold) {
        return Hypothesis{Form::LessThan, threshold, threshold};
    }
    static Hypothesis between(double lo, double hi) {
        if (!(lo < hi))
            throw std::domain_error("Hypothesis::between: requires lo < hi, got [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return Hypothesis{Form::Between, lo, hi};
    }

    double threshold() const { return lo; }
    std::string text() const;

    bool operator==(const Hypothesis&) const = default;
};

// The null family slid along to sit on the sample estimate.
struct ConfidenceDistribution {
    double center;
    double scale;
    DistFamily family;

    ConfidenceDistribution(double center_, double scale_, DistFamily family_)
        : center(center_), scale(scale_), family(family_) {
        if (!(scale > 0.0))
            throw std::domain_error("ConfidenceDistribution: scale must be > 0, got " +
                                    std::to_string(scale));
    }
};

enum class StatementKind { Exact, LowerBound };

// A hypothesis paired with how much confidence it earned, and whether that
// number is exact or only a bound recovered from a star/inequality p-value.
struct ConfidenceStatement {
    Hypothesis hypothesis;
    double confidence = 0.0;
    StatementKind kind = StatementKind::Exact;
    std::string source;

    ConfidenceStatement(Hypothesis h, double confidence_, StatementKind kind_,
                        std::string source_)
        : hypothesis(h), confidence(confidence_), kind(kind_), source(std::move(source_)) {
        if (!(confidence >= 0.0 && confidence <= 1.0))
            throw std::domain_error("ConfidenceStatement: confidence must be in [0,1], got " +
                                    std::to_string(confidence));
    }
};

// Reduce raw two-group observations to estimate = mean(b) - mean(a) with the
// standard error and Student-t df of the chosen variance rule.
SampleSummary summarize_two_groups(const TwoGroupData& data, VarianceRule rule);

// GreaterThan(c) <-> LessThan(c). Between has no single complement.
Hypothesis hypothesis_complement(const Hypothesis& h);

}  // namespace conflev
