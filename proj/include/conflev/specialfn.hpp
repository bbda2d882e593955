#pragma once

// Self-contained special functions for the Student-t and normal families:
// log-gamma, regularized incomplete beta, and the location-0/scale-1 CDF,
// quantile and density built on them. No math dependencies beyond <cmath>.

#include <stdexcept>
#include <string>

namespace conflev {

enum class FamilyKind { StudentT, Normal };

// A symmetric location-scale family in standard form (location 0, scale 1).
struct DistFamily {
    FamilyKind kind = FamilyKind::Normal;
    double df = 0.0;  // degrees of freedom, meaningful only for StudentT

    static DistFamily student_t(double df) {
        if (!(df > 0.0))
            throw std::domain_error("student_t: degrees of freedom must be > 0, got " +
                                    std::to_string(df));
        return DistFamily{FamilyKind::StudentT, df};
    }
    static DistFamily normal() { return DistFamily{FamilyKind::Normal, 0.0}; }

    std::string name() const;
};

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// Regularized incomplete beta I_x(a, b), a > 0, b > 0, 0 <= x <= 1.
double reg_inc_beta(double a, double b, double x);

// Density, CDF and quantile of the standard member of the family.
double dist_pdf(const DistFamily& family, double z);
double dist_cdf(const DistFamily& family, double z);
double dist_quantile(const DistFamily& family, double p);

// P(|Z| > z) for z >= 0, evaluated without the 1 - cdf cancellation so the
// result keeps full relative accuracy deep in the tails.
double two_sided_tail(const DistFamily& family, double z);

}  // namespace conflev
