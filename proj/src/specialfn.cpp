#include "conflev/specialfn.hpp"

#include <cmath>
#include <limits>

namespace conflev {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2
constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

void require_valid(const DistFamily& f) {
    if (f.kind == FamilyKind::StudentT && !(f.df > 0.0))
        throw std::domain_error("DistFamily: StudentT requires df > 0");
}

// Lanczos approximation, g = 7, 9 terms.
// https://en.wikipedia.org/wiki/Lanczos_approximation
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,    676.5203681218851,    -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,  12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

double log_gamma_lanczos(double x) {
    x -= 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
    const double t = x + kLanczosG + 0.5;
    return kHalfLog2Pi + (x + 0.5) * std::log(t) - t + std::log(a);
}

// Continued fraction for the incomplete beta, evaluated by the modified
// Lentz algorithm. Converges quickly for x < (a+1)/(a+b+2).
double inc_beta_cf(double a, double b, double x) {
    constexpr double eps = 1e-14;
    constexpr double tiny = 1e-300;
    constexpr int max_iter = 300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

double log_beta(double a, double b) {
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

// Lower tail mass of the standard family beyond -z, i.e. P(Z <= -z) for
// z >= 0, kept on the tail scale.
double lower_tail(const DistFamily& f, double z) {
    return 0.5 * two_sided_tail(f, z);
}

// Inverse standard normal CDF: Acklam's rational approximation polished by
// two Halley steps against erfc. Used as the quantile seed.
// https://web.archive.org/web/20151030215612/http://home.online.no/~pjacklam/notes/invnorm/
double normal_quantile(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement.
    for (int i = 0; i < 2; ++i) {
        const double e = 0.5 * std::erfc(-x / kSqrt2) - p;
        const double u = e * std::sqrt(2.0 * kPi) * std::exp(x * x / 2.0);
        x = x - u / (1.0 + x * u / 2.0);
    }
    return x;
}

// Solve lower_tail(f, z) = s for z >= 0, s in (0, 0.5]. Newton iteration on
// a maintained bracket with bisection fallback.
double tail_quantile(const DistFamily& f, double s) {
    if (s == 0.5) return 0.0;
    double z = -normal_quantile(s);  // normal seed, z > 0
    if (!(z > 0.0) || !std::isfinite(z)) z = 1.0;

    // lower_tail is decreasing in z: expand until it brackets s.
    double lo = 0.0, hi = z;
    while (lower_tail(f, hi) > s) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e308) break;
    }
    double flo = lower_tail(f, lo) - s;

    z = std::min(std::max(z, lo), hi);
    for (int it = 0; it < 200; ++it) {
        const double fz = lower_tail(f, z) - s;
        if (fz == 0.0) break;
        if ((fz > 0.0) == (flo > 0.0)) {
            lo = z;
            flo = fz;
        } else {
            hi = z;
        }
        const double deriv = -dist_pdf(f, z);
        double next = (deriv != 0.0) ? z - fz / deriv : lo;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisect
        if (std::fabs(next - z) <= 1e-16 * std::max(1.0, std::fabs(z))) {
            z = next;
            break;
        }
        z = next;
    }
    return z;
}

}  // namespace

std::string DistFamily::name() const {
    if (kind == FamilyKind::Normal) return "normal";
    return "student_t(df=" + std::to_string(df) + ")";
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0, got " + std::to_string(x));
    if (x < 0.5) return log_gamma_lanczos(x + 1.0) - std::log(x);
    return log_gamma_lanczos(x);
}

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("reg_inc_beta: requires a > 0 and b > 0");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("reg_inc_beta: requires 0 <= x <= 1, got " + std::to_string(x));
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * inc_beta_cf(a, b, x) / a;
    return 1.0 - front * inc_beta_cf(b, a, 1.0 - x) / b;
}

double dist_pdf(const DistFamily& f, double z) {
    require_valid(f);
    if (f.kind == FamilyKind::Normal) return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
    const double v = f.df;
    const double log_norm =
        log_gamma(0.5 * (v + 1.0)) - log_gamma(0.5 * v) - 0.5 * std::log(v * kPi);
    return std::exp(log_norm - 0.5 * (v + 1.0) * std::log1p(z * z / v));
}

double dist_cdf(const DistFamily& f, double z) {
    require_valid(f);
    if (std::isnan(z)) return std::numeric_limits<double>::quiet_NaN();
    const double half = lower_tail(f, std::fabs(z));
    return z >= 0.0 ? 1.0 - half : half;
}

double two_sided_tail(const DistFamily& f, double z) {
    require_valid(f);
    z = std::fabs(z);
    if (f.kind == FamilyKind::Normal) return std::erfc(z / kSqrt2);
    if (std::isinf(z)) return 0.0;
    const double v = f.df;
    return reg_inc_beta(0.5 * v, 0.5, v / (v + z * z));
}

double dist_quantile(const DistFamily& f, double p) {
    require_valid(f);
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("dist_quantile: requires 0 < p < 1, got " + std::to_string(p));
    if (p == 0.5) return 0.0;
    // Solve on the tail side so nothing is lost to 1 - p cancellation; the
    // p > 0.5 and p < 0.5 branches are exact mirrors.
    if (p > 0.5) return tail_quantile(f, 1.0 - p);
    return -tail_quantile(f, p);
}

}  // namespace conflev
