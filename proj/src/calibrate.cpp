#include "conflev/calibrate.hpp"

#include <cmath>

#include "conflev/inference.hpp"
#include "conflev/random.hpp"

namespace conflev {

namespace {

double draw_standard(RandomStream& rng, const DistFamily& family) {
    if (family.kind == FamilyKind::Normal) return rng.normal();
    const int df = static_cast<int>(std::lround(family.df));
    if (df < 1 || std::fabs(family.df - df) > 1e-9)
        throw std::domain_error("simulation requires integer degrees of freedom, got " +
                                std::to_string(family.df));
    return rng.student_t(df);
}

}  // namespace

CoverageResult coverage_experiment(double true_param, const SampleSummary& s_template,
                                   double level, long trials, std::uint64_t seed) {
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error("coverage_experiment: level must be in (0,1), got " +
                                std::to_string(level));
    if (trials < 1000)
        throw std::domain_error("coverage_experiment: needs at least 1000 trials");

    RandomStream rng(seed);
    const double scale = s_template.standard_error;
    long contained = 0;
    for (long t = 0; t < trials; ++t) {
        const double estimate = true_param + scale * draw_standard(rng, s_template.family);
        const ConfidenceDistribution cd(estimate, scale, s_template.family);
        const auto [lo, hi] = confidence_interval(cd, level);
        if (lo <= true_param && true_param <= hi) ++contained;
    }

    CoverageResult r;
    r.nominal_level = level;
    r.coverage = static_cast<double>(contained) / static_cast<double>(trials);
    r.binomial_se = std::sqrt(level * (1.0 - level) / static_cast<double>(trials));
    r.trials = trials;
    r.seed = seed;
    r.algorithm = RandomStream::algorithm();
    return r;
}

CalibrationResult posterior_calibration(const ParameterGrid& grid,
                                        const SampleSummary& s_template, double h_threshold,
                                        long trials, int bins, std::uint64_t seed) {
    if (trials < 10000)
        throw std::domain_error("posterior_calibration: needs at least 10000 trials");
    if (bins < 5) throw std::domain_error("posterior_calibration: needs at least 5 bins");

    RandomStream rng(seed);
    const double scale = s_template.standard_error;
    std::vector<long> count(bins, 0), hits(bins, 0);
    std::vector<double> stated_sum(bins, 0.0);

    for (long t = 0; t < trials; ++t) {
        // The parameter is genuinely uniform over the grid's range; drawing
        // it continuously (not cell-snapped) keeps a threshold landing on a
        // cell center from biasing the hit rate.
        const double theta = rng.uniform(grid.min, grid.max);
        const double estimate = theta + scale * draw_standard(rng, s_template.family);
        const double stated = dist_cdf(s_template.family, (estimate - h_threshold) / scale);
        int b = static_cast<int>(stated * bins);
        if (b >= bins) b = bins - 1;
        ++count[b];
        stated_sum[b] += stated;
        if (theta > h_threshold) ++hits[b];
    }

    CalibrationResult r;
    r.trials = trials;
    r.seed = seed;
    r.algorithm = RandomStream::algorithm();
    r.all_calibrated = true;
    for (int b = 0; b < bins; ++b) {
        CalibrationBin bin;
        bin.lo = static_cast<double>(b) / bins;
        bin.hi = static_cast<double>(b + 1) / bins;
        bin.count = count[b];
        if (count[b] > 0) {
            bin.mean_stated = stated_sum[b] / static_cast<double>(count[b]);
            bin.hit_fraction = static_cast<double>(hits[b]) / static_cast<double>(count[b]);
            bin.binomial_se = std::sqrt(bin.mean_stated * (1.0 - bin.mean_stated) /
                                        static_cast<double>(count[b]));
            bin.calibrated =
                std::fabs(bin.hit_fraction - bin.mean_stated) <= 3.0 * bin.binomial_se;
        }
        if (count[b] < 30) {
            r.warnings.push_back("bin [" + std::to_string(bin.lo) + ", " +
                                 std::to_string(bin.hi) + ") received only " +
                                 std::to_string(count[b]) + " trials");
        } else if (!bin.calibrated) {
            r.all_calibrated = false;
        }
        r.bins.push_back(bin);
    }
    return r;
}

}  // namespace conflev
