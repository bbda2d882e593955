#pragma once

// Monte Carlo harness giving confidence levels their operational test:
// intervals should contain the truth at their stated rate, and stated
// confidences should match hit rates when the parameter really is drawn
// from a uniform prior.

#include <cstdint>
#include <vector>

#include "conflev/bayes_grid.hpp"
#include "conflev/model.hpp"

namespace conflev {

struct CoverageResult {
    double nominal_level = 0.0;
    double coverage = 0.0;     // fraction of intervals containing the truth
    double binomial_se = 0.0;  // sqrt(level*(1-level)/trials)
    long trials = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
};

struct CalibrationBin {
    double lo = 0.0;            // stated-confidence bin range [lo, hi)
    double hi = 0.0;
    long count = 0;             // trials whose statement landed here
    double mean_stated = 0.0;   // average stated confidence
    double hit_fraction = 0.0;  // how often the parameter really exceeded the threshold
    double binomial_se = 0.0;   // sqrt(mean_stated*(1-mean_stated)/count)
    bool calibrated = false;    // |hit_fraction - mean_stated| <= 3 SE
};

struct CalibrationResult {
    std::vector<CalibrationBin> bins;
    long trials = 0;
    std::uint64_t seed = 0;
    std::string algorithm;
    std::vector<std::string> warnings;  // bins with fewer than 30 trials
    bool all_calibrated = false;        // over bins with >= 30 trials
};

// Repeatedly draw an estimate around true_param from the template's family
// and scale, build the level-interval, and count how often it contains
// true_param. The template's own estimate field is ignored.
CoverageResult coverage_experiment(double true_param, const SampleSummary& s_template,
                                   double level, long trials, std::uint64_t seed);

// Generative check of the uniform-prior reading: draw the parameter uniform
// over the grid's range, draw an estimate given it, state the confidence
// that the parameter exceeds h_threshold, and compare stated confidence with
// the actual hit rate, binned by statement.
CalibrationResult posterior_calibration(const ParameterGrid& grid,
                                        const SampleSummary& s_template, double h_threshold,
                                        long trials, int bins, std::uint64_t seed);

}  // namespace conflev
