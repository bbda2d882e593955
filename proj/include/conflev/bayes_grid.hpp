#pragma once

// Discrete Bayesian grid engine: a finite set of hypothesized parameter
// values with a uniform prior, updated on the observed sample cell. Serves
// as the independent check that the shifted-null construction in the
// inference module really is the uniform-prior posterior.

#include <Eigen/Dense>

#include "conflev/model.hpp"

namespace conflev {

struct ExcessiveTruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic sequence of candidate parameter values: min, min+step, ..., max.
struct ParameterGrid {
    double min;
    double max;
    double step;

    ParameterGrid(double min_, double max_, double step_);

    int size() const { return n_; }
    double value(int i) const { return min + i * step; }

    // Nearest grid index to x, clamped to the grid.
    int index_near(double x) const;

  private:
    int n_ = 0;
};

// Null likelihood formatted as a discrete distribution: bin-integrated cell
// masses, renormalized to sum 1, with the off-grid mass reported.
struct DiscretizedNull {
    Eigen::ArrayXd probabilities;
    double truncation_mass = 0.0;
};

struct ShiftedVector {
    Eigen::ArrayXd probabilities;
    double truncated_mass = 0.0;  // mass translated off the grid
};

struct GridPosterior {
    ParameterGrid grid;
    Eigen::ArrayXd probabilities;
    double snapped_sample = 0.0;  // the sample value after snapping to the grid
    double snap_distance = 0.0;   // snapped_sample - x_sample
};

struct ShiftIdentityReport {
    double max_discrepancy = 0.0;  // max cell gap between the two posteriors
    double truncation_mass = 0.0;  // discretization + shift mass off the grid
};

// Cell k gets the null CDF mass over [v_k - step/2, v_k + step/2] (null
// centered at 0 with the given scale), renormalized. Throws
// ExcessiveTruncationError when the grid captures less than 0.999 of the mass.
DiscretizedNull discretize_null(const DistFamily& family, double scale,
                                const ParameterGrid& grid);

// Translate a cell vector by a whole number of cells; mass pushed off the
// grid is reported, never wrapped or renormalized.
ShiftedVector shifted_likelihood(const Eigen::ArrayXd& null_probs, const ParameterGrid& grid,
                                 int shift_cells);

// Posterior over hypothesis cells given that the sample landed in
// `sample_index`, from an explicit null cell vector: likelihood of that cell
// under each hypothesis times the prior, normalized. Empty prior = uniform.
Eigen::ArrayXd posterior_cells(const ParameterGrid& grid, int sample_index,
                               const Eigen::ArrayXd& null_probs,
                               const Eigen::ArrayXd& prior_weights = Eigen::ArrayXd());

// Max cell difference between the explicit posterior and the
// translated-then-renormalized null vector, on an explicit null vector.
double shift_discrepancy(const ParameterGrid& grid, int sample_index,
                         const Eigen::ArrayXd& null_probs);

// Full pipeline: snap x_sample to the grid, discretize the null, update.
GridPosterior posterior(const ParameterGrid& grid, double x_sample, const DistFamily& family,
                        double scale, const Eigen::ArrayXd& prior_weights = Eigen::ArrayXd());

// Posterior mass over cells satisfying h; a cell centered exactly on a
// threshold contributes half its mass. Thresholds may overhang the grid by
// one cell; beyond that they are rejected.
double grid_confidence(const GridPosterior& post, const Hypothesis& h);

// The core theorem check: explicit posterior vs shifted null.
ShiftIdentityReport verify_shift_identity(const ParameterGrid& grid, double x_sample,
                                          const DistFamily& family, double scale);

}  // namespace conflev
