#include "conflev/bayes_grid.hpp"

#include <algorithm>
#include <cmath>

namespace conflev {

namespace {

// The null hypothesis (parameter = 0) must be one of the grid's candidate
// values; the cell-translation identity is meaningless otherwise.
int null_center_index(const ParameterGrid& grid) {
    const int zero_idx = grid.index_near(0.0);
    if (std::fabs(grid.value(zero_idx)) > 1e-9 * grid.step)
        throw std::domain_error("grid must contain 0 (the null value) as a grid point");
    return zero_idx;
}

void check_vector_size(const ParameterGrid& grid, const Eigen::ArrayXd& v, const char* what) {
    if (v.size() != grid.size())
        throw std::invalid_argument(std::string(what) + ": vector size " +
                                    std::to_string(v.size()) + " does not match grid size " +
                                    std::to_string(grid.size()));
}

// Index of the first cell whose center exceeds the (non-cell-centered)
// threshold c; n when none do.
int first_index_above(const ParameterGrid& grid, double c) {
    const double t = (c - grid.min) / grid.step;
    const int j = static_cast<int>(std::floor(t)) + 1;
    return std::clamp(j, 0, grid.size());
}

// Cell whose center coincides with c, or -1.
int exact_boundary_cell(const ParameterGrid& grid, double c) {
    const int k = static_cast<int>(std::lround((c - grid.min) / grid.step));
    if (k < 0 || k >= grid.size()) return -1;
    return std::fabs(grid.value(k) - c) <= 1e-9 * grid.step ? k : -1;
}

void check_threshold_reach(const ParameterGrid& grid, double c) {
    const double grace = grid.step * (1.0 + 1e-9);
    if (c < grid.min - grace || c > grid.max + grace)
        throw std::domain_error("grid_confidence: threshold " + std::to_string(c) +
                                " lies outside grid [" + std::to_string(grid.min) + ", " +
                                std::to_string(grid.max) + "]");
}

double mass_above(const GridPosterior& post, double c) {
    check_threshold_reach(post.grid, c);
    const auto& p = post.probabilities;
    const int n = post.grid.size();
    const int k = exact_boundary_cell(post.grid, c);
    if (k >= 0) return p.tail(n - k - 1).sum() + 0.5 * p[k];
    const int j = first_index_above(post.grid, c);
    return p.tail(n - j).sum();
}

double mass_below(const GridPosterior& post, double c) {
    check_threshold_reach(post.grid, c);
    const auto& p = post.probabilities;
    const int k = exact_boundary_cell(post.grid, c);
    if (k >= 0) return p.head(k).sum() + 0.5 * p[k];
    return p.head(first_index_above(post.grid, c)).sum();
}

}  // namespace

ParameterGrid::ParameterGrid(double min_, double max_, double step_)
    : min(min_), max(max_), step(step_) {
    if (!(step > 0.0))
        throw std::domain_error("ParameterGrid: step must be > 0, got " + std::to_string(step));
    if (!(min < max))
        throw std::domain_error("ParameterGrid: requires min < max");
    const double ratio = (max - min) / step;
    const double k = std::round(ratio);
    if (std::fabs(ratio - k) > 1e-6 * std::max(1.0, ratio))
        throw std::domain_error("ParameterGrid: (max - min)/step = " + std::to_string(ratio) +
                                " is not a whole number of steps");
    if (k < 2.0)
        throw std::domain_error("ParameterGrid: needs at least 3 grid points");
    n_ = static_cast<int>(k) + 1;
}

int ParameterGrid::index_near(double x) const {
    const int i = static_cast<int>(std::lround((x - min) / step));
    return std::clamp(i, 0, n_ - 1);
}

DiscretizedNull discretize_null(const DistFamily& family, double scale,
                                const ParameterGrid& grid) {
    if (!(scale > 0.0))
        throw std::domain_error("discretize_null: scale must be > 0, got " +
                                std::to_string(scale));
    const int n = grid.size();
    Eigen::ArrayXd raw(n);
    // Consecutive cells share their edge CDF value exactly, so the total
    // telescopes and no mass is double counted or lost between cells.
    double lower = dist_cdf(family, (grid.value(0) - 0.5 * grid.step) / scale);
    for (int k = 0; k < n; ++k) {
        const double upper = dist_cdf(family, (grid.value(k) + 0.5 * grid.step) / scale);
        raw[k] = std::max(0.0, upper - lower);
        lower = upper;
    }
    const double total = raw.sum();
    if (total < 0.999)
        throw ExcessiveTruncationError(
            "discretize_null: grid captures only " + std::to_string(total) +
            " of the null mass; widen the grid");
    return {raw / total, 1.0 - total};
}

ShiftedVector shifted_likelihood(const Eigen::ArrayXd& null_probs, const ParameterGrid& grid,
                                 int shift_cells) {
    check_vector_size(grid, null_probs, "shifted_likelihood");
    const int n = grid.size();
    Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
    for (int k = 0; k < n; ++k) {
        const int src = k - shift_cells;
        if (src >= 0 && src < n) out[k] = null_probs[src];
    }
    return {out, null_probs.sum() - out.sum()};
}

Eigen::ArrayXd posterior_cells(const ParameterGrid& grid, int sample_index,
                               const Eigen::ArrayXd& null_probs,
                               const Eigen::ArrayXd& prior_weights) {
    check_vector_size(grid, null_probs, "posterior_cells");
    const int n = grid.size();
    if (sample_index < 0 || sample_index >= n)
        throw std::invalid_argument("posterior_cells: sample_index out of range");
    const bool uniform = prior_weights.size() == 0;
    if (!uniform) {
        check_vector_size(grid, prior_weights, "posterior_cells prior");
        if ((prior_weights < 0.0).any())
            throw std::invalid_argument("posterior_cells: prior weights must be >= 0");
    }

    const int zero_idx = null_center_index(grid);
    // Hypothesis i places the null shape over cell i; the likelihood of the
    // observed sample cell is the null mass at the corresponding offset.
    Eigen::ArrayXd weighted(n);
    for (int i = 0; i < n; ++i) {
        const int src = sample_index - i + zero_idx;
        const double like = (src >= 0 && src < n) ? null_probs[src] : 0.0;
        weighted[i] = uniform ? like : prior_weights[i] * like;
    }
    const double denom = weighted.sum();
    if (!(denom > 0.0))
        throw std::runtime_error(
            "posterior_cells: observed cell has zero likelihood under every hypothesis");
    return weighted / denom;
}

double shift_discrepancy(const ParameterGrid& grid, int sample_index,
                         const Eigen::ArrayXd& null_probs) {
    const Eigen::ArrayXd explicit_post = posterior_cells(grid, sample_index, null_probs);
    const int zero_idx = null_center_index(grid);
    const ShiftedVector sh = shifted_likelihood(null_probs, grid, sample_index - zero_idx);
    const double total = sh.probabilities.sum();
    if (!(total > 0.0))
        throw std::runtime_error("shift_discrepancy: shifted vector has no on-grid mass");
    return (explicit_post - sh.probabilities / total).abs().maxCoeff();
}

GridPosterior posterior(const ParameterGrid& grid, double x_sample, const DistFamily& family,
                        double scale, const Eigen::ArrayXd& prior_weights) {
    if (!(x_sample >= grid.min && x_sample <= grid.max))
        throw std::domain_error("posterior: x_sample " + std::to_string(x_sample) +
                                " outside grid [" + std::to_string(grid.min) + ", " +
                                std::to_string(grid.max) + "]");
    null_center_index(grid);
    const DiscretizedNull dn = discretize_null(family, scale, grid);
    const int x_idx = grid.index_near(x_sample);
    Eigen::ArrayXd probs = posterior_cells(grid, x_idx, dn.probabilities, prior_weights);
    return {grid, std::move(probs), grid.value(x_idx), grid.value(x_idx) - x_sample};
}

double grid_confidence(const GridPosterior& post, const Hypothesis& h) {
    switch (h.form) {
        case Hypothesis::Form::GreaterThan:
            return mass_above(post, h.lo);
        case Hypothesis::Form::LessThan:
            return mass_below(post, h.lo);
        case Hypothesis::Form::Between:
            return mass_above(post, h.lo) - mass_above(post, h.hi);
    }
    throw std::logic_error("grid_confidence: unknown hypothesis form");
}

ShiftIdentityReport verify_shift_identity(const ParameterGrid& grid, double x_sample,
                                          const DistFamily& family, double scale) {
    if (!(x_sample >= grid.min && x_sample <= grid.max))
        throw std::domain_error("verify_shift_identity: x_sample outside grid");
    const int zero_idx = null_center_index(grid);
    const DiscretizedNull dn = discretize_null(family, scale, grid);
    const int x_idx = grid.index_near(x_sample);
    const ShiftedVector sh = shifted_likelihood(dn.probabilities, grid, x_idx - zero_idx);
    ShiftIdentityReport report;
    report.truncation_mass = dn.truncation_mass + sh.truncated_mass;
    report.max_discrepancy = shift_discrepancy(grid, x_idx, dn.probabilities);
    return report;
}

}  // namespace conflev
