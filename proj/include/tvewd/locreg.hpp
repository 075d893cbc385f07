#pragma once

#include "tvewd/kernel.hpp"
#include "tvewd/series.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tvewd::locreg {

/// Condition number (of the equilibrated normal matrix) beyond which a
/// local system is rejected.
inline constexpr double kMaxCondition = 1e10;

/**
 * @brief Rows of a (locally) weighted regression.
 *
 * `regressors` is row-major rows() x columns. `times` holds the rescaled time
 * of each row and must be nondecreasing.
 */
struct LocalDesign {
    std::size_t columns = 0;
    std::vector<double> regressors;
    std::vector<double> response;
    std::vector<double> times;

    [[nodiscard]] std::size_t rows() const { return response.size(); }
    void add_row(std::span<const double> z, double y, double time);
};

struct LocalSolution {
    Eigen::VectorXd level;  // coefficient values at the evaluation point
    Eigen::VectorXd slope;  // time derivatives; empty for degree 0
    double condition = 0.0;
    std::size_t effective_rows = 0;
};

/**
 * Weighted least squares of y on {1, (t/T - u)} x z with weights
 * K((t/T - u)/b). Only rows inside the kernel support enter.
 *
 * @throws NumericalError if the local normal equations are singular or
 *         their condition number exceeds kMaxCondition.
 */
LocalSolution solve_local(const LocalDesign& design, double u, const KernelSpec& kernel);

/// Ordinary least squares of y on z over all rows (no time localisation).
LocalSolution solve_global(const LocalDesign& design);

/**
 * @brief Time-varying AR(p) fit, one solve per observation.
 *
 * The level curve phi0(u) is the local-linear kernel estimate of the series
 * level and is what the series is centered by. The AR curves come from the
 * local regression of the centered series on its own p lags. Grid point g
 * corresponds to observation t = p+1+g (1-based), u = t/T.
 */
struct TvpArFit {
    std::size_t order = 0;
    std::size_t sample_size = 0;
    KernelSpec kernel;
    std::vector<double> level;      // phi0(t/T), t = 1..T
    Eigen::MatrixXd coefficients;   // (T-p) x p
    std::vector<double> residuals;  // t = p+1..T

    [[nodiscard]] std::size_t grid_size() const { return residuals.size(); }
    [[nodiscard]] double grid_point(std::size_t g) const {
        return static_cast<double>(order + 1 + g) / static_cast<double>(sample_size);
    }
    [[nodiscard]] std::vector<double> coefficients_at(std::size_t g) const;
};

/// Local level phi0(t/T) for every observation t = 1..T.
std::vector<double> local_level(std::span<const double> values, const KernelSpec& kernel);

/**
 * @throws std::invalid_argument if p < 1, T <= 10(2p+2) or bandwidth*T < 2p+2.
 * @throws NumericalError naming the grid point of a singular local system.
 */
TvpArFit fit_tvp_ar(std::span<const double> values, std::size_t p, const KernelSpec& kernel);
TvpArFit fit_tvp_ar(const VolatilitySeries& series, std::size_t p, const KernelSpec& kernel);

struct CenteredSeries {
    std::vector<double> values;
    std::string parent_label;
};

/// v_t - phi0(t/T). Throws std::invalid_argument on length mismatch.
CenteredSeries center(std::span<const double> values, const TvpArFit& fit, std::string parent_label = {});
CenteredSeries center(const VolatilitySeries& series, const TvpArFit& fit);

struct BoundaryCoefficients {
    double u = 1.0;
    double level = 0.0;
    std::vector<double> phi;
    std::vector<double> recent_centered;  // last p centered values up to and including u, oldest first
};

/**
 * Coefficients at the sample end (u = 1) or start (u = (p+1)/T) using only
 * the observations passed in; identical to the matching grid point of
 * fit_tvp_ar but computes only what that point needs.
 */
BoundaryCoefficients boundary_fit(std::span<const double> values, std::size_t p, const KernelSpec& kernel,
                                  bool at_end = true);

/// CSV `u,phi0,phi1,...,phip` over the grid.
std::string coefficients_csv(const TvpArFit& fit);

}  // namespace tvewd::locreg
