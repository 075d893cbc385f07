#include "tvewd/locreg.hpp"

#include "tvewd/errors.hpp"
#include "tvewd/text.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvewd::locreg {

namespace {

std::string point_name(double u) { return "u=" + format_double(u); }

// Solves the symmetric normal equations after Jacobi equilibration.
LocalSolution solve_normal(Eigen::MatrixXd& normal, Eigen::VectorXd& rhs, std::size_t columns, int degree,
                           double u, std::size_t effective_rows) {
    const auto k = normal.rows();
    normal.triangularView<Eigen::StrictlyUpper>() = normal.transpose().triangularView<Eigen::StrictlyUpper>();
    Eigen::VectorXd scale(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double d = normal(i, i);
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw NumericalError("rank-deficient local system at " + point_name(u) + ": column " +
                                 std::to_string(i) + " has no weighted variation");
        }
        scale(i) = 1.0 / std::sqrt(d);
    }
    normal = scale.asDiagonal() * normal * scale.asDiagonal();
    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    const double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
    if (!(rcond > 0.0) || 1.0 / rcond > kMaxCondition) {
        throw NumericalError("rank-deficient local system at " + point_name(u) + " (condition " +
                             (rcond > 0.0 ? format_double(1.0 / rcond) : std::string("inf")) + ")");
    }
    Eigen::VectorXd theta = scale.asDiagonal() * llt.solve(scale.asDiagonal() * rhs);
    LocalSolution out;
    out.level = theta.head(static_cast<Eigen::Index>(columns));
    if (degree == 1) {
        out.slope = theta.tail(static_cast<Eigen::Index>(columns));
    }
    out.condition = 1.0 / rcond;
    out.effective_rows = effective_rows;
    return out;
}

template <class WeightFn>
LocalSolution accumulate_and_solve(const LocalDesign& design, std::size_t lo, std::size_t hi, double u,
                                   int degree, WeightFn&& weight_of) {
    const std::size_t m = design.columns;
    const auto mi = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(mi, mi);
    Eigen::MatrixXd a1;
    Eigen::MatrixXd a2;
    Eigen::VectorXd b0 = Eigen::VectorXd::Zero(mi);
    Eigen::VectorXd b1;
    if (degree == 1) {
        a1 = Eigen::MatrixXd::Zero(mi, mi);
        a2 = Eigen::MatrixXd::Zero(mi, mi);
        b1 = Eigen::VectorXd::Zero(mi);
    }
    std::size_t effective = 0;
    for (std::size_t r = lo; r < hi; ++r) {
        const double w = weight_of(r);
        if (w <= 0.0) {
            continue;
        }
        ++effective;
        const double* z = design.regressors.data() + r * m;
        const double wy = w * design.response[r];
        if (degree == 1) {
            const double s = design.times[r] - u;
            const double ws = w * s;
            const double wss = ws * s;
            for (std::size_t a = 0; a < m; ++a) {
                const auto ai = static_cast<Eigen::Index>(a);
                b0(ai) += wy * z[a];
                b1(ai) += wy * s * z[a];
                for (std::size_t b = 0; b <= a; ++b) {
                    const auto bi = static_cast<Eigen::Index>(b);
                    const double zz = z[a] * z[b];
                    a0(ai, bi) += w * zz;
                    a1(ai, bi) += ws * zz;
                    a2(ai, bi) += wss * zz;
                }
            }
        } else {
            for (std::size_t a = 0; a < m; ++a) {
                const auto ai = static_cast<Eigen::Index>(a);
                b0(ai) += wy * z[a];
                for (std::size_t b = 0; b <= a; ++b) {
                    a0(ai, static_cast<Eigen::Index>(b)) += w * z[a] * z[b];
                }
            }
        }
    }
    const std::size_t params = m * static_cast<std::size_t>(degree + 1);
    if (effective < params) {
        throw NumericalError("rank-deficient local system at " + point_name(u) + ": " + std::to_string(effective) +
                             " weighted rows for " + std::to_string(params) + " parameters");
    }
    const auto k = static_cast<Eigen::Index>(params);
    Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd rhs(k);
    if (degree == 1) {
        // lower triangle of [[A0, A1], [A1, A2]]; A1 is symmetric
        Eigen::MatrixXd a1_full = a1.selfadjointView<Eigen::Lower>();
        normal.topLeftCorner(mi, mi) = a0;
        normal.bottomLeftCorner(mi, mi) = a1_full;
        normal.bottomRightCorner(mi, mi) = a2;
        rhs << b0, b1;
    } else {
        normal = a0;
        rhs = b0;
    }
    return solve_normal(normal, rhs, m, degree, u, effective);
}

void check_design(const LocalDesign& design) {
    if (design.columns == 0 || design.regressors.size() != design.rows() * design.columns ||
        design.times.size() != design.rows()) {
        throw std::invalid_argument("inconsistent local design dimensions");
    }
}

void check_sample(std::size_t T, std::size_t p, const KernelSpec& kernel) {
    kernel.validate();
    if (p < 1) {
        throw std::invalid_argument("TVP-AR order must be at least 1");
    }
    const double params = 2.0 * static_cast<double>(p) + 2.0;
    if (static_cast<double>(T) <= 10.0 * params) {
        throw std::invalid_argument("TVP-AR(" + std::to_string(p) + ") needs more than " +
                                    std::to_string(static_cast<int>(10 * params)) + " observations, got " +
                                    std::to_string(T));
    }
    if (kernel.bandwidth * static_cast<double>(T) < params) {
        throw std::invalid_argument("kernel bandwidth too small: bandwidth*T = " +
                                    format_double(kernel.bandwidth * static_cast<double>(T)) + " < " +
                                    format_double(params));
    }
}

double rescaled(std::size_t t_one_based, std::size_t T) {
    return static_cast<double>(t_one_based) / static_cast<double>(T);
}

LocalDesign level_design(std::span<const double> values) {
    LocalDesign design;
    design.columns = 1;
    const std::size_t T = values.size();
    design.regressors.assign(T, 1.0);
    design.response.assign(values.begin(), values.end());
    design.times.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        design.times[t] = rescaled(t + 1, T);
    }
    return design;
}

// Rows t = p+1..T of the centered AR regression.
LocalDesign ar_design(std::span<const double> centered, std::size_t p) {
    const std::size_t T = centered.size();
    LocalDesign design;
    design.columns = p;
    design.regressors.reserve((T - p) * p);
    design.response.reserve(T - p);
    design.times.reserve(T - p);
    for (std::size_t t = p; t < T; ++t) {
        for (std::size_t i = 1; i <= p; ++i) {
            design.regressors.push_back(centered[t - i]);
        }
        design.response.push_back(centered[t]);
        design.times.push_back(rescaled(t + 1, T));
    }
    return design;
}

}  // namespace

void LocalDesign::add_row(std::span<const double> z, double y, double time) {
    if (z.size() != columns) {
        throw std::invalid_argument("regressor row has wrong width");
    }
    regressors.insert(regressors.end(), z.begin(), z.end());
    response.push_back(y);
    times.push_back(time);
}

LocalSolution solve_local(const LocalDesign& design, double u, const KernelSpec& kernel) {
    kernel.validate();
    check_design(design);
    const double reach = kernel.radius() * kernel.bandwidth;
    std::size_t lo = 0;
    std::size_t hi = design.rows();
    if (std::isfinite(reach)) {
        lo = static_cast<std::size_t>(std::lower_bound(design.times.begin(), design.times.end(), u - reach) -
                                      design.times.begin());
        hi = static_cast<std::size_t>(std::upper_bound(design.times.begin(), design.times.end(), u + reach) -
                                      design.times.begin());
    }
    const double inv_b = 1.0 / kernel.bandwidth;
    return accumulate_and_solve(design, lo, hi, u, kernel.degree,
                                [&](std::size_t r) { return kernel.weight((design.times[r] - u) * inv_b); });
}

LocalSolution solve_global(const LocalDesign& design) {
    check_design(design);
    return accumulate_and_solve(design, 0, design.rows(), 0.0, 0, [](std::size_t) { return 1.0; });
}

std::vector<double> TvpArFit::coefficients_at(std::size_t g) const {
    std::vector<double> out(order);
    for (std::size_t i = 0; i < order; ++i) {
        out[i] = coefficients(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(i));
    }
    return out;
}

std::vector<double> local_level(std::span<const double> values, const KernelSpec& kernel) {
    kernel.validate();
    const auto design = level_design(values);
    std::vector<double> level(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        level[t] = solve_local(design, design.times[t], kernel).level(0);
    }
    return level;
}

TvpArFit fit_tvp_ar(std::span<const double> values, std::size_t p, const KernelSpec& kernel) {
    const std::size_t T = values.size();
    check_sample(T, p, kernel);
    TvpArFit fit;
    fit.order = p;
    fit.sample_size = T;
    fit.kernel = kernel;
    fit.level = local_level(values, kernel);

    std::vector<double> centered(T);
    for (std::size_t t = 0; t < T; ++t) {
        centered[t] = values[t] - fit.level[t];
    }
    const auto design = ar_design(centered, p);
    const auto grid = design.rows();
    fit.coefficients.resize(static_cast<Eigen::Index>(grid), static_cast<Eigen::Index>(p));
    fit.residuals.resize(grid);
    for (std::size_t g = 0; g < grid; ++g) {
        const auto solution = solve_local(design, design.times[g], kernel);
        double fitted = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            const double phi = solution.level(static_cast<Eigen::Index>(i));
            fit.coefficients(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(i)) = phi;
            fitted += phi * design.regressors[g * p + i];
        }
        fit.residuals[g] = design.response[g] - fitted;
    }
    return fit;
}

TvpArFit fit_tvp_ar(const VolatilitySeries& series, std::size_t p, const KernelSpec& kernel) {
    return fit_tvp_ar(series.view(), p, kernel);
}

CenteredSeries center(std::span<const double> values, const TvpArFit& fit, std::string parent_label) {
    if (values.size() != fit.level.size()) {
        throw std::invalid_argument("center: series has " + std::to_string(values.size()) +
                                    " observations but the fit has " + std::to_string(fit.level.size()));
    }
    CenteredSeries out;
    out.parent_label = std::move(parent_label);
    out.values.resize(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        out.values[t] = values[t] - fit.level[t];
    }
    return out;
}

CenteredSeries center(const VolatilitySeries& series, const TvpArFit& fit) {
    return center(series.view(), fit, series.label);
}

BoundaryCoefficients boundary_fit(std::span<const double> values, std::size_t p, const KernelSpec& kernel,
                                  bool at_end) {
    const std::size_t T = values.size();
    check_sample(T, p, kernel);
    const auto ldesign = level_design(values);
    const std::size_t row = at_end ? T - 1 : p;
    const double u = ldesign.times[row];

    // Observations the AR solve at u can touch, plus their p lags.
    const double reach = kernel.radius() * kernel.bandwidth;
    std::size_t first = p;
    std::size_t last = T;
    if (std::isfinite(reach)) {
        first = std::max<std::size_t>(
            p, static_cast<std::size_t>(std::lower_bound(ldesign.times.begin(), ldesign.times.end(), u - reach) -
                                        ldesign.times.begin()));
        last = static_cast<std::size_t>(std::upper_bound(ldesign.times.begin(), ldesign.times.end(), u + reach) -
                                        ldesign.times.begin());
    }
    std::vector<double> level(T, 0.0);
    std::vector<double> centered(T, 0.0);
    for (std::size_t t = first - p; t < last; ++t) {
        level[t] = solve_local(ldesign, ldesign.times[t], kernel).level(0);
        centered[t] = values[t] - level[t];
    }
    LocalDesign design;
    design.columns = p;
    std::vector<double> z(p);
    for (std::size_t t = first; t < last; ++t) {
        for (std::size_t i = 1; i <= p; ++i) {
            z[i - 1] = centered[t - i];
        }
        design.add_row(z, centered[t], ldesign.times[t]);
    }
    const auto solution = solve_local(design, u, kernel);
    BoundaryCoefficients out;
    out.u = u;
    out.level = level[row];
    for (std::size_t t = row + 1 - p; t <= row; ++t) {
        out.recent_centered.push_back(centered[t]);
    }
    out.phi.assign(solution.level.data(), solution.level.data() + solution.level.size());
    return out;
}

std::string coefficients_csv(const TvpArFit& fit) {
    std::string out = "u,phi0";
    for (std::size_t i = 1; i <= fit.order; ++i) {
        out += ",phi" + std::to_string(i);
    }
    out += '\n';
    for (std::size_t g = 0; g < fit.grid_size(); ++g) {
        out += format_double(fit.grid_point(g));
        out += ',' + format_double(fit.level[fit.order + g]);
        for (std::size_t i = 0; i < fit.order; ++i) {
            out += ',' + format_double(fit.coefficients(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(i)));
        }
        out += '\n';
    }
    return out;
}

}  // namespace tvewd::locreg
