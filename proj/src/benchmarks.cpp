#include "tvewd/benchmarks.hpp"

#include "tvewd/errors.hpp"

#include <stdexcept>

namespace tvewd::benchmarks {

namespace {

std::span<const double> last(std::span<const double> values, std::size_t window) {
    if (window > values.size()) {
        throw std::invalid_argument("window of " + std::to_string(window) + " exceeds the " +
                                    std::to_string(values.size()) + " available observations");
    }
    return values.subspan(values.size() - window);
}

HarFit finish(const locreg::LocalSolution& solution, std::span<const double> values) {
    HarFit fit;
    for (std::size_t i = 0; i < 4; ++i) {
        fit.coefficients[i] = solution.level(static_cast<Eigen::Index>(i));
    }
    fit.origin_terms = har_terms(values, values.size());
    fit.forecast = fit.coefficients[0] + fit.coefficients[1] * fit.origin_terms.daily +
                   fit.coefficients[2] * fit.origin_terms.weekly + fit.coefficients[3] * fit.origin_terms.monthly;
    return fit;
}

}  // namespace

double trailing_mean(std::span<const double> values, std::size_t t, std::size_t width) {
    if (width == 0 || t < width || t > values.size()) {
        throw std::invalid_argument("trailing_mean: need " + std::to_string(width) + " observations ending at " +
                                    std::to_string(t));
    }
    double sum = 0.0;
    for (std::size_t i = t - width; i < t; ++i) {
        sum += values[i];
    }
    return sum / static_cast<double>(width);
}

HarTerms har_terms(std::span<const double> values, std::size_t t) {
    if (t < kMonthlyWindow || t > values.size()) {
        throw std::invalid_argument("har_terms: observation " + std::to_string(t) + " lacks 22 observations of history");
    }
    return {values[t - 1], trailing_mean(values, t, kWeeklyWindow), trailing_mean(values, t, kMonthlyWindow)};
}

locreg::LocalDesign har_design(std::span<const double> values, int h) {
    if (h < 1) {
        throw std::invalid_argument("har_design: horizon must be positive");
    }
    const std::size_t T = values.size();
    const auto horizon = static_cast<std::size_t>(h);
    locreg::LocalDesign design;
    design.columns = 4;
    if (T < kMonthlyWindow + horizon) {
        return design;
    }
    // running sums keep the per-row cost constant
    double weekly = 0.0;
    double monthly = 0.0;
    for (std::size_t i = 0; i < kMonthlyWindow; ++i) {
        monthly += values[i];
        if (i + kWeeklyWindow >= kMonthlyWindow) {
            weekly += values[i];
        }
    }
    for (std::size_t t = kMonthlyWindow; t + horizon <= T; ++t) {
        if (t > kMonthlyWindow) {
            monthly += values[t - 1] - values[t - 1 - kMonthlyWindow];
            weekly += values[t - 1] - values[t - 1 - kWeeklyWindow];
        }
        const std::array<double, 4> z{1.0, values[t - 1], weekly / kWeeklyWindow, monthly / kMonthlyWindow};
        design.add_row(z, values[t - 1 + horizon], static_cast<double>(t + horizon) / static_cast<double>(T));
    }
    return design;
}

HarFit har_fit(std::span<const double> values, int h, std::size_t window) {
    if (window < 100) {
        throw std::invalid_argument("HAR needs a window of at least 100 observations");
    }
    const auto sample = last(values, window);
    return finish(locreg::solve_global(har_design(sample, h)), sample);
}

double har_fit_forecast(std::span<const double> values, int h, std::size_t window) {
    return har_fit(values, h, window).forecast;
}

HarFit tvhar_fit(std::span<const double> values, int h, const KernelSpec& kernel, std::size_t window) {
    if (window < 100) {
        throw std::invalid_argument("TV-HAR needs a window of at least 100 observations");
    }
    const auto sample = last(values, window);
    return finish(locreg::solve_local(har_design(sample, h), 1.0, kernel), sample);
}

double tvhar_fit_forecast(std::span<const double> values, int h, const KernelSpec& kernel, std::size_t window) {
    return tvhar_fit(values, h, kernel, window).forecast;
}

double iterate_ar(std::span<const double> phi, std::span<const double> recent, int h) {
    if (recent.size() != phi.size()) {
        throw std::invalid_argument("iterate_ar: need exactly p recent values");
    }
    if (h < 1) {
        throw std::invalid_argument("iterate_ar: horizon must be positive");
    }
    const std::size_t p = phi.size();
    if (p == 0) {
        return 0.0;
    }
    std::vector<double> path(recent.begin(), recent.end());
    for (int step = 0; step < h; ++step) {
        double next = 0.0;
        for (std::size_t i = 1; i <= p; ++i) {
            next += phi[i - 1] * path[path.size() - i];
        }
        path.push_back(next);
    }
    return path.back();
}

double tvar_forecast(std::span<const double> values, std::size_t p, int h, const KernelSpec& kernel) {
    if (h < 1) {
        throw std::invalid_argument("tvar_forecast: horizon must be positive");
    }
    if (p == 0) {
        kernel.validate();
        locreg::LocalDesign design;
        design.columns = 1;
        const double T = static_cast<double>(values.size());
        const double one = 1.0;
        for (std::size_t t = 0; t < values.size(); ++t) {
            design.add_row(std::span<const double>(&one, 1), values[t], static_cast<double>(t + 1) / T);
        }
        return locreg::solve_local(design, 1.0, kernel).level(0);
    }
    const auto fit = locreg::boundary_fit(values, p, kernel, true);
    return fit.level + iterate_ar(fit.phi, fit.recent_centered, h);
}

forecast::EwdForecaster static_ewd(std::span<const double> values, std::size_t p, const wold::MultiscaleConfig& cfg,
                                   std::size_t window, std::size_t weight_window, forecast::Projection projection,
                                   bool include_residual) {
    if (p < 1) {
        throw std::invalid_argument("static EWD: AR order must be positive");
    }
    const auto sample = last(values, window);
    const std::size_t T = sample.size();
    if (T <= p + cfg.truncation()) {
        throw std::invalid_argument("static EWD: window of " + std::to_string(T) + " is too short for 2^J*N = " +
                                    std::to_string(cfg.truncation()) + " lags");
    }
    double mean = 0.0;
    for (double v : sample) {
        mean += v;
    }
    mean /= static_cast<double>(T);
    std::vector<double> centered(T);
    for (std::size_t t = 0; t < T; ++t) {
        centered[t] = sample[t] - mean;
    }
    locreg::LocalDesign design;
    design.columns = p;
    std::vector<double> z(p);
    for (std::size_t t = p; t < T; ++t) {
        for (std::size_t i = 1; i <= p; ++i) {
            z[i - 1] = centered[t - i];
        }
        design.add_row(z, centered[t], 0.0);
    }
    const auto solution = locreg::solve_global(design);
    std::vector<std::vector<double>> phi{std::vector<double>(solution.level.data(), solution.level.data() + p)};
    std::vector<double> residuals(T - p);
    for (std::size_t r = 0; r < residuals.size(); ++r) {
        double fitted = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            fitted += phi[0][i] * design.regressors[r * p + i];
        }
        residuals[r] = design.response[r] - fitted;
    }
    auto decomposition = wold::decompose(phi, residuals, p, T, cfg);
    std::vector<double> aligned(centered.begin() + static_cast<std::ptrdiff_t>(p), centered.end());
    return forecast::EwdForecaster(mean, std::move(aligned), std::move(decomposition), weight_window, projection,
                                   include_residual);
}

double ewd_static_forecast(std::span<const double> values, std::size_t p, const wold::MultiscaleConfig& cfg, int h,
                           std::size_t window) {
    return static_ewd(values, p, cfg, window).forecast(h).value;
}

}  // namespace tvewd::benchmarks
