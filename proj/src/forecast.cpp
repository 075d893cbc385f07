#include "tvewd/forecast.hpp"

#include "tvewd/errors.hpp"
#include "tvewd/text.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvewd::forecast {

Projection parse_projection(std::string_view name) {
    if (name == "conditional") {
        return Projection::conditional;
    }
    if (name == "complete") {
        return Projection::complete;
    }
    throw ConfigError("unknown projection '" + std::string(name) + "'");
}

std::string to_string(Projection projection) {
    return projection == Projection::conditional ? "conditional" : "complete";
}

void ForecastConfig::validate() const {
    if (p < 1) {
        throw ConfigError("forecast: AR order p must be positive");
    }
    if (horizon < 1) {
        throw ConfigError("forecast: horizon must be positive");
    }
    multiscale.validate();
    kernel.validate();
    if (!(max_radius >= 0.0 && max_radius < 1.0)) {
        throw ConfigError("forecast: max_radius must be in [0, 1)");
    }
}

ScaleWeights estimate_weights(std::span<const double> centered, std::span<const wold::ScaleSeries> components,
                              std::size_t window) {
    if (components.empty()) {
        throw std::invalid_argument("estimate_weights: no components");
    }
    const std::size_t n = centered.size();
    std::size_t first = 0;
    for (const auto& c : components) {
        if (c.size() != n) {
            throw std::invalid_argument("estimate_weights: components not aligned with the centered series");
        }
        first = std::max(first, c.first_valid);
    }
    if (window > 0 && first + window < n) {
        first = n - window;
    }
    const std::size_t J = components.size();
    if (first >= n || n - first < J) {
        throw std::invalid_argument("estimate_weights: " + std::to_string(first >= n ? 0 : n - first) +
                                    " overlapping rows for " + std::to_string(J) + " weights");
    }
    locreg::LocalDesign design;
    design.columns = J;
    std::vector<double> row(J);
    for (std::size_t t = first; t < n; ++t) {
        for (std::size_t j = 0; j < J; ++j) {
            row[j] = components[j].values[t];
        }
        design.add_row(row, centered[t], 0.0);
    }
    locreg::LocalSolution solution;
    try {
        solution = locreg::solve_global(design);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("scale weights: collinear components: ") + e.what());
    }
    ScaleWeights out;
    out.w.assign(solution.level.data(), solution.level.data() + solution.level.size());
    out.first_row = first;
    out.condition = solution.condition;
    double ssr = 0.0;
    double sst = 0.0;
    out.residuals.reserve(n - first);
    for (std::size_t r = 0; r < design.rows(); ++r) {
        double fitted = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
            fitted += out.w[j] * design.regressors[r * J + j];
        }
        const double eta = design.response[r] - fitted;
        out.residuals.push_back(eta);
        ssr += eta * eta;
        sst += design.response[r] * design.response[r];
    }
    out.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 0.0;
    return out;
}

double forecast_scale(std::span<const double> beta, const wold::ScaleSeries& eps, int j, int h) {
    if (j < 1 || h < 1) {
        throw std::invalid_argument("forecast_scale: scale and horizon must be positive");
    }
    const std::size_t width = std::size_t{1} << static_cast<unsigned>(j);
    const std::size_t n = eps.size();
    const auto horizon = static_cast<std::size_t>(h);
    const std::size_t k_first = (horizon + width - 1) / width;
    double sum = 0.0;
    for (std::size_t k = k_first; k < beta.size(); ++k) {
        const std::size_t lag = k * width - horizon;  // T+h-k2^j = T - lag
        if (lag >= n || !eps.valid(n - 1 - lag)) {
            throw std::invalid_argument("forecast_scale: innovation " + std::to_string(lag) + " steps before the origin at scale " +
                                        std::to_string(j) + " is undefined (sample too short)");
        }
        sum += beta[k] * eps.values[n - 1 - lag];
    }
    return sum;
}

double forecast_scale_conditional(std::span<const double> beta, const wold::ScaleSeries& eps,
                                  std::span<const double> shocks, int j, int h) {
    double sum = forecast_scale(beta, eps, j, h);
    const std::size_t width = std::size_t{1} << static_cast<unsigned>(j);
    const std::size_t half = width / 2;
    const auto horizon = static_cast<std::size_t>(h);
    const std::size_t n = shocks.size();
    const double norm = 1.0 / std::sqrt(static_cast<double>(width));
    // innovation at T + d sums shocks T + d - i, i < 2^{j-1}, minus the next 2^{j-1}
    for (std::size_t k = 0; k < beta.size() && k * width < horizon; ++k) {
        const std::size_t d = horizon - k * width;
        double part = 0.0;
        for (std::size_t i = d; i < width; ++i) {
            const std::size_t back = i - d;  // shock at T - back
            if (back >= n) {
                throw std::invalid_argument("forecast_scale_conditional: sample too short at scale " +
                                            std::to_string(j));
            }
            part += i < half ? shocks[n - 1 - back] : -shocks[n - 1 - back];
        }
        sum += beta[k] * norm * part;
    }
    return sum;
}

double forecast_residual(std::span<const double> gamma, std::span<const double> shocks, int J, int h,
                         Projection projection) {
    if (J < 1 || h < 1) {
        throw std::invalid_argument("forecast_residual: scale and horizon must be positive");
    }
    const std::size_t width = std::size_t{1} << static_cast<unsigned>(J);
    const auto horizon = static_cast<std::ptrdiff_t>(h);
    const auto n = static_cast<std::ptrdiff_t>(shocks.size());
    const double norm = 1.0 / std::sqrt(static_cast<double>(width));
    double sum = 0.0;
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        // scaling innovation at T + d sums shocks T + d - i, i < 2^J
        const std::ptrdiff_t d = horizon - static_cast<std::ptrdiff_t>(k * width);
        if (d > 0 && projection == Projection::complete) {
            continue;
        }
        double part = 0.0;
        for (auto i = std::max<std::ptrdiff_t>(d, 0); i < static_cast<std::ptrdiff_t>(width); ++i) {
            const std::ptrdiff_t back = i - d;  // shock at T - back
            if (back >= n) {
                throw std::invalid_argument("forecast_residual: sample too short for shift " + std::to_string(k));
            }
            part += shocks[static_cast<std::size_t>(n - 1 - back)];
        }
        sum += gamma[k] * norm * part;
    }
    return sum;
}

double forecast_trend(const locreg::TvpArFit& fit, int h) {
    if (h < 1) {
        throw std::invalid_argument("forecast_trend: horizon must be positive");
    }
    if (fit.level.empty()) {
        throw std::invalid_argument("forecast_trend: empty fit");
    }
    return fit.level.back();
}

EwdForecaster::EwdForecaster(double end_level, std::vector<double> centered,
                             wold::MultiscaleDecomposition decomposition, std::size_t weight_window,
                             Projection projection, bool include_residual)
    : end_level_(end_level),
      centered_(std::move(centered)),
      decomposition_(std::move(decomposition)),
      projection_(projection),
      include_residual_(include_residual) {
    if (include_residual_) {
        auto columns = decomposition_.components.detail;
        columns.push_back(decomposition_.components.residual);
        weights_ = estimate_weights(centered_, columns, weight_window);
    } else {
        weights_ = estimate_weights(centered_, decomposition_.components.detail, weight_window);
    }
}

EwdForecaster EwdForecaster::time_varying(std::span<const double> values, const ForecastConfig& cfg) {
    cfg.validate();
    const auto fit = locreg::fit_tvp_ar(values, cfg.p, cfg.kernel);
    std::vector<std::vector<double>> phi(fit.grid_size());
    for (std::size_t g = 0; g < phi.size(); ++g) {
        phi[g] = fit.coefficients_at(g);
        if (cfg.max_radius > 0.0) {
            phi[g] = wold::shrink_roots(phi[g], cfg.max_radius);
        }
    }
    auto decomposition = wold::decompose(phi, fit.residuals, fit.order, fit.sample_size, cfg.multiscale);
    std::vector<double> centered(values.size() - fit.order);
    for (std::size_t g = 0; g < centered.size(); ++g) {
        centered[g] = values[fit.order + g] - fit.level[fit.order + g];
    }
    return EwdForecaster(forecast_trend(fit, cfg.horizon), std::move(centered), std::move(decomposition),
                         cfg.weight_window, cfg.projection, cfg.include_residual);
}

ForecastPoint EwdForecaster::forecast(int h) const {
    if (h < 1) {
        throw std::invalid_argument("forecast: horizon must be positive");
    }
    const auto& end = decomposition_.coefficients.back();
    ForecastPoint out;
    out.origin = decomposition_.sample_size;
    out.horizon = h;
    out.trend = end_level_;
    const std::size_t J = decomposition_.components.detail.size();
    out.weights.assign(weights_.w.begin(), weights_.w.begin() + static_cast<std::ptrdiff_t>(J));
    out.scale_parts.resize(J);
    double value = out.trend;
    if (include_residual_) {
        out.residual_weight = weights_.w[J];
        out.residual_part = forecast_residual(end.gamma, decomposition_.residuals, static_cast<int>(J), h, projection_);
        value += out.residual_weight * out.residual_part;
    }
    for (std::size_t j = 0; j < J; ++j) {
        const auto& eps = decomposition_.innovations.detail[j];
        const int scale = static_cast<int>(j + 1);
        out.scale_parts[j] = projection_ == Projection::conditional
                                 ? forecast_scale_conditional(end.beta[j], eps, decomposition_.residuals, scale, h)
                                 : forecast_scale(end.beta[j], eps, scale, h);
        value += weights_.w[j] * out.scale_parts[j];
    }
    out.value = value;
    return out;
}

ForecastPoint tvewd_forecast(std::span<const double> values, const ForecastConfig& cfg) {
    return EwdForecaster::time_varying(values, cfg).forecast(cfg.horizon);
}

}  // namespace tvewd::forecast
