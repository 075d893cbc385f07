#pragma once

#include "tvewd/kernel.hpp"
#include "tvewd/locreg.hpp"
#include "tvewd/wold.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tvewd::forecast {

/// How scale innovations that straddle the forecast origin are treated.
enum class Projection {
    conditional,  // keep the already observed shocks of a partly observed innovation
    complete,     // only innovations observed in full
};
Projection parse_projection(std::string_view name);
std::string to_string(Projection projection);

struct ForecastConfig {
    std::size_t p = 3;
    wold::MultiscaleConfig multiscale;
    KernelSpec kernel;
    int horizon = 1;
    wold::ShareMode share_mode = wold::ShareMode::absolute;
    std::size_t weight_window = 0;  // trailing rows for the weight regression; 0 = all available
    Projection projection = Projection::conditional;
    bool include_residual = false;  // forecast pi^{J} too, with its own weight
    double max_radius = 0.99;  // local AR fits with a larger companion radius are shrunk onto it; 0 = off

    void validate() const;
};

struct ScaleWeights {
    std::vector<double> w;
    std::vector<double> residuals;  // eta over the rows used
    std::size_t first_row = 0;      // index (in the aligned inputs) of residuals[0]
    double r_squared = 0.0;
    double condition = 0.0;
};

/**
 * Least squares of the centered series on the scale components, no
 * intercept, over the trailing `window` rows where every component is
 * defined (window 0 = all of them). `centered` is aligned with the
 * components' index.
 *
 * @throws std::invalid_argument if fewer rows than scales are available.
 * @throws NumericalError if the components are collinear.
 */
ScaleWeights estimate_weights(std::span<const double> centered, std::span<const wold::ScaleSeries> components,
                              std::size_t window = 0);

/**
 * E_T[v^{j}_{T+h}] with beta frozen at the sample end: the sum of
 * beta^{j}(k) eps^{j}_{T+h-k 2^j} over shifts whose innovation is already
 * observed (k 2^j >= h). The last entry of `eps` is time T.
 *
 * @throws std::invalid_argument if a needed innovation is undefined.
 */
double forecast_scale(std::span<const double> beta, const wold::ScaleSeries& eps, int j, int h);

/**
 * Conditional expectation E_T[v^{j}_{T+h}] given shocks up to T: as
 * forecast_scale plus, for shifts with k 2^j < h, the part of
 * eps^{j}_{T+h-k 2^j} made of shocks at or before T. `shocks` ends at time T.
 */
double forecast_scale_conditional(std::span<const double> beta, const wold::ScaleSeries& eps,
                                  std::span<const double> shocks, int j, int h);

/**
 * E_T[pi^{J}_{T+h}] with gamma frozen at the sample end, computed from the
 * raw shocks (last entry at T). Conditional projection keeps the observed
 * shocks of a partly observed scaling innovation; complete drops it.
 */
double forecast_residual(std::span<const double> gamma, std::span<const double> shocks, int J, int h,
                         Projection projection);

/// The local level at the sample end, held flat over the horizon.
double forecast_trend(const locreg::TvpArFit& fit, int h);

struct ForecastPoint {
    std::size_t origin = 0;  // observations in the estimation sample
    int horizon = 1;
    double value = 0.0;
    double trend = 0.0;
    std::vector<double> weights;
    std::vector<double> scale_parts;  // E_T[v^{j}_{T+h}], j = 1..J
    double residual_weight = 0.0;     // 0 unless pi^{J} is included
    double residual_part = 0.0;
};

/**
 * @brief Fitted multiscale forecasting state for one estimation sample.
 *
 * Holds the decomposition, centered series and scale weights so that several
 * horizons can be forecast from one fit.
 */
class EwdForecaster {
public:
    EwdForecaster(double end_level, std::vector<double> centered, wold::MultiscaleDecomposition decomposition,
                  std::size_t weight_window, Projection projection = Projection::conditional,
                  bool include_residual = false);

    /// TV-EWD: local-linear TVP-AR fit, time-varying decomposition.
    static EwdForecaster time_varying(std::span<const double> values, const ForecastConfig& cfg);

    [[nodiscard]] ForecastPoint forecast(int h) const;

    [[nodiscard]] const ScaleWeights& weights() const { return weights_; }
    [[nodiscard]] const wold::MultiscaleDecomposition& decomposition() const { return decomposition_; }
    [[nodiscard]] std::span<const double> centered() const { return centered_; }

private:
    double end_level_;
    std::vector<double> centered_;  // aligned with the innovations
    wold::MultiscaleDecomposition decomposition_;
    ScaleWeights weights_;
    Projection projection_;
    bool include_residual_;
};

ForecastPoint tvewd_forecast(std::span<const double> values, const ForecastConfig& cfg);

}  // namespace tvewd::forecast
