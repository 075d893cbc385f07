#pragma once

#include "tvewd/forecast.hpp"
#include "tvewd/kernel.hpp"
#include "tvewd/wold.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace tvewd::models {

/// A forecasting method that re-estimates itself on every sample it is given.
class ForecastModel {
public:
    virtual ~ForecastModel() = default;

    [[nodiscard]] virtual std::string name() const = 0;

    /// Forecasts of v_{T+h}, one per horizon, using only `sample` (T = sample.size()).
    [[nodiscard]] virtual std::vector<double> forecast(std::span<const double> sample,
                                                       std::span<const int> horizons) const = 0;
};

using ModelPtr = std::shared_ptr<const ForecastModel>;

ModelPtr make_har();
ModelPtr make_tvhar(const KernelSpec& kernel);
ModelPtr make_tvar(std::size_t p, const KernelSpec& kernel);

/// `span` = in-sample observations used (0 = the whole sample).
ModelPtr make_ewd(std::size_t p, const wold::MultiscaleConfig& cfg, std::size_t span = 0,
                  std::size_t weight_window = 0,
                  forecast::Projection projection = forecast::Projection::conditional,
                  bool include_residual = false);

/// TV-EWD; `lags_by_horizon` overrides cfg.p for specific horizons.
ModelPtr make_tvewd(const forecast::ForecastConfig& cfg, std::map<int, std::size_t> lags_by_horizon = {});

}  // namespace tvewd::models
