#pragma once

#include "tvewd/forecast.hpp"
#include "tvewd/kernel.hpp"
#include "tvewd/locreg.hpp"
#include "tvewd/wold.hpp"

#include <array>
#include <cstddef>
#include <span>

namespace tvewd::benchmarks {

inline constexpr std::size_t kWeeklyWindow = 5;
inline constexpr std::size_t kMonthlyWindow = 22;

/// Mean of the `width` observations ending at observation t (1-based).
double trailing_mean(std::span<const double> values, std::size_t t, std::size_t width);

struct HarTerms {
    double daily = 0.0;
    double weekly = 0.0;
    double monthly = 0.0;
};

/// Daily, 5-day and 22-day terms at observation t (1-based, t >= 22).
HarTerms har_terms(std::span<const double> values, std::size_t t);

/// Direct h-step HAR regression rows: v_{t+h} on (1, daily_t, weekly_t,
/// monthly_t) for t = 22..T-h, each row timed at (t+h)/T.
locreg::LocalDesign har_design(std::span<const double> values, int h);

struct HarFit {
    std::array<double, 4> coefficients{};  // intercept, daily, weekly, monthly
    HarTerms origin_terms;
    double forecast = 0.0;
};

/// OLS HAR on the last `window` observations (window >= 100).
HarFit har_fit(std::span<const double> values, int h, std::size_t window);
double har_fit_forecast(std::span<const double> values, int h, std::size_t window);

/// HAR coefficients from the local (kernel-weighted) fit at u = 1.
HarFit tvhar_fit(std::span<const double> values, int h, const KernelSpec& kernel, std::size_t window);
double tvhar_fit_forecast(std::span<const double> values, int h, const KernelSpec& kernel, std::size_t window);

/// Iterates the centered AR recursion h steps with zero future shocks.
/// `recent` holds the last p centered values, oldest first.
double iterate_ar(std::span<const double> phi, std::span<const double> recent, int h);

/// TVP-AR(p) coefficients frozen at u = 1; p = 0 forecasts the local level.
double tvar_forecast(std::span<const double> values, std::size_t p, int h, const KernelSpec& kernel);

/**
 * Constant-coefficient EWD: sample-mean centering, OLS AR(p) on the last
 * `window` observations, then the multiscale pipeline with time-invariant
 * alpha.
 */
forecast::EwdForecaster static_ewd(std::span<const double> values, std::size_t p, const wold::MultiscaleConfig& cfg,
                                   std::size_t window, std::size_t weight_window = 0,
                                   forecast::Projection projection = forecast::Projection::conditional,
                                   bool include_residual = false);
double ewd_static_forecast(std::span<const double> values, std::size_t p, const wold::MultiscaleConfig& cfg, int h,
                           std::size_t window);

}  // namespace tvewd::benchmarks
