#pragma once

#include "tvewd/forecast.hpp"
#include "tvewd/models.hpp"
#include "tvewd/series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tvewd::eval {

struct RollingPlan {
    std::size_t window = 700;
    std::size_t step = 1;
    std::vector<int> horizons{1, 5, 22};
    std::optional<std::size_t> max_origins;

    void validate() const;
    [[nodiscard]] int max_horizon() const;
};

double rmse(std::span<const double> errors);
double mae(std::span<const double> errors);

struct DmResult {
    double statistic = 0.0;
    double p_better = 1.0;  // H1: a has lower expected loss than b
    double p_worse = 1.0;   // H1: a has higher expected loss than b
};

/// Bartlett-weighted long-run variance of `d` with `lags` autocovariances.
double long_run_variance(std::span<const double> d, std::size_t lags);

/**
 * Diebold-Mariano comparison of loss_a against loss_b for h-step forecasts:
 * mean(d) / sqrt(LRV(d)/n), d = loss_a - loss_b, Bartlett HAC with h-1 lags,
 * one-sided normal p-values. A zero long-run variance gives statistic 0 and
 * both p-values 1.
 *
 * @throws std::invalid_argument unless the series are aligned with n >= 30.
 */
DmResult dm_test(std::span<const double> loss_a, std::span<const double> loss_b, int h);

/// "*", "**", "***" for p_better below 0.10, 0.05, 0.01; "†" marks likewise for p_worse.
std::string significance_marks(double p_better, double p_worse);

/**
 * @brief Out-of-sample forecasts of every model at every origin.
 *
 * Origin o has estimation sample [T0 - window, T0); the forecast for horizon
 * index hi targets observation T0 - 1 + h. Failed forecasts are NaN.
 */
struct ForecastTable {
    std::vector<std::string> models;
    std::vector<int> horizons;
    std::vector<std::size_t> origins;                            // T0 per origin
    std::vector<std::vector<std::vector<double>>> forecasts;     // [model][horizon][origin]
    std::vector<std::vector<double>> actuals;                    // [horizon][origin]
    std::vector<std::size_t> failures;                           // failed origins per model
};

ForecastTable rolling_forecasts(std::span<const double> series, std::span<const models::ModelPtr> models,
                                const RollingPlan& plan, unsigned jobs = 1);

struct LossSummary {
    std::size_t n = 0;        // forecasts compared against the benchmark
    std::size_t missing = 0;  // origins dropped because either forecast failed
    double rmse = 0.0;
    double mae = 0.0;
    double rmse_ratio = 1.0;
    double mae_ratio = 1.0;
    DmResult dm_mse;
    DmResult dm_mae;
    std::string marks_mse;
    std::string marks_mae;
};

struct ReportRow {
    std::string model;
    int horizon = 1;
    LossSummary loss;
};

struct EvaluationReport {
    std::string benchmark;
    std::vector<std::string> models;
    std::vector<int> horizons;
    std::size_t origins = 0;
    std::vector<ReportRow> rows;

    [[nodiscard]] const ReportRow& row(const std::string& model, int horizon) const;
};

/// Losses and DM statistics of each model relative to `benchmark`.
EvaluationReport evaluate(const ForecastTable& table, const std::string& benchmark);

EvaluationReport rolling_evaluate(std::span<const double> series, std::span<const models::ModelPtr> models,
                                  const RollingPlan& plan, const std::string& benchmark, unsigned jobs = 1);

std::string report_csv(const EvaluationReport& report);
/// Ratio table: rows are models, columns RMSE and MAE for each horizon.
std::string report_table(const EvaluationReport& report);

/// CSV `origin_date,target_date,h,model,forecast`. Target dates beyond the
/// data are continued on weekdays.
std::string forecasts_csv(const ForecastTable& table, std::span<const Date> dates);

struct GridScore {
    std::size_t p = 0;
    double bandwidth = 0.0;
    int per_scale = 0;
    std::vector<double> rmse;  // per plan horizon; NaN if every origin failed
};

/// Rolling RMSE of TV-EWD over the (p, bandwidth, N) grid, best first by the
/// mean RMSE ratio across horizons relative to the grid's best per horizon.
std::vector<GridScore> grid_search(std::span<const double> series, const forecast::ForecastConfig& base,
                                   std::span<const std::size_t> lags, std::span<const double> bandwidths,
                                   std::span<const int> per_scale, const RollingPlan& plan, unsigned jobs = 1);

}  // namespace tvewd::eval
