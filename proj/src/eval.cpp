#include "tvewd/eval.hpp"

#include "tvewd/errors.hpp"
#include "tvewd/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace tvewd::eval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string fixed3(double x) {
    if (!std::isfinite(x)) {
        return "n/a";
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3f", x);
    return buffer;
}

// UTF-8 aware left padding for table cells containing daggers.
std::string pad(const std::string& text, std::size_t width) {
    std::size_t glyphs = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) {
            ++glyphs;
        }
    }
    return glyphs >= width ? text : text + std::string(width - glyphs, ' ');
}

}  // namespace

void RollingPlan::validate() const {
    if (window < 100) {
        throw ConfigError("rolling plan: window must be at least 100");
    }
    if (step < 1) {
        throw ConfigError("rolling plan: step must be positive");
    }
    if (horizons.empty()) {
        throw ConfigError("rolling plan: no horizons");
    }
    for (int h : horizons) {
        if (h < 1) {
            throw ConfigError("rolling plan: horizons must be positive");
        }
    }
    if (max_origins && *max_origins == 0) {
        throw ConfigError("rolling plan: max_origins must be positive");
    }
}

int RollingPlan::max_horizon() const { return *std::max_element(horizons.begin(), horizons.end()); }

double rmse(std::span<const double> errors) {
    if (errors.empty()) {
        return kNaN;
    }
    double sum = 0.0;
    for (double e : errors) {
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(errors.size()));
}

double mae(std::span<const double> errors) {
    if (errors.empty()) {
        return kNaN;
    }
    double sum = 0.0;
    for (double e : errors) {
        sum += std::abs(e);
    }
    return sum / static_cast<double>(errors.size());
}

double long_run_variance(std::span<const double> d, std::size_t lags) {
    const std::size_t n = d.size();
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    const auto autocov = [&](std::size_t lag) {
        double sum = 0.0;
        for (std::size_t t = lag; t < n; ++t) {
            sum += (d[t] - mean) * (d[t - lag] - mean);
        }
        return sum / static_cast<double>(n);
    };
    double lrv = autocov(0);
    for (std::size_t l = 1; l <= lags && l < n; ++l) {
        const double weight = 1.0 - static_cast<double>(l) / static_cast<double>(lags + 1);
        lrv += 2.0 * weight * autocov(l);
    }
    return lrv;
}

DmResult dm_test(std::span<const double> loss_a, std::span<const double> loss_b, int h) {
    if (loss_a.size() != loss_b.size()) {
        throw std::invalid_argument("dm_test: loss series are not aligned");
    }
    if (loss_a.size() < 30) {
        throw std::invalid_argument("dm_test: need at least 30 loss pairs, got " + std::to_string(loss_a.size()));
    }
    if (h < 1) {
        throw std::invalid_argument("dm_test: horizon must be positive");
    }
    const std::size_t n = loss_a.size();
    std::vector<double> d(n);
    double scale = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        d[t] = loss_a[t] - loss_b[t];
        scale = std::max({scale, std::abs(loss_a[t]), std::abs(loss_b[t])});
    }
    const double lrv = long_run_variance(d, static_cast<std::size_t>(h - 1));
    // variance indistinguishable from rounding noise counts as zero
    if (!(lrv > 1e-28 * scale * scale) || !std::isfinite(lrv)) {
        return {};
    }
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    DmResult out;
    out.statistic = mean / std::sqrt(lrv / static_cast<double>(n));
    out.p_better = normal_cdf(out.statistic);
    out.p_worse = normal_cdf(-out.statistic);
    return out;
}

std::string significance_marks(double p_better, double p_worse) {
    const auto stars = [](double p, const char* mark) {
        std::string out;
        const int count = p < 0.01 ? 3 : p < 0.05 ? 2 : p < 0.10 ? 1 : 0;
        for (int i = 0; i < count; ++i) {
            out += mark;
        }
        return out;
    };
    return stars(p_better, "*") + stars(p_worse, "†");
}

ForecastTable rolling_forecasts(std::span<const double> series, std::span<const models::ModelPtr> models,
                                const RollingPlan& plan, unsigned jobs) {
    plan.validate();
    if (models.empty()) {
        throw ConfigError("rolling evaluation needs at least one model");
    }
    const auto hmax = static_cast<std::size_t>(plan.max_horizon());
    if (series.size() < plan.window + hmax + 1) {
        throw std::invalid_argument("rolling evaluation needs at least window + max(h) + 1 = " +
                                    std::to_string(plan.window + hmax + 1) + " observations, got " +
                                    std::to_string(series.size()));
    }
    ForecastTable table;
    table.horizons = plan.horizons;
    for (const auto& m : models) {
        table.models.push_back(m->name());
    }
    for (std::size_t T0 = plan.window; T0 + hmax <= series.size(); T0 += plan.step) {
        if (plan.max_origins && table.origins.size() == *plan.max_origins) {
            break;
        }
        table.origins.push_back(T0);
    }
    const std::size_t n_origins = table.origins.size();
    const std::size_t n_h = plan.horizons.size();
    table.forecasts.assign(models.size(), std::vector<std::vector<double>>(n_h, std::vector<double>(n_origins, kNaN)));
    table.actuals.assign(n_h, std::vector<double>(n_origins));
    for (std::size_t hi = 0; hi < n_h; ++hi) {
        for (std::size_t o = 0; o < n_origins; ++o) {
            table.actuals[hi][o] = series[table.origins[o] - 1 + static_cast<std::size_t>(plan.horizons[hi])];
        }
    }
    // every (model, origin) slot is written by exactly one worker
    std::vector<std::vector<char>> failed(models.size(), std::vector<char>(n_origins, 0));
    const auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t o = begin; o < n_origins; o += stride) {
            const auto sample = series.subspan(table.origins[o] - plan.window, plan.window);
            for (std::size_t m = 0; m < models.size(); ++m) {
                try {
                    const auto values = models[m]->forecast(sample, plan.horizons);
                    for (std::size_t hi = 0; hi < n_h; ++hi) {
                        table.forecasts[m][hi][o] = values[hi];
                    }
                } catch (const std::exception&) {
                    failed[m][o] = 1;
                }
            }
        }
    };
    const unsigned workers = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, n_origins))));
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w, workers);
        }
    }
    table.failures.assign(models.size(), 0);
    for (std::size_t m = 0; m < models.size(); ++m) {
        table.failures[m] = static_cast<std::size_t>(std::count(failed[m].begin(), failed[m].end(), 1));
    }
    return table;
}

const ReportRow& EvaluationReport::row(const std::string& model, int horizon) const {
    for (const auto& r : rows) {
        if (r.model == model && r.horizon == horizon) {
            return r;
        }
    }
    throw std::out_of_range("no report row for " + model + " at h=" + std::to_string(horizon));
}

EvaluationReport evaluate(const ForecastTable& table, const std::string& benchmark) {
    const auto bench_it = std::find(table.models.begin(), table.models.end(), benchmark);
    if (bench_it == table.models.end()) {
        throw ConfigError("benchmark model '" + benchmark + "' is not among the evaluated models");
    }
    const auto b = static_cast<std::size_t>(bench_it - table.models.begin());
    EvaluationReport report;
    report.benchmark = benchmark;
    report.models = table.models;
    report.horizons = table.horizons;
    report.origins = table.origins.size();
    for (std::size_t m = 0; m < table.models.size(); ++m) {
        for (std::size_t hi = 0; hi < table.horizons.size(); ++hi) {
            const int h = table.horizons[hi];
            std::vector<double> err_m;
            std::vector<double> err_b;
            for (std::size_t o = 0; o < table.origins.size(); ++o) {
                const double fm = table.forecasts[m][hi][o];
                const double fb = table.forecasts[b][hi][o];
                if (std::isfinite(fm) && std::isfinite(fb)) {
                    err_m.push_back(table.actuals[hi][o] - fm);
                    err_b.push_back(table.actuals[hi][o] - fb);
                }
            }
            ReportRow row;
            row.model = table.models[m];
            row.horizon = h;
            auto& loss = row.loss;
            loss.n = err_m.size();
            loss.missing = table.origins.size() - loss.n;
            loss.rmse = rmse(err_m);
            loss.mae = mae(err_m);
            const double bench_rmse = rmse(err_b);
            const double bench_mae = mae(err_b);
            loss.rmse_ratio = loss.rmse / bench_rmse;
            loss.mae_ratio = loss.mae / bench_mae;
            if (loss.n >= 30) {
                std::vector<double> se_m(loss.n), se_b(loss.n), ae_m(loss.n), ae_b(loss.n);
                for (std::size_t i = 0; i < loss.n; ++i) {
                    se_m[i] = err_m[i] * err_m[i];
                    se_b[i] = err_b[i] * err_b[i];
                    ae_m[i] = std::abs(err_m[i]);
                    ae_b[i] = std::abs(err_b[i]);
                }
                loss.dm_mse = dm_test(se_m, se_b, h);
                loss.dm_mae = dm_test(ae_m, ae_b, h);
            } else {
                loss.dm_mse = {kNaN, 1.0, 1.0};
                loss.dm_mae = {kNaN, 1.0, 1.0};
            }
            loss.marks_mse = significance_marks(loss.dm_mse.p_better, loss.dm_mse.p_worse);
            loss.marks_mae = significance_marks(loss.dm_mae.p_better, loss.dm_mae.p_worse);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

EvaluationReport rolling_evaluate(std::span<const double> series, std::span<const models::ModelPtr> models,
                                  const RollingPlan& plan, const std::string& benchmark, unsigned jobs) {
    return evaluate(rolling_forecasts(series, models, plan, jobs), benchmark);
}

std::string report_csv(const EvaluationReport& report) {
    std::string out =
        "model,h,n,missing,rmse,mae,rmse_ratio,mae_ratio,dm_mse,p_better_mse,p_worse_mse,dm_mae,p_better_mae,"
        "p_worse_mae,marks_mse,marks_mae\n";
    for (const auto& r : report.rows) {
        const auto& l = r.loss;
        out += r.model + ',' + std::to_string(r.horizon) + ',' + std::to_string(l.n) + ',' + std::to_string(l.missing);
        for (double x : {l.rmse, l.mae, l.rmse_ratio, l.mae_ratio, l.dm_mse.statistic, l.dm_mse.p_better,
                         l.dm_mse.p_worse, l.dm_mae.statistic, l.dm_mae.p_better, l.dm_mae.p_worse}) {
            out += ',' + format_double(x);
        }
        out += ',' + l.marks_mse + ',' + l.marks_mae + '\n';
    }
    return out;
}

std::string report_table(const EvaluationReport& report) {
    constexpr std::size_t kCell = 11;
    std::string header1 = pad("", 8) + pad("RMSE", kCell * report.horizons.size()) + "  " + "MAE";
    std::string header2 = pad("model", 8);
    for (int pass = 0; pass < 2; ++pass) {
        for (int h : report.horizons) {
            header2 += pad("h=" + std::to_string(h), kCell);
        }
        if (pass == 0) {
            header2 += "  ";
        }
    }
    const auto rstrip = [](std::string s) {
        while (!s.empty() && s.back() == ' ') {
            s.pop_back();
        }
        return s;
    };
    std::string out = rstrip(header1) + '\n' + rstrip(header2) + '\n';
    for (const auto& model : report.models) {
        if (model == report.benchmark) {
            continue;
        }
        std::string line = pad(model, 8);
        for (int h : report.horizons) {
            const auto& l = report.row(model, h).loss;
            line += pad(fixed3(l.rmse_ratio) + l.marks_mse, kCell);
        }
        line += "  ";
        for (int h : report.horizons) {
            const auto& l = report.row(model, h).loss;
            line += pad(fixed3(l.mae_ratio) + l.marks_mae, kCell);
        }
        while (!line.empty() && line.back() == ' ') {
            line.pop_back();
        }
        out += line + '\n';
    }
    out += "Ratios relative to " + report.benchmark + " over " + std::to_string(report.origins) +
           " origins. *,**,***: significantly lower loss at 10/5/1%; †,††,†††: higher.\n";
    return out;
}

std::string forecasts_csv(const ForecastTable& table, std::span<const Date> dates) {
    std::string out = "origin_date,target_date,h,model,forecast\n";
    for (std::size_t o = 0; o < table.origins.size(); ++o) {
        const std::size_t origin = table.origins[o] - 1;
        if (origin >= dates.size()) {
            throw std::invalid_argument("forecasts_csv: origin beyond the supplied dates");
        }
        for (std::size_t hi = 0; hi < table.horizons.size(); ++hi) {
            const std::size_t target = origin + static_cast<std::size_t>(table.horizons[hi]);
            const Date target_date = target < dates.size()
                                         ? dates[target]
                                         : add_business_days(dates.back(), target - (dates.size() - 1));
            for (std::size_t m = 0; m < table.models.size(); ++m) {
                const double f = table.forecasts[m][hi][o];
                out += format_date(dates[origin]) + ',' + format_date(target_date) + ',' +
                       std::to_string(table.horizons[hi]) + ',' + table.models[m] + ',' +
                       (std::isfinite(f) ? format_double(f) : std::string("NA")) + '\n';
            }
        }
    }
    return out;
}

std::vector<GridScore> grid_search(std::span<const double> series, const forecast::ForecastConfig& base,
                                   std::span<const std::size_t> lags, std::span<const double> bandwidths,
                                   std::span<const int> per_scale, const RollingPlan& plan, unsigned jobs) {
    std::vector<GridScore> scores;
    for (std::size_t p : lags) {
        for (double b : bandwidths) {
            for (int n : per_scale) {
                auto cfg = base;
                cfg.p = p;
                cfg.kernel.bandwidth = b;
                cfg.multiscale.per_scale = n;
                const std::vector<models::ModelPtr> one{models::make_tvewd(cfg)};
                const auto table = rolling_forecasts(series, one, plan, jobs);
                GridScore score{p, b, n, {}};
                for (std::size_t hi = 0; hi < plan.horizons.size(); ++hi) {
                    std::vector<double> errors;
                    for (std::size_t o = 0; o < table.origins.size(); ++o) {
                        if (std::isfinite(table.forecasts[0][hi][o])) {
                            errors.push_back(table.actuals[hi][o] - table.forecasts[0][hi][o]);
                        }
                    }
                    score.rmse.push_back(rmse(errors));
                }
                scores.push_back(std::move(score));
            }
        }
    }
    std::vector<double> best(plan.horizons.size(), std::numeric_limits<double>::infinity());
    for (const auto& s : scores) {
        for (std::size_t hi = 0; hi < best.size(); ++hi) {
            if (std::isfinite(s.rmse[hi])) {
                best[hi] = std::min(best[hi], s.rmse[hi]);
            }
        }
    }
    const auto relative = [&](const GridScore& s) {
        double total = 0.0;
        for (std::size_t hi = 0; hi < best.size(); ++hi) {
            total += std::isfinite(s.rmse[hi]) ? s.rmse[hi] / best[hi] : std::numeric_limits<double>::infinity();
        }
        return total;
    };
    std::stable_sort(scores.begin(), scores.end(),
                     [&](const GridScore& a, const GridScore& b) { return relative(a) < relative(b); });
    return scores;
}

}  // namespace tvewd::eval
