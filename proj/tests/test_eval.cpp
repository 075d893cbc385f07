#include "support.hpp"

#include "tvewd/eval.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace tvewd;
using namespace tvewd::eval;

namespace {

class Oracle final : public models::ForecastModel {
public:
    explicit Oracle(const std::vector<double>& full) : full_(full) {}
    [[nodiscard]] std::string name() const override { return "ORACLE"; }
    [[nodiscard]] std::vector<double> forecast(std::span<const double> sample, std::span<const int> horizons) const override {
        const auto end = static_cast<std::size_t>(sample.data() - full_.data()) + sample.size();
        std::vector<double> out;
        for (int h : horizons) out.push_back(full_[end - 1 + static_cast<std::size_t>(h)]);
        return out;
    }

private:
    const std::vector<double>& full_;
};

class Renamed final : public models::ForecastModel {
public:
    Renamed(models::ModelPtr inner, std::string name) : inner_(std::move(inner)), name_(std::move(name)) {}
    [[nodiscard]] std::string name() const override { return name_; }
    [[nodiscard]] std::vector<double> forecast(std::span<const double> s, std::span<const int> h) const override {
        return inner_->forecast(s, h);
    }

private:
    models::ModelPtr inner_;
    std::string name_;
};

class Flaky final : public models::ForecastModel {
public:
    [[nodiscard]] std::string name() const override { return "FLAKY"; }
    [[nodiscard]] std::vector<double> forecast(std::span<const double> s, std::span<const int> h) const override {
        if (static_cast<long>(s.back() * 1000.0) % 4 == 0) throw std::runtime_error("unlucky");
        return std::vector<double>(h.size(), s.back());
    }
};

std::vector<double> series(std::size_t T, std::uint64_t seed) {
    return testing::tvar1_path(T, seed, [](double u) { return 0.6 + 0.3 * u; }, [](double) { return 25.0; }, 2.0);
}

// Bartlett HAC DM statistic written out directly.
double dm_oracle(const std::vector<double>& d, int h) {
    const double n = static_cast<double>(d.size());
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= n;
    double lrv = 0.0;
    for (int l = 0; l < h; ++l) {
        double g = 0.0;
        for (std::size_t t = static_cast<std::size_t>(l); t < d.size(); ++t) g += (d[t] - mean) * (d[t - static_cast<std::size_t>(l)] - mean);
        g /= n;
        lrv += (l == 0 ? 1.0 : 2.0 * (1.0 - l / static_cast<double>(h))) * g;
    }
    return mean / std::sqrt(lrv / n);
}

}  // namespace

TEST_CASE("loss functions") {
    CHECK(rmse(std::vector<double>{0, 0, 0}) == 0.0);
    CHECK(mae(std::vector<double>{0, 0, 0}) == 0.0);
    CHECK(rmse(std::vector<double>{3, -4}) == doctest::Approx(std::sqrt(12.5)));
    CHECK(mae(std::vector<double>{3, -4}) == 3.5);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto e = testing::normals(50, s);
        CHECK(rmse(e) >= mae(e));
    }
    CHECK(std::isnan(rmse(std::vector<double>{})));
}

TEST_CASE("DM statistic") {
    const std::vector<double> zero(60, 1.5);
    const auto z = dm_test(zero, zero, 1);
    CHECK(z.statistic == 0.0);
    CHECK(z.p_better == 1.0);
    CHECK(z.p_worse == 1.0);

    std::vector<double> a(100), b(100, 0.0);
    for (std::size_t t = 0; t < 100; ++t) a[t] = 1.0 + (t % 2 == 0 ? 0.1 : -0.1);
    const auto strong = dm_test(a, b, 1);
    CHECK(strong.statistic == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(strong.p_worse < 1e-12);
    CHECK(strong.p_better == doctest::Approx(1.0));

    for (int h : {1, 2, 5, 22}) {
        const auto la = testing::normals(300, 10 + static_cast<std::uint64_t>(h));
        const auto lb = testing::normals(300, 50 + static_cast<std::uint64_t>(h));
        std::vector<double> d(300);
        for (std::size_t t = 0; t < 300; ++t) d[t] = la[t] - lb[t];
        const auto r = dm_test(la, lb, h);
        CHECK(r.statistic == doctest::Approx(dm_oracle(d, h)).epsilon(1e-12));
        CHECK(r.p_better + r.p_worse == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(dm_test(std::vector<double>(29, 1.0), std::vector<double>(29, 0.0), 1), std::invalid_argument);
    CHECK_THROWS_AS(dm_test(std::vector<double>(40, 1.0), std::vector<double>(41, 0.0), 1), std::invalid_argument);
}

TEST_CASE("significance marks follow the thresholds") {
    CHECK(significance_marks(0.005, 0.995) == "***");
    CHECK(significance_marks(0.01, 0.99) == "**");
    CHECK(significance_marks(0.049, 0.951) == "**");
    CHECK(significance_marks(0.05, 0.95) == "*");
    CHECK(significance_marks(0.0999, 0.9) == "*");
    CHECK(significance_marks(0.10, 0.90) == "");
    CHECK(significance_marks(0.93, 0.07) == "†");
    CHECK(significance_marks(0.97, 0.03) == "††");
    CHECK(significance_marks(0.999, 0.001) == "†††");
    CHECK(significance_marks(1.0, 1.0) == "");
}

TEST_CASE("rolling origins and alignment") {
    const auto v = series(800, 1);
    RollingPlan plan;
    const std::vector<models::ModelPtr> m{std::make_shared<Oracle>(v), models::make_tvhar(KernelSpec{})};
    const auto table = rolling_forecasts(v, m, plan);
    REQUIRE(table.origins.size() == 79);
    CHECK(table.origins.front() == 700);
    CHECK(table.origins.back() == 778);
    CHECK(table.actuals[2][0] == v[721]);
    const auto report = evaluate(table, "TVHAR");
    for (int h : plan.horizons) {
        const auto& r = report.row("ORACLE", h).loss;
        CHECK(r.rmse == 0.0);
        CHECK(r.mae == 0.0);
        CHECK(r.rmse_ratio == 0.0);
        CHECK(r.n == 79);
    }
    plan.max_origins = 10;
    plan.step = 5;
    const auto capped = rolling_forecasts(v, m, plan);
    CHECK(capped.origins.size() == 10);
    CHECK(capped.origins[1] == 705);
    RollingPlan tight;
    CHECK_THROWS_AS(rolling_forecasts(std::span<const double>(v.data(), 722), m, tight), std::invalid_argument);
    tight.window = 50;
    CHECK_THROWS(tight.validate());
}

TEST_CASE("identical models and missing forecasts") {
    const auto v = series(800, 2);
    RollingPlan plan;
    const auto har = models::make_har();
    const std::vector<models::ModelPtr> m{har, std::make_shared<Renamed>(har, "HAR2"), std::make_shared<Flaky>()};
    const auto table = rolling_forecasts(v, m, plan);
    const auto report = evaluate(table, "HAR");
    const auto& twin = report.row("HAR2", 5).loss;
    CHECK(twin.rmse_ratio == 1.0);
    CHECK(twin.dm_mse.p_better == 1.0);
    CHECK(twin.dm_mae.p_worse == 1.0);
    CHECK(twin.marks_mse.empty());
    const auto& flaky = report.row("FLAKY", 1).loss;
    CHECK(table.failures[2] > 0);
    CHECK(flaky.missing == table.failures[2]);
    CHECK(flaky.n + flaky.missing == table.origins.size());
    CHECK_THROWS(evaluate(table, "NOPE"));
}

TEST_CASE("reports are deterministic and thread-count independent") {
    const auto v = series(820, 3);
    RollingPlan plan;
    const std::vector<models::ModelPtr> m{models::make_har(), models::make_tvhar(KernelSpec{}), models::make_tvar(3, KernelSpec{})};
    const auto one = report_csv(rolling_evaluate(v, m, plan, "TVHAR", 1));
    const auto four = report_csv(rolling_evaluate(v, m, plan, "TVHAR", 4));
    CHECK(one == four);
    CHECK(one == report_csv(rolling_evaluate(v, m, plan, "TVHAR", 1)));
}

TEST_CASE("ratios and DM statistics are scale invariant") {
    const auto v = series(800, 4);
    std::vector<double> scaled(v);
    for (auto& x : scaled) x *= 7.5;
    RollingPlan plan;
    const std::vector<models::ModelPtr> m{models::make_har(), models::make_tvhar(KernelSpec{}), models::make_tvar(2, KernelSpec{})};
    const auto a = rolling_evaluate(v, m, plan, "TVHAR");
    const auto b = rolling_evaluate(scaled, m, plan, "TVHAR");
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i].loss;
        const auto& y = b.rows[i].loss;
        CHECK(std::abs(x.rmse_ratio - y.rmse_ratio) < 1e-8);
        CHECK(std::abs(x.mae_ratio - y.mae_ratio) < 1e-8);
        CHECK(std::abs(x.dm_mse.statistic - y.dm_mse.statistic) < 1e-8);
        CHECK(std::abs(x.dm_mae.statistic - y.dm_mae.statistic) < 1e-8);
    }
}

TEST_CASE("report formats") {
    const auto v = series(800, 5);
    RollingPlan plan;
    const std::vector<models::ModelPtr> m{models::make_har(), models::make_tvhar(KernelSpec{})};
    const auto table = rolling_forecasts(v, m, plan);
    const auto report = evaluate(table, "TVHAR");
    const auto csv = report_csv(report);
    CHECK(csv.rfind("model,h,n,missing,rmse,mae,rmse_ratio,mae_ratio,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    for (const auto& row : report.rows) {
        CHECK(row.loss.marks_mse == significance_marks(row.loss.dm_mse.p_better, row.loss.dm_mse.p_worse));
    }
    const auto text = report_table(report);
    CHECK(text.find("RMSE") != std::string::npos);
    CHECK(text.find("\nHAR ") != std::string::npos);
    CHECK(text.find("\nTVHAR") == std::string::npos);
    const auto dates = business_days(parse_date("2001-01-01"), v.size());
    const auto fc = forecasts_csv(table, dates);
    CHECK(fc.rfind("origin_date,target_date,h,model,forecast\n", 0) == 0);
    CHECK(std::count(fc.begin(), fc.end(), '\n') == static_cast<long>(1 + table.origins.size() * 3 * 2));
}

TEST_CASE("grid search ranks configurations") {
    const auto v = series(760, 6);
    RollingPlan plan;
    plan.step = 10;
    plan.horizons = {1, 5};
    forecast::ForecastConfig base;
    base.multiscale = {5, 2};
    const std::vector<std::size_t> lags{1, 3};
    const std::vector<double> bws{0.3, 0.6};
    const std::vector<int> ns{2};
    const auto scores = grid_search(v, base, lags, bws, ns, plan);
    REQUIRE(scores.size() == 4);
    for (const auto& s : scores) {
        CHECK(s.rmse.size() == 2);
        CHECK(std::isfinite(s.rmse[0]));
    }
}
