#include "support.hpp"

#include "tvewd/errors.hpp"
#include "tvewd/forecast.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace tvewd;
using namespace tvewd::forecast;

namespace {

wold::ScaleSeries full_series(std::vector<double> values) { return {0, std::move(values)}; }

// E_T[eps^{j}_{T+d}] from the shocks, terms after T dropped; d may be <= 0.
double expected_innovation(const std::vector<double>& shocks, int j, long d) {
    const long width = 1L << j;
    const long half = width / 2;
    const long T = static_cast<long>(shocks.size()) - 1;
    double sum = 0.0;
    for (long i = 0; i < width; ++i) {
        const long t = T + d - i;
        if (t <= T) sum += (i < half ? 1.0 : -1.0) * shocks[static_cast<std::size_t>(t)];
    }
    return sum / std::sqrt(static_cast<double>(width));
}

// E_T of the scaling innovation at T + d.
double expected_scaling(const std::vector<double>& shocks, int J, long d) {
    const long width = 1L << J;
    const long T = static_cast<long>(shocks.size()) - 1;
    double sum = 0.0;
    for (long i = 0; i < width; ++i) {
        if (T + d - i <= T) sum += shocks[static_cast<std::size_t>(T + d - i)];
    }
    return sum / std::sqrt(static_cast<double>(width));
}

// AR(1) through the pipeline with exact innovations and coefficient.
EwdForecaster exact_ar1(const std::vector<double>& v, const std::vector<double>& eps, Projection projection,
                        double phi1 = 0.5, wold::MultiscaleConfig ms = {}, bool residual = false) {
    const std::vector<std::vector<double>> phi{{phi1}};
    const std::vector<double> shocks(eps.begin() + 1, eps.end());
    auto d = wold::decompose(phi, shocks, 1, v.size(), ms);
    std::vector<double> centered(v.begin() + 1, v.end());
    return EwdForecaster(0.0, std::move(centered), std::move(d), 0, projection, residual);
}

}  // namespace

TEST_CASE("weights reproduce an exact component sum") {
    const auto eps = testing::normals(3000, 1);
    const wold::MultiscaleConfig cfg{4, 2};
    const auto alpha = wold::ar_to_ma(std::vector<double>{0.6}, cfg.truncation());
    const std::vector<wold::ScaleCoefficients> c{wold::scale_coefficients(alpha, cfg)};
    const auto comps = wold::scale_components(c, wold::scale_innovations(eps, 4), cfg);
    std::vector<double> target(eps.size(), std::numeric_limits<double>::quiet_NaN());
    std::size_t first = 0;
    for (const auto& s : comps.detail) first = std::max(first, s.first_valid);
    for (std::size_t t = first; t < eps.size(); ++t) {
        target[t] = 0.0;
        for (const auto& s : comps.detail) target[t] += s.values[t];
    }
    const auto w = estimate_weights(target, comps.detail);
    for (double x : w.w) CHECK(std::abs(x - 1.0) < 1e-8);
    CHECK(w.r_squared == doctest::Approx(1.0));
    CHECK(w.first_row == first);

    const auto windowed = estimate_weights(target, comps.detail, 500);
    CHECK(windowed.residuals.size() == 500);
    CHECK(windowed.first_row == eps.size() - 500);
}

TEST_CASE("weights recover a doubled scale") {
    const std::size_t n = 5000;
    const auto a = testing::normals(n, 2);
    const auto b = testing::normals(n, 3);
    const auto c = testing::normals(n, 4);
    const std::vector<wold::ScaleSeries> comps{full_series(a), full_series(b)};
    std::vector<double> target(n);
    for (std::size_t t = 0; t < n; ++t) target[t] = 2.0 * a[t] + 0.1 * c[t];
    const auto w = estimate_weights(target, comps);
    CHECK(w.w[0] == doctest::Approx(2.0).epsilon(0.01));
    CHECK(std::abs(w.w[1]) < 0.01);
    const std::vector<wold::ScaleSeries> single{full_series(a)};
    CHECK(estimate_weights(a, single).w[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("collinear components are rejected with a diagnostic") {
    const auto a = testing::normals(400, 5);
    std::vector<double> twice(a);
    for (auto& x : twice) x *= 2.0;
    const std::vector<wold::ScaleSeries> comps{full_series(a), full_series(twice)};
    try {
        estimate_weights(a, comps);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("collinear") != std::string::npos);
    }
}

TEST_CASE("complete-innovation scale forecast") {
    const std::vector<double> beta{0.7, 0.3};
    const auto eps_values = testing::normals(50, 6);
    const auto eps = full_series(eps_values);
    // j = 1, N = 2, h = 1: only k = 1 survives
    CHECK(forecast_scale(beta, eps, 1, 1) == 0.3 * eps_values[48]);
    CHECK(forecast_scale(beta, eps, 1, 2) == 0.3 * eps_values[49]);
    CHECK(forecast_scale(beta, eps, 1, 3) == 0.0);
    CHECK(forecast_scale(beta, eps, 2, 5) == 0.0);
    const auto zeros = full_series(std::vector<double>(50, 0.0));
    CHECK(forecast_scale(beta, zeros, 2, 1) == 0.0);
    std::vector<double> scaled(eps_values);
    for (auto& x : scaled) x *= 4.0;
    const std::vector<double> long_beta{0.5, -0.2, 0.1, 0.05};
    for (int h : {1, 3, 7}) {
        CHECK(forecast_scale(long_beta, full_series(scaled), 2, h) == 4.0 * forecast_scale(long_beta, eps, 2, h));
    }
    wold::ScaleSeries short_eps{45, eps_values};
    CHECK_THROWS_AS(forecast_scale(long_beta, short_eps, 2, 1), std::invalid_argument);
}

TEST_CASE("conditional scale forecast matches the expectation oracle") {
    const auto shocks = testing::normals(300, 13);
    for (int j = 1; j <= 5; ++j) {
        const auto si = wold::scale_innovations(shocks, j);
        const auto& eps = si.detail[static_cast<std::size_t>(j - 1)];
        const auto beta = testing::normals(6, 100 + static_cast<std::uint64_t>(j));
        for (int h : {1, 2, 3, 5, 22, 40}) {
            double expect = 0.0;
            for (std::size_t k = 0; k < beta.size(); ++k) {
                expect += beta[k] * expected_innovation(shocks, j, h - static_cast<long>(k << j));
            }
            CHECK(forecast_scale_conditional(beta, eps, shocks, j, h) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("AR(1) with exact innovations approaches the optimal forecast") {
    double se_cond = 0.0, se_complete = 0.0, se_opt = 0.0;
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const auto eps = testing::normals(1001, 5000 + trial);
        std::vector<double> v(1001);
        double x = 0.0;
        for (std::size_t t = 0; t < v.size(); ++t) {
            x = 0.5 * x + eps[t];
            v[t] = x;
        }
        const std::vector<double> sample(v.begin(), v.end() - 1);
        const std::vector<double> shocks(eps.begin(), eps.end() - 1);
        const double actual = v.back();
        const double cond = exact_ar1(sample, shocks, Projection::conditional).forecast(1).value;
        const double complete = exact_ar1(sample, shocks, Projection::complete).forecast(1).value;
        se_cond += (actual - cond) * (actual - cond);
        se_complete += (actual - complete) * (actual - complete);
        se_opt += (actual - 0.5 * sample.back()) * (actual - 0.5 * sample.back());
    }
    CHECK(std::sqrt(se_cond / se_opt) < 1.10);
    // dropping partially observed innovations loses the latest shock
    CHECK(std::sqrt(se_complete / se_opt) > 1.05);
}

TEST_CASE("residual forecast matches the expectation oracle") {
    const auto shocks = testing::normals(300, 31);
    for (int J = 1; J <= 5; ++J) {
        const auto gamma = testing::normals(4, 200 + static_cast<std::uint64_t>(J));
        for (int h : {1, 2, 5, 22, 40}) {
            double cond = 0.0, complete = 0.0;
            for (std::size_t k = 0; k < gamma.size(); ++k) {
                const long d = h - static_cast<long>(k << J);
                cond += gamma[k] * expected_scaling(shocks, J, d);
                if (d <= 0) complete += gamma[k] * expected_scaling(shocks, J, d);
            }
            CHECK(forecast_residual(gamma, shocks, J, h, Projection::conditional) == doctest::Approx(cond).epsilon(1e-12));
            CHECK(forecast_residual(gamma, shocks, J, h, Projection::complete) == doctest::Approx(complete).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(forecast_residual(std::vector<double>(4, 1.0), std::vector<double>(10, 1.0), 3, 1, Projection::conditional),
                    std::invalid_argument);
}

TEST_CASE("including the residual component helps on a persistent AR(1)") {
    const wold::MultiscaleConfig ms{4, 4};
    double se_ex = 0.0, se_in = 0.0, se_opt = 0.0;
    for (std::uint64_t trial = 0; trial < 300; ++trial) {
        const auto eps = testing::normals(401, 7000 + trial);
        std::vector<double> v(401);
        double x = 0.0;
        for (std::size_t t = 0; t < v.size(); ++t) {
            x = 0.95 * x + eps[t];
            v[t] = x;
        }
        const std::vector<double> sample(v.begin(), v.end() - 1);
        const std::vector<double> shocks(eps.begin(), eps.end() - 1);
        const double actual = v.back();
        const auto ex = exact_ar1(sample, shocks, Projection::conditional, 0.95, ms, false).forecast(1);
        const auto in = exact_ar1(sample, shocks, Projection::conditional, 0.95, ms, true).forecast(1);
        CHECK(ex.residual_weight == 0.0);
        double value = in.trend + in.residual_weight * in.residual_part;
        for (std::size_t j = 0; j < in.weights.size(); ++j) value += in.weights[j] * in.scale_parts[j];
        CHECK(in.value == doctest::Approx(value).epsilon(1e-13));
        se_ex += (actual - ex.value) * (actual - ex.value);
        se_in += (actual - in.value) * (actual - in.value);
        se_opt += (actual - 0.95 * sample.back()) * (actual - 0.95 * sample.back());
    }
    CHECK(se_in < se_ex);
    CHECK(std::sqrt(se_in / se_opt) < 1.15);
}

TEST_CASE("explosive local fits are shrunk before decomposition") {
    ForecastConfig cfg;
    cfg.p = 2;
    // a near-unit-root path whose boundary fit is explosive
    std::vector<double> v;
    for (std::uint64_t seed = 0; seed < 50 && v.empty(); ++seed) {
        auto path = testing::tvar1_path(700, seed, [](double) { return 0.995; }, [](double) { return 30.0; });
        const auto end = locreg::fit_tvp_ar(path, 2, cfg.kernel);
        if (wold::companion_radius(end.coefficients_at(end.grid_size() - 1)) > 1.0) v = std::move(path);
    }
    REQUIRE_FALSE(v.empty());
    const auto shrunk = EwdForecaster::time_varying(v, cfg);
    cfg.max_radius = 0.0;
    const auto raw = EwdForecaster::time_varying(v, cfg);
    const auto& a = shrunk.decomposition().coefficients.back().beta;
    const auto& b = raw.decomposition().coefficients.back().beta;
    CHECK(a != b);
    double sa = 0.0, sb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t k = 0; k < a[j].size(); ++k) {
            sa += a[j][k] * a[j][k];
            sb += b[j][k] * b[j][k];
        }
    CHECK(sa < sb);
    cfg.max_radius = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("forecast bookkeeping and degenerate configuration") {
    const auto v = testing::tvar1_path(900, 21, [](double) { return 0.8; }, [](double) { return 25.0; });
    ForecastConfig cfg;
    cfg.multiscale = {5, 2};
    const auto model = EwdForecaster::time_varying(v, cfg);
    for (int h : {1, 5, 22}) {
        const auto f = model.forecast(h);
        double value = f.trend;
        for (std::size_t j = 0; j < f.weights.size(); ++j) value += f.weights[j] * f.scale_parts[j];
        CHECK(f.value == value);
        CHECK(f.horizon == h);
        CHECK(f.origin == v.size());
    }
    ForecastConfig tiny;
    tiny.multiscale = {1, 1};
    tiny.p = 1;
    const auto m = EwdForecaster::time_varying(v, tiny);
    const auto f = m.forecast(1);
    const double beta0 = m.decomposition().coefficients.back().beta[0][0];
    const double last = m.decomposition().residuals.back();
    CHECK(f.value == doctest::Approx(f.trend + f.weights[0] * beta0 * (-last / std::sqrt(2.0))).epsilon(1e-14));
}

TEST_CASE("trend forecast holds the end level") {
    const auto v = testing::tvar1_path(800, 2, [](double) { return 0.3; }, [](double) { return 20.0; });
    const auto fit = locreg::fit_tvp_ar(v, 1, KernelSpec{});
    for (int h : {1, 5, 22}) CHECK(forecast_trend(fit, h) == fit.level.back());
    auto zero = fit;
    std::fill(zero.level.begin(), zero.level.end(), 0.0);
    CHECK(forecast_trend(zero, 5) == 0.0);

    double total = 0.0;
    for (std::uint64_t rep = 0; rep < 40; ++rep) {
        const auto d = testing::tvar1_path(1000, 300 + rep, [](double) { return 0.3; },
                                           [](double u) { return 10.0 + 10.0 * u; });
        total += forecast_trend(locreg::fit_tvp_ar(d, 1, KernelSpec{}), 1) - 20.0;
    }
    // boundary local-linear level is unbiased for a linear trend
    CHECK(std::abs(total / 40.0) < 0.25);
}

TEST_CASE("white noise forecasts sit at the level") {
    double gap = 0.0;
    for (std::uint64_t rep = 0; rep < 30; ++rep) {
        auto v = testing::normals(900, 700 + rep);
        for (auto& x : v) x += 20.0;
        ForecastConfig cfg;
        cfg.p = 1;
        const auto f = tvewd_forecast(v, cfg);
        gap += std::abs(f.value - f.trend);
    }
    CHECK(gap / 30.0 < 0.2);
}

TEST_CASE("forecast errors grow with the horizon on a persistent series") {
    double e1 = 0.0, e22 = 0.0;
    ForecastConfig cfg;
    cfg.p = 1;
    for (std::uint64_t rep = 0; rep < 60; ++rep) {
        const auto v = testing::tvar1_path(1022, 900 + rep, [](double) { return 0.95; }, [](double) { return 30.0; });
        const std::vector<double> sample(v.begin(), v.begin() + 1000);
        const auto model = EwdForecaster::time_varying(sample, cfg);
        e1 += std::abs(v[1000] - model.forecast(1).value);
        e22 += std::abs(v[1021] - model.forecast(22).value);
    }
    CHECK(e22 >= e1);
}

TEST_CASE("forecasts ignore data after the origin") {
    const auto v = testing::tvar1_path(1000, 31, [](double u) { return 0.5 + 0.3 * u; }, [](double) { return 15.0; });
    ForecastConfig cfg;
    const std::span<const double> prefix(v.data(), 850);
    const std::vector<double> copy(prefix.begin(), prefix.end());
    for (int h : {1, 5, 22}) {
        cfg.horizon = h;
        CHECK(tvewd_forecast(prefix, cfg).value == tvewd_forecast(copy, cfg).value);
    }
    CHECK(parse_projection("complete") == Projection::complete);
    CHECK_THROWS(parse_projection("iterated"));
}
