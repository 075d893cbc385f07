#include "tvewd/models.hpp"

#include "tvewd/benchmarks.hpp"

#include <optional>

namespace tvewd::models {

namespace {

class Har final : public ForecastModel {
public:
    [[nodiscard]] std::string name() const override { return "HAR"; }
    [[nodiscard]] std::vector<double> forecast(std::span<const double> sample,
                                               std::span<const int> horizons) const override {
        std::vector<double> out;
        for (int h : horizons) {
            out.push_back(benchmarks::har_fit_forecast(sample, h, sample.size()));
        }
        return out;
    }
};

class TvHar final : public ForecastModel {
public:
    explicit TvHar(KernelSpec kernel) : kernel_(kernel) {}
    [[nodiscard]] std::string name() const override { return "TVHAR"; }
    [[nodiscard]] std::vector<double> forecast(std::span<const double> sample,
                                               std::span<const int> horizons) const override {
        std::vector<double> out;
        for (int h : horizons) {
            out.push_back(benchmarks::tvhar_fit_forecast(sample, h, kernel_, sample.size()));
        }
        return out;
    }

private:
    KernelSpec kernel_;
};

class TvAr final : public ForecastModel {
public:
    TvAr(std::size_t p, KernelSpec kernel) : p_(p), kernel_(kernel) {}
    [[nodiscard]] std::string name() const override { return "TVAR"; }
    [[nodiscard]] std::vector<double> forecast(std::span<const double> sample,
                                               std::span<const int> horizons) const override {
        std::vector<double> out;
        if (p_ == 0) {
            for (int h : horizons) {
                out.push_back(benchmarks::tvar_forecast(sample, 0, h, kernel_));
            }
            return out;
        }
        const auto fit = locreg::boundary_fit(sample, p_, kernel_, true);
        for (int h : horizons) {
            out.push_back(fit.level + benchmarks::iterate_ar(fit.phi, fit.recent_centered, h));
        }
        return out;
    }

private:
    std::size_t p_;
    KernelSpec kernel_;
};

class StaticEwd final : public ForecastModel {
public:
    StaticEwd(std::size_t p, wold::MultiscaleConfig cfg, std::size_t span, std::size_t weight_window,
              forecast::Projection projection, bool include_residual)
        : p_(p),
          cfg_(cfg),
          span_(span),
          weight_window_(weight_window),
          projection_(projection),
          include_residual_(include_residual) {}
    [[nodiscard]] std::string name() const override { return "EWD"; }
    [[nodiscard]] std::vector<double> forecast(std::span<const double> sample,
                                               std::span<const int> horizons) const override {
        const std::size_t window = span_ == 0 || span_ > sample.size() ? sample.size() : span_;
        const auto model =
            benchmarks::static_ewd(sample, p_, cfg_, window, weight_window_, projection_, include_residual_);
        std::vector<double> out;
        for (int h : horizons) {
            out.push_back(model.forecast(h).value);
        }
        return out;
    }

private:
    std::size_t p_;
    wold::MultiscaleConfig cfg_;
    std::size_t span_;
    std::size_t weight_window_;
    forecast::Projection projection_;
    bool include_residual_;
};

class TvEwd final : public ForecastModel {
public:
    TvEwd(forecast::ForecastConfig cfg, std::map<int, std::size_t> lags) : cfg_(cfg), lags_(std::move(lags)) {}
    [[nodiscard]] std::string name() const override { return "TVEWD"; }
    [[nodiscard]] std::vector<double> forecast(std::span<const double> sample,
                                               std::span<const int> horizons) const override {
        // one fit per distinct lag order
        std::map<std::size_t, forecast::EwdForecaster> fitted;
        std::vector<double> out;
        for (int h : horizons) {
            const auto it = lags_.find(h);
            const std::size_t p = it == lags_.end() ? cfg_.p : it->second;
            auto found = fitted.find(p);
            if (found == fitted.end()) {
                auto cfg = cfg_;
                cfg.p = p;
                found = fitted.emplace(p, forecast::EwdForecaster::time_varying(sample, cfg)).first;
            }
            out.push_back(found->second.forecast(h).value);
        }
        return out;
    }

private:
    forecast::ForecastConfig cfg_;
    std::map<int, std::size_t> lags_;
};

}  // namespace

ModelPtr make_har() { return std::make_shared<Har>(); }
ModelPtr make_tvhar(const KernelSpec& kernel) { return std::make_shared<TvHar>(kernel); }
ModelPtr make_tvar(std::size_t p, const KernelSpec& kernel) { return std::make_shared<TvAr>(p, kernel); }
ModelPtr make_ewd(std::size_t p, const wold::MultiscaleConfig& cfg, std::size_t span, std::size_t weight_window,
                  forecast::Projection projection, bool include_residual) {
    return std::make_shared<StaticEwd>(p, cfg, span, weight_window, projection, include_residual);
}
ModelPtr make_tvewd(const forecast::ForecastConfig& cfg, std::map<int, std::size_t> lags_by_horizon) {
    return std::make_shared<TvEwd>(cfg, std::move(lags_by_horizon));
}

}  // namespace tvewd::models
