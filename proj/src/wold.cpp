#include "tvewd/wold.hpp"

#include "tvewd/errors.hpp"
#include "tvewd/text.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvewd::wold {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double haar_norm(int j) { return std::pow(2.0, -0.5 * j); }

void require_alpha_length(std::span<const double> alpha, const MultiscaleConfig& cfg) {
    cfg.validate();
    if (alpha.size() < cfg.truncation()) {
        throw std::invalid_argument("alpha has " + std::to_string(alpha.size()) + " coefficients; the decomposition needs 2^J*N = " +
                                    std::to_string(cfg.truncation()));
    }
}

}  // namespace

Coverage parse_coverage(std::string_view name) {
    if (name == "dyadic") {
        return Coverage::dyadic;
    }
    if (name == "uniform") {
        return Coverage::uniform;
    }
    throw ConfigError("unknown coverage '" + std::string(name) + "'");
}

std::string to_string(Coverage coverage) { return coverage == Coverage::dyadic ? "dyadic" : "uniform"; }

void MultiscaleConfig::validate() const {
    if (scales < 1 || scales > 20) {
        throw ConfigError("number of scales J must be in [1, 20]");
    }
    if (per_scale < 1) {
        throw ConfigError("per-scale coefficient count N must be positive");
    }
}

std::size_t MultiscaleConfig::count(int j) const {
    if (coverage == Coverage::uniform) {
        return static_cast<std::size_t>(per_scale);
    }
    return static_cast<std::size_t>(per_scale) << static_cast<unsigned>(scales - j);
}

std::vector<double> ar_to_ma(std::span<const double> phi, std::size_t H) {
    if (H < phi.size()) {
        throw std::invalid_argument("ar_to_ma: truncation H must be at least p");
    }
    std::vector<double> alpha(H + 1, 0.0);
    alpha[0] = 1.0;
    for (std::size_t h = 1; h <= H; ++h) {
        double sum = 0.0;
        const std::size_t top = std::min(h, phi.size());
        for (std::size_t i = 1; i <= top; ++i) {
            sum += phi[i - 1] * alpha[h - i];
        }
        if (!std::isfinite(sum)) {
            throw NumericalError("ar_to_ma: coefficient " + std::to_string(h) + " is not finite");
        }
        alpha[h] = sum;
    }
    return alpha;
}

bool exceeds_overflow_guard(std::span<const double> alpha) {
    double total = 0.0;
    for (double a : alpha) {
        total += std::abs(a);
    }
    return !(total <= kOverflowGuard);
}

std::vector<std::vector<double>> extended_wold_beta(std::span<const double> alpha, const MultiscaleConfig& cfg) {
    require_alpha_length(alpha, cfg);
    std::vector<std::vector<double>> beta(static_cast<std::size_t>(cfg.scales));
    for (int j = 1; j <= cfg.scales; ++j) {
        const std::size_t width = std::size_t{1} << static_cast<unsigned>(j);
        const std::size_t half = width / 2;
        const double norm = haar_norm(j);
        auto& out = beta[static_cast<std::size_t>(j - 1)];
        out.resize(cfg.count(j));
        for (std::size_t k = 0; k < out.size(); ++k) {
            const std::size_t base = k * width;
            double first = 0.0;
            double second = 0.0;
            for (std::size_t i = 0; i < half; ++i) {
                first += alpha[base + i];
                second += alpha[base + half + i];
            }
            out[k] = norm * (first - second);
        }
    }
    return beta;
}

std::vector<double> scaling_gamma(std::span<const double> alpha, const MultiscaleConfig& cfg) {
    require_alpha_length(alpha, cfg);
    const std::size_t width = std::size_t{1} << static_cast<unsigned>(cfg.scales);
    const double norm = haar_norm(cfg.scales);
    std::vector<double> gamma(static_cast<std::size_t>(cfg.per_scale));
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < width; ++i) {
            sum += alpha[k * width + i];
        }
        gamma[k] = norm * sum;
    }
    return gamma;
}

ScaleCoefficients scale_coefficients(std::span<const double> alpha, const MultiscaleConfig& cfg) {
    return {extended_wold_beta(alpha, cfg), scaling_gamma(alpha, cfg)};
}

ScaleInnovations scale_innovations(std::span<const double> eps, int scales) {
    if (scales < 1) {
        throw std::invalid_argument("scale_innovations: need at least one scale");
    }
    const std::size_t n = eps.size();
    ScaleInnovations out;
    out.detail.resize(static_cast<std::size_t>(scales));
    for (int j = 1; j <= scales; ++j) {
        const std::size_t width = std::size_t{1} << static_cast<unsigned>(j);
        const std::size_t half = width / 2;
        const double norm = haar_norm(j);
        auto& series = out.detail[static_cast<std::size_t>(j - 1)];
        series.first_valid = width - 1;
        series.values.assign(n, kNaN);
        for (std::size_t t = width - 1; t < n; ++t) {
            double recent = 0.0;
            double older = 0.0;
            for (std::size_t i = 0; i < half; ++i) {
                recent += eps[t - i];
                older += eps[t - half - i];
            }
            series.values[t] = norm * (recent - older);
        }
    }
    const std::size_t width = std::size_t{1} << static_cast<unsigned>(scales);
    const double norm = haar_norm(scales);
    out.scaling.first_valid = width - 1;
    out.scaling.values.assign(n, kNaN);
    for (std::size_t t = width - 1; t < n; ++t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < width; ++i) {
            sum += eps[t - i];
        }
        out.scaling.values[t] = norm * sum;
    }
    return out;
}

ScaleComponents scale_components(std::span<const ScaleCoefficients> coefficients, const ScaleInnovations& eps,
                                 const MultiscaleConfig& cfg) {
    cfg.validate();
    if (eps.detail.size() != static_cast<std::size_t>(cfg.scales)) {
        throw std::invalid_argument("scale_components: innovation scales do not match the configuration");
    }
    const std::size_t n = eps.scaling.size();
    if (coefficients.size() != 1 && coefficients.size() != n) {
        throw std::invalid_argument("scale_components: need one coefficient set per time point or a single set");
    }
    const auto coef_at = [&](std::size_t t) -> const ScaleCoefficients& {
        return coefficients.size() == 1 ? coefficients[0] : coefficients[t];
    };
    ScaleComponents out;
    out.detail.resize(static_cast<std::size_t>(cfg.scales));
    for (int j = 1; j <= cfg.scales; ++j) {
        const auto ji = static_cast<std::size_t>(j - 1);
        const std::size_t width = std::size_t{1} << static_cast<unsigned>(j);
        const std::size_t count = cfg.count(j);
        const auto& innov = eps.detail[ji];
        auto& comp = out.detail[ji];
        comp.first_valid = innov.first_valid + (count - 1) * width;
        comp.values.assign(n, kNaN);
        for (std::size_t t = comp.first_valid; t < n; ++t) {
            const auto& beta = coef_at(t).beta[ji];
            double sum = 0.0;
            for (std::size_t k = 0; k < count; ++k) {
                sum += beta[k] * innov.values[t - k * width];
            }
            comp.values[t] = sum;
        }
    }
    const std::size_t width = std::size_t{1} << static_cast<unsigned>(cfg.scales);
    const auto count = static_cast<std::size_t>(cfg.per_scale);
    out.residual.first_valid = eps.scaling.first_valid + (count - 1) * width;
    out.residual.values.assign(n, kNaN);
    for (std::size_t t = out.residual.first_valid; t < n; ++t) {
        const auto& gamma = coef_at(t).gamma;
        double sum = 0.0;
        for (std::size_t k = 0; k < count; ++k) {
            sum += gamma[k] * eps.scaling.values[t - k * width];
        }
        out.residual.values[t] = sum;
    }
    return out;
}

double companion_radius(std::span<const double> phi) {
    const auto p = static_cast<Eigen::Index>(phi.size());
    if (p == 0) {
        return 0.0;
    }
    if (p == 1) {
        return std::abs(phi[0]);
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        companion(0, i) = phi[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index i = 1; i < p; ++i) {
        companion(i, i - 1) = 1.0;
    }
    return Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> shrink_roots(std::span<const double> phi, double r) {
    std::vector<double> out(phi.begin(), phi.end());
    const double rho = companion_radius(phi);
    if (!(rho > r)) {
        return out;
    }
    const double c = r / rho;
    double scale = 1.0;
    for (auto& x : out) {
        scale *= c;
        x *= scale;
    }
    return out;
}

MultiscaleDecomposition decompose(std::span<const std::vector<double>> phi, std::span<const double> residuals,
                                  std::size_t offset, std::size_t sample_size, const MultiscaleConfig& cfg) {
    cfg.validate();
    if (phi.size() != 1 && phi.size() != residuals.size()) {
        throw std::invalid_argument("decompose: need AR coefficients per residual or a single set");
    }
    MultiscaleDecomposition out;
    out.config = cfg;
    out.offset = offset;
    out.sample_size = sample_size;
    const std::size_t H = cfg.truncation();
    out.coefficients.reserve(phi.size());
    out.explosive.reserve(phi.size());
    for (const auto& point : phi) {
        const auto alpha = ar_to_ma(point, std::max(H, point.size()));
        out.explosive.push_back(exceeds_overflow_guard(alpha));
        out.coefficients.push_back(scale_coefficients(alpha, cfg));
    }
    out.residuals.assign(residuals.begin(), residuals.end());
    out.innovations = scale_innovations(residuals, cfg.scales);
    out.components = scale_components(out.coefficients, out.innovations, cfg);
    if (out.coefficients.size() == 1 && residuals.size() != 1) {
        out.coefficients.resize(residuals.size(), out.coefficients.front());
        out.explosive.resize(residuals.size(), out.explosive.front());
    }
    return out;
}

MultiscaleDecomposition decompose(const locreg::TvpArFit& fit, const MultiscaleConfig& cfg) {
    std::vector<std::vector<double>> phi(fit.grid_size());
    for (std::size_t g = 0; g < phi.size(); ++g) {
        phi[g] = fit.coefficients_at(g);
    }
    return decompose(phi, fit.residuals, fit.order, fit.sample_size, cfg);
}

ShareMode parse_share_mode(std::string_view name) {
    if (name == "signed") {
        return ShareMode::signed_ratio;
    }
    if (name == "absolute") {
        return ShareMode::absolute;
    }
    throw ConfigError("unknown share mode '" + std::string(name) + "'");
}

std::string to_string(ShareMode mode) { return mode == ShareMode::signed_ratio ? "signed" : "absolute"; }

PersistenceShares persistence_shares(std::span<const ScaleCoefficients> coefficients, ShareMode mode,
                                     std::size_t k0) {
    PersistenceShares out;
    out.mode = mode;
    out.scales = coefficients.empty() ? 0 : coefficients.front().beta.size();
    out.values.assign(coefficients.size() * out.scales, kNaN);
    out.defined.assign(coefficients.size(), false);
    out.negative_denominator.assign(coefficients.size(), false);
    for (std::size_t r = 0; r < coefficients.size(); ++r) {
        const auto& beta = coefficients[r].beta;
        double denominator = 0.0;
        double magnitude = 0.0;
        for (const auto& scale : beta) {
            if (k0 >= scale.size()) {
                throw std::invalid_argument("persistence_shares: shift k0 outside the kept coefficients");
            }
            const double b = mode == ShareMode::absolute ? std::abs(scale[k0]) : scale[k0];
            denominator += b;
            magnitude += std::abs(scale[k0]);
        }
        if (!(magnitude > 0.0) || std::abs(denominator) <= 1e-12 * magnitude) {
            continue;
        }
        out.defined[r] = true;
        out.negative_denominator[r] = denominator < 0.0;
        for (std::size_t j = 0; j < beta.size(); ++j) {
            const double b = mode == ShareMode::absolute ? std::abs(beta[j][k0]) : beta[j][k0];
            out.values[r * out.scales + j] = b / denominator;
        }
    }
    return out;
}

PersistenceShares persistence_shares(const MultiscaleDecomposition& decomposition, ShareMode mode, std::size_t k0) {
    return persistence_shares(decomposition.coefficients, mode, k0);
}

std::string beta_surface_csv(const MultiscaleDecomposition& decomposition, std::size_t max_k) {
    std::string out = "u,j,k,beta\n";
    for (std::size_t g = 0; g < decomposition.size(); ++g) {
        const auto u = format_double(decomposition.grid_point(g));
        const auto& beta = decomposition.coefficients[g].beta;
        for (std::size_t j = 0; j < beta.size(); ++j) {
            const std::size_t top = std::min(max_k, beta[j].size());
            for (std::size_t k = 0; k < top; ++k) {
                out += u + ',' + std::to_string(j + 1) + ',' + std::to_string(k) + ',' + format_double(beta[j][k]) + '\n';
            }
        }
    }
    return out;
}

std::string shares_csv(const PersistenceShares& shares, std::span<const Date> dates) {
    if (dates.size() != shares.rows()) {
        throw std::invalid_argument("shares_csv: one date per share row required");
    }
    std::string out = "date,j,share\n";
    for (std::size_t r = 0; r < shares.rows(); ++r) {
        if (!shares.defined[r]) {
            continue;
        }
        const auto date = format_date(dates[r]);
        for (std::size_t j = 0; j < shares.scales; ++j) {
            out += date + ',' + std::to_string(j + 1) + ',' + format_double(shares.values[r * shares.scales + j]) + '\n';
        }
    }
    return out;
}

}  // namespace tvewd::wold
