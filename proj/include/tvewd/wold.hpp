#pragma once

#include "tvewd/locreg.hpp"
#include "tvewd/series.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tvewd::wold {

/// How many time shifts k each detail scale keeps.
///  - dyadic: scale j keeps N * 2^(J-j) shifts, so every scale spans the
///    same H = N * 2^J lags and the Haar transform of alpha[0, H) is complete.
///  - uniform: every scale keeps N shifts; lags beyond N * 2^j at fine
///    scales are dropped.
enum class Coverage { dyadic, uniform };

Coverage parse_coverage(std::string_view name);
std::string to_string(Coverage coverage);

struct MultiscaleConfig {
    int scales = 7;     // J
    int per_scale = 4;  // N
    Coverage coverage = Coverage::dyadic;

    void validate() const;
    /// H = N * 2^J, the number of MA coefficients the decomposition consumes.
    [[nodiscard]] std::size_t truncation() const {
        return static_cast<std::size_t>(per_scale) << static_cast<unsigned>(scales);
    }
    /// Number of shifts k kept at scale j (1-based).
    [[nodiscard]] std::size_t count(int j) const;

    bool operator==(const MultiscaleConfig&) const = default;
};

/// Spectral radius of the AR(p) companion matrix.
double companion_radius(std::span<const double> phi);

/// phi_i * (r / rho)^i when the companion radius rho exceeds r, which moves every root onto radius r.
std::vector<double> shrink_roots(std::span<const double> phi, double r);

/// Sum |alpha| beyond which an MA sequence is flagged explosive.
inline constexpr double kOverflowGuard = 1e12;

/**
 * MA(infinity) coefficients of an AR(p), truncated: alpha(0) = 1,
 * alpha(h) = sum_{i=1..min(h,p)} phi_i alpha(h-i), h = 1..H.
 *
 * @throws NumericalError if a coefficient overflows to a non-finite value.
 */
std::vector<double> ar_to_ma(std::span<const double> phi, std::size_t H);
bool exceeds_overflow_guard(std::span<const double> alpha);

/// beta[j-1][k]: Haar detail coefficient of alpha at scale j, shift k.
std::vector<std::vector<double>> extended_wold_beta(std::span<const double> alpha, const MultiscaleConfig& cfg);
/// gamma[k] = 2^(-J/2) * sum_{i<2^J} alpha(k 2^J + i), k = 0..N-1.
std::vector<double> scaling_gamma(std::span<const double> alpha, const MultiscaleConfig& cfg);

struct ScaleCoefficients {
    std::vector<std::vector<double>> beta;
    std::vector<double> gamma;
};
ScaleCoefficients scale_coefficients(std::span<const double> alpha, const MultiscaleConfig& cfg);

/// A series whose leading entries are undefined. Undefined entries hold NaN.
struct ScaleSeries {
    std::size_t first_valid = 0;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] bool valid(std::size_t i) const { return i >= first_valid && i < values.size(); }
};

struct ScaleInnovations {
    std::vector<ScaleSeries> detail;  // epsilon^{j}, j = 1..J
    ScaleSeries scaling;              // epsilon^{(J)}
};

/// Haar-filtered innovations; the first 2^j - 1 entries of scale j are undefined.
ScaleInnovations scale_innovations(std::span<const double> eps, int scales);

struct ScaleComponents {
    std::vector<ScaleSeries> detail;  // v^{j}
    ScaleSeries residual;             // pi^{J}
};

/**
 * v^{j}_t = sum_k beta^{j}_t(k) eps^{j}_{t - k 2^j} and
 * pi^{J}_t = sum_k gamma_t(k) eps^{(J)}_{t - k 2^J}.
 *
 * `coefficients` has one entry per innovation index (time-varying) or a
 * single entry applied to every t.
 */
ScaleComponents scale_components(std::span<const ScaleCoefficients> coefficients, const ScaleInnovations& eps,
                                 const MultiscaleConfig& cfg);

/**
 * @brief Time-varying multiscale structure estimated from a TVP-AR fit.
 *
 * Entry g of every per-point vector belongs to observation offset + g
 * (0-based), i.e. rescaled time (offset + g + 1) / sample_size.
 */
struct MultiscaleDecomposition {
    MultiscaleConfig config;
    std::size_t offset = 0;
    std::size_t sample_size = 0;
    std::vector<ScaleCoefficients> coefficients;
    std::vector<bool> explosive;
    std::vector<double> residuals;  // the shocks the innovations are built from
    ScaleInnovations innovations;
    ScaleComponents components;

    [[nodiscard]] std::size_t size() const { return coefficients.size(); }
    [[nodiscard]] double grid_point(std::size_t g) const {
        return static_cast<double>(offset + g + 1) / static_cast<double>(sample_size);
    }
};

/**
 * Per-point alpha from the fitted AR curves, their Haar coefficients, the
 * scale innovations of the residuals and the scale components.
 *
 * @throws std::invalid_argument if the configuration is invalid.
 */
MultiscaleDecomposition decompose(const locreg::TvpArFit& fit, const MultiscaleConfig& cfg);

/**
 * Same pipeline from explicit AR coefficients. `phi` holds one vector per
 * residual or a single vector (time-invariant model).
 */
MultiscaleDecomposition decompose(std::span<const std::vector<double>> phi, std::span<const double> residuals,
                                  std::size_t offset, std::size_t sample_size, const MultiscaleConfig& cfg);

enum class ShareMode { signed_ratio, absolute };
ShareMode parse_share_mode(std::string_view name);
std::string to_string(ShareMode mode);

/**
 * @brief share(t, j) = beta^{j}(t/T, k0) / sum_j beta^{j}(t/T, k0).
 *
 * Absolute mode uses |beta| in numerator and denominator. Rows with a zero
 * denominator are undefined (NaN); signed-mode rows with a negative
 * denominator are kept and flagged.
 */
struct PersistenceShares {
    ShareMode mode = ShareMode::absolute;
    std::size_t scales = 0;
    std::vector<double> values;  // row-major rows() x scales
    std::vector<bool> defined;
    std::vector<bool> negative_denominator;

    [[nodiscard]] std::size_t rows() const { return defined.size(); }
    [[nodiscard]] double at(std::size_t row, int j) const {
        return values[row * scales + static_cast<std::size_t>(j - 1)];
    }
};

PersistenceShares persistence_shares(std::span<const ScaleCoefficients> coefficients, ShareMode mode,
                                     std::size_t k0 = 0);
PersistenceShares persistence_shares(const MultiscaleDecomposition& decomposition, ShareMode mode,
                                     std::size_t k0 = 0);

/// CSV `u,j,k,beta`, shifts k < max_k per scale.
std::string beta_surface_csv(const MultiscaleDecomposition& decomposition, std::size_t max_k);
/// CSV `date,j,share`; `dates` are the dates of each share row. Undefined rows are skipped.
std::string shares_csv(const PersistenceShares& shares, std::span<const Date> dates);

}  // namespace tvewd::wold
