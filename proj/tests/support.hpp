#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace testing {

inline std::vector<double> normals(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, sd);
    std::vector<double> out(n);
    for (auto& x : out) {
        x = z(rng);
    }
    return out;
}

// AR(1) path with coefficient phi(u), level mu(u), unit-variance shocks, burn-in at u = 1/T.
inline std::vector<double> tvar1_path(std::size_t T, std::uint64_t seed, const std::function<double(double)>& phi,
                                      const std::function<double(double)>& mu = [](double) { return 0.0; },
                                      double sd = 1.0) {
    const std::size_t burn = 200;
    const auto z = normals(T + burn, seed, sd);
    std::vector<double> out;
    out.reserve(T);
    double dev = 0.0;
    for (std::size_t s = 0; s < T + burn; ++s) {
        const double u = s < burn ? 1.0 / static_cast<double>(T) : static_cast<double>(s - burn + 1) / static_cast<double>(T);
        dev = phi(u) * dev + z[s];
        if (s >= burn) {
            out.push_back(mu(u) + dev);
        }
    }
    return out;
}

// Truncated MA sum_{h<H} alpha(h) eps_{t-h}.
inline double truncated_ma(const std::vector<double>& alpha, const std::vector<double>& eps, std::size_t t, std::size_t H) {
    double sum = 0.0;
    for (std::size_t h = 0; h < H; ++h) {
        sum += alpha[h] * eps[t - h];
    }
    return sum;
}

// Weighted least squares via column-pivoted QR on sqrt(w)-scaled rows.
inline Eigen::VectorXd dense_wls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
    const Eigen::VectorXd s = w.cwiseSqrt();
    const Eigen::MatrixXd Xs = s.asDiagonal() * X;
    const Eigen::VectorXd ys = s.asDiagonal() * y;
    return Xs.colPivHouseholderQr().solve(ys);
}

inline double lag1_autocorrelation(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        den += (x[t] - mean) * (x[t] - mean);
        if (t > 0) num += (x[t] - mean) * (x[t - 1] - mean);
    }
    return num / den;
}

}  // namespace testing
