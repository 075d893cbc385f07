#pragma once

#include "tvewd/series.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tvewd::sim {

/// A bounded parametric function of rescaled time u in [0, 1].
struct Curve {
    enum class Kind { constant, linear, sinusoid, piecewise };

    Kind kind = Kind::constant;
    // constant: a; linear: a + (b - a)·u; sinusoid: a + b·sin(2π·frequency·u + phase)
    double a = 0.0;
    double b = 0.0;
    double frequency = 1.0;
    double phase = 0.0;
    // piecewise linear through (knots[i], values[i]), flat outside
    std::vector<double> knots;
    std::vector<double> values;

    static Curve constant(double value);
    static Curve linear(double start, double end);
    static Curve sinusoid(double mean, double amplitude, double frequency = 1.0, double phase = 0.0);
    static Curve piecewise(std::vector<double> knots, std::vector<double> values);

    [[nodiscard]] double operator()(double u) const;
    void validate(const std::string& name) const;
};

enum class InterceptForm {
    intercept,  // v_t = φ0(u) + Σ φ_i(u) v_{t-i} + σ(u) z_t
    mean,       // v_t - μ(u) = Σ φ_i(u) (v_{t-i} - μ(u_{t-i})) + σ(u) z_t, with μ = the intercept curve
};

struct TvpArScenario {
    std::string label = "sim";
    std::size_t p = 1;
    std::vector<Curve> phi;  // φ_1..φ_p
    Curve intercept = Curve::constant(0.0);
    Curve sigma = Curve::constant(1.0);
    InterceptForm form = InterceptForm::intercept;
    std::size_t T = 1000;
    std::uint64_t seed = 1;
    std::size_t burn_in = 0;  // 0 selects 10·p
    std::string start_date = "2000-01-03";

    void validate() const;
    [[nodiscard]] std::size_t effective_burn_in() const { return burn_in == 0 ? 10 * p : burn_in; }
};

/**
 * JSON scenario file: {"label", "p", "T", "seed", "burn_in", "form", "start_date",
 * "phi": [curve...], "intercept": curve, "sigma": curve}, where a curve is a
 * number (constant) or {"type": "constant"|"linear"|"sinusoid"|"piecewise", ...}.
 * Unknown keys are ConfigErrors naming the key.
 */
TvpArScenario parse_scenario(std::string_view json_text);
std::string scenario_json(const TvpArScenario& scenario);

/// Ground truth at each retained observation t = 1..T (index t-1).
struct GroundTruth {
    std::vector<double> u;
    std::vector<std::vector<double>> phi;  // [i][t], i = 0..p-1
    std::vector<double> intercept;
    std::vector<double> level;  // local mean φ0/(1 - Σφ) or μ(u)
    std::vector<double> sigma;
    std::vector<double> innovations;  // σ(u_t)·z_t
    std::vector<double> spectral_radius;
};

struct Simulation {
    std::vector<double> values;
    std::vector<Date> dates;
    GroundTruth truth;
    std::size_t explosive_points = 0;  // companion spectral radius >= 1 - tolerance
    bool explosive = false;

    /// As a VolatilitySeries (validated on store).
    [[nodiscard]] VolatilitySeries series(const std::string& label) const;
};

/// Spectral radius of the AR companion matrix.
double companion_radius(const std::vector<double>& phi);

Simulation simulate(const TvpArScenario& scenario);

/// `u,phi1..phip,intercept,level,sigma,innovation,radius`
std::string truth_csv(const Simulation& sim);

}  // namespace tvewd::sim
