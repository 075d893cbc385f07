#include "tvewd/sim.hpp"

#include "tvewd/errors.hpp"
#include "tvewd/text.hpp"
#include "tvewd/wold.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace tvewd::sim {

using nlohmann::json;

namespace {

constexpr double kRootTolerance = 1e-8;

void reject_unknown(const json& object, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& [key, value] : object.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + path + key + "'");
        }
    }
}

template <typename T>
T get_as(const json& object, const std::string& key, const std::string& path) {
    try {
        return object.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("invalid or missing value for '" + path + key + "'");
    }
}

Curve curve_from_json(const json& node, const std::string& path) {
    if (node.is_number()) {
        return Curve::constant(node.get<double>());
    }
    if (!node.is_object()) {
        throw ConfigError("'" + path + "' must be a number or a curve object");
    }
    const auto type = get_as<std::string>(node, "type", path + ".");
    const std::string prefix = path + ".";
    if (type == "constant") {
        reject_unknown(node, {"type", "value"}, prefix);
        return Curve::constant(get_as<double>(node, "value", prefix));
    }
    if (type == "linear") {
        reject_unknown(node, {"type", "start", "end"}, prefix);
        return Curve::linear(get_as<double>(node, "start", prefix), get_as<double>(node, "end", prefix));
    }
    if (type == "sinusoid") {
        reject_unknown(node, {"type", "mean", "amplitude", "frequency", "phase"}, prefix);
        return Curve::sinusoid(get_as<double>(node, "mean", prefix), get_as<double>(node, "amplitude", prefix),
                               node.contains("frequency") ? get_as<double>(node, "frequency", prefix) : 1.0,
                               node.contains("phase") ? get_as<double>(node, "phase", prefix) : 0.0);
    }
    if (type == "piecewise") {
        reject_unknown(node, {"type", "knots", "values"}, prefix);
        return Curve::piecewise(get_as<std::vector<double>>(node, "knots", prefix),
                                get_as<std::vector<double>>(node, "values", prefix));
    }
    throw ConfigError("unknown curve type '" + type + "' at '" + path + ".type'");
}

json curve_to_json(const Curve& c) {
    switch (c.kind) {
        case Curve::Kind::constant:
            return json{{"type", "constant"}, {"value", c.a}};
        case Curve::Kind::linear:
            return json{{"type", "linear"}, {"start", c.a}, {"end", c.b}};
        case Curve::Kind::sinusoid:
            return json{{"type", "sinusoid"}, {"mean", c.a}, {"amplitude", c.b}, {"frequency", c.frequency},
                        {"phase", c.phase}};
        case Curve::Kind::piecewise:
            return json{{"type", "piecewise"}, {"knots", c.knots}, {"values", c.values}};
    }
    return {};
}

}  // namespace

Curve Curve::constant(double value) {
    Curve c;
    c.a = value;
    return c;
}

Curve Curve::linear(double start, double end) {
    Curve c;
    c.kind = Kind::linear;
    c.a = start;
    c.b = end;
    return c;
}

Curve Curve::sinusoid(double mean, double amplitude, double frequency, double phase) {
    Curve c;
    c.kind = Kind::sinusoid;
    c.a = mean;
    c.b = amplitude;
    c.frequency = frequency;
    c.phase = phase;
    return c;
}

Curve Curve::piecewise(std::vector<double> knots, std::vector<double> values) {
    Curve c;
    c.kind = Kind::piecewise;
    c.knots = std::move(knots);
    c.values = std::move(values);
    return c;
}

double Curve::operator()(double u) const {
    switch (kind) {
        case Kind::constant:
            return a;
        case Kind::linear:
            return a + (b - a) * u;
        case Kind::sinusoid:
            return a + b * std::sin(2.0 * std::numbers::pi * frequency * u + phase);
        case Kind::piecewise: {
            if (u <= knots.front()) {
                return values.front();
            }
            if (u >= knots.back()) {
                return values.back();
            }
            const auto it = std::upper_bound(knots.begin(), knots.end(), u);
            const auto i = static_cast<std::size_t>(it - knots.begin());
            const double w = (u - knots[i - 1]) / (knots[i] - knots[i - 1]);
            return values[i - 1] + w * (values[i] - values[i - 1]);
        }
    }
    return a;
}

void Curve::validate(const std::string& name) const {
    const auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(a) || !finite(b) || !finite(frequency) || !finite(phase)) {
        throw ConfigError(name + ": curve parameters must be finite");
    }
    if (kind == Kind::piecewise) {
        if (knots.size() < 2 || knots.size() != values.size()) {
            throw ConfigError(name + ": piecewise curve needs matching knots and values (at least two)");
        }
        if (!std::all_of(knots.begin(), knots.end(), finite) || !std::all_of(values.begin(), values.end(), finite)) {
            throw ConfigError(name + ": piecewise knots and values must be finite");
        }
        for (std::size_t i = 1; i < knots.size(); ++i) {
            if (!(knots[i] > knots[i - 1])) {
                throw ConfigError(name + ": piecewise knots must be strictly increasing");
            }
        }
    }
}

void TvpArScenario::validate() const {
    if (p < 1) {
        throw ConfigError("scenario: p must be at least 1");
    }
    if (phi.size() != p) {
        throw ConfigError("scenario: expected " + std::to_string(p) + " phi curves, got " + std::to_string(phi.size()));
    }
    for (std::size_t i = 0; i < p; ++i) {
        phi[i].validate("scenario.phi[" + std::to_string(i) + "]");
    }
    intercept.validate("scenario.intercept");
    sigma.validate("scenario.sigma");
    if (T < 1) {
        throw ConfigError("scenario: T must be positive");
    }
    for (int i = 0; i <= 100; ++i) {
        if (!(sigma(i / 100.0) >= 0.0)) {
            throw ConfigError("scenario: sigma curve must be nonnegative");
        }
    }
    parse_date(start_date);
}

TvpArScenario parse_scenario(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario: malformed JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("scenario: top level must be an object");
    }
    reject_unknown(root, {"label", "p", "T", "seed", "burn_in", "form", "start_date", "phi", "intercept", "sigma"}, "");
    TvpArScenario s;
    if (root.contains("label")) s.label = get_as<std::string>(root, "label", "");
    if (root.contains("T")) s.T = get_as<std::size_t>(root, "T", "");
    if (root.contains("seed")) s.seed = get_as<std::uint64_t>(root, "seed", "");
    if (root.contains("burn_in")) s.burn_in = get_as<std::size_t>(root, "burn_in", "");
    if (root.contains("start_date")) s.start_date = get_as<std::string>(root, "start_date", "");
    if (root.contains("form")) {
        const auto form = get_as<std::string>(root, "form", "");
        if (form == "intercept") {
            s.form = InterceptForm::intercept;
        } else if (form == "mean") {
            s.form = InterceptForm::mean;
        } else {
            throw ConfigError("invalid value for 'form': expected intercept or mean");
        }
    }
    if (!root.contains("phi") || !root["phi"].is_array()) {
        throw ConfigError("scenario: 'phi' must be an array of curves");
    }
    for (std::size_t i = 0; i < root["phi"].size(); ++i) {
        s.phi.push_back(curve_from_json(root["phi"][i], "phi[" + std::to_string(i) + "]"));
    }
    s.p = root.contains("p") ? get_as<std::size_t>(root, "p", "") : s.phi.size();
    if (root.contains("intercept")) s.intercept = curve_from_json(root["intercept"], "intercept");
    if (root.contains("sigma")) s.sigma = curve_from_json(root["sigma"], "sigma");
    s.validate();
    return s;
}

std::string scenario_json(const TvpArScenario& s) {
    json root;
    root["label"] = s.label;
    root["p"] = s.p;
    root["T"] = s.T;
    root["seed"] = s.seed;
    root["burn_in"] = s.burn_in;
    root["form"] = s.form == InterceptForm::intercept ? "intercept" : "mean";
    root["start_date"] = s.start_date;
    root["phi"] = json::array();
    for (const auto& c : s.phi) {
        root["phi"].push_back(curve_to_json(c));
    }
    root["intercept"] = curve_to_json(s.intercept);
    root["sigma"] = curve_to_json(s.sigma);
    return root.dump(2) + "\n";
}

double companion_radius(const std::vector<double>& phi) { return wold::companion_radius(phi); }

VolatilitySeries Simulation::series(const std::string& label) const { return {label, dates, values}; }

Simulation simulate(const TvpArScenario& s) {
    s.validate();
    const std::size_t burn = s.effective_burn_in();
    const std::size_t total = burn + s.T;
    const double T = static_cast<double>(s.T);
    // burn-in draws use the coefficients at the first retained point
    const auto time_of = [&](std::size_t step) {
        return step < burn ? 1.0 / T : static_cast<double>(step - burn + 1) / T;
    };
    const auto phi_at = [&](double u) {
        std::vector<double> phi(s.p);
        for (std::size_t i = 0; i < s.p; ++i) {
            phi[i] = s.phi[i](u);
        }
        return phi;
    };
    const auto level_at = [&](double u, const std::vector<double>& phi) {
        if (s.form == InterceptForm::mean) {
            return s.intercept(u);
        }
        double sum = 0.0;
        for (double c : phi) {
            sum += c;
        }
        return std::abs(1.0 - sum) > 1e-12 ? s.intercept(u) / (1.0 - sum) : s.intercept(u);
    };

    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double u0 = time_of(0);
    const double start_level = level_at(u0, phi_at(u0));
    // pre-sample lags sit at the local mean
    std::vector<double> v(total + s.p, start_level);
    std::vector<double> mu(total + s.p, start_level);

    Simulation out;
    out.values.reserve(s.T);
    auto& truth = out.truth;
    truth.phi.assign(s.p, {});
    for (std::size_t step = 0; step < total; ++step) {
        const double u = time_of(step);
        const auto phi = phi_at(u);
        const double sig = s.sigma(u);
        const double shock = sig * normal(rng);
        const std::size_t t = step + s.p;
        mu[t] = level_at(u, phi);
        double value = 0.0;
        if (s.form == InterceptForm::intercept) {
            value = s.intercept(u) + shock;
            for (std::size_t i = 0; i < s.p; ++i) {
                value += phi[i] * v[t - 1 - i];
            }
        } else {
            value = mu[t] + shock;
            for (std::size_t i = 0; i < s.p; ++i) {
                value += phi[i] * (v[t - 1 - i] - mu[t - 1 - i]);
            }
        }
        v[t] = value;
        if (step < burn) {
            continue;
        }
        const double radius = companion_radius(phi);
        out.values.push_back(value);
        truth.u.push_back(u);
        for (std::size_t i = 0; i < s.p; ++i) {
            truth.phi[i].push_back(phi[i]);
        }
        truth.intercept.push_back(s.intercept(u));
        truth.level.push_back(mu[t]);
        truth.sigma.push_back(sig);
        truth.innovations.push_back(shock);
        truth.spectral_radius.push_back(radius);
        if (radius >= 1.0 - kRootTolerance) {
            ++out.explosive_points;
        }
    }
    out.explosive = out.explosive_points > 0;
    out.dates = business_days(parse_date(s.start_date), s.T);
    return out;
}

std::string truth_csv(const Simulation& sim) {
    const auto& g = sim.truth;
    std::string out = "u";
    for (std::size_t i = 0; i < g.phi.size(); ++i) {
        out += ",phi" + std::to_string(i + 1);
    }
    out += ",intercept,level,sigma,innovation,radius\n";
    for (std::size_t t = 0; t < g.u.size(); ++t) {
        out += format_double(g.u[t]);
        for (const auto& curve : g.phi) {
            out += ',' + format_double(curve[t]);
        }
        for (double x : {g.intercept[t], g.level[t], g.sigma[t], g.innovations[t], g.spectral_radius[t]}) {
            out += ',' + format_double(x);
        }
        out += '\n';
    }
    return out;
}

}  // namespace tvewd::sim
