#include "tvewd/kernel.hpp"

#include "tvewd/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace tvewd {

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "epanechnikov") {
        return KernelFamily::epanechnikov;
    }
    if (name == "gaussian") {
        return KernelFamily::gaussian;
    }
    if (name == "uniform") {
        return KernelFamily::uniform;
    }
    throw ConfigError("unknown kernel family '" + std::string(name) + "'");
}

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::epanechnikov:
            return "epanechnikov";
        case KernelFamily::gaussian:
            return "gaussian";
        case KernelFamily::uniform:
            return "uniform";
    }
    return "unknown";
}

void KernelSpec::validate() const {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw ConfigError("kernel bandwidth must be positive and finite");
    }
    if (degree != 0 && degree != 1) {
        throw ConfigError("kernel degree must be 0 (local constant) or 1 (local linear)");
    }
}

double KernelSpec::weight(double x) const {
    switch (family) {
        case KernelFamily::epanechnikov:
            return std::abs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0;
        case KernelFamily::uniform:
            return std::abs(x) <= 1.0 ? 0.5 : 0.0;
        case KernelFamily::gaussian:
            return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    }
    return 0.0;
}

double KernelSpec::radius() const {
    return family == KernelFamily::gaussian ? std::numeric_limits<double>::infinity() : 1.0;
}

}  // namespace tvewd
