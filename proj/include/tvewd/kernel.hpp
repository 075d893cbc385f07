#pragma once

#include <string>
#include <string_view>

namespace tvewd {

enum class KernelFamily { epanechnikov, gaussian, uniform };

KernelFamily parse_kernel_family(std::string_view name);
std::string to_string(KernelFamily family);

/**
 * @brief Kernel used for localisation in rescaled time.
 *
 * `bandwidth` is a fraction of the sample (u = t/T units). `degree` is the
 * local polynomial order in time: 1 is local linear, 0 local constant.
 */
struct KernelSpec {
    KernelFamily family = KernelFamily::epanechnikov;
    double bandwidth = 0.3;
    int degree = 1;

    void validate() const;

    /// K(x) for x = (t/T - u) / bandwidth.
    [[nodiscard]] double weight(double x) const;

    /// Half-width of the support in x units; infinite for the Gaussian.
    [[nodiscard]] double radius() const;

    bool operator==(const KernelSpec&) const = default;
};

}  // namespace tvewd
