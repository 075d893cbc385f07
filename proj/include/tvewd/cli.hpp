#pragma once

#include "tvewd/eval.hpp"
#include "tvewd/forecast.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tvewd::cli {

struct RvOptions {
    std::string format = "ticks";  // ticks | rv
    std::string day_cutoff = "00:00";
    std::string session_open = "00:00";
    int bins = 288;
    int bin_minutes = 5;
    std::vector<std::string> holidays;
    bool year_end_rules = true;
    std::string label;  // empty = input file stem
};

struct GridOptions {
    std::vector<std::size_t> p{2, 3, 5};
    std::vector<double> bandwidth{0.2, 0.3, 0.5};
    std::vector<int> per_scale{4};
};

/**
 * @brief Fully resolved settings of one CLI run.
 *
 * Resolution order: defaults, named preset, config file, command-line flags.
 */
struct RunConfig {
    std::string command;
    std::string input;
    std::string output;
    std::string preset;
    std::string instrument;  // empty = input file stem
    std::uint64_t seed = 1;
    unsigned jobs = 1;

    forecast::ForecastConfig forecast;
    std::map<int, std::size_t> lags_by_horizon;
    eval::RollingPlan plan;
    std::vector<std::string> models{"HAR", "TVHAR", "TVAR", "EWD", "TVEWD"};
    std::string benchmark = "TVHAR";
    std::size_t tvar_p = 3;
    std::size_t ewd_p = 3;
    std::size_t ewd_span = 0;
    int ewd_scales = 7;

    std::size_t share_k0 = 0;
    std::size_t beta_max_k = 16;

    RvOptions rv;
    GridOptions grid;
    std::optional<std::string> scenario;  // JSON text of an inline scenario

    void validate() const;
    /// AR order used for horizon h.
    [[nodiscard]] std::size_t lag_for(int h) const;
};

/// Names of the built-in presets.
std::vector<std::string> preset_names();

/// Window, depth, bandwidth and per-instrument lags of a named preset.
void apply_preset(RunConfig& cfg, const std::string& preset, const std::string& instrument);

/// Overlays a JSON config document; unknown keys raise a ConfigError naming the key path.
void apply_config_json(RunConfig& cfg, std::string_view json_text);

std::string config_json(const RunConfig& cfg);

std::vector<models::ModelPtr> build_models(const RunConfig& cfg);

void cmd_rv(const RunConfig& cfg);
void cmd_decompose(const RunConfig& cfg);
void cmd_forecast(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg, std::ostream& out);
void cmd_simulate(const RunConfig& cfg, std::ostream& err);
void cmd_grid(const RunConfig& cfg);

/// Machine-readable failure record: {"error": {"type": ..., "message": ...}}.
std::string error_record(std::string_view type, std::string_view message);

/// Entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace tvewd::cli
