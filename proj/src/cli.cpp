#include "tvewd/cli.hpp"

#include "tvewd/benchmarks.hpp"
#include "tvewd/errors.hpp"
#include "tvewd/locreg.hpp"
#include "tvewd/rv.hpp"
#include "tvewd/sim.hpp"
#include "tvewd/text.hpp"
#include "tvewd/wold.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>

namespace tvewd::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kModelNames{"HAR", "TVHAR", "TVAR", "EWD", "TVEWD"};
const std::set<std::string> kCommands{"rv", "decompose", "forecast", "evaluate", "simulate", "grid"};

struct Preset {
    std::size_t window;
    int scales;
    double bandwidth;
    std::map<std::string, std::map<int, std::size_t>> lags;
};

const std::map<std::string, Preset>& presets() {
    static const std::map<std::string, Preset> table{
        {"period-2010",
         {700, 7, 0.3,
          {{"CL", {{1, 2}, {5, 6}, {22, 6}}}, {"NG", {{1, 5}, {5, 5}, {22, 5}}}, {"RB", {{1, 2}, {5, 5}, {22, 5}}}}}},
        {"period-1993",
         {700, 7, 0.3,
          {{"CL", {{1, 3}, {5, 3}, {22, 3}}}, {"NG", {{1, 5}, {5, 5}, {22, 3}}}, {"HU", {{1, 2}, {5, 5}, {22, 5}}}}}},
    };
    return table;
}

// Walks a JSON object, consuming known keys and rejecting the rest.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ConfigError("'" + (path_.empty() ? std::string("<root>") : path_) + "' must be an object");
        }
    }

    template <typename T>
    void read(const std::string& key, T& target) {
        seen_.insert(key);
        if (!node_.contains(key)) {
            return;
        }
        try {
            target = node_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("invalid value for '" + name(key) + "'");
        }
    }

    void read_with(const std::string& key, const std::function<void(const json&, const std::string&)>& apply) {
        seen_.insert(key);
        if (node_.contains(key)) {
            apply(node_.at(key), name(key));
        }
    }

    [[nodiscard]] std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.contains(key)) {
                throw ConfigError("unknown config key '" + name(key) + "'");
            }
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename E, typename Parse>
void read_enum(Section& s, const std::string& key, E& target, Parse parse) {
    s.read_with(key, [&](const json& v, const std::string& path) {
        if (!v.is_string()) {
            throw ConfigError("invalid value for '" + path + "'");
        }
        try {
            target = parse(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError("invalid value for '" + path + "': " + e.what());
        }
    });
}

void require_input(const RunConfig& cfg) {
    if (cfg.input.empty()) {
        throw ConfigError("missing input path (--input or 'input')");
    }
}

fs::path output_dir(const RunConfig& cfg) {
    if (cfg.output.empty()) {
        throw ConfigError("missing output path (--output or 'output')");
    }
    fs::path dir(cfg.output);
    fs::create_directories(dir);
    return dir;
}

forecast::ForecastConfig config_for(const RunConfig& cfg, int h) {
    auto fc = cfg.forecast;
    fc.p = cfg.lag_for(h);
    fc.horizon = h;
    return fc;
}

}  // namespace

void RunConfig::validate() const {
    if (!command.empty() && !kCommands.contains(command)) {
        throw ConfigError("unknown command '" + command + "'");
    }
    forecast.validate();
    plan.validate();
    if (jobs < 1) {
        throw ConfigError("jobs must be at least 1");
    }
    if (models.empty()) {
        throw ConfigError("model list is empty");
    }
    for (std::size_t i = 0; i < models.size(); ++i) {
        if (!kModelNames.contains(models[i])) {
            throw ConfigError("unknown model '" + models[i] + "' at 'models[" + std::to_string(i) + "]'");
        }
    }
    if (std::find(models.begin(), models.end(), benchmark) == models.end()) {
        throw ConfigError("benchmark '" + benchmark + "' is not in the model list");
    }
    for (const auto& [h, p] : lags_by_horizon) {
        if (h < 1 || p < 1) {
            throw ConfigError("forecast.lags_by_horizon: horizons and lags must be positive");
        }
    }
    if (ewd_p < 1) {
        throw ConfigError("benchmarks.ewd_p must be at least 1");
    }
    wold::MultiscaleConfig ewd_cfg = forecast.multiscale;
    ewd_cfg.scales = ewd_scales;
    ewd_cfg.validate();
    if (rv.format != "ticks" && rv.format != "rv") {
        throw ConfigError("rv.format must be 'ticks' or 'rv'");
    }
    if (share_k0 >= static_cast<std::size_t>(forecast.multiscale.per_scale)) {
        throw ConfigError("shares.k0 must be below multiscale.per_scale");
    }
}

std::size_t RunConfig::lag_for(int h) const {
    const auto it = lags_by_horizon.find(h);
    return it == lags_by_horizon.end() ? forecast.p : it->second;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, preset] : presets()) {
        names.push_back(name);
    }
    return names;
}

void apply_preset(RunConfig& cfg, const std::string& name, const std::string& instrument) {
    const auto it = presets().find(name);
    if (it == presets().end()) {
        throw ConfigError("unknown preset '" + name + "'");
    }
    const auto& preset = it->second;
    const auto lags = preset.lags.find(instrument);
    if (lags == preset.lags.end()) {
        std::string known;
        for (const auto& [id, l] : preset.lags) {
            known += (known.empty() ? "" : ", ") + id;
        }
        throw ConfigError("preset '" + name + "' has no lags for instrument '" + instrument + "' (known: " + known +
                          ")");
    }
    cfg.preset = name;
    cfg.plan.window = preset.window;
    cfg.plan.horizons = {1, 5, 22};
    cfg.forecast.multiscale.scales = preset.scales;
    cfg.forecast.kernel.bandwidth = preset.bandwidth;
    cfg.lags_by_horizon = lags->second;
}

void apply_config_json(RunConfig& cfg, std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    Section top(root, "");
    top.read("command", cfg.command);
    top.read("input", cfg.input);
    top.read("output", cfg.output);
    top.read("preset", cfg.preset);
    top.read("instrument", cfg.instrument);
    top.read("seed", cfg.seed);
    top.read("jobs", cfg.jobs);
    top.read("models", cfg.models);
    top.read("benchmark", cfg.benchmark);
    top.read_with("kernel", [&](const json& v, const std::string& path) {
        Section s(v, path);
        read_enum(s, "family", cfg.forecast.kernel.family, parse_kernel_family);
        s.read("bandwidth", cfg.forecast.kernel.bandwidth);
        s.read("degree", cfg.forecast.kernel.degree);
        s.finish();
    });
    top.read_with("multiscale", [&](const json& v, const std::string& path) {
        Section s(v, path);
        s.read("scales", cfg.forecast.multiscale.scales);
        s.read("per_scale", cfg.forecast.multiscale.per_scale);
        read_enum(s, "coverage", cfg.forecast.multiscale.coverage, wold::parse_coverage);
        s.finish();
    });
    top.read_with("forecast", [&](const json& v, const std::string& path) {
        Section s(v, path);
        s.read("p", cfg.forecast.p);
        s.read("horizon", cfg.forecast.horizon);
        s.read("weight_window", cfg.forecast.weight_window);
        s.read("include_residual", cfg.forecast.include_residual);
        s.read("max_radius", cfg.forecast.max_radius);
        read_enum(s, "projection", cfg.forecast.projection, forecast::parse_projection);
        s.read_with("lags_by_horizon", [&](const json& lags, const std::string& lag_path) {
            if (!lags.is_object()) {
                throw ConfigError("'" + lag_path + "' must map horizons to lags");
            }
            cfg.lags_by_horizon.clear();
            for (const auto& [key, value] : lags.items()) {
                const auto h = static_cast<int>(parse_integer(key, lag_path));
                if (!value.is_number_unsigned()) {
                    throw ConfigError("invalid value for '" + lag_path + "." + key + "'");
                }
                cfg.lags_by_horizon[h] = value.get<std::size_t>();
            }
        });
        s.finish();
    });
    top.read_with("shares", [&](const json& v, const std::string& path) {
        Section s(v, path);
        read_enum(s, "mode", cfg.forecast.share_mode, wold::parse_share_mode);
        s.read("k0", cfg.share_k0);
        s.read("beta_max_k", cfg.beta_max_k);
        s.finish();
    });
    top.read_with("plan", [&](const json& v, const std::string& path) {
        Section s(v, path);
        s.read("window", cfg.plan.window);
        s.read("step", cfg.plan.step);
        s.read("horizons", cfg.plan.horizons);
        s.read_with("max_origins", [&](const json& m, const std::string& mpath) {
            if (m.is_null()) {
                cfg.plan.max_origins.reset();
            } else if (m.is_number_unsigned()) {
                cfg.plan.max_origins = m.get<std::size_t>();
            } else {
                throw ConfigError("invalid value for '" + mpath + "'");
            }
        });
        s.finish();
    });
    top.read_with("benchmarks", [&](const json& v, const std::string& path) {
        Section s(v, path);
        s.read("tvar_p", cfg.tvar_p);
        s.read("ewd_p", cfg.ewd_p);
        s.read("ewd_span", cfg.ewd_span);
        s.read("ewd_scales", cfg.ewd_scales);
        s.finish();
    });
    top.read_with("rv", [&](const json& v, const std::string& path) {
        Section s(v, path);
        s.read("format", cfg.rv.format);
        s.read("day_cutoff", cfg.rv.day_cutoff);
        s.read("session_open", cfg.rv.session_open);
        s.read("bins", cfg.rv.bins);
        s.read("bin_minutes", cfg.rv.bin_minutes);
        s.read("holidays", cfg.rv.holidays);
        s.read("year_end_rules", cfg.rv.year_end_rules);
        s.read("label", cfg.rv.label);
        s.finish();
    });
    top.read_with("grid", [&](const json& v, const std::string& path) {
        Section s(v, path);
        s.read("p", cfg.grid.p);
        s.read("bandwidth", cfg.grid.bandwidth);
        s.read("per_scale", cfg.grid.per_scale);
        s.finish();
    });
    top.read_with("scenario", [&](const json& v, const std::string& path) {
        if (!v.is_object()) {
            throw ConfigError("'" + path + "' must be an object");
        }
        cfg.scenario = v.dump();
    });
    top.finish();
}

std::string config_json(const RunConfig& cfg) {
    json root;
    root["command"] = cfg.command;
    root["input"] = cfg.input;
    root["output"] = cfg.output;
    root["preset"] = cfg.preset;
    root["instrument"] = cfg.instrument;
    root["seed"] = cfg.seed;
    root["jobs"] = cfg.jobs;
    root["models"] = cfg.models;
    root["benchmark"] = cfg.benchmark;
    const auto& k = cfg.forecast.kernel;
    root["kernel"] = {{"family", to_string(k.family)}, {"bandwidth", k.bandwidth}, {"degree", k.degree}};
    const auto& m = cfg.forecast.multiscale;
    root["multiscale"] = {{"scales", m.scales}, {"per_scale", m.per_scale}, {"coverage", wold::to_string(m.coverage)}};
    json lags = json::object();
    for (const auto& [h, p] : cfg.lags_by_horizon) {
        lags[std::to_string(h)] = p;
    }
    root["forecast"] = {{"p", cfg.forecast.p},
                        {"horizon", cfg.forecast.horizon},
                        {"weight_window", cfg.forecast.weight_window},
                        {"projection", forecast::to_string(cfg.forecast.projection)},
                        {"include_residual", cfg.forecast.include_residual},
                        {"max_radius", cfg.forecast.max_radius},
                        {"lags_by_horizon", lags}};
    root["shares"] = {{"mode", wold::to_string(cfg.forecast.share_mode)},
                      {"k0", cfg.share_k0},
                      {"beta_max_k", cfg.beta_max_k}};
    root["plan"] = {{"window", cfg.plan.window},
                    {"step", cfg.plan.step},
                    {"horizons", cfg.plan.horizons},
                    {"max_origins", cfg.plan.max_origins ? json(*cfg.plan.max_origins) : json(nullptr)}};
    root["benchmarks"] = {
        {"tvar_p", cfg.tvar_p}, {"ewd_p", cfg.ewd_p}, {"ewd_span", cfg.ewd_span}, {"ewd_scales", cfg.ewd_scales}};
    root["rv"] = {{"format", cfg.rv.format},
                  {"day_cutoff", cfg.rv.day_cutoff},
                  {"session_open", cfg.rv.session_open},
                  {"bins", cfg.rv.bins},
                  {"bin_minutes", cfg.rv.bin_minutes},
                  {"holidays", cfg.rv.holidays},
                  {"year_end_rules", cfg.rv.year_end_rules},
                  {"label", cfg.rv.label}};
    root["grid"] = {{"p", cfg.grid.p}, {"bandwidth", cfg.grid.bandwidth}, {"per_scale", cfg.grid.per_scale}};
    if (cfg.scenario) {
        root["scenario"] = json::parse(*cfg.scenario);
    }
    return root.dump(2) + "\n";
}

std::vector<models::ModelPtr> build_models(const RunConfig& cfg) {
    std::vector<models::ModelPtr> out;
    for (const auto& name : cfg.models) {
        if (name == "HAR") {
            out.push_back(models::make_har());
        } else if (name == "TVHAR") {
            out.push_back(models::make_tvhar(cfg.forecast.kernel));
        } else if (name == "TVAR") {
            out.push_back(models::make_tvar(cfg.tvar_p, cfg.forecast.kernel));
        } else if (name == "EWD") {
            auto ms = cfg.forecast.multiscale;
            ms.scales = cfg.ewd_scales;
            out.push_back(models::make_ewd(cfg.ewd_p, ms, cfg.ewd_span, cfg.forecast.weight_window,
                                             cfg.forecast.projection, cfg.forecast.include_residual));
        } else if (name == "TVEWD") {
            out.push_back(models::make_tvewd(cfg.forecast, cfg.lags_by_horizon));
        } else {
            throw ConfigError("unknown model '" + name + "'");
        }
    }
    return out;
}

void cmd_rv(const RunConfig& cfg) {
    require_input(cfg);
    if (cfg.output.empty()) {
        throw ConfigError("missing output path (--output or 'output')");
    }
    const std::string label = cfg.rv.label.empty() ? fs::path(cfg.input).stem().string() : cfg.rv.label;
    rv::DailyRv daily;
    if (cfg.rv.format == "rv") {
        daily = rv::load_rv(cfg.input);
    } else {
        rv::SessionRule rule;
        rule.day_cutoff = rv::parse_clock(cfg.rv.day_cutoff);
        rule.session_open = rv::parse_clock(cfg.rv.session_open);
        rule.bins = cfg.rv.bins;
        rule.bin_minutes = cfg.rv.bin_minutes;
        rv::TradingCalendar calendar(rule);
        for (const auto& day : cfg.rv.holidays) {
            calendar.exclude(parse_date(day));
        }
        const auto ticks = rv::load_ticks(cfg.input);
        if (cfg.rv.year_end_rules && !ticks.empty()) {
            const auto year_of = [](rv::Timestamp ts) {
                return static_cast<int>(std::chrono::year_month_day(std::chrono::floor<std::chrono::days>(ts)).year());
            };
            calendar.exclude_year_end(year_of(ticks.front().timestamp) - 1, year_of(ticks.back().timestamp) + 1);
        }
        daily = rv::realized_variance(rv::sample_five_minute(ticks, calendar));
    }
    store_series(rv::annualize(daily, label), cfg.output);
}

void cmd_decompose(const RunConfig& cfg) {
    require_input(cfg);
    const auto series = load_series(cfg.input);
    const auto dir = output_dir(cfg);
    const auto fc = config_for(cfg, cfg.forecast.horizon);
    const auto fit = locreg::fit_tvp_ar(series, fc.p, fc.kernel);
    const auto decomposition = wold::decompose(fit, fc.multiscale);
    const auto shares = wold::persistence_shares(decomposition, fc.share_mode, cfg.share_k0);
    const std::vector<Date> dates(series.dates.begin() + static_cast<std::ptrdiff_t>(decomposition.offset),
                                  series.dates.begin() + static_cast<std::ptrdiff_t>(decomposition.offset +
                                                                                     decomposition.size()));
    write_file_atomic(dir / "beta.csv", wold::beta_surface_csv(decomposition, cfg.beta_max_k));
    write_file_atomic(dir / "shares.csv", wold::shares_csv(shares, dates));
    write_file_atomic(dir / "coefficients.csv", locreg::coefficients_csv(fit));
}

void cmd_forecast(const RunConfig& cfg) {
    require_input(cfg);
    if (cfg.output.empty()) {
        throw ConfigError("missing output path (--output or 'output')");
    }
    const auto series = load_series(cfg.input);
    std::map<std::size_t, forecast::EwdForecaster> by_lag;
    const int scales = cfg.forecast.multiscale.scales;
    std::string out = "origin_date,target_date,h,p,forecast,trend";
    for (int j = 1; j <= scales; ++j) {
        out += ",weight_" + std::to_string(j);
    }
    for (int j = 1; j <= scales; ++j) {
        out += ",part_" + std::to_string(j);
    }
    out += '\n';
    for (int h : cfg.plan.horizons) {
        const auto fc = config_for(cfg, h);
        auto it = by_lag.find(fc.p);
        if (it == by_lag.end()) {
            it = by_lag.emplace(fc.p, forecast::EwdForecaster::time_varying(series.view(), fc)).first;
        }
        const auto point = it->second.forecast(h);
        out += format_date(series.dates.back()) + ',' +
               format_date(add_business_days(series.dates.back(), static_cast<std::size_t>(h))) + ',' +
               std::to_string(h) + ',' + std::to_string(fc.p) + ',' + format_double(point.value) + ',' +
               format_double(point.trend);
        for (double w : point.weights) {
            out += ',' + format_double(w);
        }
        for (double part : point.scale_parts) {
            out += ',' + format_double(part);
        }
        out += '\n';
    }
    write_file_atomic(cfg.output, out);
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& stream) {
    require_input(cfg);
    const auto series = load_series(cfg.input);
    const auto dir = output_dir(cfg);
    const auto models = build_models(cfg);
    const auto table = eval::rolling_forecasts(series.view(), models, cfg.plan, cfg.jobs);
    const auto report = eval::evaluate(table, cfg.benchmark);
    const auto text = eval::report_table(report);
    write_file_atomic(dir / "report.csv", eval::report_csv(report));
    write_file_atomic(dir / "report.txt", text);
    write_file_atomic(dir / "forecasts.csv", eval::forecasts_csv(table, series.dates));
    stream << text;
}

void cmd_simulate(const RunConfig& cfg, std::ostream& err) {
    sim::TvpArScenario scenario;
    if (cfg.scenario) {
        scenario = sim::parse_scenario(*cfg.scenario);
    } else if (!cfg.input.empty()) {
        scenario = sim::parse_scenario(read_file(cfg.input));
    } else {
        throw ConfigError("simulate needs a scenario ('scenario' in the config or --input)");
    }
    scenario.seed = cfg.seed;
    const auto dir = output_dir(cfg);
    const auto result = sim::simulate(scenario);
    store_series(result.series(scenario.label), dir / "series.csv");
    write_file_atomic(dir / "truth.csv", sim::truth_csv(result));
    write_file_atomic(dir / "scenario.json", sim::scenario_json(scenario));
    if (result.explosive) {
        err << json{{"warning",
                     {{"type", "explosive"},
                      {"message", "local AR roots on or inside the unit circle"},
                      {"points", result.explosive_points}}}}
                   .dump()
            << '\n';
    }
}

void cmd_grid(const RunConfig& cfg) {
    require_input(cfg);
    if (cfg.output.empty()) {
        throw ConfigError("missing output path (--output or 'output')");
    }
    const auto series = load_series(cfg.input);
    const auto scores = eval::grid_search(series.view(), cfg.forecast, cfg.grid.p, cfg.grid.bandwidth,
                                          cfg.grid.per_scale, cfg.plan, cfg.jobs);
    std::string out = "rank,p,bandwidth,per_scale";
    for (int h : cfg.plan.horizons) {
        out += ",rmse_h" + std::to_string(h);
    }
    out += '\n';
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto& s = scores[i];
        out += std::to_string(i + 1) + ',' + std::to_string(s.p) + ',' + format_double(s.bandwidth) + ',' +
               std::to_string(s.per_scale);
        for (double r : s.rmse) {
            out += ',' + format_double(r);
        }
        out += '\n';
    }
    write_file_atomic(cfg.output, out);
}

std::string error_record(std::string_view type, std::string_view message) {
    return json{{"error", {{"type", std::string(type)}, {"message", std::string(message)}}}}.dump();
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-varying extended Wold decomposition for volatility series", "tvewd"};
    app.require_subcommand(1);

    struct Flags {
        std::string config, input, output, preset, instrument;
        std::vector<int> horizons;
        std::optional<unsigned> jobs;
        std::optional<std::uint64_t> seed;
        bool print_config = false;
    } flags;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"rv", "tick or daily RV CSV -> annualized volatility series CSV"},
        {"decompose", "series -> beta surface, persistence shares and coefficient curves"},
        {"forecast", "series -> TV-EWD forecasts at the end of the sample"},
        {"evaluate", "series -> rolling out-of-sample report against the benchmark"},
        {"simulate", "scenario -> simulated series and ground truth"},
        {"grid", "series -> rolling RMSE over a (p, bandwidth, N) grid"},
    };
    for (const auto& [name, description] : commands) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("--config", flags.config, "JSON config file");
        sub->add_option("--input", flags.input, "input file");
        sub->add_option("--output", flags.output, "output file or directory");
        sub->add_option("--horizon", flags.horizons, "forecast horizon(s)");
        sub->add_option("--preset", flags.preset, "named replication preset");
        sub->add_option("--instrument", flags.instrument, "instrument id for preset lags");
        sub->add_option("--jobs", flags.jobs, "worker threads");
        sub->add_option("--seed", flags.seed, "random seed");
        sub->add_flag("--print-config", flags.print_config, "print the resolved configuration and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_record("usage", e.what()) << '\n';
        return 2;
    }

    try {
        RunConfig cfg;
        std::string config_text;
        std::string preset;
        std::string instrument;
        std::string input;
        if (!flags.config.empty()) {
            config_text = read_file(flags.config);
            // preset and instrument are resolved before the file overlays them
            RunConfig probe;
            apply_config_json(probe, config_text);
            preset = probe.preset;
            instrument = probe.instrument;
            input = probe.input;
        }
        if (!flags.preset.empty()) preset = flags.preset;
        if (!flags.instrument.empty()) instrument = flags.instrument;
        if (!flags.input.empty()) input = flags.input;
        if (!preset.empty()) {
            apply_preset(cfg, preset, instrument.empty() ? fs::path(input).stem().string() : instrument);
        }
        if (!config_text.empty()) {
            apply_config_json(cfg, config_text);
        }
        cfg.command = app.get_subcommands().front()->get_name();
        if (!preset.empty()) cfg.preset = preset;
        if (!instrument.empty()) cfg.instrument = instrument;
        if (!flags.input.empty()) cfg.input = flags.input;
        if (!flags.output.empty()) cfg.output = flags.output;
        if (!flags.horizons.empty()) {
            cfg.plan.horizons = flags.horizons;
            cfg.forecast.horizon = flags.horizons.front();
        }
        if (flags.jobs) cfg.jobs = *flags.jobs;
        if (flags.seed) cfg.seed = *flags.seed;
        cfg.validate();

        if (flags.print_config) {
            out << config_json(cfg);
            return 0;
        }
        if (cfg.command == "rv") {
            cmd_rv(cfg);
        } else if (cfg.command == "decompose") {
            cmd_decompose(cfg);
        } else if (cfg.command == "forecast") {
            cmd_forecast(cfg);
        } else if (cfg.command == "evaluate") {
            cmd_evaluate(cfg, out);
        } else if (cfg.command == "simulate") {
            cmd_simulate(cfg, err);
        } else {
            cmd_grid(cfg);
        }
        return 0;
    } catch (const ConfigError& e) {
        err << error_record("config", e.what()) << '\n';
        return 2;
    } catch (const DataError& e) {
        err << error_record("data", e.what()) << '\n';
        return 3;
    } catch (const NumericalError& e) {
        err << error_record("numerical", e.what()) << '\n';
        return 4;
    } catch (const std::exception& e) {
        err << error_record("runtime", e.what()) << '\n';
        return 1;
    }
}

}  // namespace tvewd::cli
