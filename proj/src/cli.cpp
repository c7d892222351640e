#include "mechent/cli.hpp"

#include "mechent/analysis.hpp"
#include "mechent/config.hpp"
#include "mechent/csv.hpp"
#include "mechent/mathieu.hpp"
#include "mechent/wigner_snapshot.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace mechent {

namespace {

namespace fs = std::filesystem;

struct Setting {
    std::string key;
    std::string default_value;
    std::string help;
};

struct RunContext {
    const KeyValueConfig& settings;
    std::string scenario;
    fs::path out_dir;
    std::ostream& out;
    std::ostream& err;
    std::vector<std::string> outputs;

    std::ofstream open(const std::string& name)
    {
        const fs::path path = out_dir / name;
        std::ofstream f(path);
        if (!f)
            throw ConfigError("cannot write '" + path.string() + "'");
        f.precision(17);
        outputs.push_back(path.string());
        return f;
    }

    std::ofstream open_csv(const std::string& name)
    {
        auto f = open(name);
        write_preamble(f, scenario, settings);
        return f;
    }
};

struct Scenario {
    std::string name;
    std::string description;
    std::vector<Setting> settings;
    // fills in settings whose defaults depend on other settings (e.g. "0 = 400 periods")
    std::function<void(KeyValueConfig&)> resolve;
    std::function<void(RunContext&)> run;
};

const std::vector<std::string> kMetaKeys = {"scenario", "code_version", "outputs", "wall_clock_seconds"};

std::string kebab(std::string key)
{
    for (auto& c : key)
        if (c == '_')
            c = '-';
    return key;
}

std::vector<Setting> param_settings()
{
    static const std::map<std::string, std::string> help = {
        {"omega_m", "mechanical frequency (unit of all rates)"},
        {"delta0", "bare optical detuning"},
        {"kappa", "cavity decay rate"},
        {"gamma_m", "mechanical damping rate"},
        {"g", "single-photon optomechanical coupling"},
        {"e0", "static drive amplitude"},
        {"e1", "modulated drive amplitude"},
        {"omega_mod", "modulation frequency"},
        {"lambda0", "mechanical coupling modulation amplitude"},
        {"temp_ratio", "oscillator temperature T/T0, T0 = hbar omega_m / k_B"},
    };
    std::vector<Setting> out;
    for (const auto& key : param_keys())
        out.push_back({key, default_param_value(key), help.at(key)});
    return out;
}

std::vector<Setting> common_settings()
{
    auto s = param_settings();
    s.push_back({"out", "out", "output directory"});
    s.push_back({"seed", "0", "reserved; recorded in the manifest, no stochastic components"});
    return s;
}

std::vector<Setting> integrator_settings()
{
    return {
        {"rtol", "1e-8", "relative tolerance of the adaptive integrator"},
        {"atol", "1e-10", "absolute tolerance of the adaptive integrator"},
        {"max_step", "0", "largest step in 1/omega_m (0 = period/200)"},
        {"divergence_threshold", "1e12", "trace(V) or |V_ij| above this stops the run as diverged"},
    };
}

std::vector<Setting> sweep_settings(const std::string& from, const std::string& to, const std::string& points)
{
    return {
        {"from", from, "first sweep value"},
        {"to", to, "last sweep value"},
        {"points", points, "number of equally spaced sweep values"},
        {"extra_periods", "20", "periods integrated beyond the 10/gamma_m settle window"},
        {"threads", "0", "worker threads (0 = all cores)"},
    };
}

template <class... Lists>
std::vector<Setting> concat(Lists... lists)
{
    std::vector<Setting> out;
    (out.insert(out.end(), lists.begin(), lists.end()), ...);
    return out;
}

IntegratorOptions integrator_from(const KeyValueConfig& c)
{
    IntegratorOptions o;
    o.rtol = c.get_double("rtol");
    o.atol = c.get_double("atol");
    o.max_step = c.get_double("max_step");
    o.divergence_threshold = c.get_double("divergence_threshold");
    if (!(o.rtol > 0.0) || !(o.atol > 0.0) || o.max_step < 0.0 || !(o.divergence_threshold > 0.0))
        throw ConfigError("integrator tolerances and thresholds must be positive");
    return o;
}

std::vector<double> linspace(double from, double to, int n)
{
    if (n < 1)
        throw ConfigError("points must be at least 1");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? from : from + (to - from) * i / (n - 1);
    return v;
}

void run_sweep_scenario(RunContext& ctx, const std::string& parameter)
{
    const auto& c = ctx.settings;
    SweepSpec spec;
    spec.parameter = parameter;
    spec.base = params_from_config(c);
    spec.values = linspace(c.get_double("from"), c.get_double("to"), c.get_int("points"));
    spec.extra_periods = c.get_int("extra_periods");
    spec.threads = static_cast<unsigned>(c.get_int("threads"));
    spec.integrator = integrator_from(c);
    const SweepResult res = run_sweep(spec);

    auto f = ctx.open_csv(ctx.scenario + ".csv");
    write_sweep_csv(f, res);

    for (const auto& pt : res.points)
        ctx.out << parameter << " = " << format_double(pt.value) << "  "
                << (pt.error.empty() ? to_string(pt.result.status) : "failed") << "  E_N = "
                << format_double(pt.result.e_n) << '\n';
    if (parameter == "temp_ratio") {
        ctx.out << "entanglement vanishes at temp_ratio = " << format_double(entanglement_death_point(res))
                << '\n';
    } else if (parameter == "omega_mod") {
        try {
            ctx.out << "peak at omega_mod = " << format_double(sweep_peak(res).value) << '\n';
        } catch (const std::runtime_error&) {
            ctx.out << "no settled point\n";
        }
    }
}

std::vector<Scenario> scenarios()
{
    std::vector<Scenario> s;

    s.push_back({"timeseries", "E_N(t) for one parameter set",
                 concat(common_settings(), integrator_settings(),
                        std::vector<Setting>{
                            {"t_end", "0", "integration horizon in 1/omega_m (0 = 400 periods)"},
                            {"samples_per_period", "40", "E_N samples per modulation period"},
                            {"zoom_periods", "5", "late-time window re-sampled at 200 per period"},
                            {"snapshot_every", "0", "covariance snapshot cadence in 1/omega_m (0 = off)"},
                        }),
                 [](KeyValueConfig& c) {
                     if (c.get_double("t_end") == 0.0)
                         c.set("t_end", format_double(400.0 * params_from_config(c).period()));
                 },
                 [](RunContext& ctx) {
                     const auto& c = ctx.settings;
                     const SystemParams p = params_from_config(c);
                     const double t_end = c.get_double("t_end");
                     const double tau = p.period();
                     IntegratorOptions o = integrator_from(c);
                     o.snapshot_every = c.get_double("snapshot_every");
                     const TrajectoryRecord traj =
                         entanglement_timeseries(p, t_end, c.get_int("samples_per_period"), o);
                     {
                         auto f = ctx.open_csv("timeseries.csv");
                         write_timeseries_csv(f, traj, tau);
                     }
                     if (!traj.snapshots.empty()) {
                         auto f = ctx.open_csv("covariance.csv");
                         write_covariance_csv(f, traj.snapshots);
                     }
                     const double zoom = c.get_double("zoom_periods") * tau;
                     if (zoom > 0.0) {
                         IntegratorOptions oz = integrator_from(c);
                         oz.record_from = std::max(0.0, t_end - zoom);
                         const auto z = entanglement_timeseries(p, t_end, kMinSamplesPerPeriod, oz);
                         auto f = ctx.open_csv("timeseries_zoom.csv");
                         write_timeseries_csv(f, z, tau);
                     }
                     if (traj.diverged)
                         ctx.out << "diverged at t = " << format_double(traj.divergence_time)
                                 << " (t/tau = " << format_double(traj.divergence_time / tau)
                                 << "); entanglement last present at t = "
                                 << format_double(last_entangled_time(traj)) << '\n';
                     double late_max = 0.0;
                     for (std::size_t i = 0; i < traj.times.size(); ++i)
                         if (traj.times[i] >= traj.final_time - tau)
                             late_max = std::max(late_max, traj.log_negativity[i]);
                     ctx.out << "max E_N over the last period = " << format_double(late_max) << '\n';
                 }});

    s.push_back({"temp-sweep", "stationary E_N versus temperature",
                 concat(common_settings(), integrator_settings(), sweep_settings("0", "1", "10")), nullptr,
                 [](RunContext& ctx) { run_sweep_scenario(ctx, "temp_ratio"); }});
    s.push_back({"freq-sweep", "stationary E_N versus modulation frequency",
                 concat(common_settings(), integrator_settings(), sweep_settings("1.99", "2.01", "21")),
                 nullptr, [](RunContext& ctx) { run_sweep_scenario(ctx, "omega_mod"); }});
    s.push_back({"lambda-sweep", "stationary E_N versus mechanical coupling",
                 concat(common_settings(), integrator_settings(), sweep_settings("0.001", "0.01", "10")),
                 nullptr, [](RunContext& ctx) { run_sweep_scenario(ctx, "lambda0"); }});

    s.push_back({"wigner", "Wigner function of one normal mode at a given time",
                 concat(common_settings(), integrator_settings(),
                        std::vector<Setting>{
                            {"mode", "minus", "plus, minus or cavity"},
                            {"t_periods", "300.45", "evaluation time in modulation periods"},
                            {"grid_points", "201", "grid points per axis"},
                            {"grid_sigmas", "6", "grid half-width in standard deviations"},
                        }),
                 nullptr,
                 [](RunContext& ctx) {
                     const auto& c = ctx.settings;
                     const SystemParams p = params_from_config(c);
                     const Mode mode = mode_from_string(c.get("mode"));
                     const double t = c.get_double("t_periods") * p.period();
                     WignerGrid grid{c.get_int("grid_points"), c.get_double("grid_sigmas")};
                     try {
                         const WignerSnapshot snap = wigner_snapshot(p, t, mode, grid, integrator_from(c));
                         {
                             auto f = ctx.open_csv("wigner.csv");
                             f << "# mode_mean = " << format_double(snap.state.mean[0]) << ", "
                               << format_double(snap.state.mean[1]) << '\n';
                             write_wigner_csv(f, snap.field);
                         }
                         auto f = ctx.open_csv("wigner_covariance.csv");
                         write_covariance_csv(f, {{snap.t, snap.mean, snap.covariance}});
                         Eigen::SelfAdjointEigenSolver<Matrix2> eig(snap.state.cm);
                         ctx.out << to_string(mode) << " mode CM eigenvalues at t/tau = "
                                 << c.get("t_periods") << ": " << format_double(eig.eigenvalues()[0])
                                 << ", " << format_double(eig.eigenvalues()[1]) << '\n';
                     } catch (const DivergenceError& e) {
                         ctx.out << "diverged at t = " << format_double(e.time())
                                 << " before the requested time; no field written\n";
                     }
                 }});

    s.push_back({"stability-chart", "first instability tongue of the difference mode",
                 concat(common_settings(),
                        std::vector<Setting>{
                            {"eps_min", "0", "smallest epsilon"},
                            {"eps_max", "0.005", "largest epsilon"},
                            {"eps_points", "101", "epsilon grid points"},
                            {"delta_min", "0.99", "smallest delta"},
                            {"delta_max", "1.01", "largest delta"},
                            {"delta_points", "201", "delta grid points"},
                            {"order", "first", "tongue series order: first or third"},
                            {"markers", "0.005,0.006,0.007", "lambda0 values placed on the chart"},
                        }),
                 nullptr,
                 [](RunContext& ctx) {
                     const auto& c = ctx.settings;
                     ChartSpec spec;
                     spec.eps_min = c.get_double("eps_min");
                     spec.eps_max = c.get_double("eps_max");
                     spec.eps_points = c.get_int("eps_points");
                     spec.delta_min = c.get_double("delta_min");
                     spec.delta_max = c.get_double("delta_max");
                     spec.delta_points = c.get_int("delta_points");
                     const std::string order = c.get("order");
                     if (order != "first" && order != "third")
                         throw ConfigError("order must be 'first' or 'third'");
                     spec.order = order == "first" ? SeriesOrder::First : SeriesOrder::Third;
                     {
                         auto f = ctx.open_csv("stability_chart.csv");
                         write_chart_csv(f, stability_chart(spec));
                     }
                     const auto markers = chart_markers(params_from_config(c), c.get_list("markers"), spec);
                     auto f = ctx.open_csv("stability_markers.csv");
                     write_markers_csv(f, markers);
                     for (const auto& m : markers)
                         ctx.out << "lambda0 = " << format_double(m.lambda0) << "  epsilon = "
                                 << format_double(m.point.epsilon) << "  delta = "
                                 << format_double(m.point.delta) << "  "
                                 << to_string(m.point.classification) << '\n';
                 }});

    s.push_back({"critical", "critical mechanical coupling: first-order formula and Floquet oracle",
                 common_settings(), nullptr, [](RunContext& ctx) {
                     const SystemParams p = params_from_config(ctx.settings);
                     const double first = critical_coupling(p);
                     const double floquet = floquet_critical_coupling(p);
                     auto f = ctx.open_csv("critical.csv");
                     f << "method,lambda0c\n"
                       << "first_order," << format_double(first) << '\n'
                       << "floquet," << format_double(floquet) << '\n';
                     ctx.out << "first-order lambda0c/omega_m = " << format_double(first) << '\n'
                             << "Floquet lambda0c/omega_m     = " << format_double(floquet) << '\n';
                 }});
    return s;
}

void write_manifest(RunContext& ctx, double seconds)
{
    KeyValueConfig m = ctx.settings;
    m.set("scenario", ctx.scenario);
    m.set("code_version", code_version());
    std::string outputs;
    for (const auto& o : ctx.outputs)
        outputs += (outputs.empty() ? "" : ",") + o;
    m.set("outputs", outputs);
    m.set("wall_clock_seconds", format_double(seconds));
    const fs::path path = ctx.out_dir / (ctx.scenario + ".manifest");
    std::ofstream f(path);
    if (!f)
        throw ConfigError("cannot write '" + path.string() + "'");
    f << "# mechent run manifest; rerun with: mechent " << ctx.scenario << " --config " << path.string()
      << '\n';
    m.write(f);
}

std::string parameter_footer()
{
    std::ostringstream os;
    os << "Configuration keys (config file `key = value`, or --kebab-case flags):\n";
    for (const auto& s : param_settings())
        os << "  " << s.key << " = " << s.default_value << "    " << s.help << '\n';
    os << "Run `mechent <subcommand> --help` for the keys of each subcommand.";
    return os.str();
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    const auto all = scenarios();

    CLI::App app{"Entanglement dynamics of two coupled mechanical oscillators in a modulated "
                 "optomechanical cavity"};
    app.footer(parameter_footer());
    app.require_subcommand(1);
    app.set_version_flag("--version", code_version());

    struct Bound {
        const Scenario* scenario;
        CLI::App* sub;
        std::string config_path;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> options;
    };
    std::vector<Bound> bound(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        Bound& b = bound[i];
        b.scenario = &all[i];
        b.sub = app.add_subcommand(all[i].name, all[i].description);
        b.sub->add_option("--config", b.config_path, "key = value configuration file");
        for (const auto& s : all[i].settings) {
            b.options[s.key] = b.sub->add_option("--" + kebab(s.key), b.values[s.key], s.help)
                                   ->default_str(s.default_value);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfigError;
    }

    const Bound* chosen = nullptr;
    for (const auto& b : bound)
        if (b.sub->parsed())
            chosen = &b;
    const Scenario& scenario = *chosen->scenario;

    const auto started = std::chrono::steady_clock::now();
    try {
        KeyValueConfig settings;
        for (const auto& s : scenario.settings)
            settings.set(s.key, s.default_value);
        if (!chosen->config_path.empty()) {
            const KeyValueConfig file = KeyValueConfig::load(chosen->config_path);
            for (const auto& [k, v] : file.entries()) {
                if (k == "scenario" && v != scenario.name)
                    throw ConfigError("config was written for scenario '" + v + "', not '" +
                                      scenario.name + "'");
                if (std::find(kMetaKeys.begin(), kMetaKeys.end(), k) != kMetaKeys.end())
                    continue;
                if (!settings.contains(k))
                    throw ConfigError("unknown key '" + k + "' in " + chosen->config_path +
                                      " for subcommand " + scenario.name);
                settings.set(k, v);
            }
        }
        for (const auto& [key, opt] : chosen->options)
            if (opt->count() > 0)
                settings.set(key, chosen->values.at(key));
        if (scenario.resolve)
            scenario.resolve(settings);

        const SystemParams p = params_from_config(settings);
        for (const auto& w : p.validate())
            err << "warning: " << w << '\n';

        RunContext ctx{settings, scenario.name, settings.get("out"), out, err, {}};
        fs::create_directories(ctx.out_dir);
        scenario.run(ctx);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_manifest(ctx, seconds);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const IntegrationError& e) {
        err << "integration failure: " << e.what() << '\n';
        return kExitIntegrationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace mechent
