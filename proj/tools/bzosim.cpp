// bzosim: cavity Bloch-Zener oscillation simulator and metrology calculator.
// Subcommands: validate, bands, simulate, adiabatic, spectrum, sensitivity, sweep.
// Exit codes: 0 ok, 1 configuration error, 2 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "bzo/adiabatic.hpp"
#include "bzo/analysis.hpp"
#include "bzo/bandstructure.hpp"
#include "bzo/config.hpp"
#include "bzo/constants.hpp"
#include "bzo/dynamics.hpp"
#include "bzo/sensing.hpp"
#include "bzo/trace_io.hpp"
#include "bzo/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "bzosim 0.1.0";

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    std::string mode;
    std::uint64_t seed = 0;  // 0 = take run.seed from the config
    bool strict = false;
};

bzo::Config load_config(const CommonOpts& opts) {
    bzo::Config cfg = bzo::Config::parse_file(opts.config_path);
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw bzo::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!opts.mode.empty()) cfg.set("dynamics.mode", opts.mode);
    if (opts.seed != 0) cfg.set("run.seed", std::to_string(opts.seed));
    return cfg;
}

void report_warnings(const bzo::RunConfig& rc) {
    for (const auto& w : rc.warnings) std::cerr << "warning: " << w << "\n";
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_resolved_config(const bzo::RunConfig& rc, const fs::path& out) {
    std::ofstream f(out / "config.resolved.ini");
    f << "# canonical resolved configuration, hash " << rc.hash << "\n" << rc.resolved;
}

// one simulate/adiabatic/analyse pipeline; returns a summary for manifests
json run_pipeline(const bzo::RunConfig& rc, const fs::path& out) {
    bzo::RunTrace trace;
    if (rc.mode == bzo::PipelineMode::Adiabatic) {
        trace = bzo::adiabatic_trace(rc.scaled, rc.adiabatic).trace;
    } else {
        const auto mode = rc.mode == bzo::PipelineMode::Full ? bzo::RunMode::Full
                                                             : bzo::RunMode::Eliminated;
        trace = bzo::simulate(rc.scaled, rc.init, rc.numerics, mode);
    }
    trace.meta.params_hash = rc.hash;
    trace.meta.seed = rc.seed;
    bzo::write_trace_csv(trace, (out / "trace.csv").string());
    bzo::write_trace_meta(trace, (out / "trace.meta.json").string());

    const bzo::Spectrum sp = bzo::spectrum(trace, rc.analysis_zero_pad, rc.analysis_window);
    bzo::write_spectrum_csv(sp, (out / "spectrum.csv").string());
    const bzo::HarmonicFit fit = bzo::fit_harmonics(trace, rc.analysis_harmonics);
    bzo::write_json(bzo::harmonic_fit_json(fit), (out / "harmonics.json").string());

    double s_mean = 0.0;
    for (const double v : trace.s) s_mean += v;
    s_mean /= static_cast<double>(trace.size());
    const bzo::SensitivityReport rep = bzo::sensitivity_report(rc.scaled, s_mean, fit.eps);
    bzo::write_json(bzo::sensitivity_json(rep), (out / "sensitivity.json").string());

    json summary;
    summary["mode"] = bzo::pipeline_mode_name(rc.mode);
    summary["s0_Er"] = trace.meta.s0;
    summary["omega_hat_rad_s"] = fit.omega;
    summary["sigma_omega_rad_s"] = fit.sigma_omega;
    summary["omega_B_rad_s"] = rc.scaled.omega_B;
    summary["eps"] = fit.eps;
    summary["sigma_ratio"] = rep.sigma_ratio;
    summary["hash"] = rc.hash;
    return summary;
}

int cmd_validate(const CommonOpts& opts) {
    const bzo::RunConfig rc = bzo::load_run_config(load_config(opts), opts.strict);
    report_warnings(rc);
    std::cout << "config ok (hash " << rc.hash << ")\n"
              << "  E_R/h = " << rc.scaled.recoil_energy / bzo::constants::planck
              << " Hz\n"
              << "  omega_B/2pi = " << rc.scaled.omega_B / bzo::constants::two_pi
              << " Hz\n"
              << "  x = " << rc.scaled.x << ", C = " << rc.scaled.cooperativity
              << ", s_max = " << rc.scaled.s_max << " E_R\n";
    return 0;
}

int cmd_simulate(const CommonOpts& opts) {
    const bzo::RunConfig rc = bzo::load_run_config(load_config(opts), opts.strict);
    report_warnings(rc);
    const fs::path out = prepare_out_dir(opts.out_dir);
    write_resolved_config(rc, out);
    const json summary = run_pipeline(rc, out);
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_bands(const CommonOpts& opts, const std::vector<double>& depths, int nq,
              int nbands, int basis) {
    const fs::path out = prepare_out_dir(opts.out_dir);
    for (const double s : depths) {
        std::ostringstream name;
        name << "bands_s" << s << ".csv";
        std::ofstream f(out / name.str());
        f << "q";
        for (int b = 0; b < nbands; ++b) f << ",E_" << b;
        f << ",O_0\n";
        for (int i = 0; i < nq; ++i) {
            const double q = -1.0 + 2.0 * i / (nq - 1);
            const bzo::BlochSolution sol = bzo::solve_bloch(q, s, basis);
            f << bzo::format_double(q);
            for (int b = 0; b < nbands; ++b)
                f << ',' << bzo::format_double(sol.energies(b));
            f << ',' << bzo::format_double(sol.overlap0) << '\n';
        }
        std::cout << "wrote " << (out / name.str()).string() << "\n";
    }
    return 0;
}

int cmd_spectrum(const CommonOpts& opts, const std::string& trace_path, int harmonics,
                 int zero_pad) {
    const bzo::RunTrace trace = bzo::read_trace_csv(trace_path);
    const fs::path out = prepare_out_dir(opts.out_dir);
    const bzo::Spectrum sp = bzo::spectrum(trace, zero_pad);
    bzo::write_spectrum_csv(sp, (out / "spectrum.csv").string());
    const bzo::HarmonicFit fit = bzo::fit_harmonics(trace, harmonics);
    bzo::write_json(bzo::harmonic_fit_json(fit), (out / "harmonics.json").string());
    std::cout << bzo::harmonic_fit_json(fit).dump(2) << "\n";
    return 0;
}

int cmd_sensitivity(const CommonOpts& opts, const std::string& trace_path,
                    int mc_trials_flag) {
    const bzo::RunConfig rc = bzo::load_run_config(load_config(opts), opts.strict);
    report_warnings(rc);
    const bzo::RunTrace trace = bzo::read_trace_csv(trace_path);
    const fs::path out = prepare_out_dir(opts.out_dir);

    const bzo::HarmonicFit fit = bzo::fit_harmonics(trace, rc.analysis_harmonics);
    double s_mean = 0.0, nphot_mean = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        s_mean += trace.s[i];
        nphot_mean += trace.photon_number(i);
    }
    s_mean /= static_cast<double>(trace.size());
    nphot_mean /= static_cast<double>(trace.size());

    const bzo::SensitivityReport rep = bzo::sensitivity_report(rc.scaled, s_mean, fit.eps);
    json j = bzo::sensitivity_json(rep);
    j["omega_hat_rad_s"] = fit.omega;
    j["mean_photon_number_trace"] = nphot_mean;
    j["hash"] = rc.hash;
    j["seed"] = rc.seed;

    const int trials = mc_trials_flag > 0 ? mc_trials_flag : rc.mc_trials;
    if (trials > 0) {
        const bzo::MonteCarloResult mc = bzo::monte_carlo_sigma(
            rep.rate, fit.eps, rc.scaled.detector_efficiency, rep.tau, fit.omega,
            trials, rc.seed, rc.mc_bins_per_period);
        j["monte_carlo"] = bzo::monte_carlo_json(mc);
    }
    bzo::write_json(j, (out / "sensitivity.json").string());
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const CommonOpts& opts, int jobs) {
    const bzo::Config base = load_config(opts);
    // [sweep] declares the grid; 'layout = zip' ties the lists together
    std::vector<std::string> keys;
    for (const auto& k : base.keys_in_section("sweep"))
        if (k != "layout") keys.push_back(k);
    if (keys.empty()) throw bzo::ConfigError("sweep: no [sweep] keys declared");
    const std::string layout = base.get_string("sweep.layout", "grid");

    std::vector<std::vector<double>> values;
    values.reserve(keys.size());
    for (const auto& k : keys) values.push_back(base.get_double_list("sweep." + k));

    std::vector<std::vector<double>> points;
    if (layout == "zip") {
        for (const auto& v : values)
            if (v.size() != values.front().size())
                throw bzo::ConfigError("sweep: zip layout needs equal-length lists");
        for (std::size_t i = 0; i < values.front().size(); ++i) {
            std::vector<double> pt;
            pt.reserve(keys.size());
            for (const auto& v : values) pt.push_back(v[i]);
            points.push_back(pt);
        }
    } else if (layout == "grid") {
        points.push_back({});
        for (const auto& v : values) {
            std::vector<std::vector<double>> next_pts;
            for (const auto& pt : points)
                for (const double x : v) {
                    auto e = pt;
                    e.push_back(x);
                    next_pts.push_back(e);
                }
            points.swap(next_pts);
        }
    } else {
        throw bzo::ConfigError("sweep: layout must be grid or zip");
    }

    const std::uint64_t base_seed = bzo::load_run_config(base, opts.strict).seed;
    const fs::path out = prepare_out_dir(opts.out_dir);
    std::vector<json> entries(points.size());
    std::vector<std::string> errors(points.size());
    std::atomic<std::size_t> next{0};
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>(points.size(), jobs > 0 ? static_cast<unsigned>(jobs) : hw);

    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < points.size();
             i = next.fetch_add(1)) {
            char tag[24];
            std::snprintf(tag, sizeof(tag), "point_%03zu", i);
            const fs::path pdir = out / tag;
            fs::create_directories(pdir);
            try {
                bzo::Config cfg = base;
                json overrides;
                for (std::size_t k = 0; k < keys.size(); ++k) {
                    cfg.set(keys[k], bzo::format_double(points[i][k]));
                    overrides[keys[k]] = points[i][k];
                }
                cfg.set("run.seed", std::to_string(base_seed + i));
                const bzo::RunConfig rc = bzo::load_run_config(cfg, opts.strict);
                write_resolved_config(rc, pdir);
                json summary = run_pipeline(rc, pdir);
                summary["dir"] = tag;
                summary["overrides"] = overrides;
                entries[i] = summary;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    json manifest;
    manifest["points"] = json::array();
    bool failed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!errors[i].empty()) {
            json e;
            e["dir"] = "point_" + std::to_string(i);
            e["error"] = errors[i];
            manifest["points"].push_back(e);
            failed = true;
        } else {
            manifest["points"].push_back(entries[i]);
        }
    }
    bzo::write_json(manifest, (out / "manifest.json").string());
    std::cout << "sweep: " << points.size() << " points -> " << out.string() << "\n";
    if (failed) throw std::runtime_error("sweep: one or more points failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - Bloch-Zener oscillations in a driven optical cavity"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<double> band_depths{3.0};
    int nq = 201, nbands = 5, basis = 16;
    std::string trace_path;
    int harmonics = 6, zero_pad = 4, mc_trials = 0, jobs = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", opts.config_path, "configuration file")
                ->required();
        sub->add_option("--set", opts.overrides, "override section.key=value")
            ->take_all();
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--seed", opts.seed, "run seed (overrides run.seed)");
        sub->add_flag("--strict", opts.strict, "treat physics warnings as errors");
    };

    auto* validate = app.add_subcommand("validate", "check a configuration");
    add_common(validate, true);

    auto* simulate = app.add_subcommand("simulate", "coupled atom-cavity run");
    add_common(simulate, true);
    simulate->add_option("--mode", opts.mode, "full|eliminated|adiabatic");

    auto* adiabatic = app.add_subcommand("adiabatic", "Houston-wave analytic track");
    add_common(adiabatic, true);

    auto* bands = app.add_subcommand("bands", "band diagram CSV over q");
    add_common(bands, false);
    bands->add_option("--s", band_depths, "lattice depths (E_R)")->take_all();
    bands->add_option("--nq", nq, "quasimomentum grid points");
    bands->add_option("--nbands", nbands, "bands per row");
    bands->add_option("--basis", basis, "plane-wave half-width");

    auto* spectrumc = app.add_subcommand("spectrum", "analyse a stored trace");
    add_common(spectrumc, false);
    spectrumc->add_option("--trace", trace_path, "trace CSV")->required();
    spectrumc->add_option("--harmonics", harmonics, "harmonics to fit");
    spectrumc->add_option("--zero-pad", zero_pad, "FFT zero-padding factor");

    auto* sensitivity = app.add_subcommand("sensitivity", "metrology budget");
    add_common(sensitivity, true);
    sensitivity->add_option("--trace", trace_path, "trace CSV")->required();
    sensitivity->add_option("--mc-trials", mc_trials,
                            "Monte-Carlo verification trials (0 = config value)");

    auto* sweep = app.add_subcommand("sweep", "grid of runs from [sweep]");
    add_common(sweep, true);
    sweep->add_option("--jobs", jobs, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(opts);
        if (simulate->parsed()) return cmd_simulate(opts);
        if (adiabatic->parsed()) {
            opts.mode = "adiabatic";
            return cmd_simulate(opts);
        }
        if (bands->parsed()) return cmd_bands(opts, band_depths, nq, nbands, basis);
        if (spectrumc->parsed()) return cmd_spectrum(opts, trace_path, harmonics, zero_pad);
        if (sensitivity->parsed()) return cmd_sensitivity(opts, trace_path, mc_trials);
        if (sweep->parsed()) return cmd_sweep(opts, jobs);
    } catch (const bzo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
