#include "bzo/trace_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bzo/constants.hpp"

namespace bzo {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "t_s,s_Er,re_alpha,im_alpha,nphot,overlap,p0,p1,p2,p3,q\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << format_double(trace.t[i]) << ',' << format_double(trace.s[i]) << ','
            << format_double(trace.alpha[i].real()) << ','
            << format_double(trace.alpha[i].imag()) << ','
            << format_double(trace.photon_number(i)) << ','
            << format_double(trace.overlap[i]);
        for (int b = 0; b < kTraceBands; ++b)
            out << ',' << format_double(trace.band_pop[i][b]);
        out << ',' << format_double(trace.q[i]) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

namespace {

std::string meta_path_for(const std::string& csv_path) {
    const auto dot = csv_path.rfind(".csv");
    const std::string stem =
        dot == std::string::npos ? csv_path : csv_path.substr(0, dot);
    return stem + ".meta.json";
}

}  // namespace

RunTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty trace file '" + path + "'");
    if (line.rfind("t_s,", 0) != 0)
        throw std::runtime_error("'" + path + "' does not look like a trace CSV");

    RunTrace trace;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        double v[11];
        std::string cell;
        for (int c = 0; c < 11; ++c) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected 11 columns");
            v[c] = std::stod(cell);
        }
        trace.t.push_back(v[0]);
        trace.s.push_back(v[1]);
        trace.alpha.emplace_back(v[2], v[3]);
        trace.overlap.push_back(v[5]);
        trace.band_pop.push_back({v[6], v[7], v[8], v[9]});
        trace.q.push_back(v[10]);
    }

    std::ifstream meta(meta_path_for(path));
    if (meta) {
        json j;
        meta >> j;
        trace.meta.mode = j.value("mode", "");
        trace.meta.params_hash = j.value("params_hash", "");
        trace.meta.time_unit = j.value("time_unit_s", 0.0);
        trace.meta.recoil_energy = j.value("recoil_energy_J", 0.0);
        trace.meta.omega_B = j.value("omega_B_rad_s", 0.0);
        trace.meta.dt = j.value("dt_scaled", 0.0);
        trace.meta.sample_dt = j.value("sample_dt_scaled", 0.0);
        trace.meta.duration = j.value("duration_scaled", 0.0);
        trace.meta.basis_halfwidth = j.value("basis_halfwidth", 0);
        trace.meta.q0 = j.value("q0", 0.0);
        trace.meta.s0 = j.value("s0_Er", 0.0);
    }
    return trace;
}

void write_trace_meta(const RunTrace& trace, const std::string& path) {
    json j;
    j["mode"] = trace.meta.mode;
    j["params_hash"] = trace.meta.params_hash;
    j["time_unit_s"] = trace.meta.time_unit;
    j["recoil_energy_J"] = trace.meta.recoil_energy;
    j["omega_B_rad_s"] = trace.meta.omega_B;
    j["dt_scaled"] = trace.meta.dt;
    j["sample_dt_scaled"] = trace.meta.sample_dt;
    j["duration_scaled"] = trace.meta.duration;
    j["basis_halfwidth"] = trace.meta.basis_halfwidth;
    j["q0"] = trace.meta.q0;
    j["s0_Er"] = trace.meta.s0;
    j["norm_drift"] = trace.meta.norm_drift;
    j["edge_population"] = trace.meta.edge_population;
    j["seed"] = trace.meta.seed;
    j["samples"] = trace.size();
    write_json(j, path);
}

void write_spectrum_csv(const Spectrum& sp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "freq_hz,abs_amp,re,im\n";
    for (std::size_t k = 0; k < sp.freq_hz.size(); ++k)
        out << format_double(sp.freq_hz[k]) << ',' << format_double(std::abs(sp.amp[k]))
            << ',' << format_double(sp.amp[k].real()) << ','
            << format_double(sp.amp[k].imag()) << '\n';
}

json harmonic_fit_json(const HarmonicFit& fit) {
    json j;
    j["omega_rad_s"] = fit.omega;
    j["freq_hz"] = fit.omega / constants::two_pi;
    j["sigma_omega_rad_s"] = fit.sigma_omega;
    j["mean"] = fit.mean;
    j["eps"] = fit.eps;
    j["eps_peak_to_peak"] = fit.eps_peak_to_peak;
    j["eps_k"] = fit.eps_k;
    json amps = json::array();
    for (const auto& a : fit.amplitudes) amps.push_back({a.real(), a.imag()});
    j["amplitudes"] = amps;
    j["residual_rms"] = fit.residual_rms;
    j["n_harmonics"] = fit.n_harmonics;
    j["converged"] = fit.converged;
    return j;
}

json sensitivity_json(const SensitivityReport& r) {
    json j;
    j["tau_sp_s"] = r.tau_sp;
    j["d_sw_hbar_kc_sq_per_s"] = r.d_sw;
    j["d_cav_hbar_kc_sq_per_s"] = r.d_cav;
    j["tau_s"] = r.tau;
    j["rate_per_s"] = r.rate;
    j["epsilon"] = r.epsilon;
    j["sigma_omega_rad_s"] = r.sigma_omega;
    j["sigma_ratio"] = r.sigma_ratio;
    j["delta_required_rad_s"] = r.delta_required;
    j["photon_number"] = r.photon_number;
    return j;
}

json monte_carlo_json(const MonteCarloResult& mc) {
    json j;
    j["empirical_sigma_rad_s"] = mc.empirical_sigma;
    j["formula_sigma_rad_s"] = mc.formula_sigma;
    j["ratio"] = mc.formula_sigma > 0.0 ? mc.empirical_sigma / mc.formula_sigma : 0.0;
    j["trials"] = mc.trials;
    j["failures"] = mc.failures;
    j["valid"] = mc.valid;
    return j;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace bzo
