#include "bzo/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bzo/constants.hpp"

namespace bzo {

using constants::two_pi;

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& name) {
    Config cfg;
    cfg.name_ = name;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(name + ":" + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(name + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(name + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError(name + ":" + std::to_string(lineno) + ": key outside any [section]");
        cfg.entries_[section + "." + key] = {value, lineno};
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) {
    if (key.find('.') == std::string::npos)
        throw ConfigError("override key '" + key + "' must be section.key");
    entries_[key] = {value, 0};
}

const Config::Entry& Config::require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(name_ + ": missing required key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key) const {
    const Entry& e = require(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(name_ + ":" + std::to_string(e.line) + ": '" + key +
                          "' is not a number: '" + e.value + "'");
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
    const double v = get_double(key);
    const long n = std::lround(v);
    if (std::abs(v - n) > 1e-9)
        throw ConfigError(name_ + ": '" + key + "' must be an integer");
    return n;
}

long Config::get_int(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError(name_ + ":" + std::to_string(e.line) + ": '" + key +
                              "' has a non-numeric element '" + tok + "'");
        }
    }
    if (out.empty())
        throw ConfigError(name_ + ": '" + key + "' must list at least one value");
    return out;
}

std::vector<std::string> Config::keys_in_section(const std::string& section) const {
    std::vector<std::string> out;
    const std::string prefix = section + ".";
    for (const auto& [k, v] : entries_)
        if (k.rfind(prefix, 0) == 0) out.push_back(k.substr(prefix.size()));
    return out;
}

std::vector<std::string> Config::sections() const {
    std::set<std::string> secs;
    for (const auto& [k, v] : entries_) secs.insert(k.substr(0, k.find('.')));
    return {secs.begin(), secs.end()};
}

std::string Config::resolved_text() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries_) os << k << " = " << v.value << "\n";
    return os.str();
}

std::string Config::hash_hex() const {
    // FNV-1a 64-bit over the canonical serialization
    std::uint64_t h = 14695981039346656037ULL;
    for (const char ch : resolved_text()) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

PipelineMode parse_mode(const std::string& name) {
    if (name == "full") return PipelineMode::Full;
    if (name == "eliminated") return PipelineMode::Eliminated;
    if (name == "adiabatic") return PipelineMode::Adiabatic;
    throw ConfigError("unknown mode '" + name + "' (full|eliminated|adiabatic)");
}

const char* pipeline_mode_name(PipelineMode mode) {
    switch (mode) {
        case PipelineMode::Full: return "full";
        case PipelineMode::Eliminated: return "eliminated";
        case PipelineMode::Adiabatic: return "adiabatic";
    }
    return "?";
}

namespace {

const std::set<std::string>& allowed_keys() {
    static const std::set<std::string> keys = {
        "units.preset", "units.mass_kg", "units.wavelength_m", "units.g0_hz",
        "units.kappa_hz", "units.gamma_hz", "units.delta_hz", "units.eta_hz",
        "units.n_atoms", "units.force_n", "units.detector_efficiency",
        "dynamics.mode", "dynamics.q0", "dynamics.s_guess_er",
        "numerics.basis_halfwidth", "numerics.steps_per_period",
        "numerics.samples_per_period", "numerics.periods", "numerics.dt",
        "numerics.sample_dt", "numerics.duration",
        "adiabatic.samples_per_period", "adiabatic.periods",
        "adiabatic.basis_halfwidth",
        "analysis.harmonics", "analysis.zero_pad", "analysis.window",
        "sensing.mc_trials", "sensing.mc_bins_per_period",
        "run.seed",
    };
    return keys;
}

}  // namespace

RunConfig load_run_config(const Config& cfg, bool strict) {
    // schema: every key must be known (sweep is handled by the CLI)
    for (const auto& section : cfg.sections()) {
        if (section == "sweep") continue;
        for (const auto& key : cfg.keys_in_section(section)) {
            const std::string full = section + "." + key;
            if (!allowed_keys().count(full))
                throw ConfigError("unknown config key '" + full + "'");
        }
    }

    RunConfig rc;
    PhysicalParams p;
    if (cfg.has("units.preset")) p = preset(cfg.get_string("units.preset"));
    if (cfg.has("units.mass_kg")) p.atom_mass = cfg.get_double("units.mass_kg");
    if (cfg.has("units.wavelength_m")) p.wavelength = cfg.get_double("units.wavelength_m");
    if (cfg.has("units.gamma_hz")) p.gamma = two_pi * cfg.get_double("units.gamma_hz");
    p.g0 = two_pi * cfg.get_double("units.g0_hz");
    p.kappa = two_pi * cfg.get_double("units.kappa_hz");
    p.delta = two_pi * cfg.get_double("units.delta_hz");
    p.eta = two_pi * cfg.get_double("units.eta_hz", 0.0);
    p.n_atoms = cfg.get_double("units.n_atoms");
    p.force = cfg.get_double("units.force_n");
    p.detector_efficiency = cfg.get_double("units.detector_efficiency", 1.0);

    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid [units] parameters: ") + e.what());
    }
    rc.physical = p;
    rc.scaled = scale(p);
    rc.warnings = p.validity_warnings();
    if (strict && !rc.warnings.empty()) {
        std::ostringstream os;
        os << "physics validity violated in strict mode:";
        for (const auto& w : rc.warnings) os << "\n  " << w;
        throw ConfigError(os.str());
    }

    rc.mode = parse_mode(cfg.get_string("dynamics.mode", "full"));
    rc.init.q0 = cfg.get_double("dynamics.q0", 0.0);
    rc.init.s_guess = cfg.get_double("dynamics.s_guess_er", 3.0);

    rc.numerics.basis_halfwidth = static_cast<int>(cfg.get_int("numerics.basis_halfwidth", 24));
    rc.numerics.steps_per_period = static_cast<int>(cfg.get_int("numerics.steps_per_period", 4096));
    rc.numerics.samples_per_period = static_cast<int>(cfg.get_int("numerics.samples_per_period", 256));
    rc.numerics.periods = cfg.get_double("numerics.periods", 16.0);
    rc.numerics.dt = cfg.get_double("numerics.dt", 0.0);
    rc.numerics.sample_dt = cfg.get_double("numerics.sample_dt", 0.0);
    rc.numerics.duration = cfg.get_double("numerics.duration", 0.0);

    rc.adiabatic.samples_per_period =
        static_cast<int>(cfg.get_int("adiabatic.samples_per_period",
                                     rc.numerics.samples_per_period));
    rc.adiabatic.periods = cfg.get_double("adiabatic.periods", rc.numerics.periods);
    rc.adiabatic.basis_halfwidth =
        static_cast<int>(cfg.get_int("adiabatic.basis_halfwidth", 16));
    rc.adiabatic.q0 = rc.init.q0;
    rc.adiabatic.s_guess = rc.init.s_guess;

    rc.analysis_harmonics = static_cast<int>(cfg.get_int("analysis.harmonics", 6));
    rc.analysis_zero_pad = static_cast<int>(cfg.get_int("analysis.zero_pad", 4));
    rc.analysis_window = cfg.get_string("analysis.window", "hann");
    rc.mc_trials = static_cast<int>(cfg.get_int("sensing.mc_trials", 0));
    rc.mc_bins_per_period = static_cast<int>(cfg.get_int("sensing.mc_bins_per_period", 16));
    rc.seed = static_cast<std::uint64_t>(cfg.get_int("run.seed", 1));

    rc.hash = cfg.hash_hex();
    rc.resolved = cfg.resolved_text();
    return rc;
}

}  // namespace bzo
