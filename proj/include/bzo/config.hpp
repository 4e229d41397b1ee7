#ifndef BZO_CONFIG_HPP
#define BZO_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bzo/adiabatic.hpp"
#include "bzo/dynamics.hpp"
#include "bzo/units.hpp"

namespace bzo {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// INI-style configuration: [section] headers, key = value lines, '#' or ';'
// comments. Keys are addressed as "section.key". Parse errors carry
// file:line context.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text,
                               const std::string& name = "<string>");

    bool has(const std::string& dotted_key) const;
    void set(const std::string& dotted_key, const std::string& value);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;

    std::vector<std::string> keys_in_section(const std::string& section) const;
    std::vector<std::string> sections() const;

    // canonical serialization (sorted keys) and its FNV-1a hash
    std::string resolved_text() const;
    std::string hash_hex() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries_;
    std::string name_ = "<none>";

    const Entry& require(const std::string& key) const;
};

enum class PipelineMode { Full, Eliminated, Adiabatic };

// Schema-checked view of a run configuration.
struct RunConfig {
    PhysicalParams physical;
    ScaledParams scaled;
    InitSpec init;
    NumericsSpec numerics;
    AdiabaticOptions adiabatic;
    PipelineMode mode = PipelineMode::Full;
    int analysis_harmonics = 6;
    int analysis_zero_pad = 4;
    std::string analysis_window = "hann";
    int mc_trials = 0;
    int mc_bins_per_period = 16;
    std::uint64_t seed = 1;
    std::vector<std::string> warnings;  // physics-validity flags
    std::string hash;
    std::string resolved;
};

// Validates the schema (unknown sections/keys are errors with field context)
// and assembles the typed configuration. strict = true promotes physics
// warnings to errors.
RunConfig load_run_config(const Config& cfg, bool strict = false);

PipelineMode parse_mode(const std::string& name);
const char* pipeline_mode_name(PipelineMode mode);

}  // namespace bzo

#endif
