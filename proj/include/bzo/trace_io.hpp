#ifndef BZO_TRACE_IO_HPP
#define BZO_TRACE_IO_HPP

#include <string>

#include <json.hpp>

#include "bzo/analysis.hpp"
#include "bzo/sensing.hpp"
#include "bzo/trace.hpp"

namespace bzo {

// Trace CSV: header line then one row per sample,
//   t_s,s_Er,re_alpha,im_alpha,nphot,overlap,p0,p1,p2,p3,q
// Doubles are written with 17 significant digits so files round-trip
// bit-exactly.
void write_trace_csv(const RunTrace& trace, const std::string& path);
RunTrace read_trace_csv(const std::string& path);

// Sidecar metadata record (<stem>.meta.json); read_trace_csv picks it up
// automatically when present next to the CSV.
void write_trace_meta(const RunTrace& trace, const std::string& path);

// Spectrum CSV: freq_hz,abs_amp,re,im
void write_spectrum_csv(const Spectrum& sp, const std::string& path);

nlohmann::json harmonic_fit_json(const HarmonicFit& fit);
nlohmann::json sensitivity_json(const SensitivityReport& report);
nlohmann::json monte_carlo_json(const MonteCarloResult& mc);

void write_json(const nlohmann::json& j, const std::string& path);

std::string format_double(double v);  // shortest 17-digit representation

}  // namespace bzo

#endif
