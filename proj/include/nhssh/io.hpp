#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhssh/analysis.hpp"
#include "nhssh/spectra.hpp"
#include "nhssh/symmetry.hpp"

namespace nhssh::io {

using nlohmann::json;

// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);

// Spectrum CSV, one row per eigenvalue:
//   re,im,kx,ky,boundary_weight,bc,tag
// Missing momenta or weights are left empty.
inline constexpr const char* kSpectrumHeader = "re,im,kx,ky,boundary_weight,bc,tag";
void write_spectrum_csv(std::ostream& out, const ComplexSpectrum& spectrum, const std::string& tag,
                        bool header = true);

struct SpectrumRow {
  cplx energy;
  std::optional<double> kx, ky, boundary_weight;
  std::string bc;
  std::string tag;
};

// Parses a file written by write_spectrum_csv. Throws std::runtime_error with the line number.
std::vector<SpectrumRow> read_spectrum_csv(std::istream& in);

// Scan CSV: param,value,max_abs_im,fraction_real,line_gap. With several reports per sample
// (e.g. PBC and xyOBC) `param` is suffixed with the scope, "theta[xyOBC]".
inline constexpr const char* kScanHeader = "param,value,max_abs_im,fraction_real,line_gap";
void write_scan_csv(std::ostream& out, const ScanCurve& curve);

// Non-finite doubles become null.
json number(double x);

json to_json(const RealityReport& r);
json to_json(const SymmetryReport& r);
json to_json(const ScanCurve& c);
json to_json(const WindingResult& w);
json to_json(const WindingSurvey& w);
json to_json(const GbzSurvey& g);
json to_json(const GbzCheck& g);
json to_json(const FiniteSizeResult& f);
json to_json(const SkinEffectReport& s);
json to_json(const EdgeIsolation& e);
json to_json(const OnsitePattern& p);
json to_json(const SpectrumMeta& m);
json to_json(cplx z);  // [re, im]

}  // namespace nhssh::io
