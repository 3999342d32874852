#include "nhssh/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nhssh::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_number(const std::string& s, std::size_t line, const char* field) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad number in field '" + field + "'");
  return v;
}

std::optional<double> parse_opt(const std::string& s, std::size_t line, const char* field) {
  if (s.empty()) return std::nullopt;
  return parse_number(s, line, field);
}

}  // namespace

void write_spectrum_csv(std::ostream& out, const ComplexSpectrum& s, const std::string& tag, bool header) {
  if (header) out << kSpectrumHeader << '\n';
  const bool labels = s.labels.size() == s.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_double(s.eigenvalues[i].real()) << ',' << format_double(s.eigenvalues[i].imag()) << ',';
    if (labels) out << opt(s.labels[i].kx) << ',' << opt(s.labels[i].ky) << ',';
    else out << ",,";
    if (s.has_weights()) out << format_double(s.boundary_weight[i]);
    out << ',' << s.meta.bc << ',' << tag << '\n';
  }
}

std::vector<SpectrumRow> read_spectrum_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSpectrumHeader) throw std::runtime_error("csv line 1: expected header '" + std::string(kSpectrumHeader) + "'");
  std::vector<SpectrumRow> rows;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw std::runtime_error("csv line " + std::to_string(n) + ": expected 7 fields");
    SpectrumRow r;
    r.energy = {parse_number(f[0], n, "re"), parse_number(f[1], n, "im")};
    r.kx = parse_opt(f[2], n, "kx");
    r.ky = parse_opt(f[3], n, "ky");
    r.boundary_weight = parse_opt(f[4], n, "boundary_weight");
    r.bc = f[5];
    r.tag = f[6];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const ScanCurve& curve) {
  out << kScanHeader << '\n';
  for (const auto& s : curve.samples) {
    for (const auto& r : s.reports) {
      const std::string param =
          s.reports.size() > 1 ? curve.parameter + "[" + to_string(r.scope) + "]" : curve.parameter;
      out << param << ',' << format_double(s.value) << ',' << format_double(r.max_abs_im) << ','
          << format_double(r.fraction_real) << ',' << (s.line_gap ? format_double(*s.line_gap) : "") << '\n';
    }
  }
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json to_json(const RealityReport& r) {
  return {{"scope", to_string(r.scope)},     {"count", r.count},
          {"max_abs_im", number(r.max_abs_im)}, {"mean_abs_im", number(r.mean_abs_im)},
          {"fraction_real", number(r.fraction_real)}, {"tol", number(r.tol)}};
}

json to_json(const SymmetryReport& r) {
  return {{"op_name", r.op_name},
          {"residual", number(r.residual)},
          {"verdict", to_string(r.verdict)},
          {"grid", r.grid},
          {"tolerance", number(r.tolerance)}};
}

json to_json(const ScanCurve& c) {
  json samples = json::array();
  for (const auto& s : c.samples) {
    json reports = json::array();
    for (const auto& r : s.reports) reports.push_back(to_json(r));
    samples.push_back({{"value", number(s.value)},
                       {"reports", reports},
                       {"line_gap", s.line_gap ? number(*s.line_gap) : json(nullptr)}});
  }
  return {{"parameter", c.parameter},
          {"samples", samples},
          {"detected_transition", c.detected_transition ? number(*c.detected_transition) : json(nullptr)}};
}

json to_json(const WindingResult& w) {
  return {{"direction", w.direction == Axis::X ? "x" : "y"},
          {"transverse_momentum", number(w.transverse_momentum)},
          {"reference_energy", to_json(w.reference_energy)},
          {"winding", w.winding},
          {"raw", number(w.raw)},
          {"samples", w.samples}};
}

json to_json(const WindingSurvey& w) {
  json random = json::array();
  for (const auto& r : w.random) random.push_back(to_json(r));
  return {{"direction", w.direction == Axis::X ? "x" : "y"},
          {"random", random},
          {"random_nonzero", w.random_nonzero},
          {"rejected", w.rejected},
          {"grid_points", w.grid_points},
          {"grid_nonzero", w.grid_nonzero},
          {"grid_max_abs", w.grid_max_abs},
          {"grid_example", w.grid_example ? to_json(*w.grid_example) : json(nullptr)}};
}

json to_json(const GbzSurvey& g) {
  return {{"kx", number(g.kx)},           {"total", g.total},
          {"bulk", g.bulk},               {"satisfied", g.satisfied},
          {"degenerate", g.degenerate},   {"unresolved", g.unresolved},
          {"fraction", number(g.fraction)}, {"max_abs_im_bulk", number(g.max_abs_im_bulk)}};
}

json to_json(const GbzCheck& g) {
  json moduli = json::array();
  for (double m : g.root_moduli) moduli.push_back(number(m));
  return {{"kx", number(g.kx)},           {"energy", to_json(g.energy)},
          {"root_moduli", moduli},         {"residual", number(g.residual)},
          {"satisfied", g.satisfied},      {"tolerance", number(g.tolerance)}};
}

json to_json(const FiniteSizeResult& f) {
  return {{"curve", to_json(f.curve)}, {"slope", number(f.slope)}, {"monotone_decreasing", f.monotone_decreasing}};
}

json to_json(const SkinEffectReport& s) {
  return {{"axis", s.axis == Axis::X ? "x" : "y"},
          {"present", s.present},
          {"displacement", number(s.displacement)},
          {"mean_boundary_weight", number(s.mean_boundary_weight)},
          {"baseline", number(s.baseline)}};
}

json to_json(const EdgeIsolation& e) {
  return {{"edge_count", e.edge_count}, {"isolated_count", e.isolated_count}, {"max_distance", number(e.max_distance)}};
}

json to_json(const OnsitePattern& p) {
  json values = json::array();
  for (double v : p.values) values.push_back(number(v));
  return {{"pattern", p.describe()}, {"values", values}, {"signs", p.signs}};
}

json to_json(const SpectrumMeta& m) {
  return {{"params_digest", m.params_digest}, {"lattice", m.lattice}, {"bc", m.bc}};
}

}  // namespace nhssh::io
