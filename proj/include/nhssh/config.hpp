#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nhssh/hamiltonian.hpp"
#include "nhssh/pauli.hpp"

namespace nhssh::config {

// Invalid configuration. `line` is 0 when the problem is not tied to a source line
// (JSON input, --set overrides, cross-field checks).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& field, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Parsed value of the key-value format: number, string, bool or (nested) array.
struct Value {
  std::variant<double, std::string, bool, std::vector<Value>> data;
  std::size_t line = 0;
};

// table name -> key -> value. Keys before the first [table] go into the "" table.
using Document = std::map<std::string, std::map<std::string, Value>>;

// Grammar, one item per line:
//   [table]
//   key = value        # comment
// Values: numbers (an optional `pi` suffix multiplies by pi, "0.35pi"), "strings", true/false,
// and single-line arrays [v, v, ...]. A text starting with '{' is read as JSON instead, which is
// how echoed configs are fed back in.
Document parse_document(const std::string& text, const std::string& source = "config");

// "table.key=value"; the value uses the same grammar.
void apply_override(Document& doc, const std::string& assignment);

struct ModelConfig {
  double gamma_in = 0.2;
  double gamma_ex = 0.4;
  double gamma_in_p = 0.1;
  double gamma_ex_p = 0.2;
  std::vector<PauliTerm> terms;  // presets already expanded
};

struct LatticeConfig {
  int nx = 20;
  int ny = 20;
  std::vector<std::string> bcs{"PBC", "xOBC", "yOBC", "xyOBC"};
  int nkx = 64;
  int nky = 64;
  int strip_cells = 2;
  double edge_threshold = 0.5;
};

struct ScanConfig {
  std::string kind;  // "alpha", "theta" or "size"; empty when no scan is configured
  std::vector<double> values;
  std::vector<std::pair<int, int>> sizes;
  double amplitude = 0.8;
  std::string variant = "zz0";  // zz0: sigma^z sigma^0, zzz: sigma^z sigma^z
  double resolution = 1e-3;
  bool include_obc = true;
  std::string scope = "xyOBC";  // size scans: xyOBC, bulk or edge
};

struct CheckConfig {
  std::vector<std::string> symmetries;  // empty: the standard ten
  int symmetry_grid = 32;
  double symmetry_tol = 1e-10;
  std::vector<std::string> winding;  // axes, "x" / "y"
  int winding_pairs = 20;
  int winding_samples = 512;
  std::uint64_t seed = 1;
  std::vector<std::string> skin;  // axes
  int skin_cells = 40;
  std::vector<double> gbz_kx;
  int gbz_cells = 200;
  double gbz_tol = 1e-2;
};

struct AssertConfig {
  std::map<std::string, double> max_abs_im;  // keyed by boundary tag
  std::vector<std::string> real;             // tags whose spectra must be real within output.tol
  std::optional<bool> pbc_cross;
  std::optional<double> transition_min, transition_max, transition_near;
  std::optional<bool> monotone;
  std::vector<std::string> preserved, broken;
  std::optional<std::string> winding_x, winding_y;  // "zero" or "nonzero"
  std::optional<bool> skin_x, skin_y;
  std::optional<double> gbz_fraction;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  double tol = 1e-8;
  int workers = 0;
};

struct RunConfig {
  ModelConfig model;
  LatticeConfig lattice;
  ScanConfig scan;
  CheckConfig check;
  AssertConfig asserts;
  OutputConfig output;

  ModelParams params() const;
  bool wants(const std::string& format) const;
};

// Strict: unknown tables or keys and wrongly typed values throw ConfigError.
// Presets in [model]: alpha = a adds (0,3,a); beta = b adds (3,0,b); theta = t with amp and
// variant adds amp (cos t s^0 s^z + sin t X). hoppings = "reference" | "hermitian" picks the
// hopping set before explicit gamma_* keys.
RunConfig resolve(const Document& doc, const std::string& source = "config");

// Fully resolved config; resolve(parse_document(echo(c).dump())) == c.
nlohmann::json echo(const RunConfig& c);

RunConfig load_file(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace nhssh::config
