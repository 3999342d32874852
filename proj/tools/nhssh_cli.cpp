// nhssh: spectra, scans and checks for the 2D non-Hermitian SSH lattice.
//
// Exit codes: 0 success, 1 assertion failure, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "nhssh/analysis.hpp"
#include "nhssh/config.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/io.hpp"
#include "nhssh/spectra.hpp"
#include "nhssh/svg.hpp"
#include "nhssh/symmetry.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nhssh;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  std::string format;
  int workers = -1;
  bool json = false;
  double tol = -1.0;
};

json versions() {
  return {{"nhssh", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

config::RunConfig load(const Common& c) {
  std::vector<std::string> overrides = c.sets;
  if (!c.out.empty()) overrides.push_back("output.dir=" + quote(c.out));
  if (!c.format.empty()) {
    std::string list;
    std::stringstream ss(c.format);
    std::string item;
    while (std::getline(ss, item, ',')) list += (list.empty() ? "" : ",") + quote(item);
    overrides.push_back("output.formats=[" + list + "]");
  }
  if (c.workers >= 0) overrides.push_back("output.workers=" + std::to_string(c.workers));
  if (c.tol >= 0) overrides.push_back("output.tol=" + io::format_double(c.tol));
  return config::load_file(c.config, overrides);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string fmt(double x) { return io::format_double(x); }

// Shorter form for assertion names.
std::string name_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int finish(const std::string& command, const config::RunConfig& cfg, const json& reports,
           const std::vector<Assertion>& assertions, bool to_stdout) {
  json list = json::array();
  bool ok = true;
  for (const auto& a : assertions) {
    list.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    if (!a.pass) {
      ok = false;
      std::cerr << "assertion failed: " << a.name << ": " << a.detail << '\n';
    }
  }
  const json summary = {{"command", command},
                        {"config", config::echo(cfg)},
                        {"reports", reports},
                        {"assertions", list},
                        {"versions", versions()}};
  const std::string text = summary.dump(2) + "\n";
  // The resolved config goes next to every run so it can be fed back with --config.
  fs::create_directories(cfg.output.dir);
  write_text(fs::path(cfg.output.dir) / "config.json", config::echo(cfg).dump(2) + "\n");
  if (cfg.wants("json")) write_text(fs::path(cfg.output.dir) / "summary.json", text);
  if (to_stdout) {
    std::cout << text;
  } else {
    std::cout << command << ": " << assertions.size() << " assertion(s), "
              << std::count_if(assertions.begin(), assertions.end(), [](const Assertion& a) { return !a.pass; })
              << " failed; outputs in " << cfg.output.dir << '\n';
  }
  return ok ? 0 : 1;
}

// --- spectrum ----------------------------------------------------------------

LatticeSpec lattice_for(const config::RunConfig& cfg, const std::string& bc) {
  const bool open_x = bc == "xOBC" || bc == "xyOBC";
  const bool open_y = bc == "yOBC" || bc == "xyOBC";
  return {cfg.lattice.nx, cfg.lattice.ny, open_x ? Boundary::Open : Boundary::Periodic,
          open_y ? Boundary::Open : Boundary::Periodic};
}

double cross_statistic(const ComplexSpectrum& s) {
  double worst = 0.0;
  for (auto e : s.eigenvalues) worst = std::max(worst, std::min(std::abs(e.real()), std::abs(e.imag())));
  return worst;
}

int cmd_spectrum(const Common& common) {
  const auto cfg = load(common);
  const ModelParams params = cfg.params();
  SolveOptions so;
  so.workers = cfg.output.workers;
  so.strip_cells = cfg.lattice.strip_cells;

  std::vector<std::string> bcs = cfg.lattice.bcs;
  std::stable_sort(bcs.begin(), bcs.end(),
                   [](const std::string& a, const std::string& b) { return svg::bc_rank(a) < svg::bc_rank(b); });
  bcs.erase(std::unique(bcs.begin(), bcs.end()), bcs.end());

  std::map<std::string, ComplexSpectrum> spectra;
  std::map<std::string, RealityReport> reality;
  json reports = json::array();
  for (const auto& bc : bcs) {
    ComplexSpectrum s = bc == "PBC" ? bloch_spectrum(params, {cfg.lattice.nkx, cfg.lattice.nky}, so)
                                    : full_spectrum(params, lattice_for(cfg, bc), so);
    const auto r = reality_report(s, cfg.output.tol, scope_of(s));
    const double cross = cross_statistic(s);
    reports.push_back({{"kind", "spectrum"},
                       {"bc", bc},
                       {"meta", io::to_json(s.meta)},
                       {"reality", io::to_json(r)},
                       {"pt_phase", to_string(classify_pt_phase(s, cfg.output.tol))},
                       {"cross_statistic", io::number(cross)},
                       {"cross_structure", cross < cfg.output.tol && r.fraction_real > 0 && r.fraction_real < 1},
                       {"max_residual", io::number(s.max_residual)},
                       {"residual_warnings", s.residual_warnings}});
    reality[bc] = r;
    spectra[bc] = std::move(s);
  }

  fs::create_directories(cfg.output.dir);
  if (cfg.wants("csv")) {
    std::ostringstream csv;
    bool header = true;
    for (const auto& bc : bcs) {
      io::write_spectrum_csv(csv, spectra[bc], spectra[bc].meta.lattice, header);
      header = false;
    }
    write_text(fs::path(cfg.output.dir) / "spectrum.csv", csv.str());
  }
  if (cfg.wants("svg")) {
    std::vector<svg::Series> series;
    for (const auto& bc : bcs) series.push_back({bc, svg::bc_color(bc), spectra[bc].eigenvalues});
    svg::PlotOptions po{"complex spectrum"};
    po.metadata = config::echo(cfg).dump();
    write_text(fs::path(cfg.output.dir) / "spectrum.svg", svg::render_scatter(series, po));
  }

  std::vector<Assertion> assertions;
  for (const auto& [bc, bound] : cfg.asserts.max_abs_im) {
    Assertion a{"max_abs_im[" + bc + "] <= " + name_num(bound), false, ""};
    if (!reality.count(bc)) a.detail = bc + " spectrum not computed";
    else a.pass = reality[bc].max_abs_im <= bound, a.detail = "max_abs_im = " + fmt(reality[bc].max_abs_im);
    assertions.push_back(a);
  }
  for (const auto& bc : cfg.asserts.real) {
    Assertion a{"real[" + bc + "]", false, ""};
    if (!reality.count(bc)) a.detail = bc + " spectrum not computed";
    else a.pass = reality[bc].max_abs_im < cfg.output.tol, a.detail = "max_abs_im = " + fmt(reality[bc].max_abs_im);
    assertions.push_back(a);
  }
  if (cfg.asserts.pbc_cross) {
    Assertion a{"pbc_cross == " + std::string(*cfg.asserts.pbc_cross ? "true" : "false"), false, ""};
    if (!spectra.count("PBC")) {
      a.detail = "PBC spectrum not computed";
    } else {
      const double stat = cross_statistic(spectra["PBC"]);
      const auto& r = reality["PBC"];
      const bool cross = stat < cfg.output.tol && r.fraction_real > 0 && r.fraction_real < 1;
      a.pass = cross == *cfg.asserts.pbc_cross;
      a.detail = "max min(|Re|,|Im|) = " + fmt(stat) + ", fraction_real = " + fmt(r.fraction_real);
    }
    assertions.push_back(a);
  }
  return finish("spectrum", cfg, reports, assertions, common.json);
}

// --- scan --------------------------------------------------------------------

int cmd_scan(const Common& common) {
  const auto cfg = load(common);
  const auto& sc = cfg.scan;
  if (sc.kind.empty()) throw config::ConfigError(common.config.empty() ? "config" : common.config, 0, "scan.kind",
                                                 "the scan command needs scan.kind");
  const ModelParams params = cfg.params();

  ScanCurve curve;
  json extra = json::object();
  std::optional<bool> monotone;
  if (sc.kind == "alpha") {
    PtScanOptions o;
    o.grid = {cfg.lattice.nkx, cfg.lattice.nky};
    o.tol = cfg.output.tol;
    o.resolution = sc.resolution;
    o.workers = cfg.output.workers;
    curve = pt_transition_scan(params, sc.values, o);
  } else if (sc.kind == "theta") {
    ThetaScanOptions o;
    o.hoppings = params;
    o.grid = {cfg.lattice.nkx, cfg.lattice.nky};
    o.obc = {cfg.lattice.nx, cfg.lattice.ny, Boundary::Open, Boundary::Open};
    o.include_obc = sc.include_obc;
    o.tol = cfg.output.tol;
    o.workers = cfg.output.workers;
    curve = theta_scan(sc.amplitude, sc.values, sc.variant == "zzz" ? ThetaVariant::ZZ : ThetaVariant::ZZero, o);
  } else {
    FiniteSizeOptions o;
    o.tol = cfg.output.tol;
    o.scope = sc.scope == "bulk" ? Scope::BulkOnly : sc.scope == "edge" ? Scope::EdgeOnly : Scope::XYOBC;
    o.edge_threshold = cfg.lattice.edge_threshold;
    o.strip_cells = cfg.lattice.strip_cells;
    const auto fs_result = finite_size_scaling(params, sc.sizes, o);
    curve = fs_result.curve;
    monotone = fs_result.monotone_decreasing;
    extra = {{"slope", io::number(fs_result.slope)}, {"monotone_decreasing", fs_result.monotone_decreasing}};
  }

  fs::create_directories(cfg.output.dir);
  if (cfg.wants("csv")) {
    std::ostringstream csv;
    io::write_scan_csv(csv, curve);
    write_text(fs::path(cfg.output.dir) / "scan.csv", csv.str());
  }
  if (cfg.wants("svg")) {
    std::map<std::string, std::vector<cplx>> by_scope;
    std::vector<std::string> order;
    for (const auto& s : curve.samples)
      for (const auto& r : s.reports) {
        const auto key = to_string(r.scope);
        if (!by_scope.count(key)) order.push_back(key);
        by_scope[key].emplace_back(s.value, std::log10(std::max(r.max_abs_im, 1e-16)));
      }
    std::vector<svg::Series> series;
    for (const auto& k : order) series.push_back({k, svg::bc_color(k), by_scope[k]});
    svg::PlotOptions po{curve.parameter + " scan"};
    po.x_label = curve.parameter;
    po.y_label = "log10 max |Im E|";
    po.marker_radius = 3.0;
    po.metadata = config::echo(cfg).dump();
    write_text(fs::path(cfg.output.dir) / "scan.svg", svg::render_scatter(series, po));
  }

  json report = {{"kind", "scan"}, {"curve", io::to_json(curve)}};
  report.update(extra);
  json reports = json::array({report});

  std::vector<Assertion> assertions;
  const auto& t = curve.detected_transition;
  const std::string t_text = t ? fmt(*t) : "none";
  if (cfg.asserts.transition_min)
    assertions.push_back({"transition > " + name_num(*cfg.asserts.transition_min),
                          t && *t > *cfg.asserts.transition_min, "detected transition = " + t_text});
  if (cfg.asserts.transition_max)
    assertions.push_back({"transition < " + name_num(*cfg.asserts.transition_max),
                          t && *t < *cfg.asserts.transition_max, "detected transition = " + t_text});
  if (cfg.asserts.transition_near) {
    const double target = *cfg.asserts.transition_near;
    double nearest = sc.values.empty() ? target : sc.values.front();
    for (double v : sc.values)
      if (std::abs(v - target) < std::abs(nearest - target)) nearest = v;
    assertions.push_back({"transition at sample nearest " + name_num(target), t && *t == nearest,
                          "detected transition = " + t_text + ", nearest sample = " + fmt(nearest)});
  }
  if (cfg.asserts.monotone) {
    Assertion a{"monotone == " + std::string(*cfg.asserts.monotone ? "true" : "false"), false, ""};
    if (!monotone) a.detail = "only size scans report monotonicity";
    else a.pass = *monotone == *cfg.asserts.monotone, a.detail = std::string("monotone_decreasing = ") + (*monotone ? "true" : "false");
    assertions.push_back(a);
  }
  return finish("scan", cfg, reports, assertions, common.json);
}

// --- check -------------------------------------------------------------------

int cmd_check(const Common& common) {
  const auto cfg = load(common);
  const ModelParams params = cfg.params();
  const auto& ck = cfg.check;
  const auto& as = cfg.asserts;
  json reports = json::array();
  std::vector<Assertion> assertions;

  // symmetries
  std::vector<std::string> names = ck.symmetries;
  if (names.empty())
    for (const auto& op : ops::standard_set()) names.push_back(op.name);
  for (const auto* list : {&as.preserved, &as.broken})
    for (const auto& n : *list)
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  std::map<std::string, SymmetryReport> sym;
  for (const auto& n : names) {
    const auto r = check_symmetry(params, ops::by_name(n), {ck.symmetry_grid, ck.symmetry_grid}, ck.symmetry_tol);
    reports.push_back({{"kind", "symmetry"}, {"report", io::to_json(r)}});
    sym[n] = r;
  }
  for (const auto& n : as.preserved)
    assertions.push_back({"preserved[" + n + "]", sym[n].verdict == Verdict::Preserved,
                          "residual = " + fmt(sym[n].residual)});
  for (const auto& n : as.broken)
    assertions.push_back({"broken[" + n + "]", sym[n].verdict == Verdict::Broken, "residual = " + fmt(sym[n].residual)});

  // windings
  std::vector<std::string> axes = ck.winding;
  if (as.winding_x && std::find(axes.begin(), axes.end(), "x") == axes.end()) axes.push_back("x");
  if (as.winding_y && std::find(axes.begin(), axes.end(), "y") == axes.end()) axes.push_back("y");
  for (const auto& axis : axes) {
    const auto w = winding_survey(params, axis == "x" ? Axis::X : Axis::Y, ck.winding_pairs, ck.winding_samples,
                                  ck.seed);
    reports.push_back({{"kind", "winding"}, {"survey", io::to_json(w)}});
    const auto& expect = axis == "x" ? as.winding_x : as.winding_y;
    if (!expect) continue;
    const bool all_zero = w.random_nonzero == 0 && w.grid_nonzero == 0;
    const std::string detail = std::to_string(w.random_nonzero) + "/" + std::to_string(w.random.size()) +
                               " random and " + std::to_string(w.grid_nonzero) + "/" +
                               std::to_string(w.grid_points) + " grid windings nonzero";
    assertions.push_back({"winding_" + axis + " " + *expect, *expect == "zero" ? all_zero : !all_zero, detail});
  }

  // skin effect
  std::vector<std::string> skin = ck.skin;
  if (as.skin_x && std::find(skin.begin(), skin.end(), "x") == skin.end()) skin.push_back("x");
  if (as.skin_y && std::find(skin.begin(), skin.end(), "y") == skin.end()) skin.push_back("y");
  for (const auto& axis : skin) {
    SkinOptions so;
    so.cells = ck.skin_cells;
    so.strip_cells = cfg.lattice.strip_cells;
    so.workers = cfg.output.workers;
    const auto r = skin_effect_indicator(params, axis == "x" ? Axis::X : Axis::Y, so);
    reports.push_back({{"kind", "skin"}, {"report", io::to_json(r)}});
    const auto& expect = axis == "x" ? as.skin_x : as.skin_y;
    if (expect)
      assertions.push_back({"skin_" + axis + " == " + (*expect ? "true" : "false"), r.present == *expect,
                            "displacement = " + fmt(r.displacement) + ", mean boundary weight = " +
                                fmt(r.mean_boundary_weight) + " (baseline " + fmt(r.baseline) + ")"});
  }

  // non-Bloch modular condition
  for (double kx : ck.gbz_kx) {
    const auto g = gbz_ribbon_survey(params, kx, ck.gbz_cells, ck.gbz_tol, cfg.lattice.edge_threshold,
                                     cfg.lattice.strip_cells, cfg.output.workers);
    reports.push_back({{"kind", "gbz"}, {"survey", io::to_json(g)}});
    if (as.gbz_fraction)
      assertions.push_back({"gbz_fraction[kx=" + name_num(kx) + "] >= " + name_num(*as.gbz_fraction),
                            g.fraction >= *as.gbz_fraction,
                            std::to_string(g.satisfied) + "/" + std::to_string(g.bulk) + " bulk states satisfied"});
  }
  if (as.gbz_fraction && ck.gbz_kx.empty())
    assertions.push_back({"gbz_fraction >= " + name_num(*as.gbz_fraction), false, "check.gbz_kx is empty"});

  return finish("check", cfg, reports, assertions, common.json);
}

// --- plot --------------------------------------------------------------------

int cmd_plot(const std::vector<std::string>& inputs, const std::string& out, const std::string& title) {
  std::map<std::string, std::vector<cplx>> by_bc;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw config::ConfigError(path, 0, "", "cannot open file");
    std::vector<io::SpectrumRow> rows;
    try {
      rows = io::read_spectrum_csv(in);
    } catch (const std::runtime_error& e) {
      throw config::ConfigError(path, 0, "", e.what());
    }
    for (const auto& r : rows) by_bc[r.bc].push_back(r.energy);
  }
  std::vector<std::string> order;
  for (const auto& [bc, pts] : by_bc) order.push_back(bc);
  std::stable_sort(order.begin(), order.end(),
                   [](const std::string& a, const std::string& b) { return svg::bc_rank(a) < svg::bc_rank(b); });
  std::vector<svg::Series> series;
  for (const auto& bc : order) series.push_back({bc, svg::bc_color(bc), by_bc[bc]});
  const fs::path target(out);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  write_text(target, svg::render_scatter(series, {title}));
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "configuration file (key-value or JSON)");
  sub->add_option("--set", c.sets, "override, table.key=value (repeatable)");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--format", c.format, "comma-separated output formats: csv,json,svg");
  sub->add_option("--workers", c.workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  sub->add_flag("--json", c.json, "print the summary JSON on stdout");
  sub->add_option("--tol", c.tol, "reality tolerance on |Im E|")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, parameter scans and symmetry checks for the 2D non-Hermitian SSH lattice"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  auto* spectrum = app.add_subcommand("spectrum", "complex spectra for the configured boundary conditions");
  auto* scan = app.add_subcommand("scan", "alpha, theta or lattice-size scan");
  auto* check = app.add_subcommand("check", "symmetry, winding, skin-effect and GBZ checks");
  for (auto* sub : {spectrum, scan, check}) add_common(sub, common);

  auto* plot = app.add_subcommand("plot", "replot spectrum CSV files as an SVG scatter");
  std::vector<std::string> inputs;
  std::string plot_out = "spectrum.svg";
  std::string title = "complex spectrum";
  plot->add_option("inputs", inputs, "spectrum CSV files")->required();
  plot->add_option("--out", plot_out, "output SVG path");
  plot->add_option("--title", title, "plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(common);
    if (*scan) return cmd_scan(common);
    if (*check) return cmd_check(common);
    if (*plot) return cmd_plot(inputs, plot_out, title);
  } catch (const config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const AnalysisError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
