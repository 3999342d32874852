#include "nhssh/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>

#include "nhssh/eigensolver.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/parallel.hpp"

namespace nhssh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResidualWarn = 1e-8;

std::string fmt_k(const char* name, double k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.6g", name, k);
  return buf;
}

std::vector<std::size_t> lexicographic_order(const std::vector<cplx>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lexicographic_less(values[a], values[b]); });
  return order;
}

template <class T>
std::vector<T> permute(const std::vector<T>& in, const std::vector<std::size_t>& order) {
  if (in.empty()) return {};
  std::vector<T> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(in[i]);
  return out;
}

// Eigenvalues (and optionally weights/residuals) of one dense block, sorted lexicographically.
struct BlockResult {
  std::vector<cplx> values;
  std::vector<double> weights;
  std::vector<double> gauge;
  std::vector<double> error_bound;
  double max_residual = -1.0;
  std::size_t warnings = 0;
  std::size_t unresolved = 0;
};

void sort_block(BlockResult& r) {
  const auto order = lexicographic_order(r.values);
  r.values = permute(r.values, order);
  r.weights = permute(r.weights, order);
  r.gauge = permute(r.gauge, order);
  r.error_bound = permute(r.error_bound, order);
}

std::vector<double> column_residuals(const MatrixXcd& h, const EigenDecomposition& dec) {
  const MatrixXcd r = h * dec.vectors - dec.vectors * dec.values.asDiagonal();
  std::vector<double> out(static_cast<std::size_t>(r.cols()));
  for (Eigen::Index j = 0; j < r.cols(); ++j) out[static_cast<std::size_t>(j)] = r.col(j).norm();
  return out;
}

std::vector<double> strip_weights(const MatrixXcd& vectors, const std::vector<Eigen::Index>& strip) {
  std::vector<double> out(static_cast<std::size_t>(vectors.cols()));
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    double w = 0.0;
    for (auto i : strip) w += std::norm(vectors(i, j));
    out[static_cast<std::size_t>(j)] = std::clamp(w, 0.0, 1.0);
  }
  return out;
}

BlockResult solve_block(const MatrixXcd& h, const std::vector<Eigen::Index>& strip, bool vectors,
                        const std::string& label) {
  BlockResult r;
  const auto dec = eigen_decompose(h, {.vectors = vectors, .condition = false}, label);
  r.values.assign(dec.values.data(), dec.values.data() + dec.values.size());
  if (vectors) {
    r.weights = strip_weights(dec.vectors, strip);
    const auto res = column_residuals(h, dec);
    r.max_residual = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
    r.warnings = static_cast<std::size_t>(
        std::count_if(res.begin(), res.end(), [](double x) { return x > kResidualWarn; }));
  }
  sort_block(r);
  return r;
}

std::vector<Eigen::Index> ribbon_strip(int cells, int strip_cells) {
  std::vector<Eigen::Index> strip;
  for (int c = 0; c < cells; ++c)
    if (c < strip_cells || c >= cells - strip_cells)
      for (int o = 0; o < 4; ++o) strip.push_back(4 * c + o);
  return strip;
}

// Growth rate per cell of a ribbon eigenvector: least-squares slope of log ||psi_c||.
double fitted_radius(const Eigen::VectorXcd& v, int cells) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int c = 0; c < cells; ++c) {
    const double norm = v.segment<4>(4 * c).norm();
    if (!(norm > 1e-280)) continue;
    const double y = std::log(norm);
    sx += c;
    sy += y;
    sxx += double(c) * c;
    sxy += c * y;
    ++n;
  }
  if (n < 2) return 1.0;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 1.0;
  return std::exp((n * sxy - sx * sy) / denom);
}

// Representative radii of clusters of nearby log-radii (bins of relative width `ratio`).
std::vector<double> cluster_radii(std::vector<double> radii, double ratio) {
  std::sort(radii.begin(), radii.end());
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= radii.size(); ++i) {
    if (i == radii.size() || radii[i] > radii[start] * ratio) {
      out.push_back(radii[start + (i - start) / 2]);
      start = i;
    }
  }
  return out;
}

bool has_gauge(const std::vector<double>& gauges, double g) {
  return std::any_of(gauges.begin(), gauges.end(), [&](double x) { return std::abs(std::log(x / g)) < 0.02; });
}

struct Candidate {
  cplx value;
  double err;
  double weight;
  double gauge;
  int frame;
};

constexpr double kAcceptError = 1e-9;

BlockResult solve_ribbon_stabilized(const ModelParams& params, Axis axis, int cells, double k,
                                    int strip_cells, const std::string& label) {
  const Eigen::Index dim = 4 * static_cast<Eigen::Index>(cells);
  const auto strip = ribbon_strip(cells, strip_cells);

  // Skin radii measured on a short probe ribbon, where the plain solve is still accurate.
  const int probe_cells = std::min(cells, 24);
  const auto probe = eigen_decompose(build_ribbon(params, axis, probe_cells, k), {.vectors = true}, label);
  std::vector<double> measured;
  for (Eigen::Index j = 0; j < probe.vectors.cols(); ++j)
    measured.push_back(std::clamp(fitted_radius(probe.vectors.col(j), probe_cells), 1e-3, 1e3));
  std::vector<double> gauges{1.0};
  for (double g : cluster_radii(measured, 1.1))
    if (!has_gauge(gauges, g)) gauges.push_back(g);

  std::vector<Candidate> candidates;
  auto solve_frames = [&](std::size_t from) {
    for (std::size_t f = from; f < gauges.size(); ++f) {
      const MatrixXcd h = build_ribbon(params, axis, cells, k, gauges[f]);
      const auto dec = eigen_decompose(h, {.vectors = true, .condition = true}, label);
      const auto w = strip_weights(dec.vectors, strip);
      for (Eigen::Index j = 0; j < dec.values.size(); ++j)
        candidates.push_back({dec.values(j), dec.error_bound(j), w[static_cast<std::size_t>(j)], gauges[f],
                              static_cast<int>(f)});
    }
  };

  struct Accepted {
    Candidate c;
    std::vector<int> claimed_frames;
  };
  std::vector<Accepted> accepted;

  auto merge = [&](bool fill) {
    accepted.clear();
    std::vector<const Candidate*> sorted;
    for (const auto& c : candidates) sorted.push_back(&c);
    std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->err < b->err; });
    for (const Candidate* c : sorted) {
      if (static_cast<Eigen::Index>(accepted.size()) == dim) break;
      if (!fill && c->err > kAcceptError) break;
      // A well-conditioned eigenvalue shows up in several frames; each frame may claim an
      // accepted value once.
      Accepted* twin = nullptr;
      double best = std::numeric_limits<double>::infinity();
      for (auto& a : accepted) {
        if (a.c.frame == c->frame) continue;
        if (std::find(a.claimed_frames.begin(), a.claimed_frames.end(), c->frame) != a.claimed_frames.end())
          continue;
        const double d = std::abs(a.c.value - c->value);
        const double tol = 100.0 * (a.c.err + std::min(c->err, 1e-6)) + 1e-10 * (1.0 + std::abs(c->value));
        if (d <= tol && d < best) {
          best = d;
          twin = &a;
        }
      }
      if (twin)
        twin->claimed_frames.push_back(c->frame);
      else
        accepted.push_back({*c, {}});
    }
  };

  solve_frames(0);
  merge(false);
  // Widen the gauge set around the frames already in use until every eigenvalue is resolved.
  for (int round = 0; round < 2 && static_cast<Eigen::Index>(accepted.size()) < dim; ++round) {
    const std::size_t before = gauges.size();
    const std::vector<double> base = gauges;
    for (double g : base)
      for (double f : {1.15, 1.0 / 1.15})
        if (!has_gauge(gauges, g * f)) gauges.push_back(g * f);
    solve_frames(before);
    merge(false);
  }

  std::size_t resolved = accepted.size();
  if (static_cast<Eigen::Index>(accepted.size()) < dim) merge(true);

  BlockResult r;
  r.unresolved = static_cast<std::size_t>(dim) - std::min<std::size_t>(resolved, static_cast<std::size_t>(dim));
  for (const auto& a : accepted) {
    r.values.push_back(a.c.value);
    r.weights.push_back(a.c.weight);
    r.gauge.push_back(a.c.gauge);
    r.error_bound.push_back(a.c.err);
  }
  if (static_cast<Eigen::Index>(r.values.size()) != dim)
    throw NumericalFailure("gauge-stabilized ribbon lost eigenvalues", label);
  sort_block(r);
  return r;
}

std::string axis_name(Axis a) { return a == Axis::X ? "x" : "y"; }

}  // namespace

Momentum KGrid::at(std::size_t index) const {
  const auto m = index / static_cast<std::size_t>(nky);
  const auto n = index % static_cast<std::size_t>(nky);
  return {kTwoPi * static_cast<double>(m) / nkx, kTwoPi * static_cast<double>(n) / nky};
}

std::string KGrid::describe() const {
  return std::to_string(nkx) + "x" + std::to_string(nky) + " uniform [0,2pi)^2";
}

std::vector<double> uniform_momenta(int n) {
  std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
  for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = kTwoPi * j / n;
  return out;
}

bool lexicographic_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void append(ComplexSpectrum& into, const ComplexSpectrum& other) {
  if (into.eigenvalues.empty()) {
    into = other;
    return;
  }
  if (into.group_size != other.group_size) throw AnalysisError("cannot append spectra with different grouping");
  auto cat = [](auto& a, const auto& b) { a.insert(a.end(), b.begin(), b.end()); };
  cat(into.eigenvalues, other.eigenvalues);
  cat(into.labels, other.labels);
  cat(into.boundary_weight, other.boundary_weight);
  cat(into.gauge, other.gauge);
  cat(into.error_bound, other.error_bound);
  into.max_residual = std::max(into.max_residual, other.max_residual);
  into.residual_warnings += other.residual_warnings;
  into.unresolved += other.unresolved;
}

void validate(const RibbonSpec& r) {
  if (r.cells < 2) throw InvalidLattice("ribbon needs cells >= 2");
  if (r.momenta.empty() && r.k_samples < 1) throw InvalidLattice("ribbon needs k_samples >= 1");
}

ComplexSpectrum bloch_spectrum(const ModelParams& params, const KGrid& grid, const SolveOptions& opts) {
  if (grid.nkx < 1 || grid.nky < 1) throw AnalysisError("k grid must be nonempty");
  const auto blocks = parallel_map(grid.size(), opts.workers, [&](std::size_t i) {
    const Momentum k = grid.at(i);
    const std::string label = "k=(" + fmt_k("kx", k.kx) + "," + fmt_k("ky", k.ky) + ")";
    return solve_block(build_bloch(params, k.kx, k.ky), {}, false, label);
  });
  ComplexSpectrum s;
  s.group_size = 4;
  s.eigenvalues.reserve(4 * grid.size());
  s.labels.reserve(4 * grid.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Momentum k = grid.at(i);
    for (auto e : blocks[i].values) {
      s.eigenvalues.push_back(e);
      s.labels.push_back({k.kx, k.ky});
    }
  }
  s.meta = {params_digest(params), "bloch " + std::to_string(grid.nkx) + "x" + std::to_string(grid.nky), "PBC"};
  return s;
}

ComplexSpectrum ribbon_spectrum(const ModelParams& params, const RibbonSpec& ribbon, const SolveOptions& opts) {
  validate(ribbon);
  const std::vector<double> momenta = ribbon.momenta.empty() ? uniform_momenta(ribbon.k_samples) : ribbon.momenta;
  const auto strip = ribbon_strip(ribbon.cells, opts.strip_cells);
  const bool open_x = ribbon.open_axis == Axis::X;
  const auto blocks = parallel_map(momenta.size(), opts.workers, [&](std::size_t i) {
    const double k = momenta[i];
    const std::string label = fmt_k(open_x ? "ky" : "kx", k);
    if (ribbon.gauge_stabilized)
      return solve_ribbon_stabilized(params, ribbon.open_axis, ribbon.cells, k, opts.strip_cells, label);
    return solve_block(build_ribbon(params, ribbon.open_axis, ribbon.cells, k), strip, opts.vectors, label);
  });

  ComplexSpectrum s;
  s.group_size = 4 * static_cast<std::size_t>(ribbon.cells);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    for (std::size_t j = 0; j < b.values.size(); ++j) {
      s.eigenvalues.push_back(b.values[j]);
      MomentumLabel l;
      (open_x ? l.ky : l.kx) = momenta[i];
      s.labels.push_back(l);
    }
    s.boundary_weight.insert(s.boundary_weight.end(), b.weights.begin(), b.weights.end());
    s.gauge.insert(s.gauge.end(), b.gauge.begin(), b.gauge.end());
    s.error_bound.insert(s.error_bound.end(), b.error_bound.begin(), b.error_bound.end());
    s.max_residual = std::max(s.max_residual, b.max_residual);
    s.residual_warnings += b.warnings;
    s.unresolved += b.unresolved;
  }
  s.meta = {params_digest(params),
            "ribbon open=" + axis_name(ribbon.open_axis) + " cells=" + std::to_string(ribbon.cells) +
                (ribbon.gauge_stabilized ? " gauge-stabilized" : ""),
            open_x ? "xOBC" : "yOBC"};
  return s;
}

namespace {

std::vector<Eigen::Index> lattice_strip(const LatticeSpec& l, int strip_cells) {
  bool use_x = l.bc_x == Boundary::Open;
  bool use_y = l.bc_y == Boundary::Open;
  if (!use_x && !use_y) use_x = use_y = true;
  std::vector<Eigen::Index> strip;
  for (int y = 0; y < l.ny; ++y)
    for (int x = 0; x < l.nx; ++x) {
      const bool in_x = use_x && (x < strip_cells || x >= l.nx - strip_cells);
      const bool in_y = use_y && (y < strip_cells || y >= l.ny - strip_cells);
      if (in_x || in_y)
        for (int o = 0; o < 4; ++o) strip.push_back(site_index(l, o, x, y));
    }
  return strip;
}

}  // namespace

double strip_fraction(const LatticeSpec& lattice, int strip_cells) {
  return static_cast<double>(lattice_strip(lattice, strip_cells).size()) / static_cast<double>(lattice.dim());
}

double strip_fraction(int cells, int strip_cells) {
  return static_cast<double>(ribbon_strip(cells, strip_cells).size()) / (4.0 * cells);
}

ComplexSpectrum full_spectrum(const ModelParams& params, const LatticeSpec& lattice, const SolveOptions& opts) {
  validate(lattice);
  const MatrixXcd h = build_real_space(params, lattice);
  const std::string lattice_desc = std::to_string(lattice.nx) + "x" + std::to_string(lattice.ny);
  const auto b = solve_block(h, lattice_strip(lattice, opts.strip_cells), opts.vectors,
                             boundary_tag(lattice) + " " + lattice_desc);
  ComplexSpectrum s;
  s.eigenvalues = b.values;
  s.boundary_weight = b.weights;
  s.max_residual = b.max_residual;
  s.residual_warnings = b.warnings;
  s.meta = {params_digest(params), lattice_desc, boundary_tag(lattice)};
  return s;
}

ModePartition classify_modes(const ComplexSpectrum& spectrum, double threshold) {
  if (!spectrum.has_weights()) throw AnalysisError("spectrum carries no boundary weights");
  ModePartition p;
  p.threshold = threshold;
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    (spectrum.boundary_weight[i] > threshold ? p.edge : p.bulk).push_back(i);
  return p;
}

ComplexSpectrum select(const ComplexSpectrum& s, std::span<const std::size_t> indices) {
  ComplexSpectrum out;
  out.meta = s.meta;
  out.max_residual = s.max_residual;
  for (auto i : indices) {
    out.eigenvalues.push_back(s.eigenvalues.at(i));
    if (!s.labels.empty()) out.labels.push_back(s.labels[i]);
    if (!s.boundary_weight.empty()) out.boundary_weight.push_back(s.boundary_weight[i]);
    if (!s.gauge.empty()) out.gauge.push_back(s.gauge[i]);
    if (!s.error_bound.empty()) out.error_bound.push_back(s.error_bound[i]);
  }
  return out;
}

MultisetMatch match_multisets(std::span<const cplx> a, std::span<const cplx> b) {
  MultisetMatch m;
  m.same_size = a.size() == b.size();
  std::vector<cplx> av(a.begin(), a.end());
  const auto order = lexicographic_order(av);
  std::vector<bool> used(b.size(), false);
  for (auto i : order) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(a[i] - b[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == b.size()) break;
    used[best] = true;
    m.pairs.emplace_back(i, best);
    m.max_distance = std::max(m.max_distance, best_d);
  }
  return m;
}

double directed_hausdorff(std::span<const cplx> from, std::span<const cplx> to) {
  if (from.empty()) return 0.0;
  if (to.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (auto x : from) {
    double best = std::numeric_limits<double>::infinity();
    for (auto y : to) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

double hausdorff(std::span<const cplx> a, std::span<const cplx> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace nhssh
