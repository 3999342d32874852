#include "nhssh/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "nhssh/eigensolver.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/parallel.hpp"

namespace nhssh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Vector4cd eigenvalues4(const Matrix4cd& h) {
  Eigen::ComplexEigenSolver<Matrix4cd> solver(h, false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("4x4 eigensolver did not converge", "");
  return solver.eigenvalues();
}

ModelParams with_extra(const ModelParams& base, const PerturbationSpec& extra) {
  ModelParams p = base;
  for (const auto& t : extra.terms) p.perturbation.terms.push_back(t);
  return p;
}

}  // namespace

std::string to_string(Scope s) {
  switch (s) {
    case Scope::PBC: return "PBC";
    case Scope::XOBC: return "xOBC";
    case Scope::YOBC: return "yOBC";
    case Scope::XYOBC: return "xyOBC";
    case Scope::BulkOnly: return "bulk-only";
    case Scope::EdgeOnly: return "edge-only";
  }
  return "?";
}

Scope scope_of(const ComplexSpectrum& s) {
  if (s.meta.bc == "xOBC") return Scope::XOBC;
  if (s.meta.bc == "yOBC") return Scope::YOBC;
  if (s.meta.bc == "xyOBC") return Scope::XYOBC;
  return Scope::PBC;
}

RealityReport reality_report(const ComplexSpectrum& spectrum, double tol, Scope scope, double edge_threshold) {
  if (spectrum.eigenvalues.empty()) throw AnalysisError("reality report of an empty spectrum");
  std::vector<cplx> values;
  if (scope == Scope::BulkOnly || scope == Scope::EdgeOnly) {
    const auto part = classify_modes(spectrum, edge_threshold);
    for (auto i : scope == Scope::BulkOnly ? part.bulk : part.edge) values.push_back(spectrum.eigenvalues[i]);
  } else {
    values = spectrum.eigenvalues;
  }
  if (values.empty()) throw AnalysisError("no eigenvalues left after the " + to_string(scope) + " filter");

  RealityReport r;
  r.tol = tol;
  r.scope = scope;
  r.count = values.size();
  std::size_t real = 0;
  double sum = 0.0;
  for (auto e : values) {
    const double im = std::abs(e.imag());
    r.max_abs_im = std::max(r.max_abs_im, im);
    sum += im;
    if (im < tol) ++real;
  }
  r.mean_abs_im = sum / static_cast<double>(values.size());
  r.fraction_real = static_cast<double>(real) / static_cast<double>(values.size());
  return r;
}

ScanCurve pt_transition_scan(const ModelParams& base, std::span<const double> alphas, const PtScanOptions& opts) {
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (!(alphas[i] > alphas[i - 1])) throw AnalysisError("alpha samples must be strictly increasing");

  auto report_at = [&](double alpha) {
    SolveOptions so;
    so.workers = opts.workers;
    so.vectors = false;
    return reality_report(bloch_spectrum(with_extra(base, alpha_potential(alpha)), opts.grid, so), opts.tol,
                          Scope::PBC);
  };

  ScanCurve curve;
  curve.parameter = "alpha";
  for (double a : alphas) curve.samples.push_back({a, {report_at(a)}, std::nullopt});

  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    if (curve.samples[i].reports[0].fraction_real < 1.0) continue;
    if (i == 0) {
      curve.detected_transition = curve.samples[0].value;
      break;
    }
    double lo = curve.samples[i - 1].value;
    double hi = curve.samples[i].value;
    while (hi - lo > opts.resolution) {
      const double mid = 0.5 * (lo + hi);
      (report_at(mid).fraction_real < 1.0 ? lo : hi) = mid;
    }
    curve.detected_transition = hi;
    break;
  }
  return curve;
}

namespace {

double central_separation(Eigen::Vector4cd e) {
  std::array<cplx, 4> v{e(0), e(1), e(2), e(3)};
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return std::abs(v[1] - v[2]);
}

}  // namespace

double line_gap(const ComplexSpectrum& spectrum) {
  if (spectrum.group_size != 4 || spectrum.size() == 0 || spectrum.size() % 4 != 0)
    throw AnalysisError("line gap needs four eigenvalues per momentum sample");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spectrum.size(); i += 4) {
    const auto& ev = spectrum.eigenvalues;
    gap = std::min(gap, central_separation(Eigen::Vector4cd(ev[i], ev[i + 1], ev[i + 2], ev[i + 3])));
  }
  return gap;
}

double line_gap_refined(const ModelParams& params, const KGrid& grid) {
  auto f = [&](double kx, double ky) { return central_separation(eigenvalues4(build_bloch(params, kx, ky))); };

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Momentum k = grid.at(i);
    scored.emplace_back(f(k.kx, k.ky), i);
  }
  const std::size_t seeds = std::min<std::size_t>(4, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(seeds), scored.end());

  double best = scored.front().first;
  for (std::size_t s = 0; s < seeds; ++s) {
    Momentum k = grid.at(scored[s].second);
    double value = scored[s].first;
    double step = kTwoPi / std::max(grid.nkx, grid.nky);
    for (int iter = 0; iter < 4000 && step > 1e-12; ++iter) {
      bool moved = false;
      for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const double v = f(k.kx + dx * step, k.ky + dy * step);
        if (v < value) {
          value = v;
          k = {k.kx + dx * step, k.ky + dy * step};
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::min(best, value);
  }
  return best;
}

ScanCurve theta_scan(double amplitude, std::span<const double> thetas, ThetaVariant variant,
                     const ThetaScanOptions& opts) {
  for (std::size_t i = 1; i < thetas.size(); ++i)
    if (!(thetas[i] > thetas[i - 1])) throw AnalysisError("theta samples must be strictly increasing");

  ScanCurve curve;
  curve.parameter = "theta";
  SolveOptions so;
  so.workers = opts.workers;
  so.vectors = false;
  for (double theta : thetas) {
    ModelParams p = opts.hoppings;
    p.perturbation = theta_potential(amplitude, theta, variant);
    const auto pbc = bloch_spectrum(p, opts.grid, so);
    ScanSample sample{theta, {reality_report(pbc, opts.tol, Scope::PBC)}, line_gap(pbc)};
    if (opts.include_obc)
      sample.reports.push_back(reality_report(full_spectrum(p, opts.obc, so), opts.tol, Scope::XYOBC));
    curve.samples.push_back(std::move(sample));
  }
  if (!curve.samples.empty()) {
    const auto it = std::min_element(curve.samples.begin(), curve.samples.end(),
                                     [](const auto& a, const auto& b) { return *a.line_gap < *b.line_gap; });
    curve.detected_transition = it->value;
  }
  return curve;
}

std::string OnsitePattern::describe() const {
  switch (kind) {
    case PatternKind::BalancedQuadrupole: return "balanced-quadrupole";
    case PatternKind::Imbalanced: return "imbalanced";
    case PatternKind::DipolePair: return "dipole-pair";
    case PatternKind::VanishingPair: {
      std::string s = "vanishing-pair(";
      for (std::size_t i = 0; i < vanishing.size(); ++i) {
        if (i) s += ",";
        s += vanishing[i];
      }
      return s + ")";
    }
  }
  return "?";
}

OnsitePattern onsite_pattern(const PerturbationSpec& spec, double tol) {
  const Matrix4cd v = realize_perturbation(spec);
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  const double cut = tol * scale;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && std::abs(v(i, j)) > cut)
        throw AnalysisError("on-site pattern undefined: perturbation has inter-site terms");

  OnsitePattern p;
  static constexpr char kSites[] = {'A', 'B', 'C', 'D'};
  for (int i = 0; i < 4; ++i) {
    p.values[i] = v(i, i).real();
    p.signs[i] = std::abs(p.values[i]) <= cut ? 0 : (p.values[i] > 0 ? 1 : -1);
    if (p.signs[i] == 0) p.vanishing += kSites[i];
  }
  const auto& s = p.signs;
  const auto& x = p.values;
  const auto close = [&](double a, double b) { return std::abs(a - b) <= cut; };

  if (p.vanishing.size() == 2) {
    p.kind = PatternKind::VanishingPair;
  } else if (p.vanishing.empty() && s[0] == s[2] && s[1] == s[3] && s[0] == -s[1] && close(x[0], x[2]) &&
             close(x[1], x[3]) && close(std::abs(x[0]), std::abs(x[1]))) {
    // (+v, -v, +v, -v): alternating around the ring and invariant under A<->C, B<->D.
    p.kind = PatternKind::BalancedQuadrupole;
  } else if (p.vanishing.empty() &&
             ((s[0] == s[1] && s[2] == s[3] && s[0] == -s[2]) || (s[1] == s[2] && s[3] == s[0] && s[1] == -s[3]))) {
    p.kind = PatternKind::DipolePair;
  } else {
    p.kind = PatternKind::Imbalanced;
  }
  return p;
}

WindingResult spectral_winding(const ModelParams& params, Axis direction, double transverse_momentum,
                               cplx reference_energy, int k_samples) {
  if (k_samples < 3) throw AnalysisError("winding needs at least three momentum samples");
  auto matrix_at = [&](double k) {
    return direction == Axis::X ? build_bloch(params, k, transverse_momentum)
                                : build_bloch(params, transverse_momentum, k);
  };

  std::vector<cplx> dets(static_cast<std::size_t>(k_samples));
  double closest = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k_samples; ++j) {
    const Matrix4cd h = matrix_at(kTwoPi * j / k_samples);
    for (auto e : eigenvalues4(h)) closest = std::min(closest, std::abs(e - reference_energy));
    dets[static_cast<std::size_t>(j)] = (h - reference_energy * Matrix4cd::Identity()).determinant();
  }
  if (closest <= 1e-6) throw AnalysisError("reference energy lies on the sampled spectrum");

  double total = 0.0;
  for (int j = 0; j < k_samples; ++j) {
    const cplx a = dets[static_cast<std::size_t>(j)];
    const cplx b = dets[static_cast<std::size_t>((j + 1) % k_samples)];
    const double step = std::arg(b / a);
    if (std::abs(step) > kPi / 2) throw PhaseUnwindingError("phase jump larger than pi/2; refine k_samples");
    total += step;
  }
  WindingResult r;
  r.direction = direction;
  r.transverse_momentum = transverse_momentum;
  r.reference_energy = reference_energy;
  r.raw = total / kTwoPi;
  r.winding = static_cast<int>(std::lround(r.raw));
  r.samples = k_samples;
  if (std::abs(r.raw - r.winding) >= 0.05) throw PhaseUnwindingError("accumulated phase is not an integer winding");
  return r;
}

std::array<cplx, 5> characteristic_coefficients(const ModelParams& params, double kx, cplx energy) {
  // beta^2 det(H(kx, beta) - E) is a polynomial of degree <= 4; eight samples on the unit
  // circle recover it exactly through a discrete Fourier transform.
  constexpr int M = 8;
  const cplx zx = std::polar(1.0, kx);
  std::array<cplx, M> f{};
  for (int j = 0; j < M; ++j) {
    const cplx z = std::polar(1.0, kTwoPi * j / M);
    f[j] = z * z * (build_laurent(params, zx, z) - energy * Matrix4cd::Identity()).determinant();
  }
  std::array<cplx, M> c{};
  for (int n = 0; n < M; ++n) {
    for (int j = 0; j < M; ++j) c[n] += f[j] * std::polar(1.0, -kTwoPi * j * n / M);
    c[n] /= double(M);
  }
  double scale = 0.0;
  for (auto v : c) scale = std::max(scale, std::abs(v));
  for (int n = 5; n < M; ++n)
    if (std::abs(c[n]) > 1e-10 * std::max(scale, 1.0))
      throw DegeneratePolynomial("characteristic polynomial has powers of beta beyond +-2");
  return {c[0], c[1], c[2], c[3], c[4]};
}

GbzCheck gbz_condition_check(const ModelParams& params, double kx, cplx energy, double tol) {
  const auto c = characteristic_coefficients(params, kx, energy);
  double scale = 0.0;
  for (auto v : c) scale = std::max(scale, std::abs(v));
  if (std::abs(c[4]) <= 1e-12 * scale || std::abs(c[0]) <= 1e-12 * scale)
    throw DegeneratePolynomial("leading or trailing coefficient of the characteristic polynomial vanishes");

  Matrix4cd companion = Matrix4cd::Zero();
  for (int i = 1; i < 4; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) companion(i, 3) = -c[static_cast<std::size_t>(i)] / c[4];
  Eigen::ComplexEigenSolver<Matrix4cd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("companion eigensolver did not converge", "");

  GbzCheck g;
  g.kx = kx;
  g.energy = energy;
  g.tolerance = tol;
  for (int i = 0; i < 4; ++i) g.root_moduli[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
  std::sort(g.root_moduli.begin(), g.root_moduli.end());
  g.residual = std::abs(g.root_moduli[1] - g.root_moduli[2]);
  g.satisfied = g.residual < tol;
  return g;
}

FiniteSizeResult finite_size_scaling(const ModelParams& params, std::span<const std::pair<int, int>> sizes,
                                     const FiniteSizeOptions& opts) {
  if (sizes.size() < 3) throw AnalysisError("finite-size scaling needs at least three sizes");
  auto linear = [](std::pair<int, int> s) { return std::sqrt(double(s.first) * double(s.second)); };
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (!(linear(sizes[i]) > linear(sizes[i - 1]))) throw AnalysisError("sizes must be strictly increasing");

  const bool filtered = opts.scope == Scope::BulkOnly || opts.scope == Scope::EdgeOnly;
  FiniteSizeResult out;
  out.curve.parameter = "size";
  for (auto [nx, ny] : sizes) {
    SolveOptions so;
    so.vectors = filtered;
    so.strip_cells = opts.strip_cells;
    const auto s = full_spectrum(params, {nx, ny, Boundary::Open, Boundary::Open}, so);
    out.curve.samples.push_back(
        {linear({nx, ny}), {reality_report(s, opts.tol, opts.scope, opts.edge_threshold)}, std::nullopt});
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(out.curve.samples.size());
  out.monotone_decreasing = true;
  for (std::size_t i = 0; i < out.curve.samples.size(); ++i) {
    const double x = out.curve.samples[i].value;
    const double y = std::log(std::max(out.curve.samples[i].reports[0].max_abs_im, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    if (i > 0 && !(out.curve.samples[i].reports[0].max_abs_im < out.curve.samples[i - 1].reports[0].max_abs_im))
      out.monotone_decreasing = false;
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

SkinEffectReport skin_effect_indicator(const ModelParams& params, Axis open_axis, const SkinOptions& opts) {
  RibbonSpec ribbon;
  ribbon.open_axis = open_axis;
  ribbon.cells = opts.cells;
  ribbon.k_samples = opts.k_samples;
  SolveOptions so;
  so.workers = opts.workers;
  so.strip_cells = opts.strip_cells;
  const auto spectrum = ribbon_spectrum(params, ribbon, so);

  const auto momenta = uniform_momenta(opts.k_samples);
  const auto along = uniform_momenta(opts.bloch_samples);
  const auto per_k = parallel_map(momenta.size(), opts.workers, [&](std::size_t g) {
    std::vector<cplx> pbc;
    pbc.reserve(4 * along.size());
    for (double k : along) {
      const Matrix4cd h = open_axis == Axis::X ? build_bloch(params, k, momenta[g]) : build_bloch(params, momenta[g], k);
      for (auto e : eigenvalues4(h)) pbc.push_back(e);
    }
    const std::span<const cplx> group(spectrum.eigenvalues.data() + g * spectrum.group_size, spectrum.group_size);
    return directed_hausdorff(pbc, group);
  });

  SkinEffectReport r;
  r.axis = open_axis;
  r.displacement = *std::max_element(per_k.begin(), per_k.end());
  r.mean_boundary_weight = std::accumulate(spectrum.boundary_weight.begin(), spectrum.boundary_weight.end(), 0.0) /
                           static_cast<double>(spectrum.size());
  r.baseline = strip_fraction(opts.cells, opts.strip_cells);
  r.present = r.displacement > opts.displacement_tol && r.mean_boundary_weight >= opts.weight_factor * r.baseline;
  return r;
}

EdgeIsolation isolated_edge_modes(const ModelParams& params, const RibbonSpec& ribbon, double threshold,
                                  double distance_tol, int bloch_samples, const SolveOptions& opts) {
  const auto spectrum = ribbon_spectrum(params, ribbon, opts);
  const auto part = classify_modes(spectrum, threshold);
  const auto along = uniform_momenta(bloch_samples);
  const bool open_x = ribbon.open_axis == Axis::X;

  EdgeIsolation r;
  r.edge_count = part.edge.size();
  const auto distances = parallel_map(part.edge.size(), opts.workers, [&](std::size_t n) {
    const std::size_t i = part.edge[n];
    const double kt = open_x ? *spectrum.labels[i].ky : *spectrum.labels[i].kx;
    double best = std::numeric_limits<double>::infinity();
    for (double k : along) {
      const Matrix4cd h = open_x ? build_bloch(params, k, kt) : build_bloch(params, kt, k);
      for (auto e : eigenvalues4(h)) best = std::min(best, std::abs(e - spectrum.eigenvalues[i]));
    }
    return best;
  });
  for (double d : distances) {
    r.max_distance = std::max(r.max_distance, d);
    if (d > distance_tol) ++r.isolated_count;
  }
  return r;
}

}  // namespace nhssh

namespace nhssh {

WindingSurvey winding_survey(const ModelParams& params, Axis direction, int pairs, int k_samples,
                             std::uint64_t seed, int grid_momenta, int grid_energies) {
  if (pairs < 0 || grid_momenta < 0 || grid_energies < 2) throw AnalysisError("bad winding survey sizes");
  SolveOptions so;
  so.vectors = false;
  so.workers = 1;
  const auto pbc = bloch_spectrum(params, {32, 32}, so);
  double re_lo = INFINITY, re_hi = -INFINITY, im_lo = INFINITY, im_hi = -INFINITY;
  for (auto e : pbc.eigenvalues) {
    re_lo = std::min(re_lo, e.real());
    re_hi = std::max(re_hi, e.real());
    im_lo = std::min(im_lo, e.imag());
    im_hi = std::max(im_hi, e.imag());
  }
  const double re_pad = 0.1 * (re_hi - re_lo) + 0.05;
  const double im_pad = 0.1 * (im_hi - im_lo) + 0.05;
  re_lo -= re_pad, re_hi += re_pad, im_lo -= im_pad, im_hi += im_pad;

  WindingSurvey out;
  out.direction = direction;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> k_dist(0.0, kTwoPi), re_dist(re_lo, re_hi), im_dist(im_lo, im_hi);
  const int max_draws = 50 * std::max(pairs, 1);
  for (int draw = 0; static_cast<int>(out.random.size()) < pairs; ++draw) {
    if (draw >= max_draws) throw AnalysisError("could not find enough valid winding reference points");
    const double k = k_dist(rng);
    const cplx e{re_dist(rng), im_dist(rng)};
    try {
      out.random.push_back(spectral_winding(params, direction, k, e, k_samples));
      if (out.random.back().winding != 0) ++out.random_nonzero;
    } catch (const AnalysisError&) {
      ++out.rejected;
    }
  }

  for (double k : uniform_momenta(grid_momenta)) {
    std::vector<cplx> candidates;
    for (int a = 0; a < grid_energies; ++a)
      for (int b = 0; b < grid_energies; ++b)
        candidates.emplace_back(re_lo + (re_hi - re_lo) * a / (grid_energies - 1),
                                im_lo + (im_hi - im_lo) * b / (grid_energies - 1));
    // centroid of each band loop traced along the winding direction
    std::array<cplx, 4> centroid{};
    const auto along = uniform_momenta(128);
    for (double q : along) {
      const Matrix4cd h = direction == Axis::X ? build_bloch(params, q, k) : build_bloch(params, k, q);
      auto ev = eigenvalues4(h);
      std::array<cplx, 4> v{ev(0), ev(1), ev(2), ev(3)};
      std::sort(v.begin(), v.end(), lexicographic_less);
      for (int i = 0; i < 4; ++i) centroid[i] += v[i] / double(along.size());
    }
    candidates.insert(candidates.end(), centroid.begin(), centroid.end());
    for (auto e : candidates) {
      try {
        const auto w = spectral_winding(params, direction, k, e, k_samples);
        ++out.grid_points;
        if (w.winding != 0) {
          ++out.grid_nonzero;
          if (!out.grid_example) out.grid_example = w;
        }
        out.grid_max_abs = std::max(out.grid_max_abs, std::abs(w.winding));
      } catch (const AnalysisError&) {
      }
    }
  }
  return out;
}

GbzSurvey gbz_ribbon_survey(const ModelParams& params, double kx, int cells, double tol, double edge_threshold,
                            int strip_cells, int workers) {
  RibbonSpec ribbon;
  ribbon.open_axis = Axis::Y;
  ribbon.cells = cells;
  ribbon.momenta = {kx};
  ribbon.gauge_stabilized = true;
  SolveOptions so;
  so.workers = workers;
  so.strip_cells = strip_cells;
  const auto spectrum = ribbon_spectrum(params, ribbon, so);
  const auto part = classify_modes(spectrum, edge_threshold);

  GbzSurvey out;
  out.kx = kx;
  out.total = spectrum.size();
  out.bulk = part.bulk.size();
  out.unresolved = spectrum.unresolved;
  const auto checks = parallel_map(part.bulk.size(), workers, [&](std::size_t n) -> int {
    try {
      return gbz_condition_check(params, kx, spectrum.eigenvalues[part.bulk[n]], tol).satisfied ? 1 : 0;
    } catch (const DegeneratePolynomial&) {
      return -1;
    }
  });
  for (std::size_t n = 0; n < checks.size(); ++n) {
    if (checks[n] == 1) ++out.satisfied;
    if (checks[n] == -1) ++out.degenerate;
    out.max_abs_im_bulk = std::max(out.max_abs_im_bulk, std::abs(spectrum.eigenvalues[part.bulk[n]].imag()));
  }
  out.fraction = out.bulk ? static_cast<double>(out.satisfied) / static_cast<double>(out.bulk) : 0.0;
  return out;
}

}  // namespace nhssh
