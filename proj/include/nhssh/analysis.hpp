#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nhssh/hamiltonian.hpp"
#include "nhssh/spectra.hpp"

namespace nhssh {

// ---------------------------------------------------------------------------
// Reality
// ---------------------------------------------------------------------------

enum class Scope { PBC, XOBC, YOBC, XYOBC, BulkOnly, EdgeOnly };
std::string to_string(Scope s);
// Scope matching the spectrum's boundary tag.
Scope scope_of(const ComplexSpectrum& spectrum);

struct RealityReport {
  double max_abs_im = 0.0;
  double mean_abs_im = 0.0;
  double fraction_real = 0.0;  // share of eigenvalues with |Im E| < tol
  double tol = 1e-8;
  Scope scope = Scope::PBC;
  std::size_t count = 0;
};

// BulkOnly / EdgeOnly restrict to the classify_modes partition at `edge_threshold`; the other
// scopes only label the report. Throws AnalysisError if nothing is left.
RealityReport reality_report(const ComplexSpectrum& spectrum, double tol = 1e-8, Scope scope = Scope::PBC,
                             double edge_threshold = 0.5);

// ---------------------------------------------------------------------------
// Scans
// ---------------------------------------------------------------------------

struct ScanSample {
  double value = 0.0;
  std::vector<RealityReport> reports;
  std::optional<double> line_gap;
};

struct ScanCurve {
  std::string parameter;
  std::vector<ScanSample> samples;  // ordered by value
  std::optional<double> detected_transition;
};

struct PtScanOptions {
  KGrid grid{64, 64};
  double tol = 1e-8;
  double resolution = 1e-3;
  int workers = 0;
};

// PBC reality versus alpha, with alpha sigma^0 sigma^z added to the base perturbation.
// The transition is the smallest alpha with fraction_real = 1, refined by bisection between
// the last complex sample and the first real one.
ScanCurve pt_transition_scan(const ModelParams& base, std::span<const double> alphas, const PtScanOptions& opts = {});

// min over k of |E_2(k) - E_3(k)|, eigenvalues of each four-element group sorted by Re.
double line_gap(const ComplexSpectrum& spectrum);

// The same quantity minimized over the continuous Brillouin zone: grid search on `grid`
// followed by a compass search around the best grid points.
double line_gap_refined(const ModelParams& params, const KGrid& grid = {64, 64});

struct ThetaScanOptions {
  ModelParams hoppings = reference_params();
  KGrid grid{64, 64};
  LatticeSpec obc{20, 20, Boundary::Open, Boundary::Open};
  bool include_obc = true;
  double tol = 1e-8;
  int workers = 0;
};

// amp (cos(theta) s^0 s^z + sin(theta) X) for each theta: PBC reality, line gap and (optionally)
// xyOBC reality. The transition is the sampled theta with the smallest line gap.
ScanCurve theta_scan(double amplitude, std::span<const double> thetas, ThetaVariant variant,
                     const ThetaScanOptions& opts = {});

// ---------------------------------------------------------------------------
// On-site sign pattern
// ---------------------------------------------------------------------------

enum class PatternKind { BalancedQuadrupole, Imbalanced, DipolePair, VanishingPair };

struct OnsitePattern {
  std::array<double, 4> values{};  // A, B, C, D
  std::array<int, 4> signs{};      // -1, 0, +1
  PatternKind kind = PatternKind::Imbalanced;
  std::string vanishing;           // site letters, e.g. "BC"

  // "balanced-quadrupole", "imbalanced", "dipole-pair" or "vanishing-pair(B,C)"
  std::string describe() const;
};

// Throws AnalysisError if the realization has off-diagonal entries.
OnsitePattern onsite_pattern(const PerturbationSpec& spec, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Spectral winding
// ---------------------------------------------------------------------------

struct WindingResult {
  Axis direction = Axis::X;
  double transverse_momentum = 0.0;
  cplx reference_energy;
  int winding = 0;
  double raw = 0.0;  // accumulated phase / 2 pi before rounding
  int samples = 0;
};

// Winding of det(H(k) - E_ref) as the momentum along `direction` runs over [0, 2 pi) with the
// other momentum fixed. Throws AnalysisError if E_ref lies within 1e-6 of the sampled spectrum
// and PhaseUnwindingError if a single step turns the phase by more than pi/2 or the total is
// not within 0.05 of an integer.
WindingResult spectral_winding(const ModelParams& params, Axis direction, double transverse_momentum,
                               cplx reference_energy, int k_samples = 512);

struct WindingSurvey {
  Axis direction = Axis::X;
  std::vector<WindingResult> random;  // random (transverse momentum, E_ref) draws
  std::size_t random_nonzero = 0;
  std::size_t rejected = 0;           // draws on the spectrum or too coarse to unwind
  std::size_t grid_points = 0;        // successful grid-search evaluations
  std::size_t grid_nonzero = 0;
  int grid_max_abs = 0;
  std::optional<WindingResult> grid_example;  // first nonzero grid hit
};

// `pairs` random draws with E_ref uniform in a box around the PBC spectrum, plus a grid search
// over `grid_momenta` transverse momenta whose candidates are a grid_energies^2 lattice in the
// box and the centroid of each band loop. Draws and grid points that throw are skipped.
WindingSurvey winding_survey(const ModelParams& params, Axis direction, int pairs = 20, int k_samples = 512,
                             std::uint64_t seed = 1, int grid_momenta = 8, int grid_energies = 9);

// ---------------------------------------------------------------------------
// Non-Bloch modular condition
// ---------------------------------------------------------------------------

// Coefficients c_0..c_4 of beta^2 det(H(kx, beta) - E), with beta replacing e^{i ky}.
std::array<cplx, 5> characteristic_coefficients(const ModelParams& params, double kx, cplx energy);

struct GbzCheck {
  double kx = 0.0;
  cplx energy;
  std::array<double, 4> root_moduli{};  // ascending
  double residual = 0.0;                // | |beta_2| - |beta_3| |
  bool satisfied = false;
  double tolerance = 1e-2;
};

GbzCheck gbz_condition_check(const ModelParams& params, double kx, cplx energy, double tol = 1e-2);

struct GbzSurvey {
  double kx = 0.0;
  std::size_t total = 0;
  std::size_t bulk = 0;        // boundary_weight <= edge threshold
  std::size_t satisfied = 0;   // bulk states passing gbz_condition_check
  std::size_t degenerate = 0;  // bulk states whose polynomial degenerated (counted as failures)
  std::size_t unresolved = 0;  // from the stabilized ribbon solve
  double fraction = 0.0;       // satisfied / bulk
  double max_abs_im_bulk = 0.0;
};

// Gauge-stabilized ribbon open along y at fixed kx; checks every bulk eigenvalue.
GbzSurvey gbz_ribbon_survey(const ModelParams& params, double kx, int cells = 200, double tol = 1e-2,
                            double edge_threshold = 0.5, int strip_cells = 2, int workers = 0);

// ---------------------------------------------------------------------------
// Finite-size scaling
// ---------------------------------------------------------------------------

struct FiniteSizeOptions {
  double tol = 1e-8;
  Scope scope = Scope::XYOBC;  // BulkOnly / EdgeOnly classify with the boundary strip
  double edge_threshold = 0.5;
  int strip_cells = 2;
};

struct FiniteSizeResult {
  ScanCurve curve;  // value = sqrt(nx ny)
  double slope = 0.0;  // least-squares slope of log(max_abs_im) against size
  bool monotone_decreasing = false;
};

// xyOBC reality report per lattice size. Needs at least three strictly increasing sizes.
FiniteSizeResult finite_size_scaling(const ModelParams& params, std::span<const std::pair<int, int>> sizes,
                                     const FiniteSizeOptions& opts = {});

// ---------------------------------------------------------------------------
// Skin effect
// ---------------------------------------------------------------------------

struct SkinOptions {
  int cells = 40;
  int k_samples = 32;
  int strip_cells = 2;
  int bloch_samples = 256;
  double displacement_tol = 0.05;
  double weight_factor = 2.0;
  int workers = 0;
};

struct SkinEffectReport {
  Axis axis = Axis::X;
  bool present = false;
  double displacement = 0.0;           // max over momenta of sup_{PBC} dist(E, ribbon spectrum)
  double mean_boundary_weight = 0.0;   // over all ribbon eigenstates
  double baseline = 0.0;               // strip fraction of an extended state
};

// Present iff the PBC spectrum is displaced from the ribbon spectrum by more than
// displacement_tol and the ribbon states sit in the boundary strip at least weight_factor
// times more than extended states would.
SkinEffectReport skin_effect_indicator(const ModelParams& params, Axis open_axis, const SkinOptions& opts = {});

// ---------------------------------------------------------------------------
// Edge modes that leave the bulk spectrum
// ---------------------------------------------------------------------------

struct EdgeIsolation {
  std::size_t edge_count = 0;      // boundary_weight > threshold
  std::size_t isolated_count = 0;  // ... and farther than distance_tol from the PBC spectrum
  double max_distance = 0.0;
};

// Localized ribbon states whose energies are separated from the PBC spectrum at the same
// transverse momentum (dense sampling along the open axis).
EdgeIsolation isolated_edge_modes(const ModelParams& params, const RibbonSpec& ribbon, double threshold = 0.5,
                                  double distance_tol = 0.05, int bloch_samples = 512,
                                  const SolveOptions& opts = {});

}  // namespace nhssh
