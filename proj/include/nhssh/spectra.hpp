#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nhssh/hamiltonian.hpp"

namespace nhssh {

struct Momentum {
  double kx = 0.0;
  double ky = 0.0;
};

// Uniform grid kx = 2 pi m / nkx, ky = 2 pi n / nky; point index m * nky + n.
struct KGrid {
  int nkx = 64;
  int nky = 64;

  std::size_t size() const { return static_cast<std::size_t>(nkx) * static_cast<std::size_t>(nky); }
  Momentum at(std::size_t index) const;
  std::string describe() const;  // "32x32 uniform [0,2pi)^2"
};

// Evenly spaced momenta 2 pi j / n, j = 0..n-1.
std::vector<double> uniform_momenta(int n);

struct MomentumLabel {
  std::optional<double> kx;
  std::optional<double> ky;
};

struct SpectrumMeta {
  std::string params_digest;
  std::string lattice;  // e.g. "bloch 64x64", "ribbon open=y cells=40", "20x20"
  std::string bc;       // PBC / xOBC / yOBC / xyOBC
};

struct ComplexSpectrum {
  std::vector<cplx> eigenvalues;
  std::vector<MomentumLabel> labels;   // empty or one per eigenvalue
  std::vector<double> boundary_weight; // empty or one per eigenvalue, in [0, 1]
  std::vector<double> gauge;           // imaginary-gauge radius per eigenvalue (stabilized ribbons)
  std::vector<double> error_bound;     // forward error estimate per eigenvalue, when computed
  // Eigenvalues per momentum sample, stored contiguously. 0 means ungrouped.
  std::size_t group_size = 0;
  // max ||H v - E v|| / ||v|| over the reported pairs; negative when no vectors were computed.
  double max_residual = -1.0;
  std::size_t residual_warnings = 0;  // pairs whose residual exceeded 1e-8
  std::size_t unresolved = 0;         // stabilized ribbons: eigenvalues without a well-conditioned frame
  SpectrumMeta meta;

  std::size_t size() const { return eigenvalues.size(); }
  bool has_weights() const { return !eigenvalues.empty() && boundary_weight.size() == eigenvalues.size(); }
  std::size_t group_count() const { return group_size == 0 ? 1 : eigenvalues.size() / group_size; }
};

// Appends `other` to `into`; group sizes must agree (or `into` be empty).
void append(ComplexSpectrum& into, const ComplexSpectrum& other);

// Sort key used everywhere a canonical order is needed: real part, then imaginary part.
bool lexicographic_less(cplx a, cplx b);

struct SolveOptions {
  int workers = 0;        // 0: hardware concurrency
  int strip_cells = 2;    // boundary strip width, in unit cells
  bool vectors = true;    // compute eigenvectors (needed for boundary weights)
};

struct RibbonSpec {
  Axis open_axis = Axis::Y;
  int cells = 40;
  int k_samples = 64;
  // Explicit transverse momenta; overrides k_samples when nonempty.
  std::vector<double> momenta;
  // Solve every momentum in several imaginary-gauge frames and keep each eigenvalue from a
  // frame where it is well conditioned. Boundary weights are then measured in that frame.
  bool gauge_stabilized = false;
};

void validate(const RibbonSpec& ribbon);

// Four eigenvalues per grid point, each group sorted lexicographically and labeled by k.
ComplexSpectrum bloch_spectrum(const ModelParams& params, const KGrid& grid, const SolveOptions& opts = {});

// 4 * cells eigenvalues per transverse momentum, labeled by that momentum.
ComplexSpectrum ribbon_spectrum(const ModelParams& params, const RibbonSpec& ribbon,
                                const SolveOptions& opts = {});

// All 4 nx ny eigenvalues. Weights use the strip along open axes; a fully periodic lattice
// uses the nominal edges of both axes, so extended states carry the strip fraction.
ComplexSpectrum full_spectrum(const ModelParams& params, const LatticeSpec& lattice,
                              const SolveOptions& opts = {});

// Fraction of sites inside the boundary strip that full_spectrum / ribbon_spectrum use.
double strip_fraction(const LatticeSpec& lattice, int strip_cells);
double strip_fraction(int cells, int strip_cells);

struct ModePartition {
  std::vector<std::size_t> bulk;
  std::vector<std::size_t> edge;
  double threshold = 0.5;
};

// Edge iff boundary_weight > threshold. Throws AnalysisError without weights.
ModePartition classify_modes(const ComplexSpectrum& spectrum, double threshold = 0.5);

// Subset of the spectrum keeping the given indices (labels/weights carried along, ungrouped).
ComplexSpectrum select(const ComplexSpectrum& spectrum, std::span<const std::size_t> indices);

struct MultisetMatch {
  bool same_size = false;
  double max_distance = 0.0;  // largest distance within the pairing
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

// Greedy nearest-neighbour pairing: a is visited in lexicographic order and each element
// takes the nearest unused element of b.
MultisetMatch match_multisets(std::span<const cplx> a, std::span<const cplx> b);

// sup_{x in from} inf_{y in to} |x - y|
double directed_hausdorff(std::span<const cplx> from, std::span<const cplx> to);
double hausdorff(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace nhssh
