#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "nhssh/eigensolver.hpp"
#include "nhssh/errors.hpp"
#include "nhssh/spectra.hpp"

using namespace nhssh;
using std::numbers::pi;

namespace {

double max_abs_im(std::span<const cplx> values) {
  double m = 0.0;
  for (auto e : values) m = std::max(m, std::abs(e.imag()));
  return m;
}

std::vector<cplx> bulk_values(const ComplexSpectrum& s, double threshold = 0.5) {
  std::vector<cplx> out;
  for (auto i : classify_modes(s, threshold).bulk) out.push_back(s.eigenvalues[i]);
  return out;
}

// Dense PBC spectrum along the open axis of a ribbon at fixed transverse momentum.
std::vector<cplx> bloch_line(const ModelParams& p, Axis open_axis, double transverse, int samples) {
  std::vector<cplx> out;
  for (double k : uniform_momenta(samples)) {
    const Matrix4cd h = open_axis == Axis::X ? build_bloch(p, k, transverse) : build_bloch(p, transverse, k);
    for (auto e : gen::reference_eigenvalues(h)) out.push_back(e);
  }
  return out;
}

SolveOptions single() {
  SolveOptions o;
  o.workers = 1;
  return o;
}

}  // namespace

TEST_CASE("k grid and uniform momenta") {
  const KGrid g{4, 3};
  CHECK(g.size() == 12);
  CHECK(g.at(0).kx == 0.0);
  CHECK(g.at(5).kx == doctest::Approx(2 * pi / 4));
  CHECK(g.at(5).ky == doctest::Approx(2 * 2 * pi / 3));
  CHECK(g.describe() == "4x3 uniform [0,2pi)^2");
  const auto m = uniform_momenta(8);
  CHECK(m.size() == 8);
  CHECK(m[4] == doctest::Approx(pi));
}

TEST_CASE("eigensolver basics") {
  Eigen::MatrixXcd a(2, 2);
  a << 0, 1, 4, 0;  // eigenvalues +-2
  const auto d = eigen_decompose(a, {.vectors = true, .condition = true});
  std::vector<double> re{d.values(0).real(), d.values(1).real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-2.0));
  CHECK(re[1] == doctest::Approx(2.0));
  CHECK((a * d.vectors - d.vectors * d.values.asDiagonal()).norm() < 1e-12);
  CHECK(d.error_bound.size() == 2);
  CHECK(d.error_bound.maxCoeff() < 1e-14);

  Eigen::MatrixXcd bad = a;
  bad(0, 1) = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(eigen_decompose(bad, {}, "here"), NumericalFailure);
  try {
    eigen_decompose(bad, {}, "k=(0,0)");
  } catch (const NumericalFailure& e) {
    CHECK(e.label() == "k=(0,0)");
  }
}

TEST_CASE("Hermitian and general inputs agree with Eigen's solver") {
  gen::Rng rng(61);
  for (int i = 0; i < 10; ++i) {
    const Eigen::Index n = rng.integer(2, 40);
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) g(r, c) = gen::energy(rng, 1.0);
    const Eigen::MatrixXcd h = g + g.adjoint();
    for (const Eigen::MatrixXcd& m : {g, h}) {
      const auto d = eigen_decompose(m, {.vectors = true, .condition = true});
      const std::vector<cplx> got(d.values.data(), d.values.data() + n);
      CHECK(gen::multiset_distance(got, gen::reference_eigenvalues(m)) < 1e-10);
      CHECK((m * d.vectors - d.vectors * d.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(d.error_bound.size() == n);
    }
    const auto dh = eigen_decompose(h, {.vectors = true});
    CHECK(dh.values.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK((dh.vectors.adjoint() * dh.vectors - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("bloch spectrum layout") {
  const auto s = bloch_spectrum(reference_params(), {8, 6}, single());
  CHECK(s.size() == 4 * 48);
  CHECK(s.group_size == 4);
  CHECK(s.group_count() == 48);
  CHECK(s.labels.size() == s.size());
  CHECK(s.meta.bc == "PBC");
  for (std::size_t g = 0; g < s.group_count(); ++g)
    for (std::size_t j = 1; j < 4; ++j) CHECK_FALSE(lexicographic_less(s.eigenvalues[4 * g + j], s.eigenvalues[4 * g + j - 1]));
}

TEST_CASE("periodic lattice equals the union of Bloch spectra") {
  gen::Rng rng(21);
  for (auto [nx, ny] : {std::pair{2, 2}, {3, 3}, {4, 4}, {2, 4}, {4, 3}}) {
    const ModelParams p = gen::params(rng);
    const auto full = full_spectrum(p, {nx, ny, Boundary::Periodic, Boundary::Periodic}, single());
    const auto bloch = bloch_spectrum(p, {nx, ny}, single());
    const auto m = match_multisets(full.eigenvalues, bloch.eigenvalues);
    CHECK(m.same_size);
    CHECK(m.max_distance < 1e-8);
  }
}

TEST_CASE("hermitian limit is real for every boundary condition") {
  const ModelParams p = hermitian_params();
  CHECK(max_abs_im(bloch_spectrum(p, {16, 16}, single()).eigenvalues) < 1e-10);
  for (auto [bx, by] : {std::pair{Boundary::Periodic, Boundary::Periodic},
                        {Boundary::Open, Boundary::Periodic},
                        {Boundary::Periodic, Boundary::Open},
                        {Boundary::Open, Boundary::Open}})
    CHECK(max_abs_im(full_spectrum(p, {6, 6, bx, by}, single()).eigenvalues) < 1e-10);
  RibbonSpec r;
  r.cells = 10;
  r.k_samples = 8;
  for (Axis a : {Axis::X, Axis::Y}) {
    r.open_axis = a;
    CHECK(max_abs_im(ribbon_spectrum(p, r, single()).eigenvalues) < 1e-10);
  }
}

TEST_CASE("alpha = beta = 0 bloch spectrum is a real/imaginary cross") {
  const auto s = bloch_spectrum(reference_params(), {32, 32}, single());
  double worst = 0.0, max_im = 0.0;
  for (auto e : s.eigenvalues) {
    worst = std::max(worst, std::min(std::abs(e.real()), std::abs(e.imag())));
    max_im = std::max(max_im, std::abs(e.imag()));
  }
  CHECK(worst < 1e-8);
  CHECK(max_im > 0.1);  // the imaginary arm is really there
}

TEST_CASE("alpha = 0.6 bloch spectrum is real") {
  CHECK(max_abs_im(bloch_spectrum(reference_params(alpha_potential(0.6)), {32, 32}, single()).eigenvalues) < 1e-8);
}

TEST_CASE("full spectrum metadata, weights and residuals") {
  const auto s = full_spectrum(reference_params(beta_potential(0.8)), {6, 5, Boundary::Open, Boundary::Open}, single());
  CHECK(s.size() == 120);
  CHECK(s.has_weights());
  CHECK(s.meta.bc == "xyOBC");
  CHECK(s.meta.lattice == "6x5");
  CHECK(s.max_residual >= 0.0);
  CHECK(s.max_residual < 1e-8);
  for (double w : s.boundary_weight) {
    CHECK(w >= 0.0);
    CHECK(w <= 1.0 + 1e-12);
  }
  SolveOptions no_vectors = single();
  no_vectors.vectors = false;
  const auto t = full_spectrum(reference_params(beta_potential(0.8)), {6, 5, Boundary::Open, Boundary::Open}, no_vectors);
  CHECK_FALSE(t.has_weights());
  CHECK(t.max_residual < 0.0);
  CHECK_THROWS_AS(classify_modes(t), AnalysisError);
  CHECK(match_multisets(s.eigenvalues, t.eigenvalues).max_distance < 1e-10);
}

TEST_CASE("strip fractions") {
  CHECK(strip_fraction(40, 2) == doctest::Approx(0.1));
  CHECK(strip_fraction(LatticeSpec{20, 20, Boundary::Open, Boundary::Open}, 2) == doctest::Approx(1.0 - 256.0 / 400.0));
  CHECK(strip_fraction(LatticeSpec{20, 20, Boundary::Open, Boundary::Periodic}, 2) == doctest::Approx(0.2));
  CHECK(strip_fraction(LatticeSpec{20, 20, Boundary::Periodic, Boundary::Open}, 2) == doctest::Approx(0.2));
  CHECK(strip_fraction(LatticeSpec{3, 3, Boundary::Open, Boundary::Open}, 2) == doctest::Approx(1.0));
}

TEST_CASE("extended periodic states are classified as bulk") {
  const auto s = full_spectrum(reference_params(alpha_potential(0.6)), {16, 16, Boundary::Periodic, Boundary::Periodic},
                               {.workers = 1, .strip_cells = 1, .vectors = true});
  const double f = strip_fraction(LatticeSpec{16, 16, Boundary::Periodic, Boundary::Periodic}, 1);
  const auto part = classify_modes(s);
  CHECK(part.edge.empty());
  double mean = 0.0;
  for (double w : s.boundary_weight) mean += w / double(s.size());
  CHECK(mean == doctest::Approx(f).epsilon(0.1));
}

TEST_CASE("hermitian ribbons: edge states only in the topological regime") {
  RibbonSpec r;
  r.open_axis = Axis::X;
  r.cells = 16;
  r.k_samples = 16;
  // gamma_in > gamma_ex: trivial
  const ModelParams trivial{0.4, 0.2, 0.4, 0.2, {}};
  CHECK(classify_modes(ribbon_spectrum(trivial, r, single())).edge.empty());
  // gamma_in < gamma_ex: boundary-localized states appear
  CHECK(classify_modes(ribbon_spectrum(hermitian_params(), r, single())).edge.size() > 0);
}

TEST_CASE("beta = 0.8 x-ribbon bulk coincides with the PBC spectrum") {
  const ModelParams p = reference_params(beta_potential(0.8));
  RibbonSpec r;
  r.open_axis = Axis::X;
  r.cells = 40;
  r.momenta = {0.0, 0.9, 2.1, pi};
  const auto s = ribbon_spectrum(p, r, single());
  double worst = 0.0;
  for (std::size_t g = 0; g < r.momenta.size(); ++g) {
    const auto line = bloch_line(p, Axis::X, r.momenta[g], 512);
    const ComplexSpectrum group = select(s, std::vector<std::size_t>([&] {
      std::vector<std::size_t> idx;
      for (std::size_t i = g * s.group_size; i < (g + 1) * s.group_size; ++i) idx.push_back(i);
      return idx;
    }()));
    worst = std::max(worst, directed_hausdorff(bulk_values(group), line));
  }
  CHECK(worst < 0.02);
}

TEST_CASE("beta = 0.8 y-ribbon: the bulk is real at every width") {
  // Skin modes pile up at one edge, so plain right-vector weights file almost everything as
  // edge. Weights measured in the imaginary-gauge frame recover the bulk.
  const ModelParams p = reference_params(beta_potential(0.8));
  for (int cells : {10, 20, 40, 80}) {
    RibbonSpec r;
    r.cells = cells;
    r.momenta = {0.0, pi / 2};
    r.gauge_stabilized = true;
    const auto s = ribbon_spectrum(p, r, single());
    const auto bulk = bulk_values(s);
    CAPTURE(cells);
    CHECK(bulk.size() >= s.size() * 9 / 10);
    CHECK(max_abs_im(bulk) < 1e-10);
    CHECK(max_abs_im(s.eigenvalues) > 1e-2);  // the complex edge pair survives
  }
}

TEST_CASE("gauge-stabilized ribbon") {
  const ModelParams p = reference_params(beta_potential(0.8));
  RibbonSpec plain;
  plain.cells = 30;
  plain.momenta = {0.0, pi / 2};
  RibbonSpec stab = plain;
  stab.gauge_stabilized = true;
  const auto a = ribbon_spectrum(p, plain, single());
  const auto b = ribbon_spectrum(p, stab, single());
  CHECK(b.size() == a.size());
  CHECK(b.unresolved == 0);
  CHECK(b.gauge.size() == b.size());
  CHECK(b.error_bound.size() == b.size());
  CHECK(b.meta.lattice.find("gauge-stabilized") != std::string::npos);
  // at this width the plain solve is still accurate, so both agree
  CHECK(match_multisets(a.eigenvalues, b.eigenvalues).max_distance < 1e-6);

  // hermitian ribbons need no gauge at all
  RibbonSpec h = stab;
  const auto hs = ribbon_spectrum(hermitian_params(), h, single());
  CHECK(max_abs_im(hs.eigenvalues) < 1e-10);
  for (double g : hs.gauge) CHECK(g == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("ribbon validation") {
  RibbonSpec r;
  r.cells = 1;
  CHECK_THROWS_AS(ribbon_spectrum(reference_params(), r), InvalidLattice);
  r.cells = 4;
  r.k_samples = 0;
  CHECK_THROWS_AS(ribbon_spectrum(reference_params(), r), InvalidLattice);
}

TEST_CASE("multiset helpers") {
  const std::vector<cplx> a{{0, 0}, {1, 0}, {0, 1}};
  const std::vector<cplx> b{{0, 1.1}, {0.05, 0}, {1, 0}};
  const auto m = match_multisets(a, b);
  CHECK(m.same_size);
  CHECK(m.max_distance == doctest::Approx(0.1));
  CHECK(m.pairs.size() == 3);
  CHECK_FALSE(match_multisets(a, std::vector<cplx>{{0, 0}}).same_size);
  CHECK(directed_hausdorff(a, b) == doctest::Approx(0.1));
  CHECK(directed_hausdorff(std::vector<cplx>{{0, 0}}, a) == 0.0);
  CHECK(directed_hausdorff(a, std::vector<cplx>{{0, 0}}) == doctest::Approx(1.0));
  CHECK(hausdorff(a, std::vector<cplx>{{0, 0}}) == doctest::Approx(1.0));
  CHECK(lexicographic_less({0, 5}, {1, -5}));
  CHECK(lexicographic_less({1, -5}, {1, 5}));
}

TEST_CASE("select and append") {
  const auto s = bloch_spectrum(reference_params(), {2, 2}, single());
  const std::vector<std::size_t> idx{1, 5};
  const auto t = select(s, idx);
  CHECK(t.size() == 2);
  CHECK(t.eigenvalues[1] == s.eigenvalues[5]);
  CHECK(t.labels[1].kx == s.labels[5].kx);
  CHECK(t.group_size == 0);
  ComplexSpectrum u;
  append(u, s);
  append(u, s);
  CHECK(u.size() == 2 * s.size());
  CHECK(u.group_size == 4);
}
