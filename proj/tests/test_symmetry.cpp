#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numbers>
#include <set>

#include "generators.hpp"
#include "nhssh/symmetry.hpp"

using namespace nhssh;
using std::numbers::pi;

namespace {

std::set<std::string> preserved_among(const ModelParams& p, const std::vector<std::string>& names) {
  std::set<std::string> out;
  for (const auto& n : names)
    if (check_symmetry(p, ops::by_name(n)).verdict == Verdict::Preserved) out.insert(n);
  return out;
}

const std::vector<std::string> kTen{"P", "T", "RMx", "RMy", "C4", "S", "RMxS", "RMyS", "RMxC4", "RMyC4"};

// max_k |U H(k) U^+ - sign F(H(M k))| written out without the library's relation machinery.
double direct_residual(const ModelParams& p, const Matrix4cd& u, int sign, bool transpose, bool conjugate,
                       int a, int b, int c, int d) {
  double worst = 0.0;
  for (int m = 0; m < 16; ++m)
    for (int n = 0; n < 16; ++n) {
      const double kx = 2 * pi * m / 16, ky = 2 * pi * n / 16;
      Matrix4cd rhs = build_bloch(p, a * kx + b * ky, c * kx + d * ky);
      if (transpose) rhs.transposeInPlace();
      if (conjugate) rhs = rhs.conjugate().eval();
      worst = std::max(worst, (u * build_bloch(p, kx, ky) * u.adjoint() - double(sign) * rhs).cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace

TEST_CASE("built-in operators are unitary and carry the documented relations") {
  for (const auto& op : ops::standard_set()) {
    CAPTURE(op.name);
    CHECK(unitarity_defect(op) < 1e-12);
  }
  CHECK(ops::time_reversal().relation == Relation::ComplexConjugate);
  CHECK(ops::reciprocal_mirror_x().relation == Relation::Transpose);
  CHECK(ops::sublattice().sign == -1);
  CHECK(ops::rotation_c4().momentum_map == MomentumMap{0, 1, -1, 0});
  // C4 written out: sigma^0 (x) |1><0| + sigma^x (x) |0><1|
  Matrix4cd c4 = Matrix4cd::Zero();
  c4(1, 0) = c4(3, 2) = 1.0;
  c4(2, 1) = c4(0, 3) = 1.0;
  CHECK((ops::rotation_c4().unitary - c4).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(ops::standard_set().size() == 10);
}

TEST_CASE("unperturbed model keeps every relation") {
  const ModelParams p = reference_params();
  for (const auto& op : ops::standard_set()) {
    const auto r = check_symmetry(p, op);
    CAPTURE(op.name);
    CHECK(r.residual < 1e-10);
    CHECK(r.verdict == Verdict::Preserved);
    CHECK(r.grid == "32x32 uniform [0,2pi)^2");
  }
  // sublattice anticommutation written out
  const Matrix4cd s = pauli_product(0, 3);
  double worst = 0.0;
  for (std::size_t i = 0; i < KGrid{32, 32}.size(); ++i) {
    const auto k = KGrid{32, 32}.at(i);
    const Matrix4cd h = build_bloch(p, k.kx, k.ky);
    worst = std::max(worst, (s * h * s.adjoint() + h).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("alpha potential verdicts") {
  const auto kept = preserved_among(reference_params(alpha_potential(0.4)), kTen);
  CHECK(kept == std::set<std::string>{"P", "T", "RMxS", "RMyS", "RMxC4", "RMyC4"});
  CHECK(check_symmetry(reference_params(alpha_potential(0.4)), ops::by_name("PT")).verdict == Verdict::Preserved);
}

TEST_CASE("beta potential verdicts") {
  const ModelParams p = reference_params(beta_potential(0.4));
  const auto kept = preserved_among(p, kTen);
  CHECK(kept == std::set<std::string>{"T", "RMy", "RMxS"});
  CHECK(check_symmetry(p, ops::by_name("RMyT")).verdict == Verdict::Preserved);
  CHECK(check_symmetry(p, ops::by_name("P")).verdict == Verdict::Broken);
  // RMy holds but S does not, so their product fails as well
  CHECK(check_symmetry(p, compose(ops::reciprocal_mirror_y(), ops::sublattice())).verdict == Verdict::Broken);
}

TEST_CASE("compose") {
  SUBCASE("S o S is the identity relation") {
    const auto ss = compose(ops::sublattice(), ops::sublattice());
    CHECK(ss.sign == 1);
    CHECK(ss.relation == Relation::Commute);
    CHECK(ss.momentum_map == MomentumMap{});
    CHECK((ss.unitary - Matrix4cd::Identity()).cwiseAbs().maxCoeff() == 0.0);
    gen::Rng rng(31);
    for (int i = 0; i < 10; ++i) CHECK(check_symmetry(gen::params(rng), ss).residual == 0.0);
  }
  SUBCASE("names and relation algebra") {
    const auto pt = compose(ops::inversion(), ops::time_reversal());
    CHECK(pt.name == "PT");
    CHECK(pt.relation == Relation::ComplexConjugate);
    CHECK(pt.momentum_map == MomentumMap{});
    const auto rmt = compose(ops::reciprocal_mirror_x(), ops::time_reversal());
    CHECK(rmt.relation == Relation::ConjugateTranspose);
    CHECK(rmt.momentum_map == MomentumMap{-1, 0, 0, 1});
    const auto tt = compose(ops::time_reversal(), ops::time_reversal());
    CHECK(tt.relation == Relation::Commute);
  }
  SUBCASE("complex outer unitary with an antiunitary inner relation is rejected") {
    SymmetryOp phase{"iP", std::complex<double>(0, 1) * pauli_product(1, 0), Relation::Commute, {-1, 0, 0, -1}, 1};
    CHECK_THROWS_AS(compose(phase, ops::time_reversal()), std::invalid_argument);
    CHECK_NOTHROW(compose(ops::time_reversal(), phase));
  }
  SUBCASE("lookup by name") {
    CHECK(ops::by_name("RMyC4").name == "RMyC4");
    CHECK(ops::by_name("PT").relation == Relation::ComplexConjugate);
    CHECK_THROWS_AS(ops::by_name("Q"), std::invalid_argument);
    CHECK_THROWS_AS(ops::by_name(""), std::invalid_argument);
  }
}

TEST_CASE("composite verdicts agree with the relation written out by hand") {
  gen::Rng rng(32);
  const std::vector<SymmetryOp> base = ops::builtins();
  for (int trial = 0; trial < 40; ++trial) {
    ModelParams p = rng.coin() ? reference_params() : gen::params(rng);
    if (rng.coin()) p.perturbation = rng.coin() ? alpha_potential(0.4) : beta_potential(0.4);
    const auto& a = base[static_cast<std::size_t>(rng.integer(0, 5))];
    const auto& b = base[static_cast<std::size_t>(rng.integer(0, 5))];
    const auto ab = compose(a, b);
    const auto m = ab.momentum_map;
    const bool tr = ab.relation == Relation::Transpose || ab.relation == Relation::ConjugateTranspose;
    const bool cj = ab.relation == Relation::ComplexConjugate || ab.relation == Relation::ConjugateTranspose;
    const double direct = direct_residual(p, a.unitary * b.unitary, a.sign * b.sign, tr, cj, m.a, m.b, m.c, m.d);
    const auto r = check_symmetry(p, ab, {16, 16});
    CAPTURE(ab.name);
    CHECK(r.residual == doctest::Approx(direct).epsilon(1e-12));
    // a composite of two preserved relations is preserved
    if (check_symmetry(p, a).verdict == Verdict::Preserved && check_symmetry(p, b).verdict == Verdict::Preserved)
      CHECK(r.verdict == Verdict::Preserved);
  }
}

TEST_CASE("compose is associative") {
  gen::Rng rng(33);
  const auto base = ops::builtins();
  for (int trial = 0; trial < 50; ++trial) {
    const auto& a = base[static_cast<std::size_t>(rng.integer(0, 5))];
    const auto& b = base[static_cast<std::size_t>(rng.integer(0, 5))];
    const auto& c = base[static_cast<std::size_t>(rng.integer(0, 5))];
    const auto left = compose(compose(a, b), c);
    const auto right = compose(a, compose(b, c));
    CHECK(left.relation == right.relation);
    CHECK(left.sign == right.sign);
    CHECK(left.momentum_map == right.momentum_map);
    CHECK((left.unitary - right.unitary).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("preserved verdicts survive grid refinement") {
  for (const auto& p : {reference_params(), reference_params(alpha_potential(0.4)), reference_params(beta_potential(0.4))})
    for (const auto& op : ops::standard_set()) {
      if (check_symmetry(p, op).verdict != Verdict::Preserved) continue;
      CAPTURE(op.name);
      CHECK(check_symmetry(p, op, {64, 64}).verdict == Verdict::Preserved);
      CHECK(check_symmetry(p, op, {17, 13}).verdict == Verdict::Preserved);
    }
}

TEST_CASE("PT phase classification") {
  const SolveOptions o{.workers = 1, .strip_cells = 2, .vectors = false};
  CHECK(classify_pt_phase(bloch_spectrum(hermitian_params(), {16, 16}, o)) == PtPhase::Symmetric);
  CHECK(classify_pt_phase(bloch_spectrum(reference_params(), {32, 32}, o)) == PtPhase::Mixed);
  CHECK(classify_pt_phase(bloch_spectrum(reference_params(alpha_potential(0.6)), {32, 32}, o)) == PtPhase::Symmetric);
  ComplexSpectrum all_complex;
  all_complex.eigenvalues = {{0, 1}, {0, -1}};
  CHECK(classify_pt_phase(all_complex) == PtPhase::Broken);
  CHECK(to_string(PtPhase::Mixed) == "mixed");
}
