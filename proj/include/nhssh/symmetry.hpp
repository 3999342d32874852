#pragma once

#include <string>
#include <vector>

#include "nhssh/hamiltonian.hpp"
#include "nhssh/spectra.hpp"

namespace nhssh {

// How the transformed Bloch matrix is compared: U H(k) U^dagger = sign * F(H(k')).
enum class Relation {
  Commute,             // F(X) = X
  Transpose,           // F(X) = X^T
  ComplexConjugate,    // F(X) = X^*
  ConjugateTranspose,  // F(X) = X^dagger
};

std::string to_string(Relation r);

// Integer linear map k' = M k, stored row-major: kx' = a kx + b ky, ky' = c kx + d ky.
struct MomentumMap {
  int a = 1, b = 0, c = 0, d = 1;

  Momentum operator()(Momentum k) const { return {a * k.kx + b * k.ky, c * k.kx + d * k.ky}; }
  // (this o other)(k) = this(other(k))
  MomentumMap after(const MomentumMap& other) const {
    return {a * other.a + b * other.c, a * other.b + b * other.d, c * other.a + d * other.c,
            c * other.b + d * other.d};
  }
  bool operator==(const MomentumMap&) const = default;
};

struct SymmetryOp {
  std::string name;
  Matrix4cd unitary = Matrix4cd::Identity();
  Relation relation = Relation::Commute;
  MomentumMap momentum_map;
  int sign = 1;  // -1 for the anticommuting (chiral) relation
};

namespace ops {
SymmetryOp inversion();         // P    = s^x s^0,                 H(-k)
SymmetryOp time_reversal();     // T    = s^0 s^0,                 H^*(-k)
SymmetryOp reciprocal_mirror_x();  // RM_x = s^x s^x,              H^T(kx, -ky)
SymmetryOp reciprocal_mirror_y();  // RM_y = s^0 s^x,              H^T(-kx, ky)
SymmetryOp rotation_c4();       // C4, H(ky, -kx)
SymmetryOp sublattice();        // S    = s^0 s^z,                 -H(k)

// P, T, RMx, RMy, C4, S.
std::vector<SymmetryOp> builtins();
// The four composites RMxS, RMyS, RMxC4, RMyC4.
std::vector<SymmetryOp> composites();
// builtins() followed by composites().
std::vector<SymmetryOp> standard_set();
// Look up a built-in or composite by name ("P", "RMxS", "PT", ...). Throws std::invalid_argument.
SymmetryOp by_name(const std::string& name);
}  // namespace ops

// first o second: apply `second`, then `first`. The unitary is first.unitary * second.unitary,
// signs multiply, momentum maps compose and the relation kinds combine as elements of
// {id, T, *, dagger}. Throws std::invalid_argument when `second` transposes or conjugates and
// `first` has a non-real unitary (the composite relation is then not of this form).
SymmetryOp compose(const SymmetryOp& first, const SymmetryOp& second);

enum class Verdict { Preserved, Broken };
std::string to_string(Verdict v);

struct SymmetryReport {
  std::string op_name;
  double residual = 0.0;
  Verdict verdict = Verdict::Broken;
  std::string grid;
  double tolerance = 1e-10;
};

// max over the grid of |U H(k) U^dagger - sign F(H(k'))| (entrywise).
SymmetryReport check_symmetry(const ModelParams& params, const SymmetryOp& op, const KGrid& grid = {32, 32},
                              double tol = 1e-10);

// max_ij |(U U^dagger - 1)_ij|
double unitarity_defect(const SymmetryOp& op);

enum class PtPhase { Symmetric, Broken, Mixed };
std::string to_string(PtPhase p);

// Symmetric if every |Im E| < tol. With per-k groups of four, band b is the b-th eigenvalue of
// each group in (Re, Im) order; the phase is Broken when every band has a complex eigenvalue and
// Mixed otherwise. Without grouping the whole spectrum counts as one band, and Broken means all
// eigenvalues are complex.
PtPhase classify_pt_phase(const ComplexSpectrum& spectrum, double tol = 1e-8);

}  // namespace nhssh
