#include "nhssh/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nhssh {

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Commute: return "commute";
    case Relation::Transpose: return "transpose";
    case Relation::ComplexConjugate: return "complex-conjugate";
    case Relation::ConjugateTranspose: return "conjugate-transpose";
  }
  return "?";
}

std::string to_string(Verdict v) { return v == Verdict::Preserved ? "preserved" : "broken"; }

std::string to_string(PtPhase p) {
  switch (p) {
    case PtPhase::Symmetric: return "symmetric";
    case PtPhase::Broken: return "broken";
    case PtPhase::Mixed: return "mixed";
  }
  return "?";
}

namespace {

bool transposes(Relation r) { return r == Relation::Transpose || r == Relation::ConjugateTranspose; }
bool conjugates(Relation r) { return r == Relation::ComplexConjugate || r == Relation::ConjugateTranspose; }

Relation relation_of(bool transpose, bool conjugate) {
  if (transpose && conjugate) return Relation::ConjugateTranspose;
  if (transpose) return Relation::Transpose;
  if (conjugate) return Relation::ComplexConjugate;
  return Relation::Commute;
}

Matrix4cd apply(Relation r, const Matrix4cd& h) {
  switch (r) {
    case Relation::Commute: return h;
    case Relation::Transpose: return h.transpose();
    case Relation::ComplexConjugate: return h.conjugate();
    case Relation::ConjugateTranspose: return h.adjoint();
  }
  return h;
}

constexpr MomentumMap kIdentity{1, 0, 0, 1};
constexpr MomentumMap kNegate{-1, 0, 0, -1};

}  // namespace

namespace ops {

SymmetryOp inversion() { return {"P", pauli_product(1, 0), Relation::Commute, kNegate, 1}; }

SymmetryOp time_reversal() { return {"T", pauli_product(0, 0), Relation::ComplexConjugate, kNegate, 1}; }

SymmetryOp reciprocal_mirror_x() { return {"RMx", pauli_product(1, 1), Relation::Transpose, {1, 0, 0, -1}, 1}; }

SymmetryOp reciprocal_mirror_y() { return {"RMy", pauli_product(0, 1), Relation::Transpose, {-1, 0, 0, 1}, 1}; }

SymmetryOp rotation_c4() {
  using c = std::complex<double>;
  const Matrix4cd u = 0.5 * (pauli_product(0, 1) - c(0, 1) * pauli_product(0, 2)) +
                      0.5 * (pauli_product(1, 1) + c(0, 1) * pauli_product(1, 2));
  return {"C4", u, Relation::Commute, {0, 1, -1, 0}, 1};
}

SymmetryOp sublattice() { return {"S", pauli_product(0, 3), Relation::Commute, kIdentity, -1}; }

std::vector<SymmetryOp> builtins() {
  return {inversion(), time_reversal(), reciprocal_mirror_x(), reciprocal_mirror_y(), rotation_c4(), sublattice()};
}

std::vector<SymmetryOp> composites() {
  return {compose(reciprocal_mirror_x(), sublattice()), compose(reciprocal_mirror_y(), sublattice()),
          compose(reciprocal_mirror_x(), rotation_c4()), compose(reciprocal_mirror_y(), rotation_c4())};
}

std::vector<SymmetryOp> standard_set() {
  auto out = builtins();
  for (auto& op : composites()) out.push_back(std::move(op));
  return out;
}

SymmetryOp by_name(const std::string& name) {
  const auto base = builtins();
  auto find = [&](const std::string& n) -> const SymmetryOp* {
    for (const auto& op : base)
      if (op.name == n) return &op;
    return nullptr;
  };
  if (const auto* op = find(name)) return *op;
  // Composite names are concatenations of built-in names, applied right to left.
  for (std::size_t split = 1; split < name.size(); ++split) {
    const auto* first = find(name.substr(0, split));
    if (!first) continue;
    try {
      return compose(*first, by_name(name.substr(split)));
    } catch (const std::invalid_argument&) {
    }
  }
  throw std::invalid_argument("unknown symmetry operator '" + name + "'");
}

}  // namespace ops

SymmetryOp compose(const SymmetryOp& first, const SymmetryOp& second) {
  // U1 U2 H(k) U2^+ U1^+ = s2 U1 F2(H(m2 k)) U1^+. Moving U1 inside F2 is only possible when
  // F2 is the identity or U1 is real; then this equals s1 s2 F2(F1(H(m1 m2 k))).
  if (second.relation != Relation::Commute && !first.unitary.imag().isZero(0.0))
    throw std::invalid_argument("composition " + first.name + " o " + second.name +
                                " is not a relation of the supported kinds");
  SymmetryOp out;
  out.name = first.name + second.name;
  out.unitary = first.unitary * second.unitary;
  out.relation = relation_of(transposes(first.relation) != transposes(second.relation),
                             conjugates(first.relation) != conjugates(second.relation));
  out.momentum_map = first.momentum_map.after(second.momentum_map);
  out.sign = first.sign * second.sign;
  return out;
}

double unitarity_defect(const SymmetryOp& op) {
  return (op.unitary * op.unitary.adjoint() - Matrix4cd::Identity()).cwiseAbs().maxCoeff();
}

SymmetryReport check_symmetry(const ModelParams& params, const SymmetryOp& op, const KGrid& grid, double tol) {
  if (grid.size() == 0) throw std::invalid_argument("symmetry check needs a nonempty grid");
  double residual = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Momentum k = grid.at(i);
    const Momentum kp = op.momentum_map(k);
    const Matrix4cd lhs = op.unitary * build_bloch(params, k.kx, k.ky) * op.unitary.adjoint();
    const Matrix4cd rhs = double(op.sign) * nhssh::apply(op.relation, build_bloch(params, kp.kx, kp.ky));
    residual = std::max(residual, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return {op.name, residual, residual < tol ? Verdict::Preserved : Verdict::Broken, grid.describe(), tol};
}

PtPhase classify_pt_phase(const ComplexSpectrum& spectrum, double tol) {
  if (spectrum.eigenvalues.empty()) throw std::invalid_argument("empty spectrum");
  const auto complex = [&](cplx e) { return std::abs(e.imag()) >= tol; };
  if (std::none_of(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), complex)) return PtPhase::Symmetric;

  const std::size_t g = spectrum.group_size;
  if (g == 0 || spectrum.size() % g != 0) {
    return std::all_of(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), complex) ? PtPhase::Broken
                                                                                            : PtPhase::Mixed;
  }
  for (std::size_t band = 0; band < g; ++band) {
    bool any = false;
    for (std::size_t i = band; i < spectrum.size() && !any; i += g) any = complex(spectrum.eigenvalues[i]);
    if (!any) return PtPhase::Mixed;
  }
  return PtPhase::Broken;
}

}  // namespace nhssh
