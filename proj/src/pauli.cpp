#include "nhssh/pauli.hpp"

#include <cmath>
#include <string>

#include "nhssh/errors.hpp"

namespace nhssh {

Eigen::Matrix2cd pauli(int index) {
  using c = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (index) {
    case 0:
      m << 1, 0, 0, 1;
      break;
    case 1:
      m << 0, 1, 1, 0;
      break;
    case 2:
      m << 0, c(0, -1), c(0, 1), 0;
      break;
    case 3:
      m << 1, 0, 0, -1;
      break;
    default:
      throw InvalidTerm("Pauli index " + std::to_string(index) + " outside 0..3");
  }
  return m;
}

Matrix4cd pauli_product(int mu, int nu) {
  const Eigen::Matrix2cd a = pauli(mu);
  const Eigen::Matrix2cd b = pauli(nu);
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix4cd realize(const PauliTerm& term) { return term.coeff * pauli_product(term.mu, term.nu); }

Matrix4cd realize_perturbation(const PerturbationSpec& spec) {
  Matrix4cd out = Matrix4cd::Zero();
  for (const auto& t : spec.terms) out += realize(t);
  return out;
}

PerturbationSpec alpha_potential(double alpha) { return PerturbationSpec{}.add(0, 3, alpha); }

PerturbationSpec beta_potential(double beta) { return PerturbationSpec{}.add(3, 0, beta); }

PerturbationSpec theta_potential(double amplitude, double theta, ThetaVariant variant) {
  PerturbationSpec spec;
  spec.add(0, 3, amplitude * std::cos(theta));
  if (variant == ThetaVariant::ZZero)
    spec.add(3, 0, amplitude * std::sin(theta));
  else
    spec.add(3, 3, amplitude * std::sin(theta));
  return spec;
}

}  // namespace nhssh
