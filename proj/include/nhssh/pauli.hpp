#pragma once

#include <Eigen/Dense>

#include <vector>

namespace nhssh {

using Matrix4cd = Eigen::Matrix4cd;

// coeff * (sigma^mu (x) sigma^nu), sigma^0 = identity.
//
// The first factor acts on the outer 2x2 block index, so on the internal basis
// (A, B, C, D) sigma^z (x) sigma^0 = diag(+1, +1, -1, -1) and
// sigma^0 (x) sigma^z = diag(+1, -1, +1, -1).
struct PauliTerm {
  int mu = 0;
  int nu = 0;
  double coeff = 0.0;
};

struct PerturbationSpec {
  std::vector<PauliTerm> terms;

  PerturbationSpec& add(int mu, int nu, double coeff) {
    terms.push_back({mu, nu, coeff});
    return *this;
  }
};

// 2x2 Pauli matrix; throws InvalidTerm outside 0..3.
Eigen::Matrix2cd pauli(int index);

// sigma^mu (x) sigma^nu.
Matrix4cd pauli_product(int mu, int nu);

Matrix4cd realize(const PauliTerm& term);

// Sum of all term realizations; the empty spec realizes the zero matrix.
Matrix4cd realize_perturbation(const PerturbationSpec& spec);

// Named potentials.
PerturbationSpec alpha_potential(double alpha);  // alpha sigma^0 sigma^z
PerturbationSpec beta_potential(double beta);    // beta  sigma^z sigma^0

// Second term of the mixed potential amp * (cos(theta) sigma^0 sigma^z + sin(theta) X).
enum class ThetaVariant {
  ZZero,  // X = sigma^z sigma^0
  ZZ,     // X = sigma^z sigma^z
};

PerturbationSpec theta_potential(double amplitude, double theta,
                                 ThetaVariant variant = ThetaVariant::ZZero);

}  // namespace nhssh
