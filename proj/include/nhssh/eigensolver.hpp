#pragma once

#include <Eigen/Dense>

#include <string>

namespace nhssh {

struct EigenOptions {
  bool vectors = false;    // unit-norm right eigenvectors
  bool condition = false;  // per-eigenvalue forward error bound
};

struct EigenDecomposition {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;     // columns, empty unless requested
  Eigen::VectorXd error_bound;  // eps * ||A_balanced|| / rcond(lambda), empty unless requested
};

// Dense eigensolver: LAPACK zheevd for exactly Hermitian input, zgeevx with balancing otherwise.
// Throws NumericalFailure(label) on non-finite input, non-convergence, or an eigenvalue sum that
// misses the trace by more than 1e-8 max(|tr A|, ||A||_F).
EigenDecomposition eigen_decompose(const Eigen::MatrixXcd& a, const EigenOptions& opts = {},
                                   const std::string& label = {});

}  // namespace nhssh
