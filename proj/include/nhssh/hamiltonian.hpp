#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <string>
#include <vector>

#include "nhssh/pauli.hpp"

namespace nhssh {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using SparseMatrixXcd = Eigen::SparseMatrix<cplx>;

// Asymmetric hoppings of the 2D SSH lattice plus an on-site / intra-cell perturbation.
// The Bloch matrix is h(k; gamma_in, gamma_ex) + h^dagger(k; gamma_in_p, gamma_ex_p) + V.
struct ModelParams {
  double gamma_in = 0.0;
  double gamma_ex = 0.0;
  double gamma_in_p = 0.0;
  double gamma_ex_p = 0.0;
  PerturbationSpec perturbation;
};

// gamma_in = 0.2, gamma_ex = 0.4, primed hoppings at half strength.
ModelParams reference_params(PerturbationSpec perturbation = {});

// Symmetric hoppings gamma_in = gamma_in_p = 0.2, gamma_ex = gamma_ex_p = 0.4.
ModelParams hermitian_params(PerturbationSpec perturbation = {});

// gamma_in = gamma_ex = gamma, gamma_in_p = gamma_ex_p = gamma_p.
ModelParams hatano_nelson_preset(double gamma, double gamma_p, PerturbationSpec perturbation = {});

// Short stable fingerprint of the parameters, used in spectrum metadata.
std::string params_digest(const ModelParams& params);

// One directed hopping: H[(to, R), (from, R + (dx, dy))] += amplitude.
struct Bond {
  int to = 0;
  int from = 0;
  int dx = 0;
  int dy = 0;
  double amplitude = 0.0;
};

// The sixteen directed bonds of the unit cell (eight from h, eight from h^dagger).
std::vector<Bond> bonds(const ModelParams& params);

// H with e^{i kx} -> zx and e^{i ky} -> zy. Entries with negative displacement pick up 1/z.
Matrix4cd build_laurent(const ModelParams& params, cplx zx, cplx zy);

Matrix4cd build_bloch(const ModelParams& params, double kx, double ky);

enum class Boundary { Periodic, Open };
enum class Axis { X, Y };

struct LatticeSpec {
  int nx = 1;
  int ny = 1;
  Boundary bc_x = Boundary::Open;
  Boundary bc_y = Boundary::Open;

  Eigen::Index dim() const { return 4 * static_cast<Eigen::Index>(nx) * ny; }
};

// "PBC", "xOBC", "yOBC" or "xyOBC".
std::string boundary_tag(Boundary bc_x, Boundary bc_y);
std::string boundary_tag(const LatticeSpec& lattice);

// Throws InvalidLattice for nx, ny < 1 or a periodic axis with a single cell.
void validate(const LatticeSpec& lattice);

// Orbital index runs fastest, then x, then y.
inline Eigen::Index site_index(const LatticeSpec& lattice, int orbital, int x, int y) {
  return orbital + 4 * (static_cast<Eigen::Index>(x) + static_cast<Eigen::Index>(lattice.nx) * y);
}

std::vector<Eigen::Triplet<cplx>> real_space_triplets(const ModelParams& params,
                                                      const LatticeSpec& lattice);

MatrixXcd build_real_space(const ModelParams& params, const LatticeSpec& lattice);
SparseMatrixXcd build_real_space_sparse(const ModelParams& params, const LatticeSpec& lattice);

// Strip that is open along `open_axis` with `cells` unit cells and Bloch momentum
// `k_transverse` along the other axis. Index = orbital + 4 * cell.
//
// `gauge` applies the similarity diag(gauge^-cell) (imaginary gauge transformation):
// a bond spanning d cells along the open axis is multiplied by gauge^d. The spectrum is
// unchanged; gauge = |beta| flattens skin modes that grow like beta^cell.
MatrixXcd build_ribbon(const ModelParams& params, Axis open_axis, int cells, double k_transverse,
                       double gauge = 1.0);

}  // namespace nhssh
