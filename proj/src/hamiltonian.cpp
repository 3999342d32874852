#include "nhssh/hamiltonian.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "nhssh/errors.hpp"

namespace nhssh {

ModelParams reference_params(PerturbationSpec perturbation) {
  return {0.2, 0.4, 0.1, 0.2, std::move(perturbation)};
}

ModelParams hermitian_params(PerturbationSpec perturbation) {
  return {0.2, 0.4, 0.2, 0.4, std::move(perturbation)};
}

ModelParams hatano_nelson_preset(double gamma, double gamma_p, PerturbationSpec perturbation) {
  return {gamma, gamma, gamma_p, gamma_p, std::move(perturbation)};
}

std::string params_digest(const ModelParams& params) {
  // FNV-1a over the canonical text form.
  std::string text;
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    text += buf;
  };
  put(params.gamma_in);
  put(params.gamma_ex);
  put(params.gamma_in_p);
  put(params.gamma_ex_p);
  for (const auto& t : params.perturbation.terms) {
    text += std::to_string(t.mu) + std::to_string(t.nu);
    put(t.coeff);
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<Bond> bonds(const ModelParams& p) {
  enum { A, B, C, D };
  // Nonzero entries of h(k): (row, col, dx, dy, exchange?) with h_ij ~ e^{i k.d}.
  struct Entry {
    int row, col, dx, dy;
    bool ex;
  };
  static constexpr Entry h_entries[] = {
      {A, B, 0, 0, false}, {A, D, -1, 0, true}, {B, A, 0, 1, true},  {B, C, 0, 0, false},
      {C, B, 1, 0, true},  {C, D, 0, 0, false}, {D, A, 0, 0, false}, {D, C, 0, -1, true},
  };
  std::vector<Bond> out;
  out.reserve(16);
  for (const auto& e : h_entries) {
    out.push_back({e.row, e.col, e.dx, e.dy, e.ex ? p.gamma_ex : p.gamma_in});
    // h^dagger(k; gamma') puts conj(gamma' e^{i k.d}) at (col, row).
    out.push_back({e.col, e.row, -e.dx, -e.dy, e.ex ? p.gamma_ex_p : p.gamma_in_p});
  }
  return out;
}

namespace {

cplx power(cplx z, int n) {
  if (n == 0) return 1.0;
  return n > 0 ? std::pow(z, n) : 1.0 / std::pow(z, -n);
}

}  // namespace

Matrix4cd build_laurent(const ModelParams& params, cplx zx, cplx zy) {
  Matrix4cd h = realize_perturbation(params.perturbation);
  for (const auto& b : bonds(params)) h(b.to, b.from) += b.amplitude * power(zx, b.dx) * power(zy, b.dy);
  return h;
}

Matrix4cd build_bloch(const ModelParams& params, double kx, double ky) {
  return build_laurent(params, std::polar(1.0, kx), std::polar(1.0, ky));
}

std::string boundary_tag(Boundary bc_x, Boundary bc_y) {
  const bool ox = bc_x == Boundary::Open;
  const bool oy = bc_y == Boundary::Open;
  if (ox && oy) return "xyOBC";
  if (ox) return "xOBC";
  if (oy) return "yOBC";
  return "PBC";
}

std::string boundary_tag(const LatticeSpec& lattice) { return boundary_tag(lattice.bc_x, lattice.bc_y); }

void validate(const LatticeSpec& l) {
  if (l.nx < 1 || l.ny < 1)
    throw InvalidLattice("lattice needs at least one cell per axis, got " + std::to_string(l.nx) +
                         "x" + std::to_string(l.ny));
  if (l.bc_x == Boundary::Periodic && l.nx < 2)
    throw InvalidLattice("periodic x axis needs nx >= 2");
  if (l.bc_y == Boundary::Periodic && l.ny < 2)
    throw InvalidLattice("periodic y axis needs ny >= 2");
}

namespace {

// Wraps `c` into [0, n) on periodic axes; returns false if the bond leaves an open axis.
bool resolve(int& c, int n, Boundary bc) {
  if (c >= 0 && c < n) return true;
  if (bc == Boundary::Open) return false;
  c = ((c % n) + n) % n;
  return true;
}

}  // namespace

std::vector<Eigen::Triplet<cplx>> real_space_triplets(const ModelParams& params,
                                                      const LatticeSpec& lattice) {
  validate(lattice);
  const Matrix4cd onsite = realize_perturbation(params.perturbation);
  const auto bond_list = bonds(params);
  std::vector<Eigen::Triplet<cplx>> out;
  out.reserve(static_cast<std::size_t>(lattice.nx) * lattice.ny * (bond_list.size() + 16));
  for (int y = 0; y < lattice.ny; ++y) {
    for (int x = 0; x < lattice.nx; ++x) {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (onsite(i, j) != cplx(0.0))
            out.emplace_back(site_index(lattice, i, x, y), site_index(lattice, j, x, y), onsite(i, j));
      for (const auto& b : bond_list) {
        int tx = x + b.dx;
        int ty = y + b.dy;
        if (!resolve(tx, lattice.nx, lattice.bc_x) || !resolve(ty, lattice.ny, lattice.bc_y)) continue;
        out.emplace_back(site_index(lattice, b.to, x, y), site_index(lattice, b.from, tx, ty),
                         cplx(b.amplitude));
      }
    }
  }
  return out;
}

MatrixXcd build_real_space(const ModelParams& params, const LatticeSpec& lattice) {
  const auto triplets = real_space_triplets(params, lattice);
  MatrixXcd h = MatrixXcd::Zero(lattice.dim(), lattice.dim());
  for (const auto& t : triplets) h(t.row(), t.col()) += t.value();
  return h;
}

SparseMatrixXcd build_real_space_sparse(const ModelParams& params, const LatticeSpec& lattice) {
  const auto triplets = real_space_triplets(params, lattice);
  SparseMatrixXcd h(lattice.dim(), lattice.dim());
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

MatrixXcd build_ribbon(const ModelParams& params, Axis open_axis, int cells, double k_transverse,
                       double gauge) {
  if (cells < 1) throw InvalidLattice("ribbon needs at least one cell");
  if (!(gauge > 0.0)) throw InvalidLattice("ribbon gauge must be positive");
  const Matrix4cd onsite = realize_perturbation(params.perturbation);
  const auto bond_list = bonds(params);
  const Eigen::Index dim = 4 * static_cast<Eigen::Index>(cells);
  MatrixXcd h = MatrixXcd::Zero(dim, dim);
  for (int c = 0; c < cells; ++c) {
    h.block<4, 4>(4 * c, 4 * c) += onsite;
    for (const auto& b : bond_list) {
      const int d_open = open_axis == Axis::X ? b.dx : b.dy;
      const int d_trans = open_axis == Axis::X ? b.dy : b.dx;
      const int target = c + d_open;
      if (target < 0 || target >= cells) continue;
      h(4 * c + b.to, 4 * target + b.from) +=
          b.amplitude * std::polar(1.0, k_transverse * d_trans) * std::pow(gauge, d_open);
    }
  }
  return h;
}

}  // namespace nhssh
