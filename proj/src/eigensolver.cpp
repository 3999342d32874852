#include "nhssh/eigensolver.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "nhssh/errors.hpp"

namespace nhssh {

namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

EigenDecomposition solve_complex(const Eigen::MatrixXcd& a_in, const EigenOptions& opts,
                                 const std::string& label) {
  const lapack_int n = static_cast<lapack_int>(a_in.rows());
  Eigen::MatrixXcd a = a_in;
  Eigen::VectorXcd w(n);
  Eigen::VectorXd scale(n), rconde(n), rcondv(n);
  const bool want_vr = opts.vectors || opts.condition;
  const bool want_vl = opts.condition;
  Eigen::MatrixXcd vl(want_vl ? n : 1, want_vl ? n : 1);
  Eigen::MatrixXcd vr(want_vr ? n : 1, want_vr ? n : 1);
  lapack_int ilo = 0, ihi = 0;
  double abnrm = 0.0;
  const lapack_int info = LAPACKE_zgeevx(
      LAPACK_COL_MAJOR, 'B', want_vl ? 'V' : 'N', want_vr ? 'V' : 'N', opts.condition ? 'E' : 'N', n,
      a.data(), n, w.data(), vl.data(), static_cast<lapack_int>(vl.rows()), vr.data(),
      static_cast<lapack_int>(vr.rows()), &ilo, &ihi, scale.data(), &abnrm, rconde.data(),
      rcondv.data());
  if (info != 0) throw NumericalFailure("zgeevx failed (info=" + std::to_string(info) + ")", label);

  EigenDecomposition out;
  out.values = w;
  if (opts.vectors) {
    out.vectors = vr;
    out.vectors.colwise().normalize();
  }
  if (opts.condition) {
    out.error_bound.resize(n);
    for (lapack_int j = 0; j < n; ++j)
      out.error_bound(j) = rconde(j) > 0.0 ? kEps * abnrm / rconde(j)
                                           : std::numeric_limits<double>::infinity();
  }
  return out;
}

// Exactly Hermitian input (every Hermitian-limit model): zheevd is several times faster and the
// eigenvalues come out exactly real.
EigenDecomposition solve_hermitian(const Eigen::MatrixXcd& a_in, const EigenOptions& opts, const std::string& label) {
  const lapack_int n = static_cast<lapack_int>(a_in.rows());
  Eigen::MatrixXcd a = a_in;
  Eigen::VectorXd w(n);
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, opts.vectors ? 'V' : 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) throw NumericalFailure("zheevd failed (info=" + std::to_string(info) + ")", label);
  EigenDecomposition out;
  out.values = w.cast<cplx>();
  if (opts.vectors) out.vectors = a;
  if (opts.condition) out.error_bound = Eigen::VectorXd::Constant(n, kEps * a_in.norm());
  return out;
}

}  // namespace

EigenDecomposition eigen_decompose(const Eigen::MatrixXcd& a, const EigenOptions& opts,
                                   const std::string& label) {
  if (a.rows() != a.cols()) throw NumericalFailure("eigensolver needs a square matrix", label);
  if (a.rows() == 0) return {};
  if (!a.allFinite()) throw NumericalFailure("non-finite matrix entries", label);
  // Real matrices go through zgeevx as well. The real driver leans on dgemm, and some OpenBLAS
  // builds ship a broken AVX-512 dgemm kernel that silently returns garbage spectra.
  auto out = a == a.adjoint() ? solve_hermitian(a, opts, label) : solve_complex(a, opts, label);
  // Integrity: the eigenvalues must add up to the trace. Compared on the scale of ||A||_F since the
  // trace of a traceless perturbation is zero.
  const double size = std::max(std::abs(a.trace()), a.norm());
  if (std::abs(out.values.sum() - a.trace()) > 1e-8 * std::max(size, 1e-300))
    throw NumericalFailure("eigenvalue sum departs from the trace", label);
  return out;
}

}  // namespace nhssh
