// Fourier-collocation realization of the linearized operators about a wave
// and the spectral quantities built on them: Morse indices, kernels, the
// 2x2 index-count matrix D and the spectrum of the Hamiltonian operator J L.
//
// The discrete model has finite spectrum, so questions about essential
// spectrum of the continuum operator do not arise here.

#ifndef WAVESTAB_HILLSPEC_HPP
#define WAVESTAB_HILLSPEC_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wavestab/fourier.hpp"
#include "wavestab/waves.hpp"

namespace wavestab {

class AmbiguousKernel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FredholmViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KernelMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OperatorLabel { Lplus, Lminus, L1, L2, M, Mstar, L, JL };

inline const char* to_string(OperatorLabel l) {
  switch (l) {
    case OperatorLabel::Lplus: return "L+";
    case OperatorLabel::Lminus: return "L-";
    case OperatorLabel::L1: return "L1";
    case OperatorLabel::L2: return "L2";
    case OperatorLabel::M: return "M";
    case OperatorLabel::Mstar: return "M*";
    case OperatorLabel::L: return "L";
    case OperatorLabel::JL: return "JL";
  }
  return "?";
}

struct DiscretizedOperator {
  Eigen::MatrixXd matrix;
  bool symmetric = false;
  OperatorLabel label = OperatorLabel::L;
  /// Magnitude of the low end of the spectrum: (pi/T)^2 plus the sup of the
  /// zeroth- and first-order coefficients.  Tolerances are relative to this
  /// rather than to the largest eigenvalue, which grows like n^2.
  double low_mode_scale = 1.0;

  Eigen::Index rows() const { return matrix.rows(); }
  double max_asymmetry() const { return (matrix - matrix.transpose()).cwiseAbs().maxCoeff(); }
};

/// All operators about one wave on one grid.
struct OperatorSet {
  FourierGrid grid;
  WaveParams params;
  double c = 0;
  Eigen::VectorXd phi, dphi, phisq;
  DiscretizedOperator Lplus, Lminus, L1, L2, M, Mstar, L;

  int n() const { return grid.size(); }

  /// Sampled kernel of L: columns (0, phi) and (phi', -phi^3/4).
  Eigen::MatrixXd kernel_basis() const {
    const int m = n();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2 * m, 2);
    k.col(0).tail(m) = phi;
    k.col(1).head(m) = dphi;
    k.col(1).tail(m) = -0.25 * phi.array().cube().matrix();
    return k;
  }

  /// (phi, 0) and (phi^3/4, phi').
  std::pair<Eigen::VectorXd, Eigen::VectorXd> d_matrix_sources() const {
    const int m = n();
    Eigen::VectorXd r1 = Eigen::VectorXd::Zero(2 * m), r2(2 * m);
    r1.head(m) = phi;
    r2.head(m) = 0.25 * phi.array().cube().matrix();
    r2.tail(m) = dphi;
    return {r1, r2};
  }
};

namespace detail {

inline DiscretizedOperator schrodinger(const Eigen::MatrixXd& d2, const Eigen::VectorXd& potential,
                                       double k0, OperatorLabel label) {
  DiscretizedOperator op;
  op.matrix = -d2;
  op.matrix.diagonal() += potential;
  op.symmetric = true;
  op.label = label;
  op.low_mode_scale = k0 * k0 + potential.cwiseAbs().maxCoeff();
  return op;
}

}  // namespace detail

inline OperatorSet build_operators(const WaveProfile& w, int n) {
  const FourierGrid grid(n, w.half_period());
  const auto& s = w.scalars();
  const double shift = w.params().mu / 16.0;  // omega - c^2/4
  const double c = s.c;

  Eigen::VectorXd phisq = grid.sample([&](double x) { return w.phisq(x); });
  Eigen::VectorXd phi = phisq.cwiseSqrt();
  Eigen::VectorXd dphi = grid.sample([&](double x) { return w.dphi(x); });
  const Eigen::ArrayXd q = phisq.array();

  const Eigen::MatrixXd d1 = grid.first_derivative();
  const Eigen::MatrixXd d2 = grid.second_derivative();
  const double k0 = grid.base_wavenumber();

  auto pot = [&](double cubic, double quintic) -> Eigen::VectorXd {
    return (shift + cubic * c * q - quintic * q * q).matrix();
  };

  OperatorSet set{grid, w.params(), c, phi, dphi, phisq, {}, {}, {}, {}, {}, {}, {}};
  set.Lplus = detail::schrodinger(d2, pot(1.5, 15.0 / 16.0), k0, OperatorLabel::Lplus);
  set.Lminus = detail::schrodinger(d2, pot(0.5, 3.0 / 16.0), k0, OperatorLabel::Lminus);
  set.L1 = detail::schrodinger(d2, pot(1.5, 11.0 / 16.0), k0, OperatorLabel::L1);
  set.L2 = set.Lminus;
  set.L2.label = OperatorLabel::L2;

  const Eigen::VectorXd half_q = 0.5 * phisq;
  const Eigen::VectorXd half_pdp = 0.5 * phi.cwiseProduct(dphi);
  set.M.matrix = half_q.asDiagonal() * d1;
  set.M.matrix.diagonal() -= half_pdp;
  set.M.label = OperatorLabel::M;
  set.M.low_mode_scale = half_q.maxCoeff() * k0 + half_pdp.cwiseAbs().maxCoeff();
  set.Mstar.matrix = set.M.matrix.transpose();
  set.Mstar.label = OperatorLabel::Mstar;
  set.Mstar.low_mode_scale = set.M.low_mode_scale;

  set.L.matrix.resize(2 * n, 2 * n);
  set.L.matrix << set.L1.matrix, set.M.matrix, set.Mstar.matrix, set.L2.matrix;
  set.L.symmetric = true;
  set.L.label = OperatorLabel::L;
  set.L.low_mode_scale =
      std::max(set.L1.low_mode_scale, set.L2.low_mode_scale) + set.M.low_mode_scale;
  return set;
}

inline Eigen::MatrixXd symplectic_J(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

/// J L assembled blockwise: [[M*, L2], [-L1, -M]].
inline DiscretizedOperator hamiltonian(const OperatorSet& s) {
  const int n = s.n();
  DiscretizedOperator op;
  op.matrix.resize(2 * n, 2 * n);
  op.matrix << s.Mstar.matrix, s.L2.matrix, -s.L1.matrix, -s.M.matrix;
  op.label = OperatorLabel::JL;
  op.low_mode_scale = s.L.low_mode_scale;
  return op;
}

struct SpectrumSummary {
  Eigen::VectorXd eigenvalues;  // ascending
  int morse_index = 0;
  int kernel_dim = 0;
  double gap = 0;  // smallest eigenvalue above the kernel band
  double tol_ker = 0;
  Eigen::MatrixXd kernel_vectors;  // filled only when requested
};

struct SpectrumOptions {
  /// tol_ker = rel_tol * low_mode_scale unless an absolute override is given.
  double rel_tol = 1e-6;
  std::optional<double> tol_ker;
  bool want_kernel_vectors = false;
};

inline SpectrumSummary sym_spectrum(const DiscretizedOperator& op, const SpectrumOptions& opt = {}) {
  if (!op.symmetric)
    throw std::invalid_argument(std::string("sym_spectrum needs a symmetric operator, got ") +
                                to_string(op.label));
  SpectrumSummary out;
  out.tol_ker = opt.tol_ker.value_or(opt.rel_tol * op.low_mode_scale);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      op.matrix, opt.want_kernel_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolve failed");
  out.eigenvalues = es.eigenvalues();

  const double tol = out.tol_ker;
  std::vector<Eigen::Index> kernel_idx;
  out.gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    const double e = out.eigenvalues[i];
    const double a = std::abs(e);
    if (a > tol / 2 && a < 2 * tol) {
      std::ostringstream os;
      os << to_string(op.label) << " eigenvalue " << e << " lies within a factor 2 of the kernel "
         << "tolerance " << tol;
      throw AmbiguousKernel(os.str());
    }
    if (e <= -tol) {
      ++out.morse_index;
    } else if (a < tol) {
      ++out.kernel_dim;
      kernel_idx.push_back(i);
    } else if (e < out.gap) {
      out.gap = e;
    }
  }
  if (opt.want_kernel_vectors) {
    out.kernel_vectors.resize(op.rows(), static_cast<Eigen::Index>(kernel_idx.size()));
    for (std::size_t j = 0; j < kernel_idx.size(); ++j)
      out.kernel_vectors.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(kernel_idx[j]);
  }
  return out;
}

/// Orthonormal basis (Euclidean) for the column span of `basis`.
inline Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& basis) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  return qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), basis.cols());
}

/// Largest principal angle between two column spans.
inline double subspace_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = orthonormalize(a), qb = orthonormalize(b);
  const Eigen::MatrixXd resid = qa - qb * (qb.transpose() * qa);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid);
  return std::asin(std::min(1.0, svd.singularValues()(0)));
}

struct SolveDiagnostics {
  double kernel_component = 0;  // relative size of the rhs component along the kernel
  double residual = 0;          // ||P(A x - P b)|| / ||b||
};

/// Solves A x = b on the orthogonal complement of span(kernel_basis), where
/// A is symmetric and kernel_basis spans (to discretization accuracy) its
/// kernel.  Returns the solution orthogonal to the kernel (the minimum-norm
/// one).  A kernel component of b up to 1e-8 ||b|| is projected away.
inline Eigen::VectorXd solve_on_complement(const DiscretizedOperator& op, const Eigen::VectorXd& rhs,
                                           const Eigen::MatrixXd& kernel_basis,
                                           SolveDiagnostics* diag = nullptr) {
  constexpr double fredholm_tol = 1e-8;
  constexpr double residual_tol = 1e-8;
  if (rhs.size() != op.rows() || kernel_basis.rows() != op.rows())
    throw std::invalid_argument("solve_on_complement: dimension mismatch");
  const double bnorm = rhs.norm();
  if (bnorm == 0) return Eigen::VectorXd::Zero(rhs.size());

  const Eigen::MatrixXd q = orthonormalize(kernel_basis);
  const Eigen::VectorXd along = q.transpose() * rhs;
  const double comp = along.norm() / bnorm;
  if (comp > fredholm_tol) {
    std::ostringstream os;
    os << "Fredholm condition violated for " << to_string(op.label)
       << ": right-hand side has kernel component " << comp << " (relative), above "
       << fredholm_tol;
    throw FredholmViolation(os.str());
  }
  auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v - q * (q.transpose() * v);
  };
  const Eigen::VectorXd pb = project(rhs);

  Eigen::MatrixXd shifted = op.matrix;
  shifted.noalias() += op.low_mode_scale * q * q.transpose();
  const Eigen::VectorXd x = project(Eigen::PartialPivLU<Eigen::MatrixXd>(shifted).solve(pb));

  const double res = project(op.matrix * x - pb).norm() / bnorm;
  if (diag) *diag = {comp, res};
  if (!(res <= residual_tol)) {
    std::ostringstream os;
    os << "solve on kernel complement of " << to_string(op.label) << " left relative residual "
       << res;
    throw std::runtime_error(os.str());
  }
  return x;
}

struct DMatrix {
  double d11 = 0, d12 = 0, d22 = 0;
  double asymmetry = 0;  // |<L^-1 r1, r2> - <L^-1 r2, r1>|

  double det() const { return d11 * d22 - d12 * d12; }
  double frobenius_sq() const { return d11 * d11 + 2 * d12 * d12 + d22 * d22; }
  /// Number of negative eigenvalues of the symmetric 2x2 matrix.
  int morse(double tol = 0) const {
    const double tr = d11 + d22;
    const double disc = std::sqrt(std::max(0.0, 0.25 * (d11 - d22) * (d11 - d22) + d12 * d12));
    const double lo = 0.5 * tr - disc, hi = 0.5 * tr + disc;
    return (lo < -tol ? 1 : 0) + (hi < -tol ? 1 : 0);
  }
};

/// Throws if the numerical kernel of L is not two-dimensional.
inline void require_two_dim_kernel(const OperatorSet& s) {
  const auto spec = sym_spectrum(s.L);
  if (spec.kernel_dim != 2) {
    std::ostringstream os;
    os << "kernel of L has dimension " << spec.kernel_dim << ", expected 2";
    throw KernelMismatch(os.str());
  }
}

inline DMatrix d_matrix_numeric(const OperatorSet& s, bool check_kernel = true) {
  if (check_kernel) require_two_dim_kernel(s);
  const auto [r1, r2] = s.d_matrix_sources();
  const Eigen::MatrixXd ker = s.kernel_basis();
  const Eigen::VectorXd u1 = solve_on_complement(s.L, r1, ker);
  const Eigen::VectorXd u2 = solve_on_complement(s.L, r2, ker);
  DMatrix d;
  d.d11 = s.grid.inner(u1, r1);
  const double d12 = s.grid.inner(u1, r2), d21 = s.grid.inner(u2, r1);
  d.d12 = 0.5 * (d12 + d21);
  d.asymmetry = std::abs(d12 - d21);
  d.d22 = s.grid.inner(u2, r2);
  return d;
}

inline DMatrix d_matrix_numeric(const WaveProfile& w, int n) {
  return d_matrix_numeric(build_operators(w, n));
}

/// <L+^{-1} phi, phi> from the discretized operator.
inline double pairing_numeric(const OperatorSet& s) {
  const Eigen::VectorXd f = solve_on_complement(s.Lplus, s.phi, s.dphi);
  return s.grid.inner(f, s.phi);
}

namespace detail {

/// Parlett-Reinsch balancing by powers of two; returns the scaled copy.
inline Eigen::MatrixXd balance(Eigen::MatrixXd a) {
  constexpr double radix = 2.0;
  constexpr double radix_sq = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double col = a.col(i).cwiseAbs().sum() - std::abs(a(i, i));
      const double row = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
      if (col == 0 || row == 0) continue;
      double g = row / radix;
      double f = 1.0;
      const double s = col + row;
      double c = col;
      while (c < g) {
        f *= radix;
        c *= radix_sq;
      }
      g = row * radix;
      while (c > g) {
        f /= radix;
        c /= radix_sq;
      }
      if ((c + row) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

}  // namespace detail

struct JLSpectrum {
  std::vector<std::complex<double>> eigenvalues;
  double max_re = 0;
  double tol_unstable = 0;
  int unstable_count = 0;         // Re > tol_unstable
  int real_unstable_count = 0;    // real and > tol_unstable
  double largest_real = 0;        // largest real eigenvalue (0 if none positive)
  double symmetry_defect = 0;     // closure under lambda -> -lambda, conj(lambda)
};

struct JLOptions {
  double rel_tol = 1e-5;  // tol_unstable = rel_tol * low_mode_scale
  bool balance = true;
  bool check_symmetry = true;
};

inline JLSpectrum jl_spectrum_of(const DiscretizedOperator& jl, const JLOptions& opt = {}) {
  const Eigen::MatrixXd a = opt.balance ? detail::balance(jl.matrix) : jl.matrix;
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("nonsymmetric eigensolve failed");
  JLSpectrum out;
  out.tol_unstable = opt.rel_tol * jl.low_mode_scale;
  const auto& ev = es.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  out.max_re = -std::numeric_limits<double>::infinity();
  const double real_tol = 1e-9 * jl.low_mode_scale;
  for (const auto& l : out.eigenvalues) {
    out.max_re = std::max(out.max_re, l.real());
    if (l.real() > out.tol_unstable) {
      ++out.unstable_count;
      if (std::abs(l.imag()) <= real_tol) {
        ++out.real_unstable_count;
        out.largest_real = std::max(out.largest_real, l.real());
      }
    }
  }
  if (opt.check_symmetry) {
    double worst = 0;
    for (const auto& l : out.eigenvalues) {
      double best_neg = std::numeric_limits<double>::infinity();
      double best_conj = best_neg;
      for (const auto& m : out.eigenvalues) {
        best_neg = std::min(best_neg, std::abs(m + l));
        best_conj = std::min(best_conj, std::abs(m - std::conj(l)));
      }
      worst = std::max(worst, std::max(best_neg, best_conj) / std::max(1.0, std::abs(l)));
    }
    out.symmetry_defect = worst;
  }
  return out;
}

inline JLSpectrum jl_spectrum(const OperatorSet& s, const JLOptions& opt = {}) {
  return jl_spectrum_of(hamiltonian(s), opt);
}

inline JLSpectrum jl_spectrum(const WaveProfile& w, int n, const JLOptions& opt = {}) {
  return jl_spectrum(build_operators(w, n), opt);
}

/// <L U, U> and the decomposed right side
/// <L+ u1, u1> + int (phi^2 u1 / 2 + phi (u2/phi)')^2 for U = (u1, u2).
struct QuadraticFormCheck {
  double lhs;
  double rhs;
};

inline QuadraticFormCheck quadratic_form_check(const OperatorSet& s, const Eigen::VectorXd& u1,
                                               const Eigen::VectorXd& u2) {
  const int n = s.n();
  Eigen::VectorXd u(2 * n);
  u << u1, u2;
  const double lhs = s.grid.inner(s.L.matrix * u, u);
  const Eigen::VectorXd ratio = u2.cwiseQuotient(s.phi);
  const Eigen::VectorXd dratio = s.grid.first_derivative() * ratio;
  const Eigen::VectorXd sq =
      0.5 * s.phisq.cwiseProduct(u1) + s.phi.cwiseProduct(dratio);
  const double rhs = s.grid.inner(s.Lplus.matrix * u1, u1) + s.grid.inner(sq, sq);
  return {lhs, rhs};
}

/// The c = 0 problem: J diag(L+, L-) with no coupling blocks.
struct QuinticProblem {
  FourierGrid grid;
  WaveParams params;
  Eigen::VectorXd phi, dphi;
  DiscretizedOperator Lplus, Lminus;

  int n() const { return grid.size(); }

  DiscretizedOperator hamiltonian() const {
    const int m = n();
    DiscretizedOperator op;
    op.matrix = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    op.matrix.topRightCorner(m, m) = Lminus.matrix;
    op.matrix.bottomLeftCorner(m, m) = -Lplus.matrix;
    op.label = OperatorLabel::JL;
    op.low_mode_scale = std::max(Lplus.low_mode_scale, Lminus.low_mode_scale);
    return op;
  }
};

inline QuinticProblem quintic_operators(const WaveProfile& w, int n) {
  const double c = w.scalars().c;
  if (std::abs(c) > 1e-8) {
    std::ostringstream os;
    os << "quintic problem needs c = 0, got c = " << c;
    throw std::invalid_argument(os.str());
  }
  const FourierGrid grid(n, w.half_period());
  const double shift = w.params().mu / 16.0;
  const Eigen::VectorXd phisq = grid.sample([&](double x) { return w.phisq(x); });
  const Eigen::ArrayXd q = phisq.array();
  const Eigen::MatrixXd d2 = grid.second_derivative();
  const double k0 = grid.base_wavenumber();
  QuinticProblem out{grid,
                     w.params(),
                     phisq.cwiseSqrt(),
                     grid.sample([&](double x) { return w.dphi(x); }),
                     detail::schrodinger(d2, (shift - 15.0 / 16.0 * q * q).matrix(), k0,
                                         OperatorLabel::Lplus),
                     detail::schrodinger(d2, (shift - 3.0 / 16.0 * q * q).matrix(), k0,
                                         OperatorLabel::Lminus)};
  return out;
}

/// D = diag(<L+^{-1} phi, phi>, <L-^{-1} phi', phi'>) for the quintic problem.
inline DMatrix d_matrix_quintic(const QuinticProblem& s) {
  const Eigen::VectorXd f = solve_on_complement(s.Lplus, s.phi, s.dphi);
  const Eigen::VectorXd h = solve_on_complement(s.Lminus, s.dphi, s.phi);
  return {s.grid.inner(f, s.phi), 0.0, s.grid.inner(h, s.dphi), 0.0};
}

inline JLSpectrum jl_spectrum(const QuinticProblem& s, const JLOptions& opt = {}) {
  return jl_spectrum_of(s.hamiltonian(), opt);
}

}  // namespace wavestab

#endif  // WAVESTAB_HILLSPEC_HPP
