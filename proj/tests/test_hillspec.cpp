#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "wavestab/closedform.hpp"
#include "wavestab/hillspec.hpp"
#include "wavestab/scan.hpp"

using namespace wavestab;

namespace {

constexpr double pi = std::numbers::pi;
const WaveParams base{1, 0.5, 1};

const OperatorSet& base_ops() {
  static const OperatorSet s = build_operators(WaveProfile(base), 256);
  return s;
}

/// Random trigonometric polynomial of low degree, periodic on [-T, T).
Eigen::VectorXd random_smooth(const FourierGrid& grid, std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  const double k0 = grid.base_wavenumber();
  double a[6], b[6];
  for (int m = 0; m < 6; ++m) a[m] = n01(gen) / (1 + m), b[m] = n01(gen) / (1 + m);
  return grid.sample([&](double x) {
    double s = 0;
    for (int m = 0; m < 6; ++m) s += a[m] * std::cos(m * k0 * x) + b[m] * std::sin(m * k0 * x);
    return s;
  });
}

}  // namespace

TEST(FourierGrid, RejectsBadSizes) {
  EXPECT_THROW(FourierGrid(63, 1.0), std::invalid_argument);
  EXPECT_THROW(FourierGrid(65, 1.0), std::invalid_argument);
  EXPECT_THROW(FourierGrid(32, 1.0), std::invalid_argument);
  EXPECT_THROW(FourierGrid(64, 0.0), std::invalid_argument);
}

TEST(FourierGrid, DifferentiatesSine) {
  for (double T : {1.0, 2.7}) {
    const FourierGrid grid(64, T);
    const Eigen::VectorXd s = grid.sample([&](double x) { return std::sin(pi * x / T); });
    const Eigen::VectorXd c = grid.sample([&](double x) { return pi / T * std::cos(pi * x / T); });
    EXPECT_LE((grid.first_derivative() * s - c).cwiseAbs().maxCoeff(), 1e-10);
    const Eigen::VectorXd d2 = grid.second_derivative() * s;
    EXPECT_LE((d2 + (pi / T) * (pi / T) * s).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(FourierGrid, MatrixSymmetries) {
  const FourierGrid grid(128, 1.3);
  const Eigen::MatrixXd d1 = grid.first_derivative(), d2 = grid.second_derivative();
  EXPECT_LE((d1 + d1.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((d2 - d2.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildOperators, ConstantCoefficientSpectrum) {
  const int n = 128;
  const FourierGrid grid(n, pi);
  const auto op = detail::schrodinger(grid.second_derivative(), Eigen::VectorXd::Ones(n),
                                      grid.base_wavenumber(), OperatorLabel::L2);
  const auto spec = sym_spectrum(op, {.rel_tol = 1e-6, .tol_ker = 1e-3});
  EXPECT_EQ(spec.morse_index, 0);
  EXPECT_EQ(spec.kernel_dim, 0);
  EXPECT_NEAR(spec.eigenvalues[0], 1.0, 1e-10);
  for (int m = 1; m <= n / 4; ++m) {
    EXPECT_NEAR(spec.eigenvalues[2 * m - 1], 1.0 + m * m, 1e-10 * m * m) << m;
    EXPECT_NEAR(spec.eigenvalues[2 * m], 1.0 + m * m, 1e-10 * m * m) << m;
  }
}

TEST(BuildOperators, ExactKernelVectors) {
  const auto& s = base_ops();
  EXPECT_LE((s.L2.matrix * s.phi).cwiseAbs().maxCoeff(), 1e-7 * s.phi.cwiseAbs().maxCoeff());
  EXPECT_LE((s.Lminus.matrix * s.phi).cwiseAbs().maxCoeff(), 1e-7 * s.phi.cwiseAbs().maxCoeff());
  EXPECT_LE((s.Lplus.matrix * s.dphi).cwiseAbs().maxCoeff(), 1e-6 * s.dphi.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd k = s.kernel_basis();
  EXPECT_LE((s.L.matrix * k).cwiseAbs().maxCoeff(), 1e-6 * k.cwiseAbs().maxCoeff());
}

TEST(BuildOperators, Symmetry) {
  const auto& s = base_ops();
  for (const auto* op : {&s.Lplus, &s.Lminus, &s.L1, &s.L2, &s.L}) {
    EXPECT_TRUE(op->symmetric);
    EXPECT_LE(op->max_asymmetry(), 1e-12) << to_string(op->label);
  }
  EXPECT_LE((s.Mstar.matrix - s.M.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_FALSE(s.M.symmetric);
}

TEST(BuildOperators, AdjointBlockActsAsDerivedForm) {
  // M* u = -phi^2 u'/2 - 3/2 phi phi' u on smooth u.
  const auto& s = base_ops();
  std::mt19937_64 gen(3);
  const Eigen::VectorXd u = random_smooth(s.grid, gen);
  const Eigen::VectorXd du = s.grid.first_derivative() * u;
  const Eigen::VectorXd expect =
      -0.5 * s.phisq.cwiseProduct(du) - 1.5 * s.phi.cwiseProduct(s.dphi).cwiseProduct(u);
  EXPECT_LE((s.Mstar.matrix * u - expect).cwiseAbs().maxCoeff(), 1e-9 * u.cwiseAbs().maxCoeff());
}

TEST(SymSpectrum, CountsAtReferencePoint) {
  const auto& s = base_ops();
  const auto p = sym_spectrum(s.Lplus), m = sym_spectrum(s.Lminus), l = sym_spectrum(s.L);
  EXPECT_EQ(p.morse_index, 1);
  EXPECT_EQ(p.kernel_dim, 1);
  EXPECT_EQ(m.morse_index, 0);
  EXPECT_EQ(m.kernel_dim, 1);
  EXPECT_EQ(l.morse_index, 1);
  EXPECT_EQ(l.kernel_dim, 2);
  for (const auto& sp : {p, m, l}) {
    EXPECT_LE(sp.morse_index + sp.kernel_dim, sp.eigenvalues.size());
    EXPECT_GT(sp.gap, 0);
  }
}

TEST(SymSpectrum, CountsOnRandomPoints) {
  PortableRng rng(31);
  for (int i = 0; i < 8; ++i) {
    const auto s = build_operators(WaveProfile(sample_admissible(rng)), 256);
    EXPECT_EQ(sym_spectrum(s.Lplus).morse_index, 1);
    EXPECT_EQ(sym_spectrum(s.Lminus).morse_index, 0);
    const auto l = sym_spectrum(s.L);
    EXPECT_EQ(l.morse_index, 1);
    EXPECT_EQ(l.kernel_dim, 2);
  }
}

TEST(SymSpectrum, KernelAlignsWithKnownVectors) {
  const auto& s = base_ops();
  const auto l = sym_spectrum(s.L, {.want_kernel_vectors = true});
  ASSERT_EQ(l.kernel_vectors.cols(), 2);
  EXPECT_LE(subspace_angle(l.kernel_vectors, s.kernel_basis()), 1e-5);
}

TEST(SymSpectrum, SpectralConvergence) {
  const WaveProfile w(base);
  const auto a = sym_spectrum(build_operators(w, 256).Lplus);
  const auto b = sym_spectrum(build_operators(w, 512).Lplus);
  EXPECT_NEAR(a.eigenvalues[0], b.eigenvalues[0], 1e-8);
  for (int i = 2; i < 20; ++i)
    EXPECT_LE(std::abs(a.eigenvalues[i] - b.eigenvalues[i]), 1e-7 * std::abs(b.eigenvalues[i])) << i;
  const auto la = sym_spectrum(build_operators(w, 256).L);
  const auto lb = sym_spectrum(build_operators(w, 512).L);
  EXPECT_EQ(la.morse_index, lb.morse_index);
  EXPECT_EQ(la.kernel_dim, lb.kernel_dim);
}

TEST(SymSpectrum, AmbiguousKernelIsAnError) {
  const auto& s = base_ops();
  const auto probe = sym_spectrum(s.Lplus);
  // A tolerance that puts the negative eigenvalue inside the factor-2 band.
  const double tol = std::abs(probe.eigenvalues[0]) * 0.8;
  EXPECT_THROW(sym_spectrum(s.Lplus, {.tol_ker = tol}), AmbiguousKernel);
  EXPECT_THROW(sym_spectrum(s.M), std::invalid_argument);
}

TEST(Subspace, AngleBetweenSpans) {
  Eigen::MatrixXd a(3, 1), b(3, 1);
  a << 1, 0, 0;
  b << 1, 1, 0;
  EXPECT_NEAR(subspace_angle(a, b), pi / 4, 1e-12);
  EXPECT_NEAR(subspace_angle(b, 2 * b), 0.0, 1e-12);
}

TEST(SolveOnComplement, PairingAndResidual) {
  const auto& s = base_ops();
  SolveDiagnostics diag;
  const Eigen::VectorXd f = solve_on_complement(s.Lplus, s.phi, s.dphi, &diag);
  EXPECT_LE(diag.residual, 1e-8);
  EXPECT_LE(std::abs(s.grid.inner(f, s.dphi)), 1e-10 * f.norm());
  EXPECT_LE(std::abs(s.grid.inner(f, s.phi) / pairing_Lplus_inv(base) - 1), 1e-4);
}

TEST(SolveOnComplement, KernelRightHandSideIsFredholmViolation) {
  const auto& s = base_ops();
  EXPECT_THROW(solve_on_complement(s.Lplus, s.dphi, s.dphi), FredholmViolation);
  EXPECT_THROW(solve_on_complement(s.L, s.kernel_basis().col(1), s.kernel_basis()),
               FredholmViolation);
  try {
    solve_on_complement(s.Lminus, s.phi, s.phi);
    FAIL();
  } catch (const FredholmViolation& e) {
    EXPECT_NE(std::string(e.what()).find("Fredholm"), std::string::npos);
  }
}

TEST(SolveOnComplement, ProjectsTinyKernelComponent) {
  const auto& s = base_ops();
  const Eigen::VectorXd rhs = s.phi + 1e-10 * s.phi.norm() * s.dphi.normalized();
  EXPECT_NO_THROW(solve_on_complement(s.Lplus, rhs, s.dphi));
}

TEST(DMatrix, SymmetricAndMatchesClosedForm) {
  const auto& s = base_ops();
  const DMatrix d = d_matrix_numeric(s);
  EXPECT_LE(d.asymmetry, 1e-9);
  EXPECT_LE(std::abs(d.d11 / d11(base) - 1), 1e-3);
  EXPECT_NEAR(d.d11, 2.79618, 1e-4);
  EXPECT_NEAR(d.d12, -2.04361, 1e-4);
  EXPECT_NEAR(d.d22, -1.54609, 1e-4);
  EXPECT_LT(d.det(), 0);
  EXPECT_EQ(d.morse(), 1);
}

TEST(DMatrix, NegativePairingGivesOneNegativeDirection) {
  // A point on the mu = 1 slice where the pairing is negative.
  const WaveParams p{2.4, 0.4, 1};
  ASSERT_LT(pairing_Lplus_inv(p), 0);
  const DMatrix d = d_matrix_numeric(WaveProfile(p), 256);
  EXPECT_LT(d.d11, 0);
  EXPECT_LT(d.det(), 0);
  EXPECT_EQ(d.morse(), 1);
}

TEST(QuadraticForm, IdentityOnRandomSmoothVectors) {
  const auto& s = base_ops();
  std::mt19937_64 gen(5);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd u1 = random_smooth(s.grid, gen);
    const Eigen::VectorXd u2 = s.phi.cwiseProduct(random_smooth(s.grid, gen));
    const auto q = quadratic_form_check(s, u1, u2);
    EXPECT_LE(std::abs(q.lhs - q.rhs), 1e-6 * std::max(std::abs(q.lhs), 1.0)) << i;
  }
}

TEST(JLSpectrum, HamiltonianSymmetryAndStability) {
  const auto& s = base_ops();
  const auto js = jl_spectrum(s);
  EXPECT_EQ(js.eigenvalues.size(), 512u);
  EXPECT_LE(js.symmetry_defect, 1e-6);
  EXPECT_LE(js.max_re, js.tol_unstable);
  EXPECT_EQ(js.unstable_count, 0);
}

TEST(JLSpectrum, SymplecticProductMatchesBlocks) {
  const auto& s = base_ops();
  const Eigen::MatrixXd jl = symplectic_J(s.n()) * s.L.matrix;
  EXPECT_LE((jl - hamiltonian(s).matrix).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(JLSpectrum, BalancingPreservesEigenvalues) {
  const auto q = quintic_operators(WaveProfile(quintic_params(1, 0.7)), 64);
  const auto a = jl_spectrum(q, {.balance = true});
  const auto b = jl_spectrum(q, {.balance = false});
  EXPECT_NEAR(a.max_re, b.max_re, 1e-8 * std::max(1.0, std::abs(b.max_re)));
}

TEST(Quintic, RejectsNonzeroSpeed) {
  EXPECT_THROW(quintic_operators(WaveProfile(base), 128), std::invalid_argument);
  EXPECT_NO_THROW(quintic_operators(WaveProfile(quintic_params(1, 0.3)), 128));
}

TEST(Quintic, BlockDiagonalStructure) {
  const auto q = quintic_operators(WaveProfile(quintic_params(1, 0.3)), 128);
  const Eigen::MatrixXd h = q.hamiltonian().matrix;
  EXPECT_EQ(h.topLeftCorner(128, 128).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(h.bottomRightCorner(128, 128).cwiseAbs().maxCoeff(), 0.0);
  // With c = 0 the DNLS coupling block is still nonzero.
  const auto dn = build_operators(WaveProfile(quintic_params(1, 0.3)), 128);
  EXPECT_GT(dn.M.matrix.cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Quintic, CountsAndKernels) {
  for (double k : {0.3, 0.7}) {
    const auto q = quintic_operators(WaveProfile(quintic_params(1, k)), 256);
    const auto p = sym_spectrum(q.Lplus), m = sym_spectrum(q.Lminus);
    EXPECT_EQ(p.morse_index, 1);
    EXPECT_EQ(p.kernel_dim, 1);
    EXPECT_EQ(m.morse_index, 0);
    EXPECT_EQ(m.kernel_dim, 1);
    EXPECT_LE((q.Lminus.matrix * q.phi).cwiseAbs().maxCoeff(), 1e-7 * q.phi.cwiseAbs().maxCoeff());
    EXPECT_LE((q.Lplus.matrix * q.dphi).cwiseAbs().maxCoeff(), 1e-6 * q.dphi.cwiseAbs().maxCoeff());
  }
}

TEST(Quintic, PairingSignMatchesSpectrum) {
  for (double k : {0.3, 0.7}) {
    const WaveProfile w(quintic_params(1, k));
    const auto q = quintic_operators(w, 256);
    const DMatrix d = d_matrix_quintic(q);
    EXPECT_LE(std::abs(d.d11 / pairing_Lplus_inv(w.params()) - 1), 1e-4) << k;
    EXPECT_GT(d.d22, 0);
    const auto js = jl_spectrum(q);
    if (d.d11 > 0) {
      EXPECT_GE(js.real_unstable_count, 1) << k;
      EXPECT_GE(js.largest_real, 10 * js.tol_unstable) << k;
    } else {
      EXPECT_EQ(js.unstable_count, 0) << k;
    }
  }
}

TEST(Quintic, PastThresholdIsUnstable) {
  const WaveProfile w(quintic_params(1, 0.7));
  EXPECT_GT(pairing_Lplus_inv(w.params()), 0);
  const auto js = jl_spectrum(quintic_operators(w, 256));
  EXPECT_GE(js.real_unstable_count, 1);
}
