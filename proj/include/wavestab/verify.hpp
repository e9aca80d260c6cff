// Self-verification over random admissible points: closed forms against
// quadrature and collocation, spectral counts, and index-count consistency.

#ifndef WAVESTAB_VERIFY_HPP
#define WAVESTAB_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "wavestab/classify.hpp"
#include "wavestab/closedform.hpp"
#include "wavestab/elliptic.hpp"
#include "wavestab/hillspec.hpp"
#include "wavestab/scan.hpp"
#include "wavestab/waves.hpp"

namespace wavestab {

struct PropertyResult {
  std::string name;
  bool passed = true;
  double max_deviation = 0;
  double tolerance = 0;
  int checked = 0;
  std::string detail;  // first failure, if any
};

struct VerifyConfig {
  int n_points = 50;
  std::uint64_t seed = 42;
  int spectrum_points = 5;  // points that also get the J L eigensolve
  unsigned jobs = 0;
};

/// Max-norm residual of the profile equation with phi'' from spectral
/// differentiation, relative to ||phi||_inf^3.
inline double profile_residual(const WaveProfile& w, int n = 512) {
  const FourierGrid grid(n, w.half_period());
  const Eigen::VectorXd phi = grid.sample([&](double x) { return w.phi(x); });
  const Eigen::VectorXd d2phi = grid.second_derivative() * phi;
  const double shift = w.params().mu / 16.0, c = w.scalars().c;
  const Eigen::ArrayXd p = phi.array();
  const Eigen::ArrayXd res =
      -d2phi.array() + shift * p + 0.5 * c * p.cube() - 3.0 / 16.0 * p.pow(5);
  return res.abs().maxCoeff() / std::pow(phi.cwiseAbs().maxCoeff(), 3);
}

/// Largest relative Viete / reparametrization defect of the roots.
inline double roots_defect(const WaveParams& p) {
  const WaveProfile w(p);
  const auto& r = w.roots();
  const auto& s = w.scalars();
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  const double k2 = -r.phi1 * (r.phi3 - r.phi2) / (r.phi3 * (r.phi2 - r.phi1));
  const double g = 2.0 / std::sqrt(r.phi3 * (r.phi2 - r.phi1));
  return std::max({rel(r.phi1 + r.phi2 + r.phi3, 4 * s.c),
                   rel(r.phi1 * r.phi2 + r.phi1 * r.phi3 + r.phi2 * r.phi3,
                       -16 * (s.omega - s.c * s.c / 4)),
                   rel(r.phi1 * r.phi2 * r.phi3, s.a), rel(std::sqrt(k2), p.kappa), rel(g, p.g)});
}

/// Trapezoid rule for a periodic integrand on [-T, T).
template <class F>
double periodic_trapezoid(F&& f, double T, int n = 4096) {
  const double h = 2 * T / n;
  double s = 0;
  for (int j = 0; j < n; ++j) s += f(-T + h * j);
  return s * h;
}

namespace detail {

struct PointChecks {
  WaveParams p;
  double roots = 0, residual = 0, endpoints = 0, mass_q = 0, inv_q = 0;
  double pairing_gap = 0, d11_gap = 0, kernel_margin = 0, denom = 0;
  bool counts_ok = true;
  std::string counts;
  bool spectrum_checked = false, spectrum_ok = true;
  double spectrum_gap = 0;
  std::string error;
};

inline PointChecks check_point(const WaveParams& p, bool with_spectrum) {
  PointChecks out;
  out.p = p;
  try {
    const WaveProfile w(p);
    const auto& r = w.roots();
    const double T = w.half_period();
    out.roots = roots_defect(p);
    out.residual = profile_residual(w);
    out.endpoints = std::max(std::abs(w.phisq(0) - r.phi3), std::abs(w.phisq(T) - r.phi2)) /
                    std::max(1.0, r.phi3);

    const auto cf = closed_form_report(p);
    const double mq = periodic_trapezoid([&](double x) { return w.phisq(x); }, T);
    const double iq = periodic_trapezoid([&](double x) { return 1.0 / w.phisq(x); }, T);
    out.mass_q = std::abs(cf.mass - mq) / mq;
    out.inv_q = std::abs(cf.inv_sq - iq) / iq;
    out.kernel_margin = cf.kernel_margin;
    out.denom = cf.denom;

    const OperatorSet fine = build_operators(w, 512);
    const double pn = pairing_numeric(fine);
    out.pairing_gap = std::abs(cf.pairing - pn) / std::max(std::abs(pn), 0.01);

    const OperatorSet ops = build_operators(w, 256);
    const auto sp = sym_spectrum(ops.Lplus), sm = sym_spectrum(ops.Lminus),
               sl = sym_spectrum(ops.L);
    out.counts_ok = sp.morse_index == 1 && sp.kernel_dim == 1 && sm.morse_index == 0 &&
                    sm.kernel_dim == 1 && sl.morse_index == 1 && sl.kernel_dim == 2;
    out.counts = "L+ (" + std::to_string(sp.morse_index) + "," + std::to_string(sp.kernel_dim) +
                 ") L- (" + std::to_string(sm.morse_index) + "," +
                 std::to_string(sm.kernel_dim) + ") L (" + std::to_string(sl.morse_index) + "," +
                 std::to_string(sl.kernel_dim) + ")";
    const DMatrix d = d_matrix_numeric(ops, false);
    out.d11_gap = std::abs(d.d11 - cf.d11) / std::max(std::abs(d.d11), 0.01);

    if (with_spectrum) {
      out.spectrum_checked = true;
      const auto js = jl_spectrum(ops);
      const int k_ham = sl.morse_index - d.morse();
      // All unstable eigenvalues must be accounted for by the index count,
      // and k_ham = 0 must mean no eigenvalue off the imaginary axis.
      out.spectrum_ok = js.unstable_count <= k_ham && (k_ham != 0 || js.max_re <= js.tol_unstable) &&
                        (k_ham != 1 || js.real_unstable_count == 1);
      out.spectrum_gap = js.max_re / js.tol_unstable;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

inline void update(PropertyResult& pr, double dev, bool ok, const WaveParams& p,
                   const std::string& what = {}) {
  ++pr.checked;
  pr.max_deviation = std::max(pr.max_deviation, dev);
  if (!ok && pr.passed) {
    pr.passed = false;
    pr.detail = "at (g=" + format_real(p.g) + ", kappa=" + format_real(p.kappa) +
                ", mu=" + format_real(p.mu) + ")" + (what.empty() ? "" : ": " + what);
  }
}

}  // namespace detail

inline std::vector<PropertyResult> run_verification(const VerifyConfig& cfg) {
  std::vector<PropertyResult> out;

  {
    PropertyResult pr{"special_functions", true, 0, 1e-12, 0, {}};
    PortableRng rng(cfg.seed);
    for (int i = 0; i < 100; ++i) {
      const double k = rng.uniform(0.01, 0.99);
      const EllipticModulus m(k), mc(std::sqrt(m.complementary_parameter()));
      const double lhs = complete_E(m) * complete_K(mc) + complete_E(mc) * complete_K(m) -
                         complete_K(m) * complete_K(mc);
      const double dev = std::abs(lhs - std::numbers::pi / 2);
      detail::update(pr, dev, dev <= 1e-12, WaveParams{0, k, 0}, "Legendre relation");
    }
    const double dk0 = std::abs(complete_K(EllipticModulus(0)) - std::numbers::pi / 2);
    detail::update(pr, dk0, dk0 <= 1e-13, WaveParams{}, "K(0)");
    for (double u : {0.3, 1.0, 2.5}) {
      const double d = std::abs(jacobi_sn(u, EllipticModulus(0)) - std::sin(u));
      detail::update(pr, d, d <= 1e-13, WaveParams{}, "sn(u, 0)");
    }
    out.push_back(pr);
  }

  PortableRng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::pair<WaveParams, bool>> pts;
  for (int i = 0; i < cfg.n_points; ++i)
    pts.emplace_back(sample_admissible(rng), i < cfg.spectrum_points);
  const auto checks = parallel_map(
      pts, [](const auto& pt) { return detail::check_point(pt.first, pt.second); }, cfg.jobs);

  PropertyResult errors{"evaluation_errors", true, 0, 0, 0, {}};
  PropertyResult roots{"roots_viete", true, 0, 1e-10, 0, {}};
  PropertyResult resid{"profile_residual", true, 0, 1e-7, 0, {}};
  PropertyResult ends{"profile_endpoints", true, 0, 1e-10, 0, {}};
  PropertyResult massq{"mass_vs_quadrature", true, 0, 1e-8, 0, {}};
  PropertyResult invq{"inv_sq_vs_quadrature", true, 0, 1e-8, 0, {}};
  PropertyResult pair{"pairing_vs_collocation", true, 0, 1e-4, 0, {}};
  PropertyResult d11p{"d11_vs_collocation", true, 0, 1e-3, 0, {}};
  PropertyResult counts{"spectral_counts", true, 0, 0, 0, {}};
  constexpr double lowest = -std::numeric_limits<double>::infinity();
  PropertyResult km{"kernel_margin_positive", true, lowest, 0, 0, {}};
  PropertyResult den{"denominator_nonzero", true, lowest, 0, 0, {}};
  PropertyResult spec{"index_count_vs_spectrum", true, 0, 1, 0, {}};

  for (const auto& c : checks) {
    const bool bad = !c.error.empty();
    detail::update(errors, bad ? 1 : 0, !bad, c.p, c.error);
    if (bad) continue;
    detail::update(roots, c.roots, c.roots <= roots.tolerance, c.p);
    detail::update(resid, c.residual, c.residual <= resid.tolerance, c.p);
    detail::update(ends, c.endpoints, c.endpoints <= ends.tolerance, c.p);
    detail::update(massq, c.mass_q, c.mass_q <= massq.tolerance, c.p);
    detail::update(invq, c.inv_q, c.inv_q <= invq.tolerance, c.p);
    detail::update(pair, c.pairing_gap, c.pairing_gap <= pair.tolerance, c.p);
    detail::update(d11p, c.d11_gap, c.d11_gap <= d11p.tolerance, c.p);
    detail::update(counts, c.counts_ok ? 0 : 1, c.counts_ok, c.p, c.counts);
    detail::update(km, -c.kernel_margin, c.kernel_margin > 0, c.p);
    detail::update(den, -std::abs(c.denom), c.denom != 0, c.p);
    if (c.spectrum_checked)
      detail::update(spec, c.spectrum_gap, c.spectrum_ok, c.p, "max Re / tol_unstable");
  }
  // Report the smallest observed margin rather than its negation.
  km.max_deviation = -km.max_deviation;
  den.max_deviation = -den.max_deviation;
  for (auto* pr : {&errors, &roots, &resid, &ends, &massq, &invq, &pair, &d11p, &counts, &km, &den,
                   &spec})
    out.push_back(*pr);
  return out;
}

}  // namespace wavestab

#endif  // WAVESTAB_VERIFY_HPP
