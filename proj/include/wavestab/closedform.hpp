// Closed-form stability quantities of the wave family: L^2 mass, the
// integral of 1/phi^2, the resolvent pairing <L+^{-1} phi, phi>, the
// solvability denominator and the D11 entry of the index-count matrix.

#ifndef WAVESTAB_CLOSEDFORM_HPP
#define WAVESTAB_CLOSEDFORM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wavestab/elliptic.hpp"
#include "wavestab/waves.hpp"

namespace wavestab {

/// The solvability denominator is (numerically) zero, so the pairing
/// formula cannot be evaluated.
class DegenerateSolvability : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 4 int phi^-2 + <L+^{-1} phi, phi> vanishes; the kernel of L would then
/// be larger than the two translational/phase modes.
class DegenerateKernel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// int_{-T}^{T} phi^2.
inline double mass(const WaveProfile& w) {
  const auto& r = w.roots();
  const auto k = w.modulus();
  const double n = (r.phi3 - r.phi2) / (r.phi1 - r.phi2);
  return 4.0 * w.params().g * (r.phi1 * complete_K(k) + (r.phi3 - r.phi1) * complete_Pi(n, k));
}

inline double mass(const WaveParams& p) { return mass(WaveProfile(p)); }

/// int_{-T}^{T} phi^-2.
inline double inv_sq_integral(const WaveProfile& w) {
  const auto& r = w.roots();
  const auto k = w.modulus();
  const double n = r.phi1 * (r.phi3 - r.phi2) / (r.phi3 * (r.phi1 - r.phi2));
  return 4.0 * w.params().g / (r.phi1 * r.phi3) *
         (r.phi3 * complete_K(k) + (r.phi1 - r.phi3) * complete_Pi(n, k));
}

inline double inv_sq_integral(const WaveParams& p) { return inv_sq_integral(WaveProfile(p)); }

/// Partial derivatives of the wave speed at fixed g.
struct SpeedPartials {
  double c;
  double c_kappa;
  double c_mu;
};

inline SpeedPartials speed_partials(const WaveParams& p) {
  const auto [A, B, C] = root_coefficients(p);
  const double ig2 = 1.0 / (p.g * p.g);
  const double k = p.kappa;

  const double N = A * B + B * C - A * C;
  const double P = A * B * C;
  const double sP = std::sqrt(P);
  auto dc = [&](double dA, double dB, double dC) {
    const double dN = dA * B + A * dB + dB * C + B * dC - dA * C - A * dC;
    const double dP = dA * B * C + A * dB * C + A * B * dC;
    return dN / (4.0 * sP) - N * dP / (8.0 * P * sP);
  };
  const double ck = dc(-16.0 * k * ig2 / 3.0, -8.0 * k * ig2 / 3.0, 8.0 * k * ig2 / 3.0);
  const double cm = dc(1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0);
  return {N / (4.0 * sP), ck, cm};
}

/// Finite-difference settings for the mass partials.
struct MassDerivativeOptions {
  double rel_step = 1e-5;  // h = rel_step * max(1, |param|)
  bool richardson = true;  // one extrapolation step with h/2
};

namespace detail {

/// Five-point central difference, optionally Richardson-extrapolated.
template <class F>
double central_derivative(F&& f, double x, double h, bool richardson) {
  auto d5 = [&](double s) {
    return (-f(x + 2 * s) + 8 * f(x + s) - 8 * f(x - s) + f(x - 2 * s)) / (12 * s);
  };
  const double dh = d5(h);
  if (!richardson) return dh;
  const double dh2 = d5(h / 2);
  return (16.0 * dh2 - dh) / 15.0;
}

inline double step_for(double x, double slack, const MassDerivativeOptions& opt) {
  const double h = opt.rel_step * std::max(1.0, std::abs(x));
  // The widest stencil node sits at x +- 2h; keep it well inside.
  return std::min(h, slack / 4.0);
}

}  // namespace detail

struct MassPartials {
  double d_kappa;
  double d_mu;
};

/// d(mass)/d(kappa) and d(mass)/d(mu) at fixed g.
inline MassPartials mass_partials(const WaveParams& p, const MassDerivativeOptions& opt = {}) {
  require_admissible(p);
  const double kmax = std::sqrt(kappa_sq_upper_bound(p.g, p.mu));
  const double kslack = std::min({p.kappa, kmax - p.kappa, 1.0 - p.kappa});
  const auto [mlo, mhi] = mu_interval(p.g, p.kappa);
  const double mslack = std::min(p.mu - mlo, mhi - p.mu);

  const double hk = detail::step_for(p.kappa, kslack, opt);
  const double hm = detail::step_for(p.mu, mslack, opt);
  const double dk = detail::central_derivative(
      [&](double k) { return mass(WaveParams{p.g, k, p.mu}); }, p.kappa, hk, opt.richardson);
  const double dm = detail::central_derivative(
      [&](double m) { return mass(WaveParams{p.g, p.kappa, m}); }, p.mu, hm, opt.richardson);
  return {dk, dm};
}

/// c + c_kappa K/K' - 2 mu c_mu, with K' = dK/dkappa.
inline double denominator(const WaveParams& p) {
  require_admissible(p);
  const auto s = speed_partials(p);
  const EllipticModulus k(p.kappa);
  const double ratio = complete_K(k) / dK_dkappa(k);
  return s.c + s.c_kappa * ratio - 2.0 * p.mu * s.c_mu;
}

struct ClosedFormReport {
  double mass = 0;
  double inv_sq = 0;
  double pairing = 0;
  double denom = 0;
  double d11 = 0;
  double kernel_margin = 0;
  // Intermediates, kept for diagnostics.
  double c_kappa = 0;
  double c_mu = 0;
  double dmass_dkappa = 0;
  double dmass_dmu = 0;
};

namespace detail {

inline double pairing_from(const WaveParams& p, const SpeedPartials& s, const MassPartials& dm,
                           double& denom_out) {
  const EllipticModulus k(p.kappa);
  const double ratio = complete_K(k) / dK_dkappa(k);
  const double head = s.c + s.c_kappa * ratio;
  const double denom = head - 2.0 * p.mu * s.c_mu;
  denom_out = denom;
  const double scale = std::abs(s.c) + std::abs(s.c_kappa * ratio) + std::abs(2.0 * p.mu * s.c_mu);
  if (!(std::abs(denom) >= 1e-8 * scale)) {
    std::ostringstream os;
    os << "solvability denominator vanishes: |" << denom << "| < 1e-8 * " << scale
       << " at (g=" << p.g << ", kappa=" << p.kappa << ", mu=" << p.mu << ")";
    throw DegenerateSolvability(os.str());
  }
  return 8.0 * (s.c_mu * ratio * dm.d_kappa - head * dm.d_mu) / denom;
}

}  // namespace detail

/// <L+^{-1} phi, phi> from the closed-form resolvent identity.
inline double pairing_Lplus_inv(const WaveParams& p, const MassDerivativeOptions& opt = {}) {
  require_admissible(p);
  double denom = 0;
  return detail::pairing_from(p, speed_partials(p), mass_partials(p, opt), denom);
}

/// D11 = [4 I / (4 I + pairing)] pairing with I = int phi^-2.
inline double d11_from(double inv_sq, double pairing) {
  const double margin = 4.0 * inv_sq + pairing;
  const double scale = 4.0 * std::abs(inv_sq) + std::abs(pairing);
  if (!(std::abs(margin) >= 1e-8 * scale)) {
    std::ostringstream os;
    os << "kernel margin 4*int(phi^-2) + pairing = " << margin << " vanishes";
    throw DegenerateKernel(os.str());
  }
  return 4.0 * inv_sq / margin * pairing;
}

inline ClosedFormReport closed_form_report(const WaveParams& p,
                                           const MassDerivativeOptions& opt = {}) {
  const WaveProfile w(p);
  ClosedFormReport out;
  out.mass = mass(w);
  out.inv_sq = inv_sq_integral(w);
  const auto s = speed_partials(p);
  const auto dm = mass_partials(p, opt);
  out.c_kappa = s.c_kappa;
  out.c_mu = s.c_mu;
  out.dmass_dkappa = dm.d_kappa;
  out.dmass_dmu = dm.d_mu;
  out.pairing = detail::pairing_from(p, s, dm, out.denom);
  out.kernel_margin = 4.0 * out.inv_sq + out.pairing;
  out.d11 = d11_from(out.inv_sq, out.pairing);
  return out;
}

inline double d11(const WaveParams& p, const MassDerivativeOptions& opt = {}) {
  return closed_form_report(p, opt).d11;
}

/// Phase winding W = c T - (3/4) mass and its distance to 2 pi Z.
struct Winding {
  double value;
  double distance;
};

inline Winding dnls_phase_winding(const WaveProfile& w) {
  const double W = w.scalars().c * w.half_period() - 0.75 * mass(w);
  const double two_pi = 2.0 * std::numbers::pi;
  return {W, std::abs(W - two_pi * std::round(W / two_pi))};
}

}  // namespace wavestab

#endif  // WAVESTAB_CLOSEDFORM_HPP
