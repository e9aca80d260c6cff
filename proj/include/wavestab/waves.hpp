// The non-vanishing bell-shaped wave family of the gauged DNLS profile
// equation
//
//   -phi'' + (omega - c^2/4) phi + (c/2) phi^3 - (3/16) phi^5 = 0,
//
// parametrized by (g, kappa, mu) with mu = 16 (omega - c^2/4).  The
// quintic NLS waves are the c = 0 slice of the same family.

#ifndef WAVESTAB_WAVES_HPP
#define WAVESTAB_WAVES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wavestab/elliptic.hpp"

namespace wavestab {

struct WaveParams {
  double g = 1.0;      // elliptic length scale
  double kappa = 0.5;  // elliptic modulus
  double mu = 0.0;     // 16 (omega - c^2/4)
};

class InadmissibleParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Outcome of checking a parameter point against the admissible region.
struct Admissibility {
  bool admissible = false;
  std::string reason;  // names the violated inequality when not admissible
  /// Smallest relative slack over the active constraints; 0 at the boundary.
  double boundary_margin = 0.0;

  explicit operator bool() const noexcept { return admissible; }
};

/// Upper bound on g for the given mu, or +inf when mu == 0.
inline double g_upper_bound(double mu) {
  if (mu > 0) return std::sqrt(8.0 / mu);
  if (mu < 0) return std::sqrt(-4.0 / mu);
  return std::numeric_limits<double>::infinity();
}

/// Upper bound on kappa^2 at fixed (g, mu); may be <= 0 outside the g range.
inline double kappa_sq_upper_bound(double g, double mu) {
  const double t = mu * g * g;
  const double from_a = (4.0 + t) / 8.0;
  if (mu > 0) return std::min(from_a, (8.0 - t) / 4.0);
  return from_a;
}

/// Admissible open interval for mu at fixed (g, kappa): A > 0 and B > 0.
inline std::pair<double, double> mu_interval(double g, double kappa) {
  const double g2 = g * g, k2 = kappa * kappa;
  return {(8.0 * k2 - 4.0) / g2, (8.0 - 4.0 * k2) / g2};
}

inline Admissibility validate_params(const WaveParams& p) {
  Admissibility out;
  auto reject = [&](std::string why) {
    out.admissible = false;
    out.reason = std::move(why);
    out.boundary_margin = 0.0;
    return out;
  };
  if (!std::isfinite(p.g) || !std::isfinite(p.kappa) || !std::isfinite(p.mu))
    return reject("parameters must be finite");
  if (!(p.g > 0)) return reject("g > 0 violated");
  if (!(p.kappa > 0)) return reject("kappa > 0 violated");
  if (!(p.kappa < 1)) return reject("kappa < 1 violated");

  const double gmax = g_upper_bound(p.mu);
  if (!(p.g < gmax)) {
    std::ostringstream os;
    if (p.mu > 0)
      os << "g < sqrt(8/mu) = " << gmax << " violated (g = " << p.g << ")";
    else
      os << "g < sqrt(-4/mu) = " << gmax << " violated (g = " << p.g << ")";
    return reject(os.str());
  }

  const double t = p.mu * p.g * p.g;
  const double k2 = p.kappa * p.kappa;
  const double bound_a = (4.0 + t) / 8.0;
  if (!(k2 < bound_a)) {
    std::ostringstream os;
    os << "kappa^2 < (4 + mu g^2)/8 = " << bound_a << " violated (kappa^2 = " << k2 << ")";
    return reject(os.str());
  }
  double k2max = bound_a;
  if (p.mu > 0) {
    const double bound_b = (8.0 - t) / 4.0;
    if (!(k2 < bound_b)) {
      std::ostringstream os;
      os << "kappa^2 < (8 - mu g^2)/4 = " << bound_b << " violated (kappa^2 = " << k2 << ")";
      return reject(os.str());
    }
    k2max = std::min(k2max, bound_b);
  }

  out.admissible = true;
  double margin = (k2max - k2) / k2max;
  margin = std::min(margin, p.kappa);
  if (std::isfinite(gmax)) margin = std::min(margin, (gmax - p.g) / gmax);
  out.boundary_margin = margin;
  return out;
}

inline void require_admissible(const WaveParams& p) {
  if (auto v = validate_params(p); !v) throw InadmissibleParams(v.reason);
}

struct Roots {
  double phi1;  // < 0
  double phi2;  // > 0
  double phi3;  // > phi2
  double A;     // -phi1 phi2
  double B;     // phi2 phi3
  double C;     // -phi1 phi3
};

struct RootCoefficients {
  double A, B, C;
};

inline RootCoefficients root_coefficients(const WaveParams& p) {
  const double ig2 = 1.0 / (p.g * p.g);
  const double k2 = p.kappa * p.kappa;
  return {(4.0 * ig2 - 8.0 * k2 * ig2 + p.mu) / 3.0,
          (8.0 * ig2 - 4.0 * k2 * ig2 - p.mu) / 3.0,
          (4.0 * ig2 + 4.0 * k2 * ig2 + p.mu) / 3.0};
}

inline Roots compute_roots(const WaveParams& p) {
  require_admissible(p);
  const auto [A, B, C] = root_coefficients(p);
  if (!(A > 0 && B > 0 && C > 0)) {
    std::ostringstream os;
    os << "internal error: root coefficients not positive after validation (A=" << A
       << ", B=" << B << ", C=" << C << ")";
    throw std::logic_error(os.str());
  }
  return {-std::sqrt(A * C / B), std::sqrt(A * B / C), std::sqrt(B * C / A), A, B, C};
}

struct DerivedScalars {
  double c;      // wave speed
  double omega;  // temporal frequency
  double a;      // integration constant phi1 phi2 phi3
  double T;      // half period
};

/// c = (AB + BC - AC) / (4 sqrt(ABC)).
inline double wave_speed(double A, double B, double C) {
  return (A * B + B * C - A * C) / (4.0 * std::sqrt(A * B * C));
}

inline double half_period(double g, double kappa) {
  return 2.0 * g * complete_K(EllipticModulus(kappa));
}

inline DerivedScalars compute_scalars(const WaveParams& p, const Roots& r) {
  const double c = wave_speed(r.A, r.B, r.C);
  return {c, p.mu / 16.0 + c * c / 4.0, r.phi1 * r.phi2 * r.phi3, half_period(p.g, p.kappa)};
}

/// mu on the quintic (c = 0) subfamily.
inline double quintic_mu(double g, double kappa) {
  const double k2 = kappa * kappa;
  return 4.0 * std::sqrt(1.0 - k2 + k2 * k2) / (g * g);
}

inline WaveParams quintic_params(double g, double kappa) {
  return {g, kappa, quintic_mu(g, kappa)};
}

/// Closed-form profile of one admissible family member.  Immutable; all
/// evaluation is pure.
class WaveProfile {
 public:
  explicit WaveProfile(const WaveParams& p)
      : params_(p), roots_(compute_roots(p)), scalars_(compute_scalars(p, roots_)),
        modulus_(p.kappa) {
    const auto& r = roots_;
    num0_ = r.phi3 * (r.phi2 - r.phi1);
    num1_ = r.phi1 * (r.phi3 - r.phi2);
    den0_ = r.phi2 - r.phi1;
    den1_ = r.phi3 - r.phi2;
  }

  const WaveParams& params() const noexcept { return params_; }
  const Roots& roots() const noexcept { return roots_; }
  const DerivedScalars& scalars() const noexcept { return scalars_; }
  double half_period() const noexcept { return scalars_.T; }
  EllipticModulus modulus() const noexcept { return modulus_; }

  /// phi^2(xi); 2T-periodic, phi^2(0) = phi3, phi^2(+-T) = phi2.
  double phisq(double xi) const {
    const double s = jacobi_sn(xi / (2.0 * params_.g), modulus_);
    const double s2 = s * s;
    return (num0_ + num1_ * s2) / (den0_ + den1_ * s2);
  }

  double phi(double xi) const { return std::sqrt(phisq(xi)); }

  /// d/dxi of phi^2 through the sn cn dn chain rule.
  double dphisq(double xi) const {
    const auto j = jacobi_sncndn(xi / (2.0 * params_.g), modulus_);
    const double s2 = j.sn * j.sn;
    const double den = den0_ + den1_ * s2;
    const double dfrac = (num1_ * den0_ - num0_ * den1_) / (den * den);
    return dfrac * j.sn * j.cn * j.dn / params_.g;
  }

  double dphi(double xi) const { return dphisq(xi) / (2.0 * phi(xi)); }

  /// The cubic R(z) = z^3 - 4 c z^2 - mu z whose level set R = a gives the roots.
  double cubic_R(double z) const {
    return z * z * z - 4.0 * scalars_.c * z * z - params_.mu * z;
  }

 private:
  WaveParams params_;
  Roots roots_;
  DerivedScalars scalars_;
  EllipticModulus modulus_;
  double num0_, num1_, den0_, den1_;
};

}  // namespace wavestab

#endif  // WAVESTAB_WAVES_HPP
