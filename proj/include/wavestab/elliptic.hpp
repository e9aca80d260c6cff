// Complete elliptic integrals and Jacobi elliptic functions.
//
// Integrals are evaluated through Carlson's symmetric forms using the
// duplication theorem (B. C. Carlson, "Numerical computation of real or
// complex elliptic integrals", Numer. Algorithms 10 (1995) 13-26).  The
// Jacobi functions use the descending Landen / arithmetic-geometric mean
// scheme of Abramowitz & Stegun 16.4.
//
// Everything here is parametrized by the modulus k (not the parameter
// m = k^2), matching sn(u, k).

#ifndef WAVESTAB_ELLIPTIC_HPP
#define WAVESTAB_ELLIPTIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace wavestab {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Elliptic modulus k with 0 <= k < 1.
class EllipticModulus {
 public:
  explicit EllipticModulus(double kappa) : kappa_(kappa) {
    if (!(kappa >= 0.0 && kappa < 1.0)) {
      std::ostringstream os;
      os << "elliptic modulus must satisfy 0 <= kappa < 1, got " << kappa;
      throw DomainError(os.str());
    }
  }

  double value() const noexcept { return kappa_; }
  double parameter() const noexcept { return kappa_ * kappa_; }
  /// 1 - k^2, computed without cancellation for k near 1.
  double complementary_parameter() const noexcept {
    return (1.0 - kappa_) * (1.0 + kappa_);
  }

 private:
  double kappa_;
};

namespace carlson {

/// R_C(x, y) for x >= 0, y > 0.
template <std::floating_point Real>
Real rc(Real x, Real y) {
  using std::atan;
  using std::atanh;
  using std::sqrt;
  if (x < 0 || y <= 0) throw DomainError("carlson::rc requires x >= 0, y > 0");
  if (x == y) return 1 / sqrt(x);
  if (x < y) {
    const Real d = y - x;
    return atan(sqrt(d / x)) / sqrt(d);
  }
  const Real d = x - y;
  return atanh(sqrt(d / x)) / sqrt(d);
}

/// R_F(x, y, z); at most one argument may be zero.
template <std::floating_point Real>
Real rf(Real x, Real y, Real z) {
  using std::abs;
  using std::sqrt;
  if (x < 0 || y < 0 || z < 0 || x + y == 0 || y + z == 0 || z + x == 0)
    throw DomainError("carlson::rf requires non-negative arguments, at most one zero");

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real a0 = (x + y + z) / 3;
  Real q = std::pow(3 * eps, Real(-1) / 6) *
           std::max({abs(a0 - x), abs(a0 - y), abs(a0 - z)});
  Real a = a0;
  Real fac = 1;  // 4^-m
  while (q * fac >= abs(a)) {
    const Real sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const Real lambda = sx * sy + sy * sz + sz * sx;
    a = (a + lambda) / 4;
    x = (x + lambda) / 4;
    y = (y + lambda) / 4;
    z = (z + lambda) / 4;
    fac /= 4;
  }
  const Real X = (a - x) / a;
  const Real Y = (a - y) / a;
  const Real Z = -X - Y;
  const Real e2 = X * Y - Z * Z;
  const Real e3 = X * Y * Z;
  return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / sqrt(a);
}

/// R_D(x, y, z) = R_J(x, y, z, z); x + y > 0, z > 0.
template <std::floating_point Real>
Real rd(Real x, Real y, Real z) {
  using std::abs;
  using std::sqrt;
  if (x < 0 || y < 0 || z <= 0 || x + y == 0)
    throw DomainError("carlson::rd requires x, y >= 0 (not both zero), z > 0");

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real a0 = (x + y + 3 * z) / 5;
  Real q = std::pow(eps / 4, Real(-1) / 6) *
           std::max({abs(a0 - x), abs(a0 - y), abs(a0 - z)});
  Real a = a0;
  Real fac = 1;
  Real sum = 0;
  while (q * fac >= abs(a)) {
    const Real sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const Real lambda = sx * sy + sy * sz + sz * sx;
    sum += fac / (sz * (z + lambda));
    a = (a + lambda) / 4;
    x = (x + lambda) / 4;
    y = (y + lambda) / 4;
    z = (z + lambda) / 4;
    fac /= 4;
  }
  const Real X = (a - x) / a;
  const Real Y = (a - y) / a;
  const Real Z = -(X + Y) / 3;
  const Real xy = X * Y, z2 = Z * Z;
  const Real e2 = xy - 6 * z2;
  const Real e3 = (3 * xy - 8 * z2) * Z;
  const Real e4 = 3 * (xy - z2) * z2;
  const Real e5 = xy * Z * z2;
  const Real series = 1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22 -
                      9 * e2 * e3 / 52 + 3 * e5 / 26;
  return fac * series / (a * sqrt(a)) + 3 * sum;
}

/// R_J(x, y, z, p) for p > 0 (no Cauchy principal value).
template <std::floating_point Real>
Real rj(Real x, Real y, Real z, Real p) {
  using std::abs;
  using std::sqrt;
  if (x < 0 || y < 0 || z < 0 || p <= 0 || x + y == 0 || y + z == 0 || z + x == 0)
    throw DomainError("carlson::rj requires x, y, z >= 0 (at most one zero), p > 0");

  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real a0 = (x + y + z + 2 * p) / 5;
  const Real delta = (p - x) * (p - y) * (p - z);
  Real q = std::pow(eps / 4, Real(-1) / 6) *
           std::max({abs(a0 - x), abs(a0 - y), abs(a0 - z), abs(a0 - p)});
  Real a = a0;
  Real fac = 1;  // 4^-m
  Real sum = 0;
  while (q * fac >= abs(a)) {
    const Real sx = sqrt(x), sy = sqrt(y), sz = sqrt(z), sp = sqrt(p);
    const Real lambda = sx * sy + sy * sz + sz * sx;
    const Real d = (sp + sx) * (sp + sy) * (sp + sz);
    const Real e = fac * fac * fac * delta / (d * d);
    sum += fac * rc(Real(1), 1 + e) / d;
    a = (a + lambda) / 4;
    x = (x + lambda) / 4;
    y = (y + lambda) / 4;
    z = (z + lambda) / 4;
    p = (p + lambda) / 4;
    fac /= 4;
  }
  const Real X = (a - x) / a;
  const Real Y = (a - y) / a;
  const Real Z = (a - z) / a;
  const Real P = -(X + Y + Z) / 2;
  const Real e2 = X * Y + X * Z + Y * Z - 3 * P * P;
  const Real e3 = X * Y * Z + 2 * e2 * P + 4 * P * P * P;
  const Real e4 = (2 * X * Y * Z + e2 * P + 3 * P * P * P) * P;
  const Real e5 = X * Y * Z * P * P;
  const Real series = 1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22 -
                      9 * e2 * e3 / 52 + 3 * e5 / 26;
  return fac * series / (a * sqrt(a)) + 6 * sum;
}

}  // namespace carlson

/// First kind, K(k) = R_F(0, 1 - k^2, 1).
inline double complete_K(EllipticModulus k) {
  if (k.value() == 0.0) return std::numbers::pi / 2;
  return carlson::rf(0.0, k.complementary_parameter(), 1.0);
}

/// Second kind, E(k) = R_F(0, k', 1) - (k^2/3) R_D(0, k', 1).
inline double complete_E(EllipticModulus k) {
  if (k.value() == 0.0) return std::numbers::pi / 2;
  const double mc = k.complementary_parameter();
  return carlson::rf(0.0, mc, 1.0) - k.parameter() / 3.0 * carlson::rd(0.0, mc, 1.0);
}

/// Third kind Pi(n, k) = int_0^{pi/2} dθ / ((1 - n sin^2θ) sqrt(1 - k^2 sin^2θ)),
/// for characteristic n < 1.
inline double complete_Pi(double n, EllipticModulus k) {
  if (!(n < 1.0)) {
    std::ostringstream os;
    os << "complete_Pi requires characteristic n < 1, got " << n;
    throw DomainError(os.str());
  }
  const double mc = k.complementary_parameter();
  if (k.value() == 0.0) return std::numbers::pi / (2.0 * std::sqrt(1.0 - n));
  if (n == 0.0) return complete_K(k);
  return carlson::rf(0.0, mc, 1.0) + n / 3.0 * carlson::rj(0.0, mc, 1.0, 1.0 - n);
}

/// dK/dk = (E - (1 - k^2) K) / (k (1 - k^2)); returns the limit 0 at k = 0.
///
/// This is the quantity written K'(k) in the resolvent formula for L+;
/// it is *not* the complementary integral K(sqrt(1 - k^2)).
inline double dK_dkappa(EllipticModulus k) {
  const double x = k.value();
  if (x < 1e-3) {
    // Maclaurin series of K differentiated term by term.
    const double x2 = x * x;
    return std::numbers::pi / 2 *
           x * (0.5 + x2 * (9.0 / 16 + x2 * (75.0 / 128 + x2 * 1225.0 / 2048)));
  }
  const double mc = k.complementary_parameter();
  return (complete_E(k) - mc * complete_K(k)) / (x * mc);
}

struct JacobiValues {
  double sn;
  double cn;
  double dn;
};

/// sn, cn, dn of (u, k) by descending Landen transformation.
inline JacobiValues jacobi_sncndn(double u, EllipticModulus k) {
  const double m = k.parameter();
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};

  // Period reduction keeps the phase small so accuracy is independent of |u|.
  const double period = 4.0 * complete_K(k);
  u -= period * std::round(u / period);

  constexpr int max_steps = 16;
  std::array<double, max_steps + 1> a{}, c{};
  a[0] = 1.0;
  double b = std::sqrt(k.complementary_parameter());
  c[0] = k.value();
  int n = 0;
  while (std::abs(c[n]) > 4.0 * std::numeric_limits<double>::epsilon() * a[n] &&
         n < max_steps) {
    a[n + 1] = (a[n] + b) / 2;
    c[n + 1] = (a[n] - b) / 2;
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int j = n; j > 0; --j) phi = (phi + std::asin(c[j] / a[j] * std::sin(phi))) / 2;
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn^2 = k'^2 + k^2 cn^2 has no cancellation, unlike cos(phi0)/cos(phi1 - phi0)
  // near the quarter period.
  const double dn = std::sqrt(k.complementary_parameter() + m * cn * cn);
  return {sn, cn, dn};
}

inline double jacobi_sn(double u, EllipticModulus k) { return jacobi_sncndn(u, k).sn; }

}  // namespace wavestab

#endif  // WAVESTAB_ELLIPTIC_HPP
