// Periodic Fourier collocation on [-T, T).

#ifndef WAVESTAB_FOURIER_HPP
#define WAVESTAB_FOURIER_HPP

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace wavestab {

class FourierGrid {
 public:
  static constexpr int min_points = 64;

  FourierGrid(int n, double half_period) : n_(n), T_(half_period) {
    if (n < min_points || n % 2 != 0) {
      std::ostringstream os;
      os << "collocation size must be even and >= " << min_points << ", got " << n;
      throw std::invalid_argument(os.str());
    }
    if (!(half_period > 0) || !std::isfinite(half_period))
      throw std::invalid_argument("half period must be positive and finite");
    nodes_.resize(n);
    for (int j = 0; j < n; ++j) nodes_[j] = -T_ + spacing() * j;
  }

  int size() const noexcept { return n_; }
  double half_period() const noexcept { return T_; }
  /// Physical node spacing 2T/n; also the trapezoid weight.
  double spacing() const noexcept { return 2.0 * T_ / n_; }
  /// Lowest nonzero wavenumber pi/T.
  double base_wavenumber() const noexcept { return std::numbers::pi / T_; }
  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }

  /// Trapezoid-rule inner product on the period cell.
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return spacing() * u.dot(v);
  }

  template <class F>
  Eigen::VectorXd sample(F&& f) const {
    Eigen::VectorXd out(n_);
    for (int j = 0; j < n_; ++j) out[j] = f(nodes_[j]);
    return out;
  }

  /// Antisymmetric first-derivative matrix.
  Eigen::MatrixXd first_derivative() const {
    const double h = 2.0 * std::numbers::pi / n_;
    const double s = base_wavenumber();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const int m = i - j;
        if (m == 0) continue;
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        d(i, j) = s * 0.5 * sign / std::tan(m * h / 2.0);
      }
    return d;
  }

  /// Symmetric second-derivative matrix.
  Eigen::MatrixXd second_derivative() const {
    const double h = 2.0 * std::numbers::pi / n_;
    const double s2 = base_wavenumber() * base_wavenumber();
    const double diag = s2 * (-std::numbers::pi * std::numbers::pi / (3.0 * h * h) - 1.0 / 6.0);
    Eigen::MatrixXd d(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        const int m = i - j;
        if (m == 0) {
          d(i, j) = diag;
          continue;
        }
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        const double sn = std::sin(m * h / 2.0);
        d(i, j) = -s2 * 0.5 * sign / (sn * sn);
      }
    return d;
  }

 private:
  int n_;
  double T_;
  Eigen::VectorXd nodes_;
};

}  // namespace wavestab

#endif  // WAVESTAB_FOURIER_HPP
