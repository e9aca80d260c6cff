// Stability verdicts from the instability index count, cross-checked
// against the discretized Hamiltonian spectrum when requested.

#ifndef WAVESTAB_CLASSIFY_HPP
#define WAVESTAB_CLASSIFY_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "wavestab/closedform.hpp"
#include "wavestab/hillspec.hpp"
#include "wavestab/waves.hpp"

namespace wavestab {

enum class Model { DNLS, QuinticNLS };

/// Undetermined only arises when the numerical D matrix was not computed
/// and the closed-form pairing alone cannot settle the DNLS verdict.
enum class Verdict { Stable, Unstable, Marginal, Undetermined };

inline std::string_view to_string(Model m) { return m == Model::DNLS ? "dnls" : "quintic"; }

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Marginal: return "Marginal";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

struct ClassifyOptions {
  int n = 256;
  bool with_spectrum = false;
  bool closed_form_only = false;
  MassDerivativeOptions fd{};
};

struct StabilityReport {
  Model model = Model::DNLS;
  WaveParams params{};
  DerivedScalars scalars{};
  ClosedFormReport closed{};
  Winding winding{};

  // Numerical index-count data; absent in closed-form-only mode.
  std::optional<int> morse_L;
  std::optional<int> kernel_L;
  std::optional<DMatrix> D;
  std::optional<int> morse_D;
  std::optional<int> k_ham;
  std::optional<double> det_D;

  // Direct spectrum of J L; present only with_spectrum.
  std::optional<double> max_re_lambda;
  std::optional<double> tol_unstable;
  std::optional<int> real_unstable;

  Verdict verdict = Verdict::Undetermined;
  /// Stable although D11 > 0, i.e. stability that the pairing sign alone
  /// would not predict.
  bool stable_with_positive_d11 = false;
  /// k_ham > 0 but no real unstable eigenvalue was found: the excess may be
  /// carried by complex quadruplets or negative-Krein imaginary pairs.
  bool unstable_or_negative_krein = false;
  /// Index-count verdict and spectrum disagree (only set with_spectrum).
  bool spectrum_mismatch = false;
};

namespace detail {

inline constexpr double det_marginal_rel = 1e-8;
inline constexpr double pairing_marginal_rel = 1e-6;

inline void attach_spectrum(StabilityReport& r, const JLSpectrum& js) {
  r.max_re_lambda = js.max_re;
  r.tol_unstable = js.tol_unstable;
  r.real_unstable = js.real_unstable_count;
  if (r.verdict == Verdict::Stable && js.unstable_count > 0) r.spectrum_mismatch = true;
  if (r.verdict == Verdict::Unstable) {
    if (js.real_unstable_count == 0) {
      r.unstable_or_negative_krein = true;
      if (js.unstable_count == 0) r.spectrum_mismatch = true;
    }
  }
}

/// Verdict from the index count, given morse_L and D.
inline void index_verdict(StabilityReport& r) {
  const DMatrix& d = *r.D;
  r.det_D = d.det();
  r.morse_D = d.morse();
  r.k_ham = *r.morse_L - *r.morse_D;
  if (std::abs(*r.det_D) < det_marginal_rel * d.frobenius_sq()) {
    r.verdict = Verdict::Marginal;
  } else if (*r.k_ham == 0) {
    r.verdict = Verdict::Stable;
  } else {
    r.verdict = Verdict::Unstable;
  }
}

}  // namespace detail

inline StabilityReport classify_dnls(const WaveParams& p, const ClassifyOptions& opt = {}) {
  const WaveProfile w(p);
  StabilityReport r;
  r.model = Model::DNLS;
  r.params = p;
  r.scalars = w.scalars();
  r.closed = closed_form_report(p, opt.fd);
  r.winding = dnls_phase_winding(w);

  if (opt.closed_form_only) {
    // With n(L) = 1, a negative pairing forces n(D) = 1.
    if (std::abs(r.closed.pairing) < detail::pairing_marginal_rel * r.closed.mass)
      r.verdict = Verdict::Undetermined;
    else
      r.verdict = r.closed.pairing < 0 ? Verdict::Stable : Verdict::Undetermined;
    return r;
  }

  const OperatorSet ops = build_operators(w, opt.n);
  const auto specL = sym_spectrum(ops.L);
  r.morse_L = specL.morse_index;
  r.kernel_L = specL.kernel_dim;
  if (specL.kernel_dim != 2) {
    std::ostringstream os;
    os << "kernel of L has dimension " << specL.kernel_dim << ", expected 2";
    throw KernelMismatch(os.str());
  }
  r.D = d_matrix_numeric(ops, false);
  detail::index_verdict(r);
  if (r.verdict == Verdict::Stable && r.closed.d11 > 0) r.stable_with_positive_d11 = true;

  if (opt.with_spectrum) detail::attach_spectrum(r, jl_spectrum(ops));
  return r;
}

inline StabilityReport classify_quintic(double g, double kappa, const ClassifyOptions& opt = {}) {
  const WaveParams p = quintic_params(g, kappa);
  const WaveProfile w(p);
  StabilityReport r;
  r.model = Model::QuinticNLS;
  r.params = p;
  r.scalars = w.scalars();
  r.closed = closed_form_report(p, opt.fd);
  r.winding = dnls_phase_winding(w);

  const double pr = r.closed.pairing;
  if (std::abs(pr) < detail::pairing_marginal_rel * r.closed.mass)
    r.verdict = Verdict::Marginal;
  else
    r.verdict = pr < 0 ? Verdict::Stable : Verdict::Unstable;
  if (opt.closed_form_only) return r;

  const QuinticProblem q = quintic_operators(w, opt.n);
  const auto sp = sym_spectrum(q.Lplus);
  const auto sm = sym_spectrum(q.Lminus);
  r.morse_L = sp.morse_index + sm.morse_index;
  r.kernel_L = sp.kernel_dim + sm.kernel_dim;
  r.D = d_matrix_quintic(q);
  r.det_D = r.D->det();
  r.morse_D = r.D->morse();
  r.k_ham = *r.morse_L - *r.morse_D;
  if (opt.with_spectrum) detail::attach_spectrum(r, jl_spectrum(q));
  return r;
}

}  // namespace wavestab

#endif  // WAVESTAB_CLASSIFY_HPP
