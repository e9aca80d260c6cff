// Parameter sweeps, root finders on the wave family and portable sampling.

#ifndef WAVESTAB_SCAN_HPP
#define WAVESTAB_SCAN_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "wavestab/classify.hpp"
#include "wavestab/closedform.hpp"
#include "wavestab/report.hpp"
#include "wavestab/waves.hpp"

namespace wavestab {

struct Range {
  double lo = 0;
  double hi = 0;
  int steps = 1;

  /// steps equispaced values with both endpoints included.
  std::vector<double> values() const {
    if (steps < 1) throw std::invalid_argument("range needs at least one step");
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
      out[static_cast<std::size_t>(i)] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    return out;
  }
};

enum class OutputFormat { Csv, Json };

struct ScanConfig {
  Model model = Model::DNLS;
  double mu = 1.0;  // DNLS only
  Range g_range{0.1, 2.5, 40};
  Range kappa_range{0.02, 0.98, 40};
  /// Interpret kappa_range as fractions of the admissible kappa bound at each g.
  bool kappa_relative = false;
  int n_collocation = 256;
  bool with_spectrum = false;
  bool closed_form_only = false;
  std::string output;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  unsigned jobs = 0;  // 0: hardware concurrency
};

/// Row-major (g outer, kappa inner) grid of the configuration.
inline std::vector<WaveParams> scan_points(const ScanConfig& cfg) {
  std::vector<WaveParams> pts;
  const auto gs = cfg.g_range.values();
  const auto ks = cfg.kappa_range.values();
  pts.reserve(gs.size() * ks.size());
  for (double g : gs)
    for (double k : ks) {
      const double mu = cfg.mu;
      double kappa = k;
      // Quintic waves exist for every kappa in (0, 1), so only DNLS rescales.
      if (cfg.kappa_relative && cfg.model == Model::DNLS) {
        const double bound = kappa_sq_upper_bound(g, cfg.mu);
        if (bound > 0) kappa = k * std::min(1.0, std::sqrt(bound));
      }
      pts.push_back({g, kappa, cfg.model == Model::QuinticNLS ? quintic_mu(g, kappa) : mu});
    }
  return pts;
}

/// Applies f to every item on `jobs` workers; results keep input order.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, F&& f, unsigned jobs)
    -> std::vector<decltype(f(items.front()))> {
  using R = decltype(f(items.front()));
  std::vector<std::optional<R>> slots(items.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, items.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size() || failed.load()) return;
      try {
        slots[i].emplace(f(items[i]));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<R> out;
  out.reserve(items.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline ScanRow evaluate_point(const WaveParams& p, const ScanConfig& cfg) {
  ScanRow row;
  row.params = p;
  if (auto v = validate_params(p); !v) {
    row.status = RowStatus::Skipped;
    row.message = v.reason;
    return row;
  }
  ClassifyOptions opt;
  opt.n = cfg.n_collocation;
  opt.with_spectrum = cfg.with_spectrum;
  opt.closed_form_only = cfg.closed_form_only;
  try {
    row.report = cfg.model == Model::QuinticNLS ? classify_quintic(p.g, p.kappa, opt)
                                                : classify_dnls(p, opt);
  } catch (const std::exception& e) {
    row.status = RowStatus::Error;
    row.report.reset();
    row.message = e.what();
  }
  return row;
}

inline std::vector<ScanRow> run_scan(const ScanConfig& cfg) {
  const auto pts = scan_points(cfg);
  return parallel_map(pts, [&](const WaveParams& p) { return evaluate_point(p, cfg); }, cfg.jobs);
}

class NoRoot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scans f on `samples` points of (lo, hi), brackets the first sign change
/// and refines it with TOMS 748.  Returns nullopt if f is single-signed.
template <class F>
std::optional<double> first_sign_change(F&& f, double lo, double hi, int samples = 200,
                                        int bits = 52) {
  double x0 = lo, f0 = f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = lo + (hi - lo) * i / samples;
    const double f1 = f(x1);
    if (f0 == 0) return x0;
    if ((f0 < 0) != (f1 < 0)) {
      std::uintmax_t iters = 200;
      const auto [a, b] = boost::math::tools::toms748_solve(
          f, x0, x1, f0, f1, boost::math::tools::eps_tolerance<double>(bits), iters);
      return 0.5 * (a + b);
    }
    x0 = x1;
    f0 = f1;
  }
  return std::nullopt;
}

/// Admissible open g-interval at fixed (kappa, mu); hi may be infinite.
inline std::pair<double, double> admissible_g_interval(double kappa, double mu) {
  const double k2 = kappa * kappa;
  double lo = 0, hi = g_upper_bound(mu);
  if (mu > 0) {
    if (8 * k2 - 4 > 0) lo = std::sqrt((8 * k2 - 4) / mu);
    hi = std::min(hi, std::sqrt((8 - 4 * k2) / mu));
  } else if (mu < 0) {
    hi = 4 - 8 * k2 > 0 ? std::min(hi, std::sqrt((4 - 8 * k2) / -mu)) : 0.0;
  } else if (k2 >= 0.5) {
    hi = 0;
  }
  return {lo, hi};
}

struct QuantizeResult {
  WaveParams params;
  double winding;
  double residual;  // |W - 2 pi branch|
};

/// Finds g with c T - (3/4) mass = 2 pi branch at fixed (kappa, mu).
inline QuantizeResult quantize(double kappa, double mu, int branch, double g_cap = 50.0) {
  auto [lo, hi] = admissible_g_interval(kappa, mu);
  if (!(hi > lo)) throw NoRoot("no admissible g at the requested (kappa, mu)");
  hi = std::min(hi, g_cap);
  const double pad = 1e-9 * (hi - lo);
  const double target = 2.0 * std::numbers::pi * branch;
  auto f = [&](double g) {
    return dnls_phase_winding(WaveProfile(WaveParams{g, kappa, mu})).value - target;
  };
  const auto g = first_sign_change(f, lo + pad, hi - pad, 400, 60);
  if (!g) throw NoRoot("winding minus 2*pi*branch does not change sign on the admissible g-interval");
  const WaveParams p{*g, kappa, mu};
  require_admissible(p);
  const double w = dnls_phase_winding(WaveProfile(p)).value;
  return {p, w, std::abs(w - target)};
}

/// kappa in (kappa_lo, kappa_hi) where the closed-form pairing changes sign
/// at fixed (g, mu), or nullopt.
inline std::optional<double> pairing_zero_in_kappa(double g, double mu, double kappa_lo,
                                                   double kappa_hi, int samples = 200) {
  return first_sign_change(
      [&](double k) { return pairing_Lplus_inv(WaveParams{g, k, mu}); }, kappa_lo, kappa_hi,
      samples);
}

/// The pairing sign change along the quintic family at fixed g, or nullopt.
inline std::optional<double> quintic_threshold(double g, double kappa_lo = 0.02,
                                               double kappa_hi = 0.98, int samples = 96) {
  return first_sign_change(
      [&](double k) { return pairing_Lplus_inv(quintic_params(g, k)); }, kappa_lo, kappa_hi,
      samples);
}

/// mt19937_64 bits mapped to [0, 1) directly, so streams are identical across
/// standard libraries (the std distributions are implementation-defined).
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Rejection-samples an admissible DNLS point with boundary margin >= min_margin.
inline WaveParams sample_admissible(PortableRng& rng, double mu_lo = -2.0, double mu_hi = 2.0,
                                    double min_margin = 0.02) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const WaveParams p{rng.uniform(0.3, 3.0), rng.uniform(0.05, 0.95), rng.uniform(mu_lo, mu_hi)};
    const auto v = validate_params(p);
    if (v && v.boundary_margin >= min_margin) return p;
  }
  throw std::runtime_error("could not sample an admissible point");
}

}  // namespace wavestab

#endif  // WAVESTAB_SCAN_HPP
