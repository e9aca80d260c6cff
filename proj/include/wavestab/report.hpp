// JSON and CSV rendering of stability reports and scan rows.

#ifndef WAVESTAB_REPORT_HPP
#define WAVESTAB_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavestab/classify.hpp"

namespace wavestab {

inline constexpr int schema_version = 1;

enum class RowStatus { Ok, Skipped, Error };

inline std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Skipped: return "skipped";
    case RowStatus::Error: return "error";
  }
  return "?";
}

struct ScanRow {
  WaveParams params{};
  RowStatus status = RowStatus::Ok;
  std::optional<StabilityReport> report;
  std::string message;  // rejection reason or error text
};

namespace detail {

inline nlohmann::json opt_json(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

inline nlohmann::json opt_json(const std::optional<int>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace detail

inline nlohmann::json to_json(const StabilityReport& r) {
  using nlohmann::json;
  std::optional<double> d11n, d12n, d22n;
  if (r.D) {
    d11n = r.D->d11;
    d12n = r.D->d12;
    d22n = r.D->d22;
  }
  json j{
      {"schema_version", schema_version},
      {"model", std::string(to_string(r.model))},
      {"params", {{"g", r.params.g}, {"kappa", r.params.kappa}, {"mu", r.params.mu}}},
      {"scalars",
       {{"c", r.scalars.c}, {"omega", r.scalars.omega}, {"a", r.scalars.a}, {"T", r.scalars.T}}},
      {"closed_form",
       {{"mass", r.closed.mass},
        {"inv_sq", r.closed.inv_sq},
        {"pairing", r.closed.pairing},
        {"denom", r.closed.denom},
        {"d11", r.closed.d11},
        {"kernel_margin", r.closed.kernel_margin}}},
      {"winding", {{"value", r.winding.value}, {"distance", r.winding.distance}}},
      {"index_count",
       {{"morse_L", detail::opt_json(r.morse_L)},
        {"kernel_L", detail::opt_json(r.kernel_L)},
        {"d11_num", detail::opt_json(d11n)},
        {"d12_num", detail::opt_json(d12n)},
        {"d22_num", detail::opt_json(d22n)},
        {"detD", detail::opt_json(r.det_D)},
        {"morse_D", detail::opt_json(r.morse_D)},
        {"k_ham", detail::opt_json(r.k_ham)}}},
      {"spectrum",
       {{"max_re_lambda", detail::opt_json(r.max_re_lambda)},
        {"tol_unstable", detail::opt_json(r.tol_unstable)},
        {"real_unstable", detail::opt_json(r.real_unstable)}}},
      {"verdict", std::string(to_string(r.verdict))},
      {"flags",
       {{"stable_with_positive_d11", r.stable_with_positive_d11},
        {"unstable_or_negative_krein", r.unstable_or_negative_krein},
        {"spectrum_mismatch", r.spectrum_mismatch}}},
  };
  return j;
}

inline nlohmann::json to_json(const ScanRow& row) {
  nlohmann::json j;
  if (row.report) {
    j = to_json(*row.report);
  } else {
    j = {{"schema_version", schema_version},
         {"params", {{"g", row.params.g}, {"kappa", row.params.kappa}, {"mu", row.params.mu}}}};
  }
  j["status"] = std::string(to_string(row.status));
  if (!row.message.empty()) j["message"] = row.message;
  return j;
}

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "g",        "kappa",  "mu",      "status",        "c",       "omega",   "T",
      "a",        "mass",   "inv_sq",  "pairing",       "denom",   "kernel_margin",
      "d11",      "d12_num", "d22_num", "detD",          "morse_L", "morse_D", "k_ham",
      "max_re_lambda", "winding_dist", "verdict"};
  return cols;
}

/// 17 significant digits; non-finite values become empty cells.
inline std::string format_real(double v) {
  if (!std::isfinite(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string{};
}

inline std::string format_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string{};
}

inline void write_csv_header(std::ostream& os) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

inline void write_csv_row(std::ostream& os, const ScanRow& row) {
  std::vector<std::string> cells;
  cells.reserve(csv_columns().size());
  cells.push_back(format_real(row.params.g));
  cells.push_back(format_real(row.params.kappa));
  cells.push_back(format_real(row.params.mu));
  cells.emplace_back(to_string(row.status));
  if (row.status == RowStatus::Ok && row.report) {
    const auto& r = *row.report;
    std::optional<double> d12, d22;
    if (r.D) {
      d12 = r.D->d12;
      d22 = r.D->d22;
    }
    for (double v : {r.scalars.c, r.scalars.omega, r.scalars.T, r.scalars.a, r.closed.mass,
                     r.closed.inv_sq, r.closed.pairing, r.closed.denom, r.closed.kernel_margin,
                     r.closed.d11})
      cells.push_back(format_real(v));
    cells.push_back(format_real(d12));
    cells.push_back(format_real(d22));
    cells.push_back(format_real(r.det_D));
    cells.push_back(format_int(r.morse_L));
    cells.push_back(format_int(r.morse_D));
    cells.push_back(format_int(r.k_ham));
    cells.push_back(format_real(r.max_re_lambda));
    cells.push_back(format_real(r.winding.distance));
    cells.emplace_back(to_string(r.verdict));
  } else {
    cells.resize(csv_columns().size());
  }
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}

}  // namespace wavestab

#endif  // WAVESTAB_REPORT_HPP
