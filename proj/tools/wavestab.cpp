// wavestab: stability of periodic waves of the derivative and quintic NLS.
//
//   wavestab point --model dnls -g 1 -k 0.5 --mu 1
//   wavestab scan --mu 1 --g-range 0.1,2.7,40 --kappa-range 0.02,0.98,40 --kappa-relative
//   wavestab quintic-scan --g-range 0.5,2,4 --kappa-range 0.05,0.95,19 --spectrum
//   wavestab quantize -k 0.5 --mu 1 --branch 0
//   wavestab verify --n-points 50 --seed 42
//
// Exit codes: 0 success, 2 invalid arguments, 3 inadmissible parameters,
// 4 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavestab/classify.hpp"
#include "wavestab/report.hpp"
#include "wavestab/scan.hpp"
#include "wavestab/verify.hpp"

namespace {

using namespace wavestab;

enum ExitCode : int { kOk = 0, kBadArgs = 2, kInadmissible = 3, kVerifyFailed = 4 };

const std::map<std::string, Model> model_names{{"dnls", Model::DNLS},
                                               {"quintic", Model::QuinticNLS}};
const std::map<std::string, OutputFormat> format_names{{"csv", OutputFormat::Csv},
                                                       {"json", OutputFormat::Json}};

Range to_range(const std::vector<double>& v) {
  return {v.at(0), v.at(1), static_cast<int>(v.at(2))};
}

/// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct PointArgs {
  Model model = Model::DNLS;
  double g = 0, kappa = 0, mu = 0;
  bool mu_given = false;
  int n = 256;
  bool spectrum = false;
  bool closed_form_only = false;
  std::string out;
};

int cmd_point(const PointArgs& a) {
  WaveParams p{a.g, a.kappa, a.model == Model::QuinticNLS ? quintic_mu(a.g, a.kappa) : a.mu};
  if (a.model == Model::DNLS && !a.mu_given) {
    std::cerr << "error: --mu is required for --model dnls\n";
    return kBadArgs;
  }
  if (a.model == Model::QuinticNLS && a.mu_given)
    std::cerr << "warning: --mu ignored for the quintic model (fixed by g and kappa)\n";
  if (auto v = validate_params(p); !v) {
    std::cerr << "error: inadmissible parameters: " << v.reason << '\n';
    return kInadmissible;
  }
  ClassifyOptions opt;
  opt.n = a.n;
  opt.with_spectrum = a.spectrum;
  opt.closed_form_only = a.closed_form_only;
  const StabilityReport r = a.model == Model::QuinticNLS ? classify_quintic(a.g, a.kappa, opt)
                                                        : classify_dnls(p, opt);
  Sink sink(a.out);
  sink.stream() << to_json(r).dump(2) << '\n';
  return kOk;
}

int cmd_scan(const ScanConfig& cfg) {
  const auto rows = run_scan(cfg);
  Sink sink(cfg.output);
  auto& os = sink.stream();
  if (cfg.format == OutputFormat::Csv) {
    write_csv_header(os);
    for (const auto& row : rows) write_csv_row(os, row);
  } else {
    for (const auto& row : rows) os << to_json(row).dump() << '\n';
  }
  return kOk;
}

int cmd_quantize(double kappa, double mu, int branch, const std::string& out) {
  try {
    const auto q = quantize(kappa, mu, branch);
    nlohmann::json j{{"schema_version", schema_version},
                     {"params", {{"g", q.params.g}, {"kappa", q.params.kappa}, {"mu", q.params.mu}}},
                     {"branch", branch},
                     {"winding", q.winding},
                     {"residual", q.residual}};
    Sink sink(out);
    sink.stream() << j.dump(2) << '\n';
    return kOk;
  } catch (const NoRoot& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInadmissible;
  }
}

int cmd_verify(const VerifyConfig& cfg) {
  const auto results = run_verification(cfg);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    std::printf("%-26s %s  checked=%-4d max_dev=%.3e tol=%.1e%s%s\n", r.name.c_str(),
                r.passed ? "PASS" : "FAIL", r.checked, r.max_deviation, r.tolerance,
                r.detail.empty() ? "" : "  ", r.detail.c_str());
  }
  std::printf("verify: %s\n", ok ? "all properties passed" : "FAILED");
  return ok ? kOk : kVerifyFailed;
}

void add_scan_options(CLI::App* cmd, ScanConfig& cfg, bool with_model) {
  if (with_model)
    cmd->add_option_function<std::string>(
           "--model", [&cfg](const std::string& m) { cfg.model = model_names.at(m); },
           "dnls or quintic")
        ->check(CLI::IsMember(model_names));
  cmd->add_option("--mu", cfg.mu, "mu = 16(omega - c^2/4), DNLS only");
  cmd->add_option_function<std::vector<double>>(
         "--g-range", [&cfg](const std::vector<double>& v) { cfg.g_range = to_range(v); },
         "lo,hi,steps")
      ->delimiter(',')
      ->expected(3);
  cmd->add_option_function<std::vector<double>>(
         "--kappa-range", [&cfg](const std::vector<double>& v) { cfg.kappa_range = to_range(v); },
         "lo,hi,steps")
      ->delimiter(',')
      ->expected(3);
  cmd->add_flag("--kappa-relative", cfg.kappa_relative,
                "kappa range as fractions of the admissible kappa bound at each g");
  cmd->add_option("--n", cfg.n_collocation, "collocation points")
      ->check(CLI::Range(64, 4096));
  cmd->add_flag("--spectrum", cfg.with_spectrum, "also compute the J L spectrum per point");
  cmd->add_flag("--closed-form-only", cfg.closed_form_only, "skip all collocation work");
  cmd->add_option("--out", cfg.output, "output file (default stdout)");
  cmd->add_option_function<std::string>(
         "--format", [&cfg](const std::string& f) { cfg.format = format_names.at(f); },
         "csv or json")
      ->check(CLI::IsMember(format_names));
  cmd->add_option("--jobs", cfg.jobs, "worker threads (default: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral stability of periodic waves of the derivative and quintic NLS"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file, one [section] per command; flags override it");

  PointArgs pa;
  auto* point = app.add_subcommand("point", "full report for one parameter point (JSON)");
  point->add_option_function<std::string>(
           "--model", [&pa](const std::string& m) { pa.model = model_names.at(m); },
           "dnls or quintic")
      ->check(CLI::IsMember(model_names));
  point->add_option("-g,--g", pa.g, "elliptic scale g")->required();
  point->add_option("-k,--kappa", pa.kappa, "elliptic modulus kappa")->required();
  point->add_option("--mu", pa.mu, "mu = 16(omega - c^2/4)");
  point->add_option("--n", pa.n, "collocation points")->check(CLI::Range(64, 4096));
  point->add_flag("--spectrum", pa.spectrum, "compute the J L spectrum");
  point->add_flag("--closed-form-only", pa.closed_form_only, "skip all collocation work");
  point->add_option("--out", pa.out, "output file (default stdout)");

  ScanConfig scan_cfg;
  auto* scan = app.add_subcommand("scan", "grid scan over (g, kappa)");
  add_scan_options(scan, scan_cfg, true);

  ScanConfig qscan_cfg;
  qscan_cfg.model = Model::QuinticNLS;
  qscan_cfg.g_range = {0.5, 2.0, 4};
  qscan_cfg.kappa_range = {0.05, 0.95, 19};
  auto* qscan = app.add_subcommand("quintic-scan", "scan with --model quintic");
  add_scan_options(qscan, qscan_cfg, false);

  double qk = 0, qmu = 0;
  int branch = 0;
  std::string qout;
  auto* quant = app.add_subcommand("quantize", "root-find g on the winding condition");
  quant->add_option("-k,--kappa", qk, "elliptic modulus")->required();
  quant->add_option("--mu", qmu, "mu")->required();
  quant->add_option("--branch", branch, "target winding 2*pi*branch");
  quant->add_option("--out", qout, "output file (default stdout)");

  VerifyConfig vcfg;
  auto* verify = app.add_subcommand("verify", "self-verification on random admissible points");
  verify->add_option("--n-points", vcfg.n_points)->check(CLI::Range(1, 100000));
  verify->add_option("--seed", vcfg.seed);
  verify->add_option("--spectrum-points", vcfg.spectrum_points,
                     "how many of the points also get the J L eigensolve");
  verify->add_option("--jobs", vcfg.jobs, "worker threads (default: all cores)");

  for (auto* sub : {point, scan, qscan, quant, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArgs;
  }
  pa.mu_given = point->count("--mu") > 0;

  try {
    if (*point) return cmd_point(pa);
    if (*scan) return cmd_scan(scan_cfg);
    if (*qscan) return cmd_scan(qscan_cfg);
    if (*quant) return cmd_quantize(qk, qmu, branch, qout);
    if (*verify) return cmd_verify(vcfg);
  } catch (const InadmissibleParams& e) {
    std::cerr << "error: inadmissible parameters: " << e.what() << '\n';
    return kInadmissible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kBadArgs;
}
