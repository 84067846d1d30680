#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fqlab/error.hpp"
#include "fqlab/io.hpp"
#include "fqlab/kernels.hpp"
#include "fqlab/rootfind.hpp"
#include "fqlab/spectral.hpp"
#include "fqlab/verify.hpp"

namespace fs = std::filesystem;
using namespace fqlab;

namespace {

enum Exit : int {
  kOk = 0,
  kOther = 1,
  kInput = 2,
  kCertification = 3,
  kSeries = 4,
  kChecksFailed = 5,
};

struct RunConfig {
  std::string poly;
  std::vector<double> window;
  std::optional<double> strip;
  double smax = 0.0;
  std::string out = ".";
  bool force = false;
  bool csv = false;
  double tol_zero = 1e-12;
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidArgument:
      return kInput;
    case ErrorKind::Tangency:
    case ErrorKind::GridTooCoarse:
    case ErrorKind::ContourNearZero:
    case ErrorKind::QuadratureNotConverged:
    case ErrorKind::HiddenNonRealZeros:
    case ErrorKind::CertificationFailed:
      return kCertification;
    case ErrorKind::NoConvergence:
    case ErrorKind::AtomBudgetExceeded:
    case ErrorKind::VanishingConstant:
    case ErrorKind::NonNegativeFrequency:
    case ErrorKind::HermitianMismatch:
      return kSeries;
    default:
      return kOther;
  }
}

struct ExitError {
  int code;
  std::string msg;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(cplx z) { return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i"; }

ExpPolynomial load_poly(const RunConfig& cfg) {
  if (cfg.poly.empty()) throw ExitError{kInput, "--poly is required"};
  return io::polynomial_from_json(io::read_file(cfg.poly));
}

fs::path out_dir(const RunConfig& cfg) {
  fs::path d(cfg.out);
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw ExitError{kInput, "cannot create output directory " + d.string()};
  return d;
}

std::string need_file(const fs::path& p, const char* what) {
  if (!fs::exists(p)) throw ExitError{kInput, std::string("missing ") + what + ": " + p.string()};
  return io::read_file(p);
}

int cmd_zeros(const RunConfig& cfg) {
  if (cfg.window.size() != 2) throw ExitError{kInput, "--window A B is required"};
  const auto p = load_poly(cfg);
  if (!(cfg.tol_zero > 0.0)) throw ExitError{kInput, "--tol-zero must be positive"};
  const Window w{cfg.window[0], cfg.window[1]};
  if (!(w.a < w.b)) throw ExitError{kInput, "window must satisfy A < B"};
  if (p.empty()) throw ExitError{kInput, "polynomial is identically zero"};
  FindOptions opts;
  opts.tol_zero = cfg.tol_zero;

  ZeroSet zs;
  if (p.size() < 2) {
    zs.window = w;
    zs.min_gap = std::numeric_limits<double>::infinity();
    std::cerr << "warning: single exponential has no zeros\n";
  } else if (cfg.strip) {
    zs = certify_real_simple(p, w, *cfg.strip, opts);
  } else {
    zs = find_real_zeros(p, w, opts);
  }
  const auto dir = out_dir(cfg);
  io::write_file_atomic(dir / "zeros.json", io::zeroset_to_json(zs));
  io::write_file_atomic(dir / "zeros.csv", io::zeroset_to_csv(zs));
  std::cout << "zeros: " << zs.size() << "\n"
            << "density: " << fmt(zs.density()) << "\n"
            << "min gap: " << fmt(zs.min_gap) << "\n";
  if (zs.certified_strip_height > 0.0) {
    std::cout << "certified strip: |Im w| <= " << fmt(zs.certified_strip_height) << "\n";
  }
  return kOk;
}

int cmd_spectrum(const RunConfig& cfg) {
  const auto p = load_poly(cfg);
  const auto dir = out_dir(cfg);
  if (!cfg.force) {
    const auto zpath = dir / "zeros.json";
    if (!fs::exists(zpath)) {
      throw ExitError{kInput, "no certified zeros.json in " + dir.string() + " (use --force to skip)"};
    }
    const auto zs = io::zeroset_from_json(io::read_file(zpath));
    if (!(zs.certified_strip_height > 0.0)) {
      throw ExitError{kInput, "zeros.json is not certified; rerun zeros with --strip or pass --force"};
    }
  }
  if (p.size() < 2) throw ExitError{kSeries, "need n ≥ 2"};
  SpectrumOptions opts;
  opts.s_max = cfg.smax;
  const auto mu = spectrum_from_polynomial(p, opts);
  io::write_file_atomic(dir / "spectrum.json", io::spectrum_to_json(mu));
  std::cout << "alpha: " << fmt(mu.alpha) << "\n"
            << "beta: " << fmt(mu.beta) << "\n"
            << "a0: " << fmt(mu.a0.real()) << "\n"
            << "atoms: " << mu.atoms.size() << "\n";
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  const auto p = load_poly(cfg);
  const auto dir = out_dir(cfg);
  const auto zs = io::zeroset_from_json(need_file(dir / "zeros.json", "zeros"));
  const auto mu = io::spectrum_from_json(need_file(dir / "spectrum.json", "spectrum"));
  const auto report = run_battery(p, zs, mu);
  io::write_file_atomic(dir / "report.json", io::report_to_json(report));
  int failed = 0;
  for (const auto& c : report.sorted_checks()) {
    if (!c.pass) {
      ++failed;
      std::cout << "FAIL " << c.name << " residual " << fmt(c.residual) << " > budget "
                << fmt(c.budget) << "\n";
    }
  }
  std::cout << report.checks().size() - failed << "/" << report.checks().size() << " checks passed\n";
  return failed == 0 ? kOk : kChecksFailed;
}

int cmd_report(const RunConfig& cfg) {
  const fs::path dir(cfg.out);
  const auto zs = io::zeroset_from_json(need_file(dir / "zeros.json", "zeros"));
  const auto mu = io::spectrum_from_json(need_file(dir / "spectrum.json", "spectrum"));
  const auto rep = io::report_from_json(need_file(dir / "report.json", "report"));

  std::ostringstream s;
  s << "fqlab summary\n=============\n\n";
  s << "window: [" << fmt(zs.window.a) << ", " << fmt(zs.window.b) << "]\n";
  s << "zeros: " << zs.size() << "  density: " << fmt(zs.density())
    << "  min gap: " << fmt(zs.min_gap) << "\n";
  if (zs.certified_strip_height > 0.0) {
    s << "certified real and simple in |Im w| <= " << fmt(zs.certified_strip_height) << "\n";
  } else {
    s << "not certified\n";
  }
  s << "\nspectrum\n";
  s << "  alpha: " << fmt(mu.alpha) << "\n  beta: " << fmt(mu.beta) << "\n";
  s << "  a0: " << fmt(mu.a0.real()) << "\n  S_max: " << fmt(mu.s_max) << "\n";
  s << "  atoms: " << mu.atoms.size() << " (dropped " << mu.dropped_atoms << ", merges "
    << mu.merge_events << ")\n";
  s << "  growth: sum_{|s|<R} |a_s| ~ " << fmt(mu.growth.K) << " R^" << fmt(mu.growth.m)
    << " (m +- " << fmt(mu.growth.m_width) << ")\n";
  std::vector<SpectrumAtom> big(mu.atoms.begin(), mu.atoms.end());
  std::stable_sort(big.begin(), big.end(), [](const SpectrumAtom& a, const SpectrumAtom& b) {
    return std::abs(a.a) > std::abs(b.a);
  });
  if (big.size() > 8) big.resize(8);
  s << "  largest atoms:\n";
  for (const auto& a : big) s << "    s = " << fmt(a.s) << "  a = " << fmt(a.a) << "\n";

  const auto checks = rep.sorted_checks();
  const auto passed = std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
  s << "\nchecks: " << passed << "/" << checks.size() << " passed\n";
  for (const auto& c : checks) {
    s << "  " << (c.pass ? "pass " : "FAIL ") << c.name << "  residual " << fmt(c.residual)
      << "  budget " << fmt(c.budget) << "\n";
  }
  const auto text = s.str();
  io::write_file_atomic(dir / "summary.txt", text);
  std::cout << text;

  if (cfg.csv) {
    std::string counting = "x,count\n";
    for (std::size_t i = 0; i < zs.zeros.size(); ++i) {
      counting += io::format_decimal(zs.zeros[i]) + "," + std::to_string(i + 1) + "\n";
    }
    io::write_file_atomic(dir / "counting.csv", counting);
    std::string atoms = "s,re,im,abs\n";
    for (const auto& a : mu.atoms) {
      atoms += io::format_decimal(a.s) + "," + io::format_decimal(a.a.real()) + "," +
               io::format_decimal(a.a.imag()) + "," + io::format_decimal(std::abs(a.a)) + "\n";
    }
    io::write_file_atomic(dir / "atoms.csv", atoms);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fqlab: zeros, spectra and checks for exponential polynomials"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output directory");
  };
  auto* zeros = app.add_subcommand("zeros", "find real zeros in a window");
  zeros->add_option("--poly", cfg.poly, "polynomial JSON");
  zeros->add_option("--window", cfg.window, "window A B")->expected(2)->allow_extra_args(false);
  zeros->add_option("--strip", cfg.strip, "certify real and simple in |Im w| <= H");
  zeros->add_option("--tol-zero", cfg.tol_zero, "relative zero tolerance");
  add_common(zeros);

  auto* spectrum = app.add_subcommand("spectrum", "compute the Fourier spectrum of the zero measure");
  spectrum->add_option("--poly", cfg.poly, "polynomial JSON");
  spectrum->add_option("--smax", cfg.smax, "spectral truncation S_max");
  spectrum->add_flag("--force", cfg.force, "skip the certification prerequisite");
  add_common(spectrum);

  auto* verify = app.add_subcommand("verify", "run the verification battery");
  verify->add_option("--poly", cfg.poly, "polynomial JSON");
  add_common(verify);

  auto* report = app.add_subcommand("report", "summarize prior artifacts");
  report->add_flag("--csv", cfg.csv, "also write counting.csv and atoms.csv");
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (zeros->parsed()) return cmd_zeros(cfg);
    if (spectrum->parsed()) return cmd_spectrum(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (report->parsed()) return cmd_report(cfg);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.msg << "\n";
    return e.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
