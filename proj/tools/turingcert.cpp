// turingcert: certified spectrum, eigenvalue and threshold computations.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "turingcert/config.hpp"
#include "turingcert/io.hpp"

namespace fs = std::filesystem;
using namespace turingcert;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCert = 3;
constexpr int kExitNotUnique = 4;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Collects output files so the manifest can hash them.
class Bundle {
 public:
  explicit Bundle(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    files_.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }

  void write_manifest(ordered_json manifest) {
    manifest["outputs"] = files_;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  ordered_json files_ = ordered_json::array();
};

ordered_json manifest_header(const std::string& command, const RunConfig& rc, unsigned jobs) {
  ordered_json m;
  m["tool"] = "turingcert";
  m["version"] = TURINGCERT_VERSION;
  m["command"] = command;
  m["started_at"] = utc_now();
  m["jobs"] = jobs;
  m["config"] = rc.source;
  return m;
}

unsigned resolve_jobs(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("TURINGCERT_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return default_jobs();
}

struct CommonOpts {
  std::string config;
  std::string delta;
  std::string out;
  int jobs = 0;
  std::size_t n = 0;
  double p = 0;
  double alpha = -1;
  std::size_t cells = 1;
  std::string delta_max;
  bool strict = false;
};

// Command-line values override the config's sweep section.
SweepConfig effective(const RunConfig& rc, const CommonOpts& o) {
  SweepConfig s = rc.sweep;
  if (o.n) s.N = o.n;
  if (o.p > 0) s.p = o.p;
  if (o.alpha >= 0) s.alpha = o.alpha;
  if (o.strict) s.strict_discriminant = true;
  if (!o.delta_max.empty()) s.delta_max = parse_expression(o.delta_max);
  s.validate(b_constant(rc.inst));
  return s;
}

std::vector<Interval> split_range(const Interval& d, std::size_t cells) {
  std::vector<Interval> out;
  const Interval w = (Interval(d.hi()) - Interval(d.lo())) / Interval(static_cast<double>(cells));
  for (std::size_t k = 0; k < cells; ++k) {
    const double lo = k == 0 ? d.lo() : (Interval(d.lo()) + Interval(static_cast<double>(k)) * w).lo();
    const double hi = k + 1 == cells ? d.hi() : (Interval(d.lo()) + Interval(static_cast<double>(k + 1)) * w).hi();
    out.emplace_back(lo, hi);
  }
  return out;
}

int cmd_spectrum(const CommonOpts& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig rc = load_config(o.config);
  const SweepConfig cfg = effective(rc, o);
  const Interval delta = parse_delta_range(o.delta);
  const unsigned jobs = resolve_jobs(o.jobs);
  const auto ranges = split_range(delta, std::max<std::size_t>(1, o.cells));
  std::vector<SpectrumCertificate> certs(ranges.size());
  parallel_for(ranges.size(), jobs, [&](std::size_t k) { certs[k] = classify_cell(rc.inst, ranges[k], cfg.N, cfg.p); });

  Bundle bundle(o.out);
  std::string lines;
  bool failed = false;
  for (std::size_t k = 0; k < certs.size(); ++k) {
    lines += cell_record(k, certs[k]).dump() + '\n';
    failed = failed || !certs[k].failure.empty();
    std::ostringstream csv;
    write_disks_csv(csv, certs[k]);
    bundle.write(certs.size() == 1 ? "disks.csv" : "disks_" + std::to_string(k) + ".csv", csv.str());
    std::cout << "cell " << k << " delta " << certs[k].delta << ": " << to_string(certs[k].classification);
    if (!certs[k].failure.empty()) std::cout << " (" << certs[k].failure << ")";
    std::cout << '\n';
  }
  bundle.write("sweep.jsonl", lines);
  ordered_json m = manifest_header("spectrum", rc, jobs);
  m["timings"] = {{"total_s", seconds_since(t0)}};
  bundle.write_manifest(m);
  return failed ? kExitCert : kExitOk;
}

int cmd_eigen(const CommonOpts& o) {
  const RunConfig rc = load_config(o.config);
  const SweepConfig cfg = effective(rc, o);
  const Interval delta = parse_delta_range(o.delta);
  const SpectrumCertificate spec = classify_cell(rc.inst, delta, cfg.N, cfg.p);
  NkCertificate cert;
  try {
    cert = enclose_d0(rc.inst, delta, cfg.N, cfg.alpha, spec.mu, cfg.strict_discriminant);
  } catch (const CertError& e) {
    std::cerr << e.what() << '\n';
    return kExitCert;
  }
  ordered_json j = nk_record(cert);
  j["mu"] = pair_json(spec.mu);
  const fs::path out = o.out.empty() ? fs::path("nk_certificate.json") : fs::path(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream(out, std::ios::binary) << j.dump(2) << '\n';
  std::cout << "d0 in " << cert.d0_enclosure << ", d0' in " << cert.d0_prime.range << '\n';
  if (!cert.identified_as_d0) {
    std::cerr << "NotIdentified: enclosure does not clear the Gershgorin line mu\n";
    return kExitCert;
  }
  return kExitOk;
}

int cmd_disks(const CommonOpts& o) {
  const RunConfig rc = load_config(o.config);
  const SweepConfig cfg = effective(rc, o);
  const SpectrumCertificate c = classify_cell(rc.inst, parse_delta_range(o.delta), cfg.N, cfg.p);
  std::ostringstream csv;
  write_disks_csv(csv, c);
  const fs::path out = o.out.empty() ? fs::path("disks.csv") : fs::path(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream(out, std::ios::binary) << csv.str();
  std::cout << c.disks.size() << " disks, " << to_string(c.classification) << '\n';
  return c.failure.empty() ? kExitOk : kExitCert;
}

int cmd_threshold(const CommonOpts& o, std::size_t grid) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig rc = load_config(o.config);
  SweepConfig cfg = effective(rc, o);
  if (grid) cfg.grid_count = grid;
  const unsigned jobs = resolve_jobs(o.jobs);

  const auto cells = sweep(rc.inst, cfg, jobs);
  const double t_sweep = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  const ThresholdCertificate tc = refine_and_certify(rc.inst, cfg, cells, jobs);
  const double t_nk = seconds_since(t1);

  Bundle bundle(o.out);
  std::string lines;
  for (std::size_t k = 0; k < cells.size(); ++k) lines += cell_record(k, cells[k]).dump() + '\n';
  bundle.write("sweep.jsonl", lines);
  lines.clear();
  for (const auto& r : tc.band) lines += band_record(r).dump() + '\n';
  bundle.write("nk_band.jsonl", lines);
  bundle.write("threshold.json", threshold_record(tc, cfg).dump(2) + '\n');
  std::ostringstream csv;
  write_d0_csv(csv, tc);
  bundle.write("d0_bounds.csv", csv.str());
  ordered_json m = manifest_header("threshold", rc, jobs);
  m["timings"] = {{"sweep_s", t_sweep}, {"nk_s", t_nk}, {"total_s", seconds_since(t0)}};
  bundle.write_manifest(m);

  std::size_t counts[3] = {0, 0, 0};
  for (const auto& c : cells) ++counts[static_cast<int>(c.classification)];
  std::cout << "cells: " << counts[0] << " Stable, " << counts[2] << " Undetermined, " << counts[1]
            << " UnstableOne\n";
  std::cout << "delta* in " << tc.delta_star << ", d0' in " << tc.derivative_range << '\n';
  std::cout << (tc.unique ? "unique threshold certified" : "uniqueness not certified: " + tc.reason) << '\n';
  return tc.unique ? kExitOk : kExitNotUnique;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified spectrum and Turing threshold for the nonlocal operator M = A + delta B"};
  app.require_subcommand(1);
  CommonOpts o;
  std::size_t grid = 0;

  auto add_common = [&](CLI::App* sub, bool needs_delta) {
    sub->add_option("--config", o.config, "problem configuration (JSON)")->required()->check(CLI::ExistingFile);
    if (needs_delta) sub->add_option("--delta", o.delta, "delta range LO:HI (decimal or expression)")->required();
    sub->add_option("--n", o.n, "truncation N (default from config)");
    sub->add_option("--jobs", o.jobs, "worker threads (default TURINGCERT_JOBS or all cores)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "classify delta cells with Gershgorin disks");
  add_common(spectrum, true);
  spectrum->add_option("--p", o.p, "scaling exponent p");
  spectrum->add_option("--cells", o.cells, "split the delta range into this many cells");
  spectrum->add_option("--out", o.out, "output directory")->required();

  auto* eigen = app.add_subcommand("eigen", "validate the leading eigenvalue d0 and its derivative");
  add_common(eigen, true);
  eigen->add_option("--p", o.p, "scaling exponent p for the Gershgorin line");
  eigen->add_option("--alpha", o.alpha, "weight exponent alpha");
  eigen->add_flag("--strict", o.strict, "require (1-Z1)^2 - 4 Z2 Y > 0");
  eigen->add_option("--out", o.out, "certificate JSON path");

  auto* threshold = app.add_subcommand("threshold", "certify the instability threshold delta*");
  add_common(threshold, false);
  threshold->add_option("--p", o.p, "scaling exponent p");
  threshold->add_option("--alpha", o.alpha, "weight exponent alpha");
  threshold->add_option("--grid", grid, "number of delta cells");
  threshold->add_option("--delta-max", o.delta_max, "upper end of the swept delta range");
  threshold->add_flag("--strict", o.strict, "require (1-Z1)^2 - 4 Z2 Y > 0");
  threshold->add_option("--out", o.out, "output directory")->required();

  auto* disks = app.add_subcommand("disks", "dump all 2N Gershgorin disks of one cell as CSV");
  add_common(disks, true);
  disks->add_option("--p", o.p, "scaling exponent p");
  disks->add_option("--out", o.out, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*spectrum) return cmd_spectrum(o);
    if (*eigen) return cmd_eigen(o);
    if (*threshold) return cmd_threshold(o, grid);
    if (*disks) return cmd_disks(o);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidProblem& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const CertError& e) {
    std::cerr << e.what() << '\n';
    return kExitCert;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCert;
  }
  return kExitOk;
}
