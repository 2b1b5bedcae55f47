// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criteria 1, 2 and 9 drive the command-line tool end to end.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "turingcert/config.hpp"
#include "turingcert/io.hpp"

namespace fs = std::filesystem;
using namespace turingcert;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
  if (!ok) ++failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_threshold(const fs::path& out) {
  fs::remove_all(out);
  const std::string cmd = std::string("\"") + TURINGCERT_CLI + "\" threshold --config \"" + TURINGCERT_MAIN_CONFIG +
                          "\" --out \"" + out.string() + "\" > \"" + out.string() + ".log\" 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<nlohmann::json> read_jsonl(const fs::path& p) {
  std::vector<nlohmann::json> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

std::string fmt(const Interval& x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "turingcert_acceptance";
  fs::create_directories(work);
  const RunConfig rc = load_config(TURINGCERT_MAIN_CONFIG);
  const ProblemInstance& inst = rc.inst;
  const SweepConfig& cfg = rc.sweep;

  const fs::path run_a = work / "run_a", run_b = work / "run_b";
  const int rc_a = run_threshold(run_a);
  const int rc_b = run_threshold(run_b);

  // 1. threshold certificate
  {
    bool ok = rc_a == 0;
    std::string detail = "exit " + std::to_string(rc_a);
    if (fs::exists(run_a / "threshold.json")) {
      const auto t = nlohmann::json::parse(slurp(run_a / "threshold.json"));
      const double lo = number_from_json(t["delta_star"][0]), hi = number_from_json(t["delta_star"][1]);
      ok = ok && t["unique"].get<bool>() && lo >= 2.40 && hi <= 2.49 && lo > 2.42 && hi < 2.47;
      std::ostringstream s;
      s << "delta* = [" << lo << ", " << hi << "], unique=" << t["unique"] << ", reason=" << t["reason"];
      detail = s.str();
    } else {
      ok = false;
    }
    report(1, ok, detail);
  }

  // 2. Gershgorin sweep
  std::vector<nlohmann::json> cells;
  if (fs::exists(run_a / "sweep.jsonl")) cells = read_jsonl(run_a / "sweep.jsonl");
  {
    bool ok = cells.size() == cfg.grid_count;
    std::size_t first_u = cells.size(), last_u = 0;
    double worst_mu = -INFINITY;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const std::string cls = cells[k]["classification"];
      const double mu = number_from_json(cells[k]["mu"][1]);
      worst_mu = std::max(worst_mu, mu);
      if (cls == "Undetermined") {
        first_u = std::min(first_u, k);
        last_u = std::max(last_u, k);
        ok = ok && k >= 606 && k <= 615;
      } else if (cls == "Stable") {
        ok = ok && k <= 615;
      } else {
        ok = ok && k >= 606;
      }
      ok = ok && mu < 0;
    }
    std::ostringstream s;
    s << "undetermined k = " << first_u << ".." << last_u << ", max sup mu = " << worst_mu;
    report(2, ok, s.str());
  }

  // 3 and 4. reference enclosures on k = 607..614
  {
    const double lower[] = {-4.6e-3, -3.7e-3, -2.9e-3, -2.1e-3, -1.2e-3, -0.4e-3, 0.5e-3, 1.3e-3};
    const double upper[] = {-1.5e-3, -0.7e-3, 0.1e-3, 1.0e-3, 1.8e-3, 2.7e-3, 3.5e-3, 4.3e-3};
    bool ok3 = true, ok4 = true;
    std::optional<Interval> deriv;
    double widest = 0;
    std::string note3, note4;
    for (std::size_t i = 0; i < 8; ++i) {
      const std::size_t k = 607 + i;
      const Interval delta = grid_cell(k, cfg);
      try {
        const auto spec = classify_cell(inst, delta, cfg.N, cfg.p);
        const NkCertificate c = enclose_d0(inst, delta, cfg.N, cfg.alpha, spec.mu);
        const Interval row(lower[i], upper[i]);
        const bool hit = c.d0_enclosure.overlaps(row) && c.d0_enclosure.width() <= 8e-3;
        if (!hit) note3 += " k=" + std::to_string(k) + ":" + fmt(c.d0_enclosure);
        ok3 = ok3 && hit;
        widest = std::max(widest, c.d0_enclosure.width());
        const Interval& dp = c.d0_prime.range;
        const bool pos = dp.lo() > 0 && dp.overlaps(Interval(0.16, 0.26));
        if (!pos) note4 += " k=" + std::to_string(k) + ":" + fmt(dp);
        ok4 = ok4 && pos;
        deriv = deriv ? hull(*deriv, dp) : dp;
      } catch (const CertError& e) {
        ok3 = ok4 = false;
        note3 += " k=" + std::to_string(k) + ": " + e.kind();
      }
    }
    ok4 = ok4 && deriv && deriv->subset_of(Interval(0.05, 0.40));
    std::ostringstream s3, s4;
    s3 << "k=607..614 widest enclosure " << widest << note3;
    s4 << "union of d0' ranges " << (deriv ? fmt(*deriv) : std::string("none")) << note4;
    report(3, ok3, s3.str());
    report(4, ok4, s4.str());
  }

  // 5. closed form at delta = 0
  {
    bool ok = false;
    std::string detail;
    try {
      const auto spec = classify_cell(inst, Interval(0.0), cfg.N, cfg.p);
      const NkCertificate c = enclose_d0(inst, Interval(0.0), cfg.N, cfg.alpha, spec.mu);
      ok = checks::contains(c.d0_enclosure, boost::multiprecision::sqrt(checks::mp(6)) - 3) &&
           c.d0_enclosure.width() <= 1e-6;
      std::ostringstream s;
      s << "d0 in " << std::setprecision(17) << c.d0_enclosure << ", width " << c.d0_enclosure.width();
      detail = s.str();
    } catch (const CertError& e) {
      detail = e.kind();
    }
    report(5, ok, detail);
  }

  // 6. disks contain the float spectrum of the 16 x 16 truncation
  {
    bool ok = true;
    std::ostringstream s;
    for (double delta : {0.0, 1.0, 2.5, 4.0}) {
      const auto cert = classify_cell(inst, Interval(delta), 8, cfg.p);
      const double excess = cert.failure.empty() ? checks::disk_excess(cert, checks::float_truncation(inst, delta, 8))
                                                 : INFINITY;
      ok = ok && excess <= 1e-8;
      s << "delta=" << delta << " excess " << excess << "; ";
    }
    report(6, ok, s.str());
  }

  // 7. interval kernels
  {
    bool ok = true;
    long cases = 0, bad = 0;
    for (const auto& c : checks::containment_suite(100000)) {
      cases += c.cases;
      bad += c.failures;
    }
    long nested = 0, nested_bad = 0;
    for (const auto& c : checks::monotone_suite(10000)) {
      nested += c.cases;
      nested_bad += c.failures;
    }
    ok = bad == 0 && nested_bad == 0;
    std::ostringstream s;
    s << cases << " containment cases (" << bad << " failed), " << nested << " nested cases (" << nested_bad
      << " failed)";
    report(7, ok, s.str());
  }

  // 8. kernel coefficients
  {
    const Interval C = b_constant(inst).C;
    std::size_t bound_bad = 0;
    for (std::size_t i = 0; i <= 200; ++i)
      for (std::size_t j = 0; j <= 200; ++j) {
        const double den = static_cast<double>(std::max<std::size_t>(1, i) * std::max<std::size_t>(1, j));
        if (b_coeff(i, j, inst).mag() > (C / Interval(den)).hi()) ++bound_bad;
      }
    double worst = 0;
    for (std::size_t i = 0; i <= 50; ++i)
      for (std::size_t j = 0; j <= 50; ++j)
        worst = std::max(worst, std::fabs(b_coeff(i, j, inst).mid() - checks::b_coeff_quadrature(i, j, inst)));
    std::ostringstream s;
    s << bound_bad << " decay violations, max quadrature gap " << worst;
    report(8, bound_bad == 0 && worst <= 1e-10, s.str());
  }

  // 9. determinism
  {
    bool ok = rc_a == rc_b && fs::exists(run_a) && fs::exists(run_b);
    std::size_t compared = 0;
    std::string diff;
    if (ok) {
      std::vector<std::string> names;
      for (const auto& e : fs::directory_iterator(run_a))
        if (e.path().filename() != "manifest.json") names.push_back(e.path().filename().string());
      for (const auto& e : fs::directory_iterator(run_b))
        if (e.path().filename() != "manifest.json" && !fs::exists(run_a / e.path().filename()))
          diff += " extra:" + e.path().filename().string();
      for (const auto& n : names) {
        ++compared;
        if (!fs::exists(run_b / n) || slurp(run_a / n) != slurp(run_b / n)) diff += " " + n;
      }
      ok = diff.empty() && compared > 0;
    }
    report(9, ok, std::to_string(compared) + " files compared" + (diff.empty() ? "" : ", differ:" + diff));
  }

  // Informational: the weighted space with alpha = 1 on the first band cell.
  try {
    const Interval delta = grid_cell(607, cfg);
    const auto spec = classify_cell(inst, delta, cfg.N, cfg.p);
    const NkCertificate c = enclose_d0(inst, delta, cfg.N, 1.0, spec.mu);
    std::cout << "info: alpha=1 at k=607: r_min " << c.r_min.hi() << ", d0' err " << c.d0_prime.err.hi() << std::endl;
  } catch (const CertError& e) {
    std::cout << "info: alpha=1 at k=607: " << e.kind() << ": " << e.what() << std::endl;
  }

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
