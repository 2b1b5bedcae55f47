#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "turingcert/gershgorin.hpp"
#include "turingcert/harmonic.hpp"
#include "turingcert/interval.hpp"
#include "turingcert/nk.hpp"

namespace turingcert {

struct SweepConfig {
  std::size_t grid_count = 1000;
  std::size_t N = 50;
  double p = 2.0;
  double alpha = 0.0;
  Interval delta_max{4.0};
  bool strict_discriminant = false;

  void validate(const KernelBound& kb) const {
    if (grid_count < 1) throw InvalidProblem("grid_count must be >= 1");
    if (N < 2) throw InvalidProblem("N must be >= 2");
    if (!(p > 1 - kb.q2 && p <= kb.q1 + 2)) throw InvalidProblem("p outside (1-q2, q1+2]");
    if (!(delta_max.lo() > 0)) throw InvalidProblem("delta_max must be positive");
  }
};

/// Cell k of the uniform grid over [0, delta_max], widened outward so that
/// consecutive cells cover the range.
inline Interval grid_cell(std::size_t k, const SweepConfig& cfg) {
  const Interval g(static_cast<double>(cfg.grid_count));
  const double lo = k == 0 ? 0.0 : (Interval(static_cast<double>(k)) * cfg.delta_max / g).lo();
  const double hi = (Interval(static_cast<double>(k + 1)) * cfg.delta_max / g).hi();
  return Interval(lo, hi);
}

inline unsigned default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Work is handed out
/// by index, so results written by index are independent of scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::vector<SpectrumCertificate> sweep(const ProblemInstance& inst, const SweepConfig& cfg,
                                              unsigned jobs = default_jobs()) {
  std::vector<SpectrumCertificate> out(cfg.grid_count);
  parallel_for(cfg.grid_count, jobs,
               [&](std::size_t k) { out[k] = classify_cell(inst, grid_cell(k, cfg), cfg.N, cfg.p); });
  return out;
}

struct BandRecord {
  std::size_t k = 0;
  Interval mu;
  std::optional<NkCertificate> nk;
  std::string failure;
};

struct ThresholdCertificate {
  Interval stable_up_to;
  Interval unstable_from;
  Interval delta_star;
  Interval derivative_range;
  bool unique = false;
  std::string reason;
  std::size_t band_first = 0;  // first undetermined cell
  std::size_t band_end = 0;    // one past the last undetermined cell
  std::vector<BandRecord> band;
};

/// Validates d0 on the undetermined band and derives the delta* enclosure.
inline ThresholdCertificate refine_and_certify(const ProblemInstance& inst, const SweepConfig& cfg,
                                               const std::vector<SpectrumCertificate>& cells,
                                               unsigned jobs = default_jobs()) {
  ThresholdCertificate tc;
  tc.delta_star = Interval::entire();
  tc.stable_up_to = Interval::entire();
  tc.unstable_from = Interval::entire();
  tc.derivative_range = Interval::entire();
  const std::size_t n = cells.size();
  std::size_t s = 0;
  while (s < n && cells[s].classification == Classification::Stable) ++s;
  std::size_t e = s;
  while (e < n && cells[e].classification == Classification::Undetermined) ++e;
  std::size_t o = e;
  while (o < n && cells[o].classification == Classification::UnstableOne) ++o;
  tc.band_first = s;
  tc.band_end = e;
  if (o != n) {
    tc.reason = "BandStructure: cell " + std::to_string(o) + " breaks Stable* Undetermined* UnstableOne*";
    return tc;
  }
  if (s == e || s == 0 || e == n) {
    tc.reason = "NoBand";
    return tc;
  }

  tc.band.resize(e - s);
  parallel_for(e - s, jobs, [&](std::size_t i) {
    BandRecord& rec = tc.band[i];
    rec.k = s + i;
    rec.mu = cells[s + i].mu;
    try {
      rec.nk = enclose_d0(inst, cells[s + i].delta, cfg.N, cfg.alpha, rec.mu, cfg.strict_discriminant);
    } catch (const CertError& err) {
      rec.failure = err.what();
    }
  });

  // delta_0: right edge of the last cell with d0 certified negative;
  // delta_1: left edge of the first cell with d0 certified positive.
  double d0 = cells[s].delta.lo();
  double d1 = cells[e - 1].delta.hi();
  for (const auto& rec : tc.band)
    if (rec.nk && rec.nk->d0_enclosure.hi() < 0) d0 = cells[rec.k].delta.hi();
  for (auto it = tc.band.rbegin(); it != tc.band.rend(); ++it)
    if (it->nk && it->nk->d0_enclosure.lo() > 0) d1 = cells[it->k].delta.lo();
  tc.stable_up_to = Interval(d0);
  tc.unstable_from = Interval(d1);
  tc.delta_star = Interval(std::min(d0, d1), std::max(d0, d1));

  std::optional<Interval> deriv;
  std::string problem;
  for (const auto& rec : tc.band) {
    const std::string cell = "cell " + std::to_string(rec.k);
    if (!rec.nk) {
      if (problem.empty()) problem = "NkFailed: " + cell + ": " + rec.failure;
      continue;
    }
    const auto& dp = rec.nk->d0_prime.range;
    deriv = deriv ? hull(*deriv, dp) : dp;
    if (problem.empty() && !(rec.mu.hi() < 0)) problem = "AtMostOne: " + cell;
    if (problem.empty() && !rec.nk->identified_as_d0) problem = "NotIdentified: " + cell;
    if (problem.empty() && !(dp.lo() > 0)) problem = "DerivativeSign: " + cell;
  }
  if (deriv) tc.derivative_range = *deriv;
  if (problem.empty() && !(d0 < d1)) problem = "EmptyThreshold";
  tc.unique = problem.empty();
  tc.reason = tc.unique ? "ok" : problem;
  return tc;
}

}  // namespace turingcert
