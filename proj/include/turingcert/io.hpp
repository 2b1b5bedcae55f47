#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"
#include "turingcert/gershgorin.hpp"
#include "turingcert/interval.hpp"
#include "turingcert/nk.hpp"
#include "turingcert/threshold.hpp"

namespace turingcert {

using ordered_json = nlohmann::ordered_json;

/// Finite doubles are emitted as shortest round-trip numbers, infinities as
/// the strings "inf" / "-inf".
inline ordered_json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  return j.get<double>();
}

inline ordered_json pair_json(const Interval& x) { return ordered_json::array({json_number(x.lo()), json_number(x.hi())}); }

inline void to_json(nlohmann::json& j, const Interval& x) {
  j = {{"lo", json_number(x.lo())}, {"hi", json_number(x.hi())}};
}
inline void to_json(ordered_json& j, const Interval& x) {
  j = {{"lo", json_number(x.lo())}, {"hi", json_number(x.hi())}};
}
inline void from_json(const nlohmann::json& j, Interval& x) {
  x = Interval(number_from_json(j.at("lo")), number_from_json(j.at("hi")));
}

inline ordered_json cell_record(std::size_t k, const SpectrumCertificate& c) {
  ordered_json j;
  j["k"] = k;
  j["delta"] = pair_json(c.delta);
  j["N"] = c.N;
  j["p"] = c.p;
  j["mu"] = pair_json(c.mu);
  j["m_bar"] = pair_json(c.m_bar);
  ordered_json disk0;
  if (!c.disks.empty()) {
    disk0["center_re"] = pair_json(c.disks[0].center.re());
    disk0["radius"] = pair_json(c.disks[0].radius_bound);
  }
  j["disk0"] = disk0;
  j["classification"] = to_string(c.classification);
  j["at_most_one"] = c.at_most_one;
  if (!c.failure.empty()) j["failure"] = c.failure;
  return j;
}

inline ordered_json nk_record(const NkCertificate& c) {
  ordered_json j;
  j["delta"] = pair_json(c.delta);
  j["alpha"] = c.alpha;
  j["N"] = c.N;
  j["lambda_bar"] = json_number(c.lambda_bar);
  j["Y"] = json_number(c.Y.hi());
  j["Z1"] = json_number(c.Z1.hi());
  j["Z2"] = json_number(c.Z2.hi());
  j["r_min"] = json_number(c.r_min.hi());
  j["r_max"] = json_number(c.r_max.lo());
  j["d0"] = pair_json(c.d0_enclosure);
  j["d0_prime"] = {{"app", pair_json(c.d0_prime.app)},
                   {"err", json_number(c.d0_prime.err.hi())},
                   {"range", pair_json(c.d0_prime.range)}};
  j["identified"] = c.identified_as_d0;
  return j;
}

inline ordered_json band_record(const BandRecord& r) {
  ordered_json j;
  j["k"] = r.k;
  j["mu"] = pair_json(r.mu);
  if (r.nk)
    j["certificate"] = nk_record(*r.nk);
  else
    j["failure"] = r.failure;
  return j;
}

inline ordered_json threshold_record(const ThresholdCertificate& t, const SweepConfig& cfg) {
  ordered_json j;
  j["delta_star"] = pair_json(t.delta_star);
  j["stable_up_to"] = json_number(t.stable_up_to.lo());
  j["unstable_from"] = json_number(t.unstable_from.hi());
  j["derivative_range"] = pair_json(t.derivative_range);
  j["unique"] = t.unique;
  j["reason"] = t.reason;
  j["band"] = {{"first_k", t.band_first}, {"end_k", t.band_end}};
  j["grid_count"] = cfg.grid_count;
  j["N"] = cfg.N;
  j["p"] = cfg.p;
  j["alpha"] = cfg.alpha;
  j["delta_max"] = pair_json(cfg.delta_max);
  return j;
}

inline std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_disks_csv(std::ostream& os, const SpectrumCertificate& c) {
  os << "index,center_re_lo,center_re_hi,center_im_lo,center_im_hi,radius_hi\n";
  for (std::size_t i = 0; i < c.disks.size(); ++i) {
    const auto& d = c.disks[i];
    os << i << ',' << csv_number(d.center.re().lo()) << ',' << csv_number(d.center.re().hi()) << ','
       << csv_number(d.center.im().lo()) << ',' << csv_number(d.center.im().hi()) << ','
       << csv_number(d.radius_bound.hi()) << '\n';
  }
}

inline void write_d0_csv(std::ostream& os, const ThresholdCertificate& t) {
  os << "k,delta_lo,delta_hi,d0_lo,d0_hi,mu\n";
  for (const auto& r : t.band) {
    if (!r.nk) continue;
    os << r.k << ',' << csv_number(r.nk->delta.lo()) << ',' << csv_number(r.nk->delta.hi()) << ','
       << csv_number(r.nk->d0_enclosure.lo()) << ',' << csv_number(r.nk->d0_enclosure.hi()) << ','
       << csv_number(r.mu.hi()) << '\n';
  }
}

}  // namespace turingcert
