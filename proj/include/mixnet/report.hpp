#pragma once

#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mixnet/anonymity.hpp"
#include "mixnet/attacks.hpp"
#include "mixnet/generators.hpp"
#include "mixnet/spectral.hpp"

namespace mixnet {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline json to_json(const ConvergenceCriterion& c) { return {{"rule", c.name()}, {"threshold", c.threshold}}; }

/// {schema_version, model, params, seed, max_anonymity_bits, t_converge,
///  criterion, trace: [{t, entropy, rpd}]}; t_converge is null when not reached.
inline json to_json(const ConvergenceReport& r, const std::string& model = "", const json& params = json::object(),
                    std::optional<std::uint64_t> seed = std::nullopt) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = model;
  j["params"] = params;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["max_anonymity_bits"] = r.max_anonymity_bits;
  j["t_converge"] = r.t_converge ? json(*r.t_converge) : json(nullptr);
  j["criterion"] = to_json(r.criterion);
  j["starts"] = r.starts;
  j["oscillation_detected"] = r.oscillation_detected;
  json trace = json::array();
  for (const auto& p : r.trace) trace.push_back({{"t", p.t}, {"entropy", p.entropy_bits}, {"rpd", p.rpd}});
  j["trace"] = std::move(trace);
  return j;
}

inline void write_trace_csv(const ConvergenceReport& r, std::ostream& out) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "t,entropy_bits,rpd\n";
  for (const auto& p : r.trace) buf << p.t << ',' << p.entropy_bits << ',' << p.rpd << '\n';
  out << buf.str();
}

inline json to_json(const CompromiseEstimate& e) {
  return {{"walk_length", e.walk_length},
          {"n_walks", e.n_walks},
          {"compromised_walks", e.compromised_walks},
          {"compromised_fraction", e.fraction},
          {"sigma", e.sigma},
          {"ci95_half_width", e.ci95}};
}

inline json to_json(const BatchRow& b) {
  return {{"max_degree", b.max_degree}, {"mean_degree", b.mean_degree}, {"p_min", b.p_min}, {"batch_size", b.batch_size}};
}

inline json to_json(const AttackReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  if (!r.estimates.empty()) {
    json est = json::array();
    for (std::size_t i = 0; i < r.estimates.size(); ++i) {
      json e = to_json(r.estimates[i]);
      if (i < r.gilbert_bounds.size()) e["gilbert_bound"] = r.gilbert_bounds[i];
      est.push_back(std::move(e));
    }
    j["compromised_count"] = r.compromised.size();
    j["compromised"] = r.compromised;
    j["estimates"] = std::move(est);
  }
  if (r.pi_mass) j["pi_mass"] = *r.pi_mass;
  if (r.gap) j["gap"] = *r.gap;
  if (r.batch) j["batch"] = to_json(*r.batch);
  return j;
}

/// CSV columns: model, params, mean_degree, p_min, batch_size.
inline void write_batch_csv_header(std::ostream& out) { out << "model,params,mean_degree,p_min,batch_size\n"; }

inline void write_batch_csv_row(std::ostream& out, const std::string& model, const std::string& params,
                                const BatchRow& b) {
  std::ostringstream buf;
  buf.precision(17);
  buf << model << ",\"" << params << "\"," << b.mean_degree << ',' << b.p_min << ',' << b.batch_size << '\n';
  out << buf.str();
}

inline json to_json(const SpectralSummary& s) {
  return {{"schema_version", kSchemaVersion},
          {"lambda2", s.lambda2},
          {"gap", s.gap},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"method", to_string(s.method)}};
}

inline json to_json(const SizeSweep& sweep) {
  json rows = json::array();
  for (const auto& r : sweep.rows)
    rows.push_back({{"n", r.n}, {"mean_lambda2", r.mean_lambda2}, {"stddev", r.stddev}, {"samples", r.samples}});
  return {{"schema_version", kSchemaVersion}, {"rows", rows}, {"spread", sweep.spread()}};
}

inline json to_json(const GeneratorConfig& c) {
  json j{{"model", to_string(c.model)}, {"n", c.n}, {"seed", c.seed}};
  switch (c.model) {
    case Model::ER: j["p"] = c.p; break;
    case Model::BA: j["m"] = c.m; break;
    case Model::SFR:
      if (c.alpha) j["alpha"] = *c.alpha;
      j["beta"] = c.beta;
      if (c.mean_degree) j["mean_degree"] = *c.mean_degree;
      break;
    case Model::KWS:
      j["side"] = c.side;
      j["radius"] = c.radius;
      j["q"] = c.q;
      j["r_exp"] = c.r_exp;
      break;
    case Model::Regular: j["degree"] = c.degree; break;
  }
  return j;
}

}  // namespace mixnet
