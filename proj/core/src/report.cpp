// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "json_detail.hpp"
#include "qbayes/bayesinv.hpp"
#include "qbayes/disint.hpp"
#include "qbayes/modular.hpp"
#include "qbayes/random.hpp"

namespace qbayes {

using nlohmann::json;
using detail::from_algebra;
using detail::from_channel;
using detail::from_matrix;

namespace {

json to_json(const Verdict& v) { return json{{"holds", v.holds}, {"residual", v.residual}, {"scale", v.scale}}; }

json to_json(const UcpVerdict& v) {
  json j{{"hermitian", v.hermitian},
         {"cp", v.cp},
         {"unital", v.unital},
         {"ucp", v.ucp()},
         {"min_eigenvalue", v.min_eigenvalue},
         {"unitality_residual", v.unitality_residual}};
  if (v.witness) {
    j["witness"] = json{{"x", v.witness->target_block}, {"y", v.witness->source_block},
                        {"eigenvalue", v.witness->eigenvalue}};
  }
  return j;
}

json to_json(const BayesVerification& v) {
  return json{{"pairing_residual", v.pairing_residual},
              {"state_residual", v.state_residual},
              {"ucp", to_json(v.ucp)},
              {"passes", v.passes}};
}

json to_json(const DisintegrationReport& r) {
  return json{{"ucp", to_json(r.ucp)},
              {"state_residual", r.state_residual},
              {"state_preserving", r.state_preserving},
              {"ae_left_inverse", to_json(r.ae_left_inverse)},
              {"exact_residual", r.exact_residual},
              {"exact_left_inverse", r.exact_left_inverse},
              {"passes", r.passes()}};
}

json to_json(const ConditionalExpectationReport& r) {
  return json{{"idempotent", to_json(r.idempotent)},
              {"fixes_range", to_json(r.fixes_range)},
              {"bimodular", to_json(r.bimodular)},
              {"positive", to_json(r.positive)},
              {"state_preserving", to_json(r.state_preserving)},
              {"norm_estimate", r.norm_estimate},
              {"norm_one", r.norm_one},
              {"passes", r.passes()}};
}

json to_json(const FactorizationCertificate& c) {
  json blocks = json::array();
  for (const auto& b : c.blocks) {
    blocks.push_back(json{{"x", b.target_block},
                          {"y", b.source_block},
                          {"tau", from_matrix(b.tau)},
                          {"lambda", b.lambda},
                          {"mu", b.mu},
                          {"residual", b.residual}});
  }
  return json{{"p", c.p},
              {"q", c.q},
              {"blocks", std::move(blocks)},
              {"product", to_json(c.product)},
              {"off_diagonal", to_json(c.off_diagonal)},
              {"arithmetic_residual", c.arithmetic_residual},
              {"valid", c.valid}};
}

json optional_channel(const std::optional<Channel>& f) { return f ? from_channel(*f) : json(nullptr); }

json not_applicable(const std::string& why) { return json{{"applicable", false}, {"reason", why}}; }

// Analyses share the battery and existence results.
class Runner {
 public:
  explicit Runner(const Problem& p) : p_(p), tol_(p.tolerances) {}

  const BayesAnalysis& analysis() {
    if (!analysis_) analysis_.emplace(battery(p_.channel, p_.state, tol_));
    return *analysis_;
  }
  const ExistenceResult& exist() {
    if (!existence_) existence_.emplace(existence(analysis(), tol_));
    return *existence_;
  }

  json run(const std::string& name) {
    if (name == "bayes-battery") return bayes_battery();
    if (name == "bayes-existence") return bayes_existence();
    if (name == "disintegrate") return disintegration();
    if (name == "condexp") return condexp();
    if (name == "ac") return ac();
    if (name == "takesaki") return takesaki();
    if (name == "bridge") return bridge();
    throw Error(ErrorKind::InvalidArgument, "unknown analysis \"" + name + "\"");
  }

  json bayes_battery() {
    const BayesAnalysis& a = analysis();
    json items = json::object();
    for (std::size_t k = 0; k < kBatterySize; ++k)
      items[std::string(to_string(static_cast<BatteryItem>(k)))] = to_json(a.battery[k]);
    json j{{"passed", a.battery_passed},
           {"items", std::move(items)},
           {"left_pairing", to_json(a.maps.left_pairing)},
           {"right_pairing", to_json(a.maps.right_pairing)}};
    if (a.battery_passed) j["petz_residual"] = a.petz_residual;
    return j;
  }

  json bayes_existence() {
    const ExistenceResult& e = exist();
    return json{{"evaluated", e.evaluated},
                {"exists", e.exists},
                {"inequality", e.inequality},
                {"gap", e.gap},
                {"gap_scale", e.gap_scale},
                {"range", e.range},
                {"range_residual", e.range_residual},
                {"verification", e.verification ? to_json(*e.verification) : json(nullptr)},
                {"inverse", optional_channel(e.inverse)}};
  }

  // Shared by `check` and `invert --mode disint`.
  std::pair<json, std::optional<Channel>> disintegration_with_result() {
    if (p_.hom) {
      DisintegrationResult r = disintegrate(*p_.hom, p_.state, tol_);
      json j{{"route", "factorization"},
             {"exists", r.exists},
             {"certificate", to_json(r.certificate)},
             {"verification", r.verification ? to_json(*r.verification) : json(nullptr)},
             {"expectation", r.expectation ? to_json(*r.expectation) : json(nullptr)},
             {"g", optional_channel(r.g)}};
      return {std::move(j), std::move(r.g)};
    }
    const ExistenceResult& e = exist();
    std::optional<DisintegrationReport> rep;
    if (e.inverse) rep = verify_disintegration(p_.channel, *e.inverse, p_.state, tol_);
    const bool exists = rep && rep->passes();
    std::optional<Channel> g;
    if (exists) g = *e.inverse;
    json j{{"route", "bayes"},
           {"exists", exists},
           {"verification", rep ? to_json(*rep) : json(nullptr)},
           {"g", optional_channel(g)}};
    return {std::move(j), std::move(g)};
  }

  json disintegration() { return disintegration_with_result().first; }

  json condexp() {
    if (!p_.hom) return not_applicable("requires a *-homomorphism");
    const CondexpCharacterization c = condexp_characterize(*p_.hom, p_.state, tol_);
    json blocks = json::array();
    for (const auto& b : c.blocks)
      blocks.push_back(json{{"x", b.target_block}, {"y", b.source_block}, {"mu", b.mu}, {"lambda", b.lambda}});
    return json{{"applicable", true},
                {"admits", c.admits},
                {"off_diagonal", to_json(c.off_diagonal)},
                {"product", to_json(c.product)},
                {"bookkeeping_residual", c.bookkeeping_residual},
                {"blocks", std::move(blocks)},
                {"expectation", c.report ? to_json(*c.report) : json(nullptr)}};
  }

  json ac() {
    const CornerMap cm = corner_map(p_.channel, p_.state, tol_);
    const Verdict alg = ac_condition_algebraic(cm, tol_);
    const Verdict sampled = ac_condition_sampled(cm, default_t_samples(), tol_);
    return json{{"holds", alg.holds}, {"algebraic", to_json(alg)}, {"sampled", to_json(sampled)}};
  }

  json takesaki() {
    if (!p_.hom) return not_applicable("requires a *-homomorphism");
    const TakesakiReport t = takesaki_battery(*p_.hom, p_.state, tol_);
    return json{{"applicable", true},
                {"corner_multiplicative", to_json(t.corner_multiplicative)},
                {"corner_ac", to_json(t.corner_ac)},
                {"corner_disintegration", t.corner_disintegration},
                {"full_disintegration", t.full_disintegration}};
  }

  json bridge() {
    const BridgeReport b = bayes_disint_bridge(p_.channel, p_.state, p_.hom, tol_);
    return json{{"route", p_.hom ? "factorization" : "bayes"},
                {"disintegration_exists", b.disintegration_exists},
                {"inverse_exists", b.inverse_exists},
                {"ae_deterministic", b.ae_deterministic},
                {"consistent", b.consistent}};
  }

 private:
  const Problem& p_;
  Tolerances tol_;
  std::optional<BayesAnalysis> analysis_;
  std::optional<ExistenceResult> existence_;
};

json header(const Problem& p) {
  return json{{"schema", kReportSchema},
              {"tool", json{{"name", "qbayes"}, {"version", kVersion}}},
              {"tolerances", json{{"eps_rank", p.tolerances.eps_rank},
                                  {"eps_eq", p.tolerances.eps_eq},
                                  {"eps_recon", p.tolerances.eps_recon},
                                  {"eps_abs", p.tolerances.eps_abs}}},
              {"problem", json{{"kind", to_string(p.kind)},
                               {"source", from_algebra(p.channel.source())},
                               {"target", from_algebra(p.channel.target())},
                               {"faithful", is_faithful(p.state, p.tolerances)},
                               {"meta", json::parse(p.meta)}}}};
}

template <class F>
json timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  json j = f();
  const auto t1 = std::chrono::steady_clock::now();
  j["timing_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return j;
}

// Reports print residuals such as -min(eigenvalue); -0.0 carries no meaning there.
void clear_negative_zero(json& j) {
  if (j.is_number_float() && j.get<double>() == 0.0) {
    j = 0.0;
  } else if (j.is_structured()) {
    for (auto& child : j) clear_negative_zero(child);
  }
}

std::string dump(json j, bool pretty) {
  clear_negative_zero(j);
  return j.dump(pretty ? 2 : -1) + "\n";
}

std::vector<std::string> choose(const Problem& p, const std::vector<std::string>& requested) {
  const std::vector<std::string>& base = !requested.empty() ? requested : !p.analyses.empty() ? p.analyses
                                                                                              : all_analyses();
  for (const auto& a : base) {
    if (std::find(all_analyses().begin(), all_analyses().end(), a) == all_analyses().end()) {
      throw Error(ErrorKind::InvalidArgument, "unknown analysis \"" + a + "\"");
    }
  }
  return base;
}

}  // namespace

const std::vector<std::string>& all_analyses() {
  static const std::vector<std::string> names = {"bayes-battery", "bayes-existence", "disintegrate", "condexp",
                                                 "ac",            "takesaki",        "bridge"};
  return names;
}

std::string run_check(const Problem& problem, const std::vector<std::string>& analyses, bool pretty) {
  Runner runner(problem);
  json report = header(problem);
  json out = json::object();
  for (const auto& name : choose(problem, analyses)) out[name] = timed([&] { return runner.run(name); });
  report["analyses"] = std::move(out);
  return dump(report, pretty);
}

InvertOutcome run_invert(const Problem& problem, InvertMode mode, bool pretty) {
  Runner runner(problem);
  json report = header(problem);
  InvertOutcome outcome;
  if (mode == InvertMode::Bayes) {
    json body = timed([&] {
      json j = runner.bayes_existence();
      j["battery_passed"] = runner.analysis().battery_passed;
      j.erase("inverse");
      return j;
    });
    outcome.result = runner.exist().inverse;
    report["invert"] = json{{"mode", "bayes"}, {"result", std::move(body)}, {"written", outcome.result.has_value()}};
  } else {
    json body = timed([&] {
      auto [j, g] = runner.disintegration_with_result();
      outcome.result = std::move(g);
      j.erase("g");
      return j;
    });
    report["invert"] = json{{"mode", "disint"}, {"result", std::move(body)}, {"written", outcome.result.has_value()}};
  }
  outcome.report = dump(report, pretty);
  return outcome;
}

std::string run_verify(const Problem& problem, const Channel& g, InvertMode mode, bool pretty) {
  json report = header(problem);
  if (mode == InvertMode::Bayes) {
    report["verify"] = json{{"mode", "bayes"},
                            {"result", to_json(verify_bayes(problem.channel, g, problem.state, problem.tolerances))}};
  } else {
    report["verify"] =
        json{{"mode", "disint"},
             {"result", to_json(verify_disintegration(problem.channel, g, problem.state, problem.tolerances))}};
  }
  return dump(report, pretty);
}

std::optional<RandomKind> parse_random_kind(std::string_view name) {
  if (name == "product") return RandomKind::Product;
  if (name == "nonproduct") return RandomKind::NonProduct;
  if (name == "rankdef") return RandomKind::RankDeficient;
  if (name == "kraus") return RandomKind::Kraus;
  if (name == "hom") return RandomKind::Hom;
  return std::nullopt;
}

namespace {

std::string_view kind_name(RandomKind k) {
  switch (k) {
    case RandomKind::Product: return "product";
    case RandomKind::NonProduct: return "nonproduct";
    case RandomKind::RankDeficient: return "rankdef";
    case RandomKind::Kraus: return "kraus";
    case RandomKind::Hom: return "hom";
  }
  return "?";
}

std::vector<KrausOperator> random_kraus(Rng& rng, const MultiMatrixAlgebra& src, const MultiMatrixAlgebra& tgt,
                                        std::size_t rank) {
  std::vector<KrausOperator> ops;
  for (std::size_t x = 0; x < tgt.num_blocks(); ++x) {
    const std::size_t m = tgt.block_dim(x);
    std::vector<KrausOperator> raw;
    CMatrix s(m, m);
    for (std::size_t y = 0; y < src.num_blocks(); ++y)
      for (std::size_t k = 0; k < rank; ++k) {
        CMatrix g = random_ginibre(rng, src.block_dim(y), m);
        s += g.adjoint() * g;
        raw.push_back({x, y, std::move(g)});
      }
    const CMatrix s_inv_half = psd_power(s, Complex(-0.5, 0.0));
    for (auto& k : raw) {
      k.op = k.op * s_inv_half;
      ops.push_back(std::move(k));
    }
  }
  return ops;
}

HomSpec hom_between(Rng& rng, const MultiMatrixAlgebra& src, const MultiMatrixAlgebra& tgt) {
  auto h = random_homspec_between(rng, src, tgt);
  if (!h) throw Error(ErrorKind::InvalidArgument, "no unital embedding between the requested shapes");
  return *std::move(h);
}

}  // namespace

Problem random_problem(RandomKind kind, const std::vector<std::size_t>& source_dims,
                       const std::vector<std::size_t>& target_dims, std::uint64_t seed, const Tolerances& tol) {
  const MultiMatrixAlgebra src(source_dims);
  const MultiMatrixAlgebra tgt(target_dims);
  Rng rng(seed);
  const json meta{{"generator", json{{"kind", kind_name(kind)},
                                     {"seed", seed},
                                     {"source", source_dims},
                                     {"target", target_dims}}}};
  if (kind == RandomKind::Kraus) {
    const std::size_t rank = rng.integer(1, 2);
    auto ops = random_kraus(rng, src, tgt, rank);
    Channel f = Channel::from_kraus(src, tgt, ops);
    State s = random_state(rng, tgt, rng.coin());
    return Problem{ChannelKind::Kraus, std::move(f), std::nullopt, std::move(ops), std::move(s), tol, {}, meta.dump()};
  }
  HomSpec h = hom_between(rng, src, tgt);
  std::optional<State> state;
  constexpr int kAttempts = 64;
  for (int attempt = 0; attempt < kAttempts && !state; ++attempt) {
    switch (kind) {
      case RandomKind::Product: state = random_factorizable_state(rng, h, true); break;
      case RandomKind::NonProduct: {
        State s = random_state(rng, tgt, true);
        if (!factorize(h, s, tol).valid) state = std::move(s);
        break;
      }
      case RandomKind::RankDeficient: {
        State s = random_state(rng, tgt, false);
        if (!is_faithful(s, tol)) state = std::move(s);
        break;
      }
      default: state = random_state(rng, tgt, rng.coin()); break;
    }
  }
  if (!state) throw Error(ErrorKind::InvalidArgument, "could not draw a state of the requested kind for this embedding");
  Channel f = Channel::from_hom(h);
  return Problem{ChannelKind::Hom, std::move(f), std::move(h), {}, *std::move(state), tol, {}, meta.dump()};
}

int exit_code(const Error& e) noexcept {
  if (e.is_input_error()) return 2;
  if (e.kind() == ErrorKind::InternalInconsistency || e.kind() == ErrorKind::ExtensionFailure) return 3;
  return 1;
}

}  // namespace qbayes
