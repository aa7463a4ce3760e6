// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "instances.hpp"
#include "oracles.hpp"
#include "qbayes/bayesinv.hpp"
#include "qbayes/disint.hpp"
#include "qbayes/error.hpp"
#include "qbayes/io.hpp"
#include "qbayes/modular.hpp"
#include "qbayes/report.hpp"

using namespace qbayes;
using namespace qbayes::testing;

namespace {

constexpr double kLimit = 1e-8;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Problem fixture(const std::string& name) {
  return parse_problem(read_file(std::string(QBAYES_FIXTURE_DIR) + "/" + name), Tolerances{});
}

double rel_or_abs(double residual, double scale) { return scale > 0.0 ? residual / scale : residual; }

Outcome penrose() {
  Rng rng(1001);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = rng.integer(1, 8);
    const std::size_t r = rng.integer(0, n);
    const CMatrix a = random_psd(rng, n, r) * rng.uniform(0.1, 10.0);
    const CMatrix x = pseudoinverse(a);
    const CMatrix ax = a * x, xa = x * a;
    worst = std::max({worst, rel_or_abs(frobenius_norm(a * x * a - a), frobenius_norm(a)),
                      rel_or_abs(frobenius_norm(x * a * x - x), frobenius_norm(x)),
                      rel_or_abs(frobenius_norm(ax - ax.adjoint()), frobenius_norm(ax)),
                      rel_or_abs(frobenius_norm(xa - xa.adjoint()), frobenius_norm(xa))});
  }
  return {worst <= kLimit, "200 PSD matrices, max relative residual " + fmt("%.2e", worst)};
}

Outcome modular() {
  Rng rng(1002);
  const std::vector<double> ts = {0.5, -0.5, std::numbers::pi, -1.1};
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    std::vector<std::size_t> dims(rng.integer(1, 3));
    for (auto& d : dims) d = rng.integer(1, 4);
    const MultiMatrixAlgebra a(dims);
    const State w = random_state(rng, a, true);
    const ModularFlow flow(w);
    const auto units = matrix_units(a);
    for (double t : ts) {
      for (const auto& u : units) {
        const AlgebraElement mt = flow.at(t, u);
        worst = std::max(worst, std::abs(w.evaluate(mt) - w.evaluate(u)));
        for (double s : ts) worst = std::max(worst, relative_difference(flow.at(t + s, u), flow.at(t, flow.at(s, u))));
      }
    }
  }
  return {worst <= kLimit, "50 faithful states, max residual " + fmt("%.2e", worst)};
}

Outcome ac_dual() {
  Rng rng(1003);
  std::size_t disagree = 0, holds = 0, faithful = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    const Instance inst = k % 2 ? matrix_instance(rng, k / 2) : multi_instance(rng, k / 2);
    faithful += is_faithful(inst.omega) ? 1 : 0;
    try {
      const CornerMap cm = corner_map(inst.f, inst.omega);
      const Verdict alg = ac_condition_algebraic(cm);
      const Verdict smp = ac_condition_sampled(cm, default_t_samples());
      disagree += alg.holds != smp.holds ? 1 : 0;
      holds += alg.holds ? 1 : 0;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InternalInconsistency) throw;
      ++disagree;
    }
  }
  return {disagree == 0, "200 instances (" + std::to_string(faithful) + " faithful, " + std::to_string(holds) +
                             " satisfy AC), disagreements " + std::to_string(disagree)};
}

std::vector<Instance> battery_corpus() {
  Rng rng(1004);
  std::vector<Instance> out;
  for (std::size_t k = 0; k < 200; ++k) out.push_back(matrix_instance(rng, k));
  return out;
}

Outcome battery_agreement(const std::vector<Instance>& corpus) {
  std::size_t inconsistent = 0, passed = 0;
  for (const auto& inst : corpus) {
    try {
      passed += battery(inst.f, inst.omega).battery_passed ? 1 : 0;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InternalInconsistency) throw;
      ++inconsistent;
    }
  }
  return {inconsistent == 0, "200 single-block instances (" + std::to_string(passed) +
                                 " pass the battery), inconsistency events " + std::to_string(inconsistent)};
}

// Petz map built from matrix-unit images alone, and the Bayes pairing
// checked on every pair of matrix units.
double petz_pairing_residual(const Instance& inst) {
  const BlockMap fm = block_map(inst.f);
  const std::vector<EMat> rho = weighted_blocks(inst.omega);
  const auto& nd = fm.source_dims;
  const auto& md = fm.target_dims;
  // images[y][k][l] = F(E^y_kl) blocks.
  std::vector<std::vector<std::vector<std::vector<EMat>>>> img(nd.size());
  for (std::size_t y = 0; y < nd.size(); ++y) {
    img[y].assign(nd[y], std::vector<std::vector<EMat>>(nd[y]));
    for (std::size_t k = 0; k < nd[y]; ++k)
      for (std::size_t l = 0; l < nd[y]; ++l) img[y][k][l] = fm.image(y, k, l);
  }
  auto adjoint = [&](const std::vector<EMat>& x) {
    std::vector<EMat> out;
    for (std::size_t y = 0; y < nd.size(); ++y) {
      EMat b = EMat::Zero(nd[y], nd[y]);
      for (std::size_t k = 0; k < nd[y]; ++k)
        for (std::size_t l = 0; l < nd[y]; ++l)
          for (std::size_t xb = 0; xb < md.size(); ++xb) b(k, l) += (img[y][k][l][xb].adjoint() * x[xb]).trace();
      out.push_back(b);
    }
    return out;
  };
  const std::vector<EMat> sigma = adjoint(rho);
  std::vector<EMat> rs, sis;
  for (const auto& r : rho) rs.push_back(eigen_sqrt_psd(r));
  for (const auto& s : sigma) sis.push_back(eigen_sqrt_psd(eigen_pinv(s)));
  double worst = 0.0;
  for (std::size_t xb = 0; xb < md.size(); ++xb)
    for (std::size_t i = 0; i < md[xb]; ++i)
      for (std::size_t j = 0; j < md[xb]; ++j) {
        std::vector<EMat> a;
        for (std::size_t z = 0; z < md.size(); ++z) a.push_back(EMat::Zero(md[z], md[z]));
        a[xb](i, j) = 1.0;
        std::vector<EMat> inner;
        for (std::size_t z = 0; z < md.size(); ++z) inner.push_back(rs[z] * a[z] * rs[z]);
        std::vector<EMat> g = adjoint(inner);
        for (std::size_t y = 0; y < nd.size(); ++y) g[y] = sis[y] * g[y] * sis[y];
        for (std::size_t y = 0; y < nd.size(); ++y)
          for (std::size_t k = 0; k < nd[y]; ++k)
            for (std::size_t l = 0; l < nd[y]; ++l) {
              // xi(G(A) E_kl) = (sigma G(A))_{lk};  omega(A F(E_kl)) = sum_z tr(rho_z A_z F_z(E_kl)).
              const std::complex<double> lhs = (sigma[y] * g[y])(l, k);
              std::complex<double> rhs = 0.0;
              for (std::size_t z = 0; z < md.size(); ++z) rhs += (rho[z] * a[z] * img[y][k][l][z]).trace();
              worst = std::max(worst, std::abs(lhs - rhs));
            }
      }
  return worst;
}

Outcome petz(const std::vector<Instance>& corpus) {
  std::size_t checked = 0;
  double worst = 0.0;
  Rng rng(1005);
  std::vector<Instance> pool = corpus;
  for (std::size_t k = 0; k < 60; ++k) pool.push_back(multi_instance(rng, k));
  for (const auto& inst : pool) {
    if (!is_faithful(inst.omega) || !is_faithful(pullback(inst.omega, inst.f))) continue;
    if (!battery(inst.f, inst.omega).battery_passed) continue;
    ++checked;
    worst = std::max(worst, petz_pairing_residual(inst));
  }
  return {checked > 0 && worst <= kLimit,
          std::to_string(checked) + " battery-passing faithful instances, max pairing residual " + fmt("%.2e", worst)};
}

Outcome product_fixture() {
  const Problem p = fixture("product.json");
  const DisintegrationResult r = disintegrate(*p.hom, p.state);
  if (!r.exists || !r.g || !r.expectation) return {false, "no disintegration constructed"};
  const EMat tau = to_eigen(CMatrix::diagonal({0.3, 0.7}));
  double g_res = 0.0;
  for (const auto& u : matrix_units(p.channel.target())) {
    const EMat a = to_eigen(u.block(0));
    const EMat ta = eigen_kron(tau, EMat::Identity(2, 2)) * a;
    EMat expected = EMat::Zero(2, 2);
    for (int c = 0; c < 2; ++c) expected += ta.block(2 * c, 2 * c, 2, 2);
    g_res = std::max(g_res, (to_eigen(r.g->apply(u).block(0)) - expected).norm());
  }
  const auto& e = *r.expectation;
  const bool ok = g_res <= kLimit && r.verification->passes() && e.idempotent.residual <= kLimit &&
                  e.bimodular.residual <= kLimit && e.state_preserving.residual <= kLimit && e.passes();
  return {ok, "G vs tau-partial trace " + fmt("%.1e", g_res) + ", E^2=E " + fmt("%.1e", e.idempotent.residual) +
                  ", bimodular " + fmt("%.1e", e.bimodular.residual) + ", omega o E " +
                  fmt("%.1e", e.state_preserving.residual)};
}

Outcome epr_fixture() {
  const Problem p = fixture("epr.json");
  const CornerMap cm = corner_map(p.channel, p.state);
  const bool ac = ac_condition_algebraic(cm).holds && ac_condition_sampled(cm, default_t_samples()).holds;
  const bool hom = is_multiplicative(cm.map).holds;
  const bool dis = disintegrate(*p.hom, p.state).exists;
  const bool ce = condexp_characterize(*p.hom, p.state).admits;
  const bool ok = ac && !hom && !dis && !ce;
  return {ok, std::string("ac=") + (ac ? "true" : "false") + " corner-hom=" + (hom ? "true" : "false") +
                  " disintegration=" + (dis ? "true" : "false") + " condexp=" + (ce ? "true" : "false")};
}

Outcome reverse_fixture() {
  const Problem p = fixture("reverse.json");
  const CornerMap cm = corner_map(p.channel, p.state);
  const bool faithful = is_faithful(p.state);
  const bool hom = is_multiplicative(cm.map).holds;
  const bool ac = ac_condition_algebraic(cm).holds;
  const bool dis = disintegrate(*p.hom, p.state).exists;
  const bool ok = faithful && hom && !ac && !dis;
  return {ok, std::string("faithful=") + (faithful ? "true" : "false") + " corner-hom=" + (hom ? "true" : "false") +
                  " ac=" + (ac ? "true" : "false") + " disintegration=" + (dis ? "true" : "false")};
}

Outcome bridge() {
  std::vector<Instance> pool;
  for (const auto& path : fixture_paths()) pool.push_back(from_problem(parse_problem(read_file(path), Tolerances{}), path));
  const std::size_t fixtures = pool.size();
  Rng rng(1009);
  for (std::size_t k = 0; k < 100; ++k) pool.push_back(k % 2 ? matrix_instance(rng, k / 2) : multi_instance(rng, k / 2));
  std::size_t violations = 0, disint = 0;
  for (const auto& inst : pool) {
    try {
      const BridgeReport b = bayes_disint_bridge(inst.f, inst.omega, inst.hom);
      disint += b.disintegration_exists ? 1 : 0;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InternalInconsistency) throw;
      ++violations;
    }
  }
  return {violations == 0, std::to_string(fixtures) + " fixtures + 100 seeded (" + std::to_string(disint) +
                               " disintegrable), violations " + std::to_string(violations)};
}

Outcome existence_fixtures() {
  auto oracle = [](const Problem& p) {
    return bayes_feasibility(block_map(p.channel), weighted_blocks(p.state),
                             weighted_blocks(pullback(p.state, p.channel)));
  };
  const Problem gap = fixture("bayes_gap.json");
  const BayesAnalysis ga = battery(gap.channel, gap.state);
  const ExistenceResult ge = existence(ga);
  const FeasibilityResult go = oracle(gap);
  const Problem ext = fixture("bayes_extend.json");
  const BayesAnalysis ea = battery(ext.channel, ext.state);
  const ExistenceResult ee = existence(ea);
  const FeasibilityResult eo = oracle(ext);
  const bool ok = ga.battery_passed && !ge.inequality && !ge.exists && go.infeasible && ea.battery_passed &&
                  !is_faithful(ext.state) && ee.inequality && ee.exists && ee.verification &&
                  ee.verification->passes && eo.feasible;
  return {ok, "failing fixture gap " + fmt("%.3f", ge.gap) + ", oracle certificate " + fmt("%.2e", go.certificate) +
                  "; passing fixture gap " + fmt("%.3f", ee.gap) + ", extension pairing residual " +
                  fmt("%.1e", ee.verification ? ee.verification->pairing_residual : -1.0)};
}

Outcome condexp_vs_factorize() {
  Rng rng(1011);
  std::size_t disagree = 0, admits = 0, bad_expectation = 0;
  double arithmetic = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<std::size_t> dims(rng.integer(1, 2));
    for (auto& d : dims) d = rng.integer(1, 3);
    const HomSpec h = random_homspec(rng, MultiMatrixAlgebra(dims), rng.integer(1, 2), 2);
    std::optional<State> w;
    if (k % 2 == 0) {
      try {
        w = random_factorizable_state(rng, h, k % 4 == 0);
      } catch (const Error&) {
        w = random_factorizable_state(rng, h, true);
      }
    } else {
      w = random_state(rng, h.target(), k % 3 != 0);
    }
    const auto cert = factorize(h, *w);
    const auto ch = condexp_characterize(h, *w);
    arithmetic = std::max(arithmetic, cert.arithmetic_residual);
    disagree += cert.valid != ch.admits ? 1 : 0;
    if (ch.admits) {
      ++admits;
      bad_expectation += ch.report && ch.report->passes() ? 0 : 1;
    }
  }
  return {disagree == 0 && arithmetic <= kLimit && bad_expectation == 0,
          "100 multi-matrix instances (" + std::to_string(admits) + " admit), disagreements " +
              std::to_string(disagree) + ", arithmetic residual " + fmt("%.1e", arithmetic)};
}

Outcome cli_determinism() {
  std::size_t mismatches = 0, count = 0;
  for (const auto& path : fixture_paths()) {
    ++count;
    const Problem p = parse_problem(read_file(path), Tolerances{});
    const std::string first = strip_timing(run_check(p));
    const std::string second = strip_timing(run_check(p));
    const std::string text = serialize_problem(p);
    const Problem q = parse_problem(text, Tolerances{});
    const std::string third = strip_timing(run_check(q));
    if (first != second || first != third || serialize_problem(q) != text) ++mismatches;
  }
  return {mismatches == 0, std::to_string(count) + " fixtures, mismatches " + std::to_string(mismatches)};
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Instance> corpus = battery_corpus();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"penrose-identities", penrose},
      {"modular-group", modular},
      {"ac-dual-method", ac_dual},
      {"battery-agreement", [&] { return battery_agreement(corpus); }},
      {"petz-bayes-oracle", [&] { return petz(corpus); }},
      {"product-fixture", product_fixture},
      {"epr-fixture", epr_fixture},
      {"reverse-fixture", reverse_fixture},
      {"bridge-gate", bridge},
      {"existence-inequality", existence_fixtures},
      {"condexp-vs-factorize", condexp_vs_factorize},
      {"report-determinism", cli_determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %02zu %-22s %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %zu criteria failed (%.1f s)\n", failures, criteria.size(), secs);
  return failures;
}
