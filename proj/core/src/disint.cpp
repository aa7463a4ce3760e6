// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/disint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbayes/bayesinv.hpp"
#include "qbayes/error.hpp"
#include "qbayes/random.hpp"

namespace qbayes {

namespace {

bool column_missed(const HomSpec& h, std::size_t j) {
  for (std::size_t i = 0; i < h.target().num_blocks(); ++i)
    if (h.multiplicity(i, j) != 0) return false;
  return true;
}

// taus[i][j] for every pair with c_ij != 0. Columns with all tau zero are
// replaced by maximally mixed ones so that sum_i tr(tau_ij) = 1.
Channel channel_from_taus(const HomSpec& h, std::vector<std::vector<CMatrix>> taus) {
  const MultiMatrixAlgebra& a_alg = h.target();
  const MultiMatrixAlgebra& b_alg = h.source();
  const std::size_t s = a_alg.num_blocks();
  std::vector<bool> uniform(b_alg.num_blocks(), false);
  for (std::size_t j = 0; j < b_alg.num_blocks(); ++j) {
    if (column_missed(h, j)) {
      uniform[j] = true;
      continue;
    }
    double mass = 0.0;
    std::size_t copies = 0;
    for (std::size_t i = 0; i < s; ++i) {
      if (h.multiplicity(i, j) == 0) continue;
      mass += taus[i][j].trace().real();
      copies += h.multiplicity(i, j);
    }
    if (mass > 0.0) continue;
    for (std::size_t i = 0; i < s; ++i) {
      const std::size_t c = h.multiplicity(i, j);
      if (c != 0) taus[i][j] = CMatrix::identity(c) * (1.0 / static_cast<double>(copies));
    }
  }
  return Channel::from_function(a_alg, b_alg, [&](const AlgebraElement& a) {
    AlgebraElement out = AlgebraElement::zero(b_alg);
    for (std::size_t j = 0; j < b_alg.num_blocks(); ++j) {
      const std::size_t n = b_alg.block_dim(j);
      if (uniform[j]) {
        Complex t = 0.0;
        for (std::size_t i = 0; i < s; ++i)
          t += a.block(i).trace() / static_cast<double>(s * a_alg.block_dim(i));
        out.block(j) = CMatrix::identity(n) * t;
        continue;
      }
      for (std::size_t i = 0; i < s; ++i) {
        const std::size_t c = h.multiplicity(i, j);
        if (c == 0) continue;
        const std::size_t off = h.offset(i, j);
        const CMatrix sub = a.block(i).block(off, off, c * n, c * n);
        out.block(j) += partial_trace_left(kron(taus[i][j], CMatrix::identity(n)) * sub, c, n);
      }
    }
    return out;
  });
}

double power_iteration_norm(const CMatrix& m) {
  const std::size_t n = m.cols();
  if (n == 0) return 0.0;
  const CMatrix mm = m.adjoint() * m;
  CMatrix v(n, 1);
  for (std::size_t i = 0; i < n; ++i) v(i, 0) = Complex(1.0, 0.1 * static_cast<double>(i + 1));
  double estimate = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double vn = frobenius_norm(v);
    if (vn == 0.0) return 0.0;
    v *= 1.0 / vn;
    const CMatrix w = mm * v;
    const double next = std::sqrt(std::max(0.0, hs_inner(v, w).real()));
    v = w;
    if (std::abs(next - estimate) <= 1e-15 * std::max(1.0, next)) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

}  // namespace

FactorizationCertificate factorize(const HomSpec& h, const State& omega, const Tolerances& tol) {
  require_in(h.target(), omega.weighted_density(), "factorize");
  const State xi = pullback(omega, h, tol);
  FactorizationCertificate cert;
  cert.p = omega.weights();
  cert.q = xi.weights();
  ResidualMax product, off;
  for (std::size_t i = 0; i < h.target().num_blocks(); ++i) {
    const CMatrix& w = omega.weighted_density().block(i);
    const double norm_i = frobenius_norm(w);
    const double pi = cert.p[i];
    for (std::size_t u = 0; u < h.source().num_blocks(); ++u)
      for (std::size_t v = 0; v < h.source().num_blocks(); ++v) {
        if (u == v || h.multiplicity(i, u) == 0 || h.multiplicity(i, v) == 0 || pi == 0.0) continue;
        const std::size_t su = h.multiplicity(i, u) * h.source().block_dim(u);
        const std::size_t sv = h.multiplicity(i, v) * h.source().block_dim(v);
        off.add(frobenius_norm(w.block(h.offset(i, u), h.offset(i, v), su, sv)) / norm_i, 1.0);
      }
    for (std::size_t j = 0; j < h.source().num_blocks(); ++j) {
      const std::size_t c = h.multiplicity(i, j);
      if (c == 0) continue;
      const std::size_t n = h.source().block_dim(j);
      const std::size_t off_ij = h.offset(i, j);
      const CMatrix sub = w.block(off_ij, off_ij, c * n, c * n);
      FactorBlock fb{i, j, CMatrix(c, c)};
      if (pi > 0.0) {
        if (cert.q[j] > 0.0) {
          fb.tau = partial_trace_right(sub, c, n) * (1.0 / cert.q[j]);
          fb.residual = frobenius_norm(sub - kron(fb.tau * cert.q[j], *xi.density(j))) / norm_i;
        } else {
          fb.residual = frobenius_norm(sub) / norm_i;
        }
        fb.mu = sub.trace().real() / pi;
      }
      fb.lambda = fb.tau.trace().real();
      product.add(fb.residual, 1.0);
      cert.blocks.push_back(std::move(fb));
    }
  }
  for (std::size_t i = 0; i < h.target().num_blocks(); ++i) {
    double s = 0.0;
    for (const auto& fb : cert.blocks)
      if (fb.target_block == i) s += fb.lambda * cert.q[fb.source_block];
    cert.arithmetic_residual = std::max(cert.arithmetic_residual, std::abs(s - cert.p[i]));
  }
  for (std::size_t j = 0; j < h.source().num_blocks(); ++j) {
    if (cert.q[j] == 0.0) continue;
    double s = 0.0;
    for (const auto& fb : cert.blocks)
      if (fb.source_block == j) s += fb.lambda;
    cert.arithmetic_residual = std::max(cert.arithmetic_residual, std::abs(s - 1.0));
  }
  cert.product = product.verdict(tol);
  cert.off_diagonal = off.verdict(tol);
  cert.valid = cert.product.holds && cert.off_diagonal.holds;
  return cert;
}

Channel build_disintegration(const FactorizationCertificate& cert, const HomSpec& h, const State& omega,
                             const Tolerances& tol) {
  (void)tol;
  require_in(h.target(), omega.weighted_density(), "build_disintegration");
  if (!cert.valid) throw Error(ErrorKind::InvalidCertificate, "factorization certificate did not verify");
  if (cert.p.size() != h.target().num_blocks() || cert.q.size() != h.source().num_blocks()) {
    throw Error(ErrorKind::InvalidCertificate, "certificate does not match the homomorphism");
  }
  std::vector<std::vector<CMatrix>> taus(h.target().num_blocks(), std::vector<CMatrix>(h.source().num_blocks()));
  for (const auto& fb : cert.blocks) {
    if (fb.tau.rows() != h.multiplicity(fb.target_block, fb.source_block)) {
      throw Error(ErrorKind::InvalidCertificate, "tau has the wrong size");
    }
    taus[fb.target_block][fb.source_block] = fb.tau;
  }
  for (std::size_t i = 0; i < taus.size(); ++i)
    for (std::size_t j = 0; j < taus[i].size(); ++j)
      if (h.multiplicity(i, j) != 0 && taus[i][j].empty()) {
        throw Error(ErrorKind::InvalidCertificate, "certificate is missing a block");
      }
  return channel_from_taus(h, std::move(taus));
}

DisintegrationReport verify_disintegration(const Channel& f, const Channel& g, const State& omega,
                                           const Tolerances& tol) {
  if (!(g.source() == f.target()) || !(g.target() == f.source())) {
    throw Error(ErrorKind::ShapeMismatch, "verify_disintegration: G must map the target of F back to its source");
  }
  const State xi = pullback(omega, f, tol);
  DisintegrationReport rep;
  rep.ucp = is_ucp(g, tol);
  for (const auto& e : matrix_units(f.target())) {
    rep.state_residual = std::max(rep.state_residual, std::abs(xi.evaluate(g.apply(e)) - omega.evaluate(e)));
  }
  rep.state_preserving = within(rep.state_residual, 1.0, tol);
  const Channel gf = compose(g, f);
  const Channel id = Channel::identity(f.source());
  rep.ae_left_inverse = ae_equal(gf, id, xi, tol);
  rep.exact_residual = relative_difference(gf, id);
  rep.exact_left_inverse = rep.exact_residual <= tol.eps_eq;
  return rep;
}

ConditionalExpectationReport check_conditional_expectation(const HomSpec& h, const Channel& e, const State& omega,
                                                           const Tolerances& tol) {
  if (!(e.source() == h.target()) || !(e.target() == h.target())) {
    throw Error(ErrorKind::ShapeMismatch, "conditional expectation must act on the target of the inclusion");
  }
  ConditionalExpectationReport rep;
  const double idem = relative_difference(compose(e, e), e);
  rep.idempotent = Verdict{idem <= tol.eps_eq, idem, 1.0};

  const auto a_units = matrix_units(h.target());
  std::vector<AlgebraElement> ea;
  for (const auto& a : a_units) ea.push_back(e.apply(a));
  ResidualMax fixes, bimod;
  for (const auto& b : matrix_units(h.source())) {
    const AlgebraElement fb = apply_hom(h, b);
    const AlgebraElement efb = e.apply(fb);
    fixes.add(frobenius_norm(efb - fb), frobenius_norm(fb));
    for (std::size_t k = 0; k < a_units.size(); ++k) {
      const AlgebraElement l1 = e.apply(fb * a_units[k]);
      const AlgebraElement r1 = fb * ea[k];
      const AlgebraElement l2 = e.apply(a_units[k] * fb);
      const AlgebraElement r2 = ea[k] * fb;
      bimod.add(frobenius_norm(l1 - r1), std::max(frobenius_norm(l1), frobenius_norm(r1)));
      bimod.add(frobenius_norm(l2 - r2), std::max(frobenius_norm(l2), frobenius_norm(r2)));
    }
  }
  rep.fixes_range = fixes.verdict(tol);
  rep.bimodular = bimod.verdict(tol);
  rep.positive = is_ucp(e, tol);

  ResidualMax state;
  for (std::size_t k = 0; k < a_units.size(); ++k)
    state.add(std::abs(omega.evaluate(ea[k]) - omega.evaluate(a_units[k])), 1.0);
  rep.state_preserving = state.verdict(tol);

  // Sup over unitaries equals the norm of a positive map; sample a few.
  auto element_norm = [](const AlgebraElement& x) {
    double n = 0.0;
    for (const auto& b : x.blocks()) n = std::max(n, power_iteration_norm(b));
    return n;
  };
  Rng rng(0x51a7e);
  rep.norm_estimate = element_norm(e.apply(AlgebraElement::unit(h.target())));
  for (int k = 0; k < 8; ++k) {
    std::vector<CMatrix> blocks;
    for (std::size_t d : h.target().block_dims()) blocks.push_back(random_unitary(rng, d));
    rep.norm_estimate = std::max(rep.norm_estimate, element_norm(e.apply(AlgebraElement(h.target(), blocks))));
  }
  rep.norm_one = std::abs(rep.norm_estimate - 1.0) <= tol.eps_eq;
  return rep;
}

CondexpCharacterization condexp_characterize(const HomSpec& h, const State& omega, const Tolerances& tol) {
  require_in(h.target(), omega.weighted_density(), "condexp_characterize");
  const State xi = pullback(omega, h, tol);
  CondexpCharacterization out;
  for (std::size_t j = 0; j < h.source().num_blocks(); ++j)
    out.sigma.push_back(xi.density(j) ? *xi.density(j) : CMatrix());
  ResidualMax off, product;
  for (std::size_t i = 0; i < h.target().num_blocks(); ++i) {
    const auto& rho_opt = omega.density(i);
    for (std::size_t j = 0; j < h.source().num_blocks(); ++j) {
      const std::size_t c = h.multiplicity(i, j);
      if (c == 0) continue;
      CondexpBlock blk{i, j, 0.0, 0.0, CMatrix(c, c)};
      if (rho_opt) {
        const CMatrix& rho = *rho_opt;
        const double norm_i = frobenius_norm(rho);
        const std::size_t n = h.source().block_dim(j);
        const std::size_t o = h.offset(i, j);
        const CMatrix sub = rho.block(o, o, c * n, c * n);
        blk.mu = sub.trace().real();
        for (std::size_t v = 0; v < h.source().num_blocks(); ++v) {
          if (v == j || h.multiplicity(i, v) == 0) continue;
          const std::size_t sv = h.multiplicity(i, v) * h.source().block_dim(v);
          off.add(frobenius_norm(rho.block(o, h.offset(i, v), c * n, sv)) / norm_i, 1.0);
        }
        if (blk.mu > 0.0 && xi.density(j)) {
          blk.tau = partial_trace_right(sub, c, n) * (1.0 / blk.mu);
          product.add(frobenius_norm(sub - kron(blk.tau * blk.mu, *xi.density(j))) / norm_i, 1.0);
          blk.lambda = blk.mu * omega.weight(i) / xi.weight(j);
        } else {
          product.add(frobenius_norm(sub) / norm_i, 1.0);
        }
      }
      out.blocks.push_back(std::move(blk));
    }
  }
  for (std::size_t i = 0; i < h.target().num_blocks(); ++i) {
    if (omega.weight(i) == 0.0) continue;
    double s = 0.0;
    for (const auto& b : out.blocks)
      if (b.target_block == i) s += b.mu;
    out.bookkeeping_residual = std::max(out.bookkeeping_residual, std::abs(s - 1.0));
  }
  for (std::size_t j = 0; j < h.source().num_blocks(); ++j) {
    double s = 0.0;
    for (const auto& b : out.blocks)
      if (b.source_block == j) s += b.mu * omega.weight(b.target_block);
    out.bookkeeping_residual = std::max(out.bookkeeping_residual, std::abs(s - xi.weight(j)));
  }
  out.off_diagonal = off.verdict(tol);
  out.product = product.verdict(tol);
  out.admits = out.off_diagonal.holds && out.product.holds;
  if (!out.admits) return out;

  std::vector<std::vector<CMatrix>> taus(h.target().num_blocks(), std::vector<CMatrix>(h.source().num_blocks()));
  for (const auto& b : out.blocks) taus[b.target_block][b.source_block] = b.tau * b.lambda;
  const Channel g = channel_from_taus(h, std::move(taus));
  Channel e = compose(Channel::from_hom(h), g);
  out.report = check_conditional_expectation(h, e, omega, tol);
  out.expectation = std::move(e);
  return out;
}

TakesakiReport takesaki_battery(const HomSpec& h, const State& omega, const Tolerances& tol) {
  const Channel f = Channel::from_hom(h);
  const CornerMap cm = corner_map(f, omega, tol);
  TakesakiReport rep;
  rep.corner_multiplicative = is_multiplicative(cm.map, tol);
  rep.corner_ac = ac_condition_algebraic(cm, tol);
  ac_condition_sampled(cm, default_t_samples(), tol);  // throws on disagreement

  // On the corner both states are faithful, so the only candidate is Petz.
  const DensitySpectrum rs(cm.omega_corner.weighted_density(), tol);
  const DensitySpectrum ss(cm.xi_corner.weighted_density(), tol);
  const AlgebraElement sr = rs.sqrt();
  const AlgebraElement ssh = ss.inverse_sqrt();
  const Channel petz = Channel::from_function(cm.map.target(), cm.map.source(), [&](const AlgebraElement& a) {
    return ssh * cm.map.apply_adjoint(sr * a * sr) * ssh;
  });
  rep.corner_disintegration = verify_disintegration(cm.map, petz, cm.omega_corner, tol).passes();
  rep.full_disintegration = factorize(h, omega, tol).valid;

  const bool ab = rep.corner_multiplicative.holds && rep.corner_ac.holds;
  if (ab != rep.corner_disintegration || rep.corner_disintegration != rep.full_disintegration) {
    throw Error(ErrorKind::InternalInconsistency,
                std::string("Takesaki verdicts disagree: multiplicative=") +
                    (rep.corner_multiplicative.holds ? "1" : "0") + " ac=" + (rep.corner_ac.holds ? "1" : "0") +
                    " corner=" + (rep.corner_disintegration ? "1" : "0") +
                    " full=" + (rep.full_disintegration ? "1" : "0"));
  }
  return rep;
}

BridgeReport bayes_disint_bridge(const Channel& f, const State& omega, const std::optional<HomSpec>& h,
                                 const Tolerances& tol) {
  BridgeReport rep;
  const BayesAnalysis an = battery(f, omega, tol);
  const ExistenceResult ex = existence(an, tol);
  rep.inverse_exists = ex.exists;
  rep.ae_deterministic = ae_deterministic(f, omega, tol).holds;
  if (h) {
    rep.disintegration_exists = factorize(*h, omega, tol).valid;
  } else {
    rep.disintegration_exists = ex.inverse && verify_disintegration(f, *ex.inverse, omega, tol).passes();
  }
  rep.consistent = rep.disintegration_exists == (rep.inverse_exists && rep.ae_deterministic);
  if (!rep.consistent) {
    throw Error(ErrorKind::InternalInconsistency,
                std::string("disintegration=") + (rep.disintegration_exists ? "1" : "0") +
                    " but inverse=" + (rep.inverse_exists ? "1" : "0") +
                    " deterministic=" + (rep.ae_deterministic ? "1" : "0"));
  }
  return rep;
}

DisintegrationResult disintegrate(const HomSpec& h, const State& omega, const Tolerances& tol) {
  DisintegrationResult res;
  res.certificate = factorize(h, omega, tol);
  res.takesaki = takesaki_battery(h, omega, tol);
  if (!res.certificate.valid) return res;
  const Channel f = Channel::from_hom(h);
  Channel g = build_disintegration(res.certificate, h, omega, tol);
  res.verification = verify_disintegration(f, g, omega, tol);
  if (!res.verification->passes()) {
    throw Error(ErrorKind::InternalInconsistency, "disintegration built from a valid certificate fails verification");
  }
  Channel e = compose(f, g);
  res.expectation = check_conditional_expectation(h, e, omega, tol);
  res.exists = true;
  res.g = std::move(g);
  res.e = std::move(e);
  return res;
}

}  // namespace qbayes
