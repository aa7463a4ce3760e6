// This code is part of qbayes.
//
// Copyright 2026 The qbayes Authors.
//
// This code is licensed under the Apache License, Version 2.0. You may
// obtain a copy of this license in the LICENSE file in the root directory
// of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.

#include "qbayes/bayesinv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbayes/error.hpp"

namespace qbayes {

std::string_view to_string(BatteryItem item) noexcept {
  switch (item) {
    case BatteryItem::StarPreserving: return "star_preserving";
    case BatteryItem::LeftEqualsRight: return "left_equals_right";
    case BatteryItem::ChoiHermitian: return "choi_hermitian";
    case BatteryItem::DualIntertwining: return "dual_intertwining";
    case BatteryItem::PrimalIntertwining: return "primal_intertwining";
    case BatteryItem::SupportAndAC: return "support_and_ac";
    case BatteryItem::CornerUcp: return "corner_ucp";
  }
  return "unknown";
}

namespace {

// Everything the analyses share about (F, omega).
struct Workspace {
  const Channel& f;
  const State& omega;
  State xi;
  AlgebraElement rho, sigma;
  AlgebraElement p, p_perp, q, q_perp, sigma_hat;
  std::vector<MatrixUnitIndex> units;
  std::vector<AlgebraElement> unit_elems;
  std::vector<AlgebraElement> rho_e;  // F*(rho E_a)
  std::vector<AlgebraElement> e_rho;  // F*(E_a rho)

  Workspace(const Channel& f_, const State& omega_, const Tolerances& tol)
      : f(f_), omega(omega_), xi(pullback(omega_, f_, tol)) {
    require_in(f.target(), omega.weighted_density(), "Bayes analysis");
    rho = omega.weighted_density();
    sigma = xi.weighted_density();
    const DensitySpectrum rs(rho, tol);
    const DensitySpectrum ss(sigma, tol);
    p = rs.projection();
    p_perp = AlgebraElement::unit(f.target()) - p;
    q = ss.projection();
    q_perp = AlgebraElement::unit(f.source()) - q;
    sigma_hat = ss.pseudoinverse();
    units = matrix_unit_indices(f.target());
    unit_elems = matrix_units(f.target());
    for (const auto& e : unit_elems) {
      rho_e.push_back(f.apply_adjoint(rho * e));
      e_rho.push_back(f.apply_adjoint(e * rho));
    }
  }
};

// Left form: |xi(G(E_a) E_b) - omega(E_a F(E_b))|. Right form:
// |omega(F(E_b) E_a) - xi(E_b G(E_a))|.
Verdict pairing(const Channel& f, const Channel& g, const State& omega, const State& xi, bool left_form,
                const Tolerances& tol) {
  const auto a_idx = matrix_unit_indices(f.target());
  const auto b_idx = matrix_unit_indices(f.source());
  const AlgebraElement& rho = omega.weighted_density();
  const AlgebraElement& sigma = xi.weighted_density();
  std::vector<AlgebraElement> fb;  // rho F(E_b) or F(E_b) rho
  for (const auto& e : matrix_units(f.source())) fb.push_back(left_form ? f.apply(e) * rho : rho * f.apply(e));
  ResidualMax r;
  for (const auto& ia : a_idx) {
    const AlgebraElement ga = g.apply(matrix_unit(f.target(), ia));
    const AlgebraElement sg = left_form ? sigma * ga : ga * sigma;
    for (std::size_t b = 0; b < b_idx.size(); ++b) {
      const auto& ib = b_idx[b];
      // tr(X E_kl) = X_lk, tr(E_ij X) = X_ji.
      const Complex lhs = sg.block(ib.block)(ib.col, ib.row);
      const Complex rhs = fb[b].block(ia.block)(ia.col, ia.row);
      r.add(std::abs(lhs - rhs), 1.0);
    }
  }
  return r.verdict(tol);
}

Channel images_channel(const Workspace& w, const std::function<AlgebraElement(std::size_t)>& img) {
  std::vector<AlgebraElement> images;
  for (std::size_t a = 0; a < w.units.size(); ++a) images.push_back(img(a));
  return Channel::from_images(w.f.target(), w.f.source(), images);
}

BayesMaps make_maps(const Workspace& w, const Tolerances& tol) {
  Channel left = images_channel(w, [&](std::size_t a) { return w.sigma_hat * w.rho_e[a]; });
  Channel right = images_channel(w, [&](std::size_t a) { return w.e_rho[a] * w.sigma_hat; });
  Verdict lp = pairing(w.f, left, w.omega, w.xi, true, tol);
  Verdict rp = pairing(w.f, right, w.omega, w.xi, false, tol);
  if (!lp.holds || !rp.holds) {
    throw Error(ErrorKind::InternalInconsistency, "left/right Bayes maps fail their pairing: residuals " +
                                                      std::to_string(lp.residual) + ", " +
                                                      std::to_string(rp.residual));
  }
  return BayesMaps{std::move(left), std::move(right), lp, rp};
}

double norm(const AlgebraElement& a) { return frobenius_norm(a); }

}  // namespace

BayesMaps left_right_bayes(const Channel& f, const State& omega, const Tolerances& tol) {
  const Workspace w(f, omega, tol);
  return make_maps(w, tol);
}

BayesAnalysis battery(const Channel& f, const State& omega, const Tolerances& tol) {
  const Workspace w(f, omega, tol);
  const std::size_t na = w.units.size();
  BayesMaps maps = make_maps(w, tol);

  std::vector<AlgebraElement> phi_l, phi_r;  // Q G^L Q and Q G^R Q
  for (std::size_t a = 0; a < na; ++a) {
    phi_l.push_back(w.sigma_hat * w.rho_e[a] * w.q);
    phi_r.push_back(w.q * w.e_rho[a] * w.sigma_hat);
  }
  Channel choi_a = images_channel(w, [&](std::size_t a) { return phi_l[a]; });
  Channel choi_b = images_channel(w, [&](std::size_t a) { return w.sigma_hat * w.rho_e[a] * w.q_perp; });

  std::array<Verdict, kBatterySize> items;

  {  // (i) Q G^R Q is *-preserving.
    ResidualMax r;
    for (std::size_t a = 0; a < na; ++a) {
      const auto& u = w.units[a];
      const std::size_t t = unit_position(f.target(), {u.block, u.col, u.row});
      r.add(norm(phi_r[t] - phi_r[a].adjoint()), norm(phi_r[a]));
    }
    items[0] = r.verdict(tol);
  }
  {  // (ii) Q G^L Q = Q G^R Q.
    ResidualMax r;
    for (std::size_t a = 0; a < na; ++a) r.add(norm(phi_l[a] - phi_r[a]), std::max(norm(phi_l[a]), norm(phi_r[a])));
    items[1] = r.verdict(tol);
  }
  {  // (iii) Hermitian Choi matrix.
    ResidualMax r;
    for (const auto& row : choi_a.choi_grid())
      for (const auto& c : row) r.add(hermitian_residual(c), frobenius_norm(c));
    items[2] = r.verdict(tol);
  }
  {  // (iv) Q F*(rho A) sigma = sigma F*(A rho) Q.
    ResidualMax r;
    for (std::size_t a = 0; a < na; ++a) {
      const AlgebraElement lhs = w.q * w.rho_e[a] * w.sigma;
      const AlgebraElement rhs = w.sigma * w.e_rho[a] * w.q;
      r.add(norm(lhs - rhs), std::max(norm(lhs), norm(rhs)));
    }
    items[3] = r.verdict(tol);
  }
  {  // (v) F_xy(sigma_y B) rho_x = rho_x F_xy(B sigma_y) for B in Q B Q, per block pair.
    ResidualMax r;
    const MultiMatrixAlgebra& src = f.source();
    for (const auto& ib : matrix_unit_indices(src)) {
      const std::size_t y = ib.block;
      if (!w.xi.density(y)) continue;
      const CMatrix& sy = *w.xi.density(y);
      const CMatrix b = w.q.block(y) * CMatrix::unit(src.block_dim(y), ib.row, ib.col) * w.q.block(y);
      AlgebraElement left = AlgebraElement::zero(src);
      AlgebraElement right = AlgebraElement::zero(src);
      left.block(y) = sy * b;
      right.block(y) = b * sy;
      const AlgebraElement fl = f.apply(left);
      const AlgebraElement fr = f.apply(right);
      for (std::size_t x = 0; x < f.target().num_blocks(); ++x) {
        if (!w.omega.density(x)) continue;
        const CMatrix& rx = *w.omega.density(x);
        const CMatrix lhs = fl.block(x) * rx;
        const CMatrix rhs = rx * fr.block(x);
        r.add(frobenius_norm(lhs - rhs), std::max(frobenius_norm(lhs), frobenius_norm(rhs)));
      }
    }
    items[4] = r.verdict(tol);
  }
  {  // (vi) support condition plus AC of the corner map.
    ResidualMax r;
    for (std::size_t a = 0; a < na; ++a) {
      const AlgebraElement off = w.sigma_hat * f.apply_adjoint(w.rho * w.unit_elems[a] * w.p_perp) * w.q;
      r.add(norm(off), norm(phi_l[a]));
    }
    const Verdict support_part = r.verdict(tol);
    const Verdict ac = ac_condition_algebraic(corner_map(f, omega, tol), tol);
    items[5] = Verdict{support_part.holds && ac.holds, std::max(support_part.residual, ac.residual),
                       std::max(support_part.scale, ac.scale)};
  }
  {  // (vii) Q G^R Q is UCP as a map into the corner Q B Q.
    const SupportData qs = support(w.xi, tol);
    std::vector<AlgebraElement> images;
    for (std::size_t a = 0; a < na; ++a) images.push_back(qs.compress(phi_r[a]));
    const UcpVerdict ucp = is_ucp(Channel::from_images(f.target(), qs.corner_algebra, images), tol);
    items[6] = Verdict{ucp.ucp(), std::max(-ucp.min_eigenvalue, ucp.unitality_residual), 1.0};
  }

  const bool passed = items[0].holds;
  for (std::size_t k = 1; k < kBatterySize; ++k) {
    if (items[k].holds != passed) {
      std::string detail;
      for (std::size_t j = 0; j < kBatterySize; ++j) {
        detail += std::string(to_string(static_cast<BatteryItem>(j))) + "=" + (items[j].holds ? "1" : "0") + "(" +
                  std::to_string(items[j].residual) + ") ";
      }
      throw Error(ErrorKind::InternalInconsistency, "Bayes battery verdicts disagree: " + detail);
    }
  }

  BayesAnalysis out{f,
                    omega,
                    w.xi,
                    std::move(maps),
                    std::move(choi_a),
                    std::move(choi_b),
                    items,
                    passed,
                    std::nullopt,
                    0.0};
  if (passed) {
    const DensitySpectrum rs(w.rho, tol);
    const DensitySpectrum ss(w.sigma, tol);
    const AlgebraElement sr = rs.sqrt();
    const AlgebraElement ssh = ss.inverse_sqrt();
    Channel petz = images_channel(
        w, [&](std::size_t a) { return ssh * f.apply_adjoint(sr * w.unit_elems[a] * sr) * ssh; });
    out.petz_residual = relative_difference(petz, out.choi_a);
    if (out.petz_residual > tol.eps_eq) {
      throw Error(ErrorKind::InternalInconsistency,
                  "Petz map differs from the corner Bayes map by " + std::to_string(out.petz_residual));
    }
    out.corner_inverse = std::move(petz);
  }
  return out;
}

BayesVerification verify_bayes(const Channel& f, const Channel& g, const State& omega, const Tolerances& tol) {
  if (!(g.source() == f.target()) || !(g.target() == f.source())) {
    throw Error(ErrorKind::ShapeMismatch, "verify_bayes: G must map the target of F back to its source");
  }
  const State xi = pullback(omega, f, tol);
  BayesVerification v;
  v.pairing_residual = pairing(f, g, omega, xi, true, tol).residual;
  for (const auto& e : matrix_units(f.target())) {
    v.state_residual = std::max(v.state_residual, std::abs(xi.evaluate(g.apply(e)) - omega.evaluate(e)));
  }
  v.ucp = is_ucp(g, tol);
  v.passes = v.ucp.ucp() && within(v.pairing_residual, 1.0, tol) && within(v.state_residual, 1.0, tol);
  return v;
}

ExistenceResult existence(const BayesAnalysis& analysis, const Tolerances& tol, ExtensionChoice choice) {
  ExistenceResult res;
  if (!analysis.battery_passed) return res;
  res.evaluated = true;
  const MultiMatrixAlgebra& a_alg = analysis.f.target();
  const MultiMatrixAlgebra& b_alg = analysis.f.source();
  const DensitySpectrum ss(analysis.xi.weighted_density(), tol);
  const AlgebraElement q_perp = AlgebraElement::unit(b_alg) - ss.projection();
  const double total = static_cast<double>(a_alg.total_size());

  std::vector<std::vector<CMatrix>> grid(b_alg.num_blocks());
  res.gap = 1.0;
  ResidualMax range;
  for (std::size_t y = 0; y < b_alg.num_blocks(); ++y) {
    const std::size_t n = b_alg.block_dim(y);
    CMatrix t(n, n);
    for (std::size_t x = 0; x < a_alg.num_blocks(); ++x) {
      const std::size_t m = a_alg.block_dim(x);
      const CMatrix am = hermitian_part(analysis.choi_a.choi(y, x));
      const CMatrix bm = analysis.choi_b.choi(y, x);
      const CMatrix ahat = pseudoinverse(am, tol);
      range.add(frobenius_norm(bm - am * ahat * bm), std::max(frobenius_norm(bm), frobenius_norm(am)));
      const CMatrix schur = hermitian_part(bm.adjoint() * ahat * bm);
      t += partial_trace_left(schur, m, n);
      grid[y].push_back(am + bm + bm.adjoint() + schur);
    }
    const CMatrix slack = hermitian_part(q_perp.block(y) - t);
    const HermitianEigen eig = hermitian_eigen(slack, tol);
    const HermitianEigen teig = hermitian_eigen(hermitian_part(t), tol);
    res.gap = std::min(res.gap, eig.min_eigenvalue());
    res.gap_scale = std::max(res.gap_scale, 1.0 + std::abs(teig.max_eigenvalue()));
    for (std::size_t x = 0; x < a_alg.num_blocks(); ++x) {
      const std::size_t m = a_alg.block_dim(x);
      if (choice == ExtensionChoice::Uniform) {
        grid[y][x] += kron(CMatrix::identity(m) * (1.0 / total), slack);
      } else if (x == 0) {
        grid[y][x] += kron(CMatrix::unit(m, 0, 0), slack);
      }
    }
  }
  res.range_residual = range.residual();
  res.range = range.verdict(tol).holds;
  res.inequality = res.gap >= -tol.eps_rank * res.gap_scale;
  res.exists = res.inequality && res.range;
  if (!res.exists) return res;

  Channel inverse(a_alg, b_alg, std::move(grid));
  BayesVerification v = verify_bayes(analysis.f, inverse, analysis.omega, tol);
  if (!v.passes) {
    throw Error(ErrorKind::ExtensionFailure, "constructed Bayesian inverse fails verification: pairing " +
                                                 std::to_string(v.pairing_residual) + ", state " +
                                                 std::to_string(v.state_residual) + ", min eigenvalue " +
                                                 std::to_string(v.ucp.min_eigenvalue));
  }
  res.inverse = std::move(inverse);
  res.verification = v;
  return res;
}

std::optional<Channel> bayes_inverse(const Channel& f, const State& omega, const Tolerances& tol,
                                     ExtensionChoice choice) {
  const BayesAnalysis an = battery(f, omega, tol);
  ExistenceResult ex = existence(an, tol, choice);
  return std::move(ex.inverse);
}

CompositionReport compositionality_check(const Channel& f, const Channel& g, const State& omega,
                                         const Tolerances& tol) {
  if (!(f.source() == g.target())) throw Error(ErrorKind::ShapeMismatch, "compositionality: maps do not compose");
  CompositionReport rep;
  const Channel id = Channel::identity(f.target());
  rep.identity_ok = verify_bayes(id, id, omega, tol).passes;
  const State xi = pullback(omega, f, tol);
  const auto fbar = bayes_inverse(f, omega, tol);
  const auto gbar = bayes_inverse(g, xi, tol);
  if (!fbar || !gbar) return rep;
  rep.applicable = true;
  const BayesVerification v = verify_bayes(compose(f, g), compose(*gbar, *fbar), omega, tol);
  rep.composite_residual = v.pairing_residual;
  rep.composite_ok = v.passes;
  const auto alt = bayes_inverse(f, omega, tol, ExtensionChoice::FirstUnit);
  rep.extensions_ae_equal = ae_equal(*fbar, *alt, xi, tol).holds;
  rep.extensions_exactly_equal = approx_equal(*fbar, *alt, tol);
  return rep;
}

}  // namespace qbayes
