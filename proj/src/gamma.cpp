#include "ffgamma/gamma.hpp"

#include <chrono>
#include <cmath>

namespace ffgamma {

namespace {

CScalar phase(const AdditiveCharacter& psi, Direction d, int theta_sum) {
  return psi.at(static_cast<long long>(psi.sign(d)) * theta_sum);
}

// Matrix of f -> (vg -> f(v * diag(block(g), 1))) on U\P, for g = diag(A, 1).
Matrix mirabolic_substitution(const RankContext& upper, const AdditiveCharacter& psi, Direction d,
                              const std::function<GroupElement(const GroupElement&)>& block) {
  const auto& group = *upper.group;
  const int m = upper.kirillov_dim();
  Matrix out = Matrix::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    const auto& r = group.element(upper.p_cosets.representative_id(j));
    const GroupElement a = mirabolic_block(r);
    const GroupElement v = r * embed_lower(a).inverse();
    const auto& e = upper.p_cosets.locate(group.id_of(v * embed_lower(block(a))));
    out(j, e.coset) += phase(psi, d, e.theta_sum);
  }
  return out;
}

void require_pair(const GGSpace& pi_space, const TauModel& tau) {
  if (pi_space.rank() < 2) throw Error("gamma: the cuspidal side needs rank at least 2");
  if (tau.ctx->rank + 1 != pi_space.rank()) throw Error("gamma: tau must have rank n-1");
  if (pi_space.direction() != Direction::theta || tau.direction != Direction::theta_bar)
    throw DirectionMismatch("gamma: expects pi in the theta model and tau in the theta-bar model");
}

}  // namespace

TauModel make_tau_model(const Decomposition& theta_bar_model, int id) {
  const auto& c = theta_bar_model.components.at(id);
  const auto& sp = *theta_bar_model.space;
  if (sp.direction() != Direction::theta_bar) throw DirectionMismatch("make_tau_model: need a theta-bar model");
  return TauModel{c.id, sp.context_ptr(), sp.psi(), sp.direction(), c.basis, c.omega_minus_one()};
}

OperatorOnKirillov op_K(const GGSpace& space, const IrrepComponent& c) {
  const auto& ctx = space.context();
  const auto& group = *ctx.group;
  const Matrix E = extension_matrix(ctx, c.basis);
  const int m = ctx.kirillov_dim();
  Matrix K(m, m);
  for (int j = 0; j < m; ++j) {
    const auto& r = group.element(ctx.p_cosets.representative_id(j));
    const auto& e = ctx.cosets.locate(group.id_of(ctx.special.s * iota(r)));
    K.row(j) = space.theta_phase(e.theta_sum) * E.row(e.coset);
  }
  return {space.rank(), OperatorLabel::K, space.direction(), std::move(K)};
}

OperatorOnKirillov op_A(const RankContext& upper, const AdditiveCharacter& psi) {
  const GroupElement s = special_elements(upper.rank - 1, upper.modulus).s;
  Matrix A = mirabolic_substitution(upper, psi, Direction::theta,
                                    [&](const GroupElement& a) { return s * iota(a); });
  return {upper.rank, OperatorLabel::A, Direction::theta, std::move(A)};
}

OperatorOnKirillov op_A_adjoint(const RankContext& upper, const AdditiveCharacter& psi) {
  const GroupElement s_inv = special_elements(upper.rank - 1, upper.modulus).s.inverse();
  Matrix A = mirabolic_substitution(upper, psi, Direction::theta_bar,
                                    [&](const GroupElement& a) { return s_inv * iota(a); });
  return {upper.rank, OperatorLabel::Astar, Direction::theta_bar, std::move(A)};
}

OperatorOnKirillov op_C(const GGSpace& space, const IrrepComponent& c) {
  const auto K = op_K(space, c);
  const auto A = op_A(space.context(), space.psi());
  return {space.rank(), OperatorLabel::C, Direction::theta, A.matrix * K.matrix};
}

OperatorOnKirillov op_Cstar(const GGSpace& space, const IrrepComponent& c) {
  const auto C = op_C(space, c);
  return {space.rank(), OperatorLabel::Cstar, Direction::theta_bar, C.matrix.transpose()};
}

Matrix kirillov_action(const RankContext& upper, const AdditiveCharacter& psi, Direction direction,
                       const GroupElement& h) {
  const auto& group = *upper.group;
  const int m = upper.kirillov_dim();
  const GroupElement hh = embed_lower(h);
  Matrix R = Matrix::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    const auto& r = group.element(upper.p_cosets.representative_id(j));
    const auto& e = upper.p_cosets.locate(group.id_of(r * hh));
    R(j, e.coset) = phase(psi, direction, e.theta_sum);
  }
  return R;
}

GammaValue gamma_gk(const GGSpace& pi_space, const IrrepComponent& pi, const TauModel& tau,
                    const GammaOptions& opts) {
  require_pair(pi_space, tau);
  const auto& upper = pi_space.context();
  const Matrix phi = embed_tau_values(upper, *tau.ctx, tau.psi, tau.direction, tau.basis);
  const auto K = op_K(pi_space, pi);
  const auto A = op_A(upper, pi_space.psi());
  const Matrix Cstar = (A.matrix * K.matrix).transpose();

  GammaValue out;
  out.method = GammaMethod::GK;
  if (phi.norm() == 0.0) throw NoNonvanishingPair("gamma_gk: the tau model is zero");
  const Matrix image = Cstar * phi;
  out.value = (phi.adjoint() * image).trace() / phi.squaredNorm();
  if (std::abs(out.value) == 0.0) throw NotScalar("gamma_gk: C* vanishes on the tau model");
  out.deviation = (image - out.value * phi).norm() / (std::abs(out.value) * phi.norm());
  if (out.deviation > opts.tolerance) {
    throw NotScalar("gamma_gk: C* is not scalar on the tau model (deviation " +
                    std::to_string(out.deviation) + ")");
  }

  // Probe route: <K delta_r, A* phi_j> = gamma <delta_r, phi_j>, delta basis in id order.
  const Matrix astar_phi = op_A_adjoint(upper, pi_space.psi()).matrix * phi;
  const double largest = phi.cwiseAbs().maxCoeff();
  bool first = true;
  for (Eigen::Index j = 0; j < phi.cols(); ++j) {
    for (Eigen::Index r = 0; r < phi.rows(); ++r) {
      const CScalar den = opts.measure * phi(r, j);
      if (std::abs(den) <= opts.nonvanishing_fraction * largest * opts.measure) continue;
      const CScalar num = opts.measure * K.matrix.col(r).cwiseProduct(astar_phi.col(j)).sum();
      const CScalar ratio = num / den;
      if (first) {
        out.cross_value = ratio;
        first = false;
      }
      out.cross_deviation = std::max(out.cross_deviation, std::abs(ratio - out.value) / std::abs(out.value));
      ++out.pairs_used;
    }
  }
  if (out.pairs_used == 0) throw NoNonvanishingPair("gamma_gk: every probe pairing vanishes");
  return out;
}

CScalar zeta(const WhittakerFunction& W, const WhittakerFunction& Wp, double measure) {
  if (W.rank() != Wp.rank() + 1) throw Error("zeta: ranks are not consecutive");
  if (W.direction == Wp.direction) throw DirectionMismatch("zeta: directions must be opposite");
  const auto& lower = *Wp.ctx;
  CScalar z = 0;
  for (int r = 0; r < lower.dim(); ++r) {
    const auto& g = lower.group->element(lower.cosets.representative_id(r));
    z += W.at(embed_lower(g)) * Wp.values[r];
  }
  return measure * z;
}

GammaValue gamma_jpss(const GGSpace& pi_space, const IrrepComponent& pi, const TauModel& tau,
                      const GammaOptions& opts) {
  require_pair(pi_space, tau);
  const auto& upper_ptr = pi_space.context_ptr();
  const Matrix pi_tilde = tilde_values(*upper_ptr, pi_space.psi(), pi_space.direction(), pi.basis);
  const Matrix tau_tilde = tilde_values(*tau.ctx, tau.psi, tau.direction, tau.basis);
  const int n = pi_space.rank();
  const CScalar sign = std::pow(tau.omega_minus_one, n - 1);

  const Eigen::Index dp = pi.basis.cols();
  const Eigen::Index dt = tau.basis.cols();
  Matrix Z(dp, dt), Zt(dp, dt);
  for (Eigen::Index i = 0; i < dp; ++i) {
    const WhittakerFunction W{upper_ptr, pi_space.psi(), pi_space.direction(), pi.basis.col(i), pi.id};
    const WhittakerFunction Wt{upper_ptr, pi_space.psi(), flip(pi_space.direction()), pi_tilde.col(i), -1};
    for (Eigen::Index j = 0; j < dt; ++j) {
      const WhittakerFunction Wp{tau.ctx, tau.psi, tau.direction, tau.basis.col(j), tau.id};
      const WhittakerFunction Wpt{tau.ctx, tau.psi, flip(tau.direction), tau_tilde.col(j), -1};
      Z(i, j) = zeta(W, Wp, opts.measure);
      Zt(i, j) = zeta(Wt, Wpt, opts.measure);
    }
  }

  GammaValue out;
  out.method = GammaMethod::JPSS;
  Eigen::Index bi = 0, bj = 0;
  const double largest = Z.cwiseAbs().maxCoeff(&bi, &bj);
  if (!(largest > 0.0)) throw NoNonvanishingPair("gamma_jpss: every zeta pairing vanishes");
  out.value = Zt(bi, bj) / (sign * Z(bi, bj));
  for (Eigen::Index i = 0; i < dp; ++i)
    for (Eigen::Index j = 0; j < dt; ++j) {
      if (std::abs(Z(i, j)) <= opts.nonvanishing_fraction * largest) continue;
      const CScalar ratio = Zt(i, j) / (sign * Z(i, j));
      out.deviation = std::max(out.deviation, std::abs(ratio - out.value) / std::abs(out.value));
      ++out.pairs_used;
    }
  // Proportionality over every pair, vanishing ones included.
  const CScalar ls = (Z.adjoint() * Zt).trace() / Z.squaredNorm();
  out.cross_value = ls / sign;
  out.cross_deviation = (Zt - ls * Z).norm() / std::max(Zt.norm(), 1e-300);
  if (out.deviation > opts.tolerance) {
    throw InconsistentRatio("gamma_jpss: zeta ratios disagree (spread " + std::to_string(out.deviation) + ")");
  }
  return out;
}

ProofChecks proof_checks(const GGSpace& pi_space, const IrrepComponent& pi, const TauModel& tau,
                         double measure) {
  require_pair(pi_space, tau);
  const auto& upper = pi_space.context();
  const auto& psi = pi_space.psi();
  ProofChecks pc;

  const auto K = op_K(pi_space, pi);
  const Matrix pi_tilde = tilde_values(upper, psi, Direction::theta, pi.basis);
  const Matrix pi_tilde_eps = epsilon_values(upper, psi, Direction::theta_bar, pi_tilde);
  const Matrix lhs = K.matrix * restriction_matrix(upper, pi.basis);
  pc.k_identity = (lhs - restriction_matrix(upper, pi_tilde_eps)).cwiseAbs().maxCoeff();

  const auto A = op_A(upper, psi);
  const auto Astar = op_A_adjoint(upper, psi);
  pc.adjoint_formula = (A.matrix.transpose() - Astar.matrix).cwiseAbs().maxCoeff();

  const Matrix phi = embed_tau_values(upper, *tau.ctx, tau.psi, tau.direction, tau.basis);
  const Matrix tau_tilde = tilde_values(*tau.ctx, tau.psi, tau.direction, tau.basis);
  const CScalar sign = std::pow(tau.omega_minus_one, pi_space.rank() - 1);
  const Matrix kf = K.matrix * restriction_matrix(upper, pi.basis);
  const Matrix astar_phi = Astar.matrix * phi;
  for (Eigen::Index i = 0; i < pi.basis.cols(); ++i) {
    const KirillovFunction f{pi_space.context_ptr(), psi, Direction::theta, kf.col(i)};
    const WhittakerFunction Wt{pi_space.context_ptr(), psi, Direction::theta_bar, pi_tilde.col(i), -1};
    for (Eigen::Index j = 0; j < tau.basis.cols(); ++j) {
      const KirillovFunction g{pi_space.context_ptr(), psi, Direction::theta_bar, astar_phi.col(j)};
      const WhittakerFunction Wpt{tau.ctx, tau.psi, Direction::theta, tau_tilde.col(j), -1};
      const CScalar left = pairing(f, g, measure);
      const CScalar right = sign * zeta(Wt, Wpt, measure);
      pc.intermediate = std::max(pc.intermediate, std::abs(left - right));
    }
  }

  const Matrix C = A.matrix * K.matrix;
  for (int h : tau.ctx->group->generator_ids()) {
    const Matrix R = kirillov_action(upper, psi, Direction::theta, tau.ctx->group->element(h));
    pc.c_equivariance = std::max(pc.c_equivariance, (C * R - R * C).cwiseAbs().maxCoeff());
  }
  return pc;
}

TheoremInputs prepare_inputs(int q, int n, std::uint64_t seed, int psi_direction,
                             std::uint64_t max_order, const Decomposer& decomposer) {
  if (n < 2) throw ConfigError("n must be at least 2 for a gamma comparison");
  const Decomposer run = decomposer ? decomposer : Decomposer([](auto space, std::uint64_t s) {
    return decompose(std::move(space), s);
  });
  TheoremInputs in;
  in.q = q;
  in.n = n;
  in.seed = seed;
  in.psi = AdditiveCharacter(q, psi_direction);
  auto upper = make_rank_context(n, q, max_order);
  auto lower = make_rank_context(n - 1, q, max_order);
  in.pi_decomp = run(std::make_shared<const GGSpace>(upper, in.psi, Direction::theta), seed);
  in.tau_decomp = run(std::make_shared<const GGSpace>(lower, in.psi, Direction::theta), seed);
  auto lower_bar = std::make_shared<const GGSpace>(lower, in.psi, Direction::theta_bar);
  in.tau_model = epsilon_transport(in.tau_decomp, lower_bar);
  in.tau_direct = run(lower_bar, seed);
  return in;
}

RunDiagnostics run_diagnostics(const TheoremInputs& in) {
  RunDiagnostics d;
  const auto& space = *in.pi_decomp.space;
  const auto& ctx = space.context();
  d.gg_dim = space.dim();
  d.component_count = static_cast<int>(in.pi_decomp.components.size());
  for (std::size_t i = 0; i < in.pi_decomp.components.size(); ++i) {
    const auto& c = in.pi_decomp.components[i];
    d.dim_sum += c.dim();
    const Eigen::Index rank = numerical_rank(restriction_matrix(ctx, c.basis), tol::linear_algebra);
    if (c.cuspidal) {
      ++d.cuspidal_count;
      if (rank != ctx.kirillov_dim() || c.dim() != ctx.kirillov_dim()) d.cuspidal_kirillov_bijective = false;
    } else if (rank < c.dim()) {
      d.noncuspidal_restriction_noninjective = true;
    }
    for (std::size_t j = i + 1; j < in.pi_decomp.components.size(); ++j)
      d.max_overlap = std::max(
          d.max_overlap,
          max_principal_cosine(c.basis, in.pi_decomp.components[j].basis));
  }
  for (const auto& t : in.tau_model.components) {
    double best = 1.0;
    for (const auto& u : in.tau_direct.components)
      if (u.dim() == t.dim()) best = std::min(best, subspace_residual(u.basis, t.basis));
    d.tau_transport_residual = std::max(d.tau_transport_residual, best);
  }
  d.tau_transport_matches = d.tau_transport_residual < tol::assertion &&
                            in.tau_model.components.size() == in.tau_direct.components.size();
  return d;
}

VerificationRun verify_theorem(const TheoremInputs& in, const GammaOptions& opts) {
  VerificationRun run;
  run.q = in.q;
  run.n = in.n;
  run.seed = in.seed;
  run.psi = in.psi.descriptor();
  run.tolerance = opts.tolerance;
  run.diagnostics = run_diagnostics(in);

  const auto& space = *in.pi_decomp.space;
  const auto cusp = in.pi_decomp.cuspidal_ids();
  const int ntau = static_cast<int>(in.tau_model.components.size());
  std::vector<std::pair<int, int>> pairs;
  for (int p : cusp)
    for (int t = 0; t < ntau; ++t) pairs.emplace_back(p, t);
  run.reports.resize(pairs.size());

#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    GammaReport r;
    r.q = in.q;
    r.n = in.n;
    r.psi = in.psi.descriptor();
    r.pi_id = pairs[k].first;
    r.tau_id = pairs[k].second;
    try {
      const auto& pi = in.pi_decomp.components[r.pi_id];
      const TauModel tau = make_tau_model(in.tau_model, r.tau_id);
      r.omega_tau_minus_one = tau.omega_minus_one;
      r.gk = gamma_gk(space, pi, tau, opts);
      r.jpss = gamma_jpss(space, pi, tau, opts);
      r.abs_diff = std::abs(r.gk.value - r.jpss.value);
      r.gamma_abs = std::abs(r.gk.value);
      r.checks = proof_checks(space, pi, tau, opts.measure);
      r.passed = r.abs_diff < opts.tolerance && r.gk.cross_deviation < opts.tolerance &&
                 r.checks.k_identity < opts.tolerance && r.checks.adjoint_formula < opts.tolerance &&
                 r.checks.intermediate < opts.tolerance && r.checks.c_equivariance < opts.tolerance;
    } catch (const std::exception& e) {
      r.error = "pi " + std::to_string(r.pi_id) + ", tau " + std::to_string(r.tau_id) + ": " + e.what();
      r.passed = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.reports[k] = std::move(r);
  }

  const auto& d = run.diagnostics;
  run.passed = !run.reports.empty() && d.dim_sum == d.gg_dim && d.cuspidal_kirillov_bijective &&
               d.tau_transport_matches && d.max_overlap < tol::assertion;
  for (const auto& r : run.reports) run.passed = run.passed && r.passed;
  return run;
}

VerificationRun verify_theorem(int q, int n, std::uint64_t seed, const GammaOptions& opts) {
  return verify_theorem(prepare_inputs(q, n, seed), opts);
}

}  // namespace ffgamma
