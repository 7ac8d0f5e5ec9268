#include "ffgamma/models.hpp"

namespace ffgamma {

namespace {

CScalar phase(const AdditiveCharacter& psi, Direction d, int theta_sum) {
  return psi.at(static_cast<long long>(psi.sign(d)) * theta_sum);
}

}  // namespace

CScalar WhittakerFunction::at(int gid) const {
  const auto& e = ctx->cosets.locate(gid);
  return phase(psi, direction, e.theta_sum) * values[e.coset];
}

CScalar KirillovFunction::at(int gid) const {
  const auto& e = ctx->p_cosets.locate(gid);
  return phase(psi, direction, e.theta_sum) * values[e.coset];
}

CScalar theta_eval(const GroupElement& u, const AdditiveCharacter& psi, Direction direction) {
  if (!is_upper_unitriangular(u)) throw NotUnipotent("theta_eval: element is not upper unitriangular");
  return phase(psi, direction, superdiagonal_sum(u));
}

WhittakerFunction whittaker_function(const GGSpace& space, const IrrepComponent& c, int column) {
  return WhittakerFunction{space.context_ptr(), space.psi(), space.direction(), c.basis.col(column), c.id};
}

Matrix restriction_matrix(const RankContext& ctx, const Matrix& basis) {
  Matrix R(ctx.kirillov_dim(), basis.cols());
  for (int j = 0; j < ctx.kirillov_dim(); ++j) R.row(j) = basis.row(ctx.p_to_g[j]);
  return R;
}

KirillovFunction restrict_to_P(const WhittakerFunction& W) {
  return KirillovFunction{W.ctx, W.psi, W.direction, restriction_matrix(*W.ctx, Matrix(W.values)).col(0)};
}

Matrix extension_matrix(const RankContext& ctx, const Matrix& basis) {
  const Matrix R = restriction_matrix(ctx, basis);
  if (R.rows() != R.cols()) {
    throw SingularMatrix("extension_matrix: component dimension " + std::to_string(R.cols()) +
                         " differs from Kirillov dimension " + std::to_string(R.rows()));
  }
  const Matrix coeffs = solve_linear(R, Matrix(Matrix::Identity(R.rows(), R.rows())));
  return basis * coeffs;
}

WhittakerFunction extend_from_P(const GGSpace& space, const IrrepComponent& c,
                                const KirillovFunction& f) {
  if (f.direction != space.direction()) throw DirectionMismatch("extend_from_P: direction mismatch");
  const Matrix R = restriction_matrix(space.context(), c.basis);
  if (R.rows() != R.cols()) throw SingularMatrix("extend_from_P: restriction is not square");
  const Vector coeffs = solve_linear(R, f.values);
  return WhittakerFunction{space.context_ptr(), space.psi(), space.direction(), c.basis * coeffs, c.id};
}

Matrix substitute(const RankContext& ctx, const AdditiveCharacter& psi, Direction direction,
                  const Matrix& values, const std::function<GroupElement(const GroupElement&)>& left) {
  const auto& group = *ctx.group;
  Matrix out(values.rows(), values.cols());
  for (int r = 0; r < ctx.dim(); ++r) {
    const GroupElement x = left(group.element(ctx.cosets.representative_id(r)));
    const auto& e = ctx.cosets.locate(group.id_of(x));
    out.row(r) = phase(psi, direction, e.theta_sum) * values.row(e.coset);
  }
  return out;
}

Matrix tilde_values(const RankContext& ctx, const AdditiveCharacter& psi, Direction direction,
                    const Matrix& values) {
  const GroupElement w = ctx.special.w;
  return substitute(ctx, psi, direction, values, [&](const GroupElement& g) { return w * iota(g); });
}

WhittakerFunction tilde_map(const WhittakerFunction& W) {
  return WhittakerFunction{W.ctx, W.psi, flip(W.direction),
                           tilde_values(*W.ctx, W.psi, W.direction, Matrix(W.values)).col(0), -1};
}

Matrix epsilon_values(const RankContext& ctx, const AdditiveCharacter& psi, Direction direction,
                      const Matrix& values) {
  const GroupElement eps = ctx.special.eps;
  return substitute(ctx, psi, direction, values, [&](const GroupElement& g) { return eps * g; });
}

WhittakerFunction epsilon_map(const WhittakerFunction& W) {
  return WhittakerFunction{W.ctx, W.psi, flip(W.direction),
                           epsilon_values(*W.ctx, W.psi, W.direction, Matrix(W.values)).col(0),
                           W.component};
}

Decomposition epsilon_transport(const Decomposition& d, std::shared_ptr<const GGSpace> target) {
  const auto& src = *d.space;
  if (target->direction() != flip(src.direction()) || target->rank() != src.rank())
    throw DirectionMismatch("epsilon_transport: target must be the opposite-direction space");
  Decomposition out;
  out.space = target;
  out.seed = d.seed;
  for (const auto& c : d.components) {
    IrrepComponent t;
    t.id = c.id;
    t.basis = epsilon_values(src.context(), src.psi(), src.direction(), c.basis);
    annotate_component(*target, t);
    out.components.push_back(std::move(t));
  }
  return out;
}

CScalar pairing(const KirillovFunction& f, const KirillovFunction& phi, double measure) {
  if (f.rank() != phi.rank() || f.values.size() != phi.values.size())
    throw Error("pairing: index sets differ");
  if (f.direction == phi.direction) throw DirectionMismatch("pairing: directions must be opposite");
  return measure * f.values.cwiseProduct(phi.values).sum();
}

Matrix embed_tau_values(const RankContext& upper, const RankContext& lower,
                        const AdditiveCharacter& psi, Direction direction, const Matrix& values) {
  if (lower.rank + 1 != upper.rank) throw Error("embed_tau: ranks are not consecutive");
  const auto& group = *upper.group;
  const int n = upper.rank;
  Matrix out(upper.kirillov_dim(), values.cols());
  for (int j = 0; j < upper.kirillov_dim(); ++j) {
    const auto& r = group.element(upper.p_cosets.representative_id(j));
    // r = v * diag(A, 1) with v = [[I, b], [0, 1]]; theta(v) = psi(b_{n-1}).
    const CScalar theta_v = phase(psi, direction, r(n - 2, n - 1));
    const auto& e = lower.cosets.locate(lower.group->id_of(mirabolic_block(r)));
    out.row(j) = theta_v * phase(psi, direction, e.theta_sum) * values.row(e.coset);
  }
  return out;
}

KirillovFunction embed_tau(const WhittakerFunction& wtau, std::shared_ptr<const RankContext> upper) {
  Vector v = embed_tau_values(*upper, *wtau.ctx, wtau.psi, wtau.direction, Matrix(wtau.values)).col(0);
  return KirillovFunction{std::move(upper), wtau.psi, wtau.direction, std::move(v)};
}

WhittakerFunction lower_restriction(const KirillovFunction& f, std::shared_ptr<const RankContext> lower) {
  Vector v(lower->dim());
  for (int r = 0; r < lower->dim(); ++r) {
    const auto& g = lower->group->element(lower->cosets.representative_id(r));
    v[r] = f.at(f.ctx->group->id_of(embed_lower(g)));
  }
  return WhittakerFunction{std::move(lower), f.psi, f.direction, std::move(v), -1};
}

}  // namespace ffgamma
