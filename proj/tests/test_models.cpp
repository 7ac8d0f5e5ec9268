#include <numbers>

#include "doctest.h"
#include "ffgamma/errors.hpp"
#include "ffgamma/models.hpp"

using namespace ffgamma;

namespace {

GroupElement mat(int m, int q, std::vector<int> e) { return GroupElement(m, q, e); }

bool close(CScalar a, CScalar b, double eps = 1e-12) { return std::abs(a - b) < eps; }

Vector delta(int size, int at) {
  Vector v = Vector::Zero(size);
  v[at] = 1;
  return v;
}

}  // namespace

TEST_CASE("theta examples") {
  const AdditiveCharacter psi(3);
  CHECK(close(theta_eval(GroupElement::identity(3, 3), psi, Direction::theta), 1.0));
  CHECK(close(theta_eval(mat(2, 3, {1, 1, 0, 1}), psi, Direction::theta),
              std::polar(1.0, 2 * std::numbers::pi / 3)));
  CHECK(close(theta_eval(mat(3, 3, {1, 1, 0, 0, 1, 2, 0, 0, 1}), psi, Direction::theta), 1.0));
  CHECK(close(theta_eval(mat(2, 3, {1, 1, 0, 1}), psi, Direction::theta_bar),
              std::polar(1.0, -2 * std::numbers::pi / 3)));
  CHECK_THROWS_AS(theta_eval(mat(2, 3, {1, 0, 1, 1}), psi, Direction::theta), NotUnipotent);
}

TEST_CASE("theta is a character of U") {
  const auto ctx = make_rank_context(3, 3);
  const AdditiveCharacter psi(3);
  const auto& G = *ctx->group;
  for (int a : G.unipotent_ids())
    for (int b : G.unipotent_ids())
      CHECK(close(theta_eval(G.element(a) * G.element(b), psi, Direction::theta),
                  theta_eval(G.element(a), psi, Direction::theta) * theta_eval(G.element(b), psi, Direction::theta)));
}

TEST_CASE("Whittaker functions transform under U") {
  const auto sp = build_gg_space(2, 5, Direction::theta);
  const auto d = decompose(sp, 0);
  const auto& G = *sp->context().group;
  const auto W = whittaker_function(*sp, d.components[3], 0);
  for (int g = 0; g < G.size(); g += 3)
    for (int u : G.unipotent_ids())
      CHECK(close(W.at(G.multiply(u, g)), theta_eval(G.element(u), sp->psi(), Direction::theta) * W.at(g)));
}

TEST_CASE("pairing") {
  const auto ctx = make_rank_context(2, 3);
  const AdditiveCharacter psi(3);
  const int k = ctx->kirillov_dim();
  for (int r = 0; r < k; ++r)
    for (int s = 0; s < k; ++s) {
      const KirillovFunction f{ctx, psi, Direction::theta, delta(k, r)};
      const KirillovFunction phi{ctx, psi, Direction::theta_bar, delta(k, s)};
      CHECK(close(pairing(f, phi), r == s ? 1.0 : 0.0));
      CHECK(close(pairing(f, phi, 2.5), r == s ? 2.5 : 0.0));
    }
  const KirillovFunction f{ctx, psi, Direction::theta, Vector::Ones(k)};
  const KirillovFunction zero{ctx, psi, Direction::theta_bar, Vector::Zero(k)};
  CHECK(close(pairing(f, zero), 0.0));
  CHECK_THROWS_AS(pairing(f, f), DirectionMismatch);
}

TEST_CASE("cuspidal restriction round trip") {
  for (auto [n, q] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {2, 5}}) {
    const auto sp = build_gg_space(n, q, Direction::theta);
    const auto d = decompose(sp, 0);
    const auto& ctx = sp->context();
    for (const auto& c : d.components) {
      const Matrix R = restriction_matrix(ctx, c.basis);
      if (c.cuspidal) {
        CHECK(R.rows() == c.dim());
        CHECK(numerical_rank(R) == ctx.kirillov_dim());
        const auto W = whittaker_function(*sp, c, 0);
        const auto f = restrict_to_P(W);
        CHECK((extend_from_P(*sp, c, f).values - W.values).norm() < 1e-10);

        const KirillovFunction zero{sp->context_ptr(), sp->psi(), Direction::theta,
                                    Vector::Zero(ctx.kirillov_dim())};
        CHECK(extend_from_P(*sp, c, zero).values.norm() == 0.0);

        const KirillovFunction d0{sp->context_ptr(), sp->psi(), Direction::theta, delta(ctx.kirillov_dim(), 0)};
        const auto E = extend_from_P(*sp, c, d0);
        CHECK((restrict_to_P(E).values - d0.values).norm() < 1e-10);
        CHECK(subspace_residual(c.basis, E.values) < 1e-10);
      } else {
        CHECK(numerical_rank(R) < c.dim());  // non-injective
        CHECK_THROWS_AS(extension_matrix(ctx, c.basis), SingularMatrix);
      }
    }
  }
}

TEST_CASE("tilde and epsilon maps against direct evaluation") {
  for (auto [n, q] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}}) {
    const auto sp = build_gg_space(n, q, Direction::theta);
    const auto bar = build_gg_space(n, q, Direction::theta_bar);
    const auto d = decompose(sp, 0);
    const auto& G = *sp->context().group;
    const auto& se = sp->context().special;
    for (const auto& c : d.components) {
      const auto W = whittaker_function(*sp, c, 0);
      const auto Wt = tilde_map(W);
      const auto We = epsilon_map(W);
      CHECK(Wt.direction == Direction::theta_bar);
      CHECK(We.direction == Direction::theta_bar);
      for (int g = 0; g < G.size(); ++g) {
        const auto& ge = G.element(g);
        CHECK(close(Wt.at(g), W.at(se.w * iota(ge))));
        CHECK(close(We.at(g), W.at(se.eps * ge)));
      }
      CHECK((tilde_map(Wt).values - W.values).norm() < 1e-12);
      CHECK((epsilon_map(We).values - W.values).norm() < 1e-12);

      // The images of the whole component are invariant subspaces of the theta-bar space.
      const Matrix T = tilde_values(sp->context(), sp->psi(), Direction::theta, c.basis);
      const Matrix E = epsilon_values(sp->context(), sp->psi(), Direction::theta, c.basis);
      CHECK(invariance_deviation(*bar, T) < 1e-10);
      CHECK(invariance_deviation(*bar, E) < 1e-10);
    }
  }
}

TEST_CASE("epsilon transport matches a direct theta-bar decomposition") {
  const auto sp = build_gg_space(2, 5, Direction::theta);
  const auto bar = build_gg_space(2, 5, Direction::theta_bar);
  const auto d = decompose(sp, 0);
  const auto t = epsilon_transport(d, bar);
  const auto direct = decompose(bar, 0);
  REQUIRE(t.components.size() == direct.components.size());
  for (const auto& c : t.components) {
    CHECK(c.direction == Direction::theta_bar);
    CHECK(invariance_deviation(*bar, c.basis) < 1e-10);
    const int hit = find_containing_component(direct, c.basis);
    REQUIRE(hit >= 0);
    CHECK(direct.components[hit].dim() == c.dim());
    // W -> W^eps intertwines rho(g) with rho(g), so the character is unchanged.
    for (std::size_t g = 0; g < c.character.size(); ++g)
      CHECK(close(c.character[g], d.components[c.id].character[g], 1e-9));
  }
}

TEST_CASE("embedding rank n-1 functions on the mirabolic subgroup") {
  for (auto [n, q] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {3, 3}}) {
    const auto upper = make_rank_context(n, q);
    const auto lower_sp = build_gg_space(n - 1, q, Direction::theta_bar);
    const auto d = decompose(lower_sp, 0);
    const auto& P = upper->group->mirabolic_ids();
    for (const auto& c : d.components) {
      const auto W = whittaker_function(*lower_sp, c, 0);
      const auto phi = embed_tau(W, upper);
      for (int p : P) {
        const auto& pe = upper->group->element(p);
        const auto A = mirabolic_block(pe);
        const auto v = pe * embed_lower(A).inverse();
        CHECK(is_upper_unitriangular(v));
        CHECK(close(phi.at(p), theta_eval(v, W.psi, Direction::theta_bar) * W.at(A)));
      }
      CHECK((lower_restriction(phi, lower_sp->context_ptr()).values - W.values).norm() < 1e-12);
    }
    const WhittakerFunction zero{lower_sp->context_ptr(), lower_sp->psi(), Direction::theta_bar,
                                 Vector::Zero(lower_sp->dim()), -1};
    CHECK(embed_tau(zero, upper).values.norm() == 0.0);
  }
}
