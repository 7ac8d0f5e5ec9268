#pragma once

// Whittaker and Kirillov model mechanics: restriction to the mirabolic
// subgroup and its inverse on cuspidal components, the tilde and epsilon
// maps, the bilinear i/I pairing, and the identification of rank n-1
// Whittaker functions with functions on U_n\P.

#include <functional>
#include <memory>

#include "ffgamma/algebra.hpp"
#include "ffgamma/group.hpp"
#include "ffgamma/spectra.hpp"

namespace ffgamma {

/// W(ug) = theta(u) W(g); values on the U\G representatives of ctx.
struct WhittakerFunction {
  std::shared_ptr<const RankContext> ctx;
  AdditiveCharacter psi;
  Direction direction;
  Vector values;
  int component = -1;

  int rank() const { return ctx->rank; }
  /// W at an arbitrary group id, through the coset decomposition.
  CScalar at(int gid) const;
  CScalar at(const GroupElement& g) const { return at(ctx->group->id_of(g)); }
};

/// f(ug) = theta(u) f(g) on P; values on the U\P representatives of ctx.
struct KirillovFunction {
  std::shared_ptr<const RankContext> ctx;
  AdditiveCharacter psi;
  Direction direction;
  Vector values;

  int rank() const { return ctx->rank; }
  CScalar at(int gid) const;
};

/// theta(u) = psi(u_12 + ... + u_{n-1,n}), conjugated for theta_bar.
/// Throws NotUnipotent unless u is upper unitriangular.
CScalar theta_eval(const GroupElement& u, const AdditiveCharacter& psi, Direction direction);

/// Basis of a component as Whittaker functions.
WhittakerFunction whittaker_function(const GGSpace& space, const IrrepComponent& c, int column);

KirillovFunction restrict_to_P(const WhittakerFunction& W);
/// Rows of the basis at the P representatives (|U\P| x dim).
Matrix restriction_matrix(const RankContext& ctx, const Matrix& basis);

/// The (|U\G| x |U\P|) matrix sending Kirillov values to the unique Whittaker
/// function of the component with those values on P.  Throws SingularMatrix
/// if restriction is not bijective on the component.
Matrix extension_matrix(const RankContext& ctx, const Matrix& basis);
WhittakerFunction extend_from_P(const GGSpace& space, const IrrepComponent& c,
                                const KirillovFunction& f);

/// Values of g -> W(left(g)) on the representatives, for columns W of the
/// given direction.  left must map the U-coset of g compatibly.
Matrix substitute(const RankContext& ctx, const AdditiveCharacter& psi, Direction direction,
                  const Matrix& values, const std::function<GroupElement(const GroupElement&)>& left);

/// W~(g) = W(w_n g^iota); flips the direction.
WhittakerFunction tilde_map(const WhittakerFunction& W);
Matrix tilde_values(const RankContext& ctx, const AdditiveCharacter& psi, Direction direction,
                    const Matrix& values);

/// W^eps(g) = W(eps_n g); flips the direction.
WhittakerFunction epsilon_map(const WhittakerFunction& W);
Matrix epsilon_values(const RankContext& ctx, const AdditiveCharacter& psi, Direction direction,
                      const Matrix& values);

/// Transports a theta decomposition to theta_bar through W -> W^eps.
Decomposition epsilon_transport(const Decomposition& d, std::shared_ptr<const GGSpace> target);

/// <f, phi> = measure * sum over U\P representatives of f(r) phi(r).
/// Throws DirectionMismatch unless the directions are opposite.
CScalar pairing(const KirillovFunction& f, const KirillovFunction& phi, double measure = 1.0);

/// Rank n-1 function -> rank n function on P:  phi(v g) = theta(v) W(g).
KirillovFunction embed_tau(const WhittakerFunction& wtau, std::shared_ptr<const RankContext> upper);
Matrix embed_tau_values(const RankContext& upper, const RankContext& lower,
                        const AdditiveCharacter& psi, Direction direction, const Matrix& values);

/// Inverse of embed_tau: g -> f(diag(g, 1)) on the rank n-1 representatives.
WhittakerFunction lower_restriction(const KirillovFunction& f, std::shared_ptr<const RankContext> lower);

}  // namespace ffgamma
