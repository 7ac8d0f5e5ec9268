#pragma once

// Data-parallel kernels over the monomial right-translation action on
// ind_U^G theta.  rho(g) has a single nonzero per row:
//   (rho(g) W)[r] = phase(exponent[g][r]) * W[target[g][r]].
//
// The OpenMP kernels parallelize over output entries only, each entry being
// a serial sum in a fixed order, so results do not depend on thread count.
// kernels::reference holds dense serial versions kept for testing and
// benchmarking.

#include <cstdint>
#include <span>
#include <vector>

#include "ffgamma/algebra.hpp"
#include "ffgamma/group.hpp"

namespace ffgamma::kernels {

struct ActionTable {
  int group_size = 0;
  int dim = 0;
  std::vector<std::int32_t> target;    // [g * dim + r]
  std::vector<std::uint8_t> exponent;  // theta-sum of the unipotent part, in [0, q)

  int to(int g, int r) const { return target[std::size_t(g) * dim + r]; }
  int exp(int g, int r) const { return exponent[std::size_t(g) * dim + r]; }
};

/// r * g = u * r' for every coset representative r and every g.
ActionTable build_action_table(const RankContext& ctx);

/// phases[e] = theta value attached to exponent e.
using Phases = std::span<const CScalar>;

/// rho(g) B.
Matrix apply(const ActionTable& t, Phases phases, int g, const Matrix& B);

/// (1/|G|) sum_g rho(g) X rho(g)^{-1}.
Matrix average_commutant(const ActionTable& t, Phases phases, const Matrix& X);

/// chi(g) = tr(P rho(g)) for every g.
std::vector<CScalar> characters(const ActionTable& t, Phases phases, const Matrix& P);

/// (1/|S|) sum_{x in S} rho(x) B.
Matrix subgroup_average(const ActionTable& t, Phases phases, std::span<const int> ids,
                        const Matrix& B);

namespace reference {

Matrix dense_action(const ActionTable& t, Phases phases, int g);
Matrix average_commutant(const ActionTable& t, Phases phases, const Matrix& X);
std::vector<CScalar> characters(const ActionTable& t, Phases phases, const Matrix& P);
Matrix subgroup_average(const ActionTable& t, Phases phases, std::span<const int> ids,
                        const Matrix& B);

}  // namespace reference

}  // namespace ffgamma::kernels
