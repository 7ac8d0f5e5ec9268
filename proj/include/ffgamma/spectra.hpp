#pragma once

// The Gelfand-Graev space ind_U^G theta, its decomposition into irreducible
// generic constituents, cuspidality, and central characters.

#include <cstdint>
#include <memory>
#include <vector>

#include "ffgamma/algebra.hpp"
#include "ffgamma/group.hpp"
#include "ffgamma/kernels.hpp"

namespace ffgamma {

/// Functions W on G with W(ug) = theta(u) W(g), stored by their values on
/// the U\G representatives, with the right-translation action.
class GGSpace {
 public:
  GGSpace(std::shared_ptr<const RankContext> ctx, AdditiveCharacter psi, Direction direction);

  int rank() const { return ctx_->rank; }
  int modulus() const { return ctx_->modulus; }
  int dim() const { return ctx_->dim(); }
  Direction direction() const { return direction_; }
  const AdditiveCharacter& psi() const { return psi_; }
  const RankContext& context() const { return *ctx_; }
  const std::shared_ptr<const RankContext>& context_ptr() const { return ctx_; }
  const kernels::ActionTable& action() const { return *action_; }
  kernels::Phases phases() const { return phases_; }

  /// theta (or theta bar) of a unipotent element, from its superdiagonal sum.
  CScalar theta_phase(int theta_sum) const { return phases_[theta_sum]; }

  /// rho(g) B for g a group id.
  Matrix act(int g, const Matrix& B) const;
  Matrix dense_action(int g) const;

 private:
  std::shared_ptr<const RankContext> ctx_;
  AdditiveCharacter psi_;
  Direction direction_;
  std::shared_ptr<const kernels::ActionTable> action_;
  std::vector<CScalar> phases_;
};

struct IrrepComponent {
  int id = -1;
  int rank = 0;
  int modulus = 0;
  Direction direction = Direction::theta;
  Matrix basis;  // orthonormal columns over the coset index set
  bool cuspidal = false;
  std::vector<CScalar> central_character;  // index z in [0, q); entry 0 unused
  std::vector<CScalar> character;          // chi(g) for every group id

  int dim() const { return static_cast<int>(basis.cols()); }
  CScalar omega(int z) const;
  /// omega(-1).
  CScalar omega_minus_one() const { return omega(modulus - 1); }
};

struct Decomposition {
  std::shared_ptr<const GGSpace> space;
  std::uint64_t seed = 0;
  std::vector<IrrepComponent> components;  // ordered by id

  std::vector<int> cuspidal_ids() const;
};

struct DecomposeReport {
  double max_invariance_deviation = 0;
  double max_overlap = 0;
  int splits = 0;
  int redraws = 0;
};

std::shared_ptr<const GGSpace> build_gg_space(int n, int q, Direction direction,
                                              int psi_direction = +1,
                                              std::uint64_t max_order = kDefaultMaxOrder);

/// Randomized commutant splitting.  Deterministic given the seed.
Decomposition decompose(std::shared_ptr<const GGSpace> space, std::uint64_t seed,
                        DecomposeReport* report = nullptr);

/// (1/|G|) sum_g |chi(g)|^2, the commutant dimension of the restricted action.
double commutant_dimension(const GGSpace& space, const Matrix& basis);

/// Jacquet criterion: the average of rho over every maximal parabolic
/// unipotent radical kills the subspace.  Vacuous (true) in rank 1.
bool is_cuspidal(const GGSpace& space, const Matrix& basis, double tol = tol::assertion);
bool is_cuspidal(const GGSpace& space, const IrrepComponent& c, double tol = tol::assertion);

/// omega(z) for z in F_q^x; throws NotScalar when rho(zI) is not scalar on the subspace.
std::vector<CScalar> central_character(const GGSpace& space, const Matrix& basis,
                                       double tol = tol::assertion);

/// max over generators of |rho(g) B - B (B^* rho(g) B)|.
double invariance_deviation(const GGSpace& space, const Matrix& basis);

/// Orders components by (dim, character fingerprint) and assigns ids.
void assign_component_ids(std::vector<IrrepComponent>& components);

/// Fills id-independent metadata (cuspidal flag, central and full character).
void annotate_component(const GGSpace& space, IrrepComponent& c);

/// Index of the component whose span contains V (residual < tol), or -1.
int find_containing_component(const Decomposition& d, const Matrix& V, double tol = tol::assertion);

}  // namespace ffgamma
