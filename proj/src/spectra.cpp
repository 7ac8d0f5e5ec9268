#include "ffgamma/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ffgamma {

GGSpace::GGSpace(std::shared_ptr<const RankContext> ctx, AdditiveCharacter psi, Direction direction)
    : ctx_(std::move(ctx)), psi_(psi), direction_(direction) {
  if (psi_.modulus() != ctx_->modulus) throw Error("GGSpace: character modulus differs from field");
  action_ = std::make_shared<const kernels::ActionTable>(kernels::build_action_table(*ctx_));
  const int sign = psi_.sign(direction_);
  phases_.reserve(ctx_->modulus);
  for (int e = 0; e < ctx_->modulus; ++e) phases_.push_back(psi_.at(sign * e));
}

Matrix GGSpace::act(int g, const Matrix& B) const { return kernels::apply(*action_, phases_, g, B); }

Matrix GGSpace::dense_action(int g) const {
  return kernels::reference::dense_action(*action_, phases_, g);
}

CScalar IrrepComponent::omega(int z) const {
  z %= modulus;
  if (z < 0) z += modulus;
  if (z == 0 || static_cast<std::size_t>(z) >= central_character.size())
    throw Error("omega: argument outside F_q^x");
  return central_character[z];
}

std::vector<int> Decomposition::cuspidal_ids() const {
  std::vector<int> ids;
  for (const auto& c : components)
    if (c.cuspidal) ids.push_back(c.id);
  return ids;
}

std::shared_ptr<const GGSpace> build_gg_space(int n, int q, Direction direction, int psi_direction,
                                              std::uint64_t max_order) {
  auto ctx = make_rank_context(n, q, max_order);
  return std::make_shared<const GGSpace>(ctx, AdditiveCharacter(q, psi_direction), direction);
}

double commutant_dimension(const GGSpace& space, const Matrix& basis) {
  const Matrix P = basis * basis.adjoint();
  const auto chi = kernels::characters(space.action(), space.phases(), P);
  double s = 0;
  for (const auto& c : chi) s += std::norm(c);
  return s / double(chi.size());
}

bool is_cuspidal(const GGSpace& space, const Matrix& basis, double tol) {
  const auto& group = *space.context().group;
  for (int k = 1; k < space.rank(); ++k) {
    const auto ids = group.parabolic_radical_ids(k);
    const Matrix avg = kernels::subgroup_average(space.action(), space.phases(), ids, basis);
    if (avg.cwiseAbs().maxCoeff() >= tol) return false;
  }
  return true;
}

bool is_cuspidal(const GGSpace& space, const IrrepComponent& c, double tol) {
  return is_cuspidal(space, c.basis, tol);
}

std::vector<CScalar> central_character(const GGSpace& space, const Matrix& basis, double tol) {
  const int q = space.modulus();
  const auto& group = *space.context().group;
  std::vector<CScalar> omega(q, CScalar(0));
  const double d = double(basis.cols());
  for (int z = 1; z < q; ++z) {
    const int zid = group.id_of(GroupElement::scalar(space.rank(), q, z));
    const Matrix moved = space.act(zid, basis);
    const CScalar w = (basis.adjoint() * moved).trace() / d;
    const double dev = (moved - w * basis).cwiseAbs().maxCoeff();
    if (dev > tol) throw NotScalar("central_character: center does not act by a scalar");
    omega[z] = w;
  }
  return omega;
}

double invariance_deviation(const GGSpace& space, const Matrix& basis) {
  double worst = 0;
  for (int g : space.context().group->generator_ids()) {
    const Matrix moved = space.act(g, basis);
    const Matrix inside = basis * (basis.adjoint() * moved);
    worst = std::max(worst, (moved - inside).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace {

// Total order on character values with tolerance-equality.
int compare_values(CScalar a, CScalar b) {
  constexpr double eq = 1e-6;
  if (std::abs(a.real() - b.real()) >= eq) return a.real() < b.real() ? -1 : 1;
  if (std::abs(a.imag() - b.imag()) >= eq) return a.imag() < b.imag() ? -1 : 1;
  return 0;
}

}  // namespace

void annotate_component(const GGSpace& space, IrrepComponent& c) {
  c.rank = space.rank();
  c.modulus = space.modulus();
  c.direction = space.direction();
  c.cuspidal = is_cuspidal(space, c.basis);
  c.central_character = central_character(space, c.basis);
  c.character = kernels::characters(space.action(), space.phases(), c.basis * c.basis.adjoint());
}

void assign_component_ids(std::vector<IrrepComponent>& components) {
  // Fingerprint: characters on the first 16 ids, then the remaining ids as a tie-break.
  std::stable_sort(components.begin(), components.end(),
                   [](const IrrepComponent& a, const IrrepComponent& b) {
                     if (a.dim() != b.dim()) return a.dim() < b.dim();
                     const std::size_t n = std::min(a.character.size(), b.character.size());
                     for (std::size_t i = 0; i < n; ++i) {
                       const int c = compare_values(a.character[i], b.character[i]);
                       if (c != 0) return c < 0;
                     }
                     return false;
                   });
  for (std::size_t i = 0; i < components.size(); ++i) components[i].id = static_cast<int>(i);
}

Decomposition decompose(std::shared_ptr<const GGSpace> space, std::uint64_t seed,
                        DecomposeReport* report) {
  DecomposeReport local;
  std::mt19937_64 rng(seed);
  const int n = space->dim();
  std::deque<Matrix> pending;
  pending.push_back(Matrix::Identity(n, n));
  std::vector<Matrix> accepted;

  while (!pending.empty()) {
    Matrix B = std::move(pending.front());
    pending.pop_front();
    const double cd = commutant_dimension(*space, B);
    const long k = std::lround(cd);
    if (std::abs(cd - double(k)) > 1e-6 || k < 1) {
      throw Error("decompose: non-integral commutant dimension " + std::to_string(cd));
    }
    if (k == 1) {
      accepted.push_back(std::move(B));
      continue;
    }
    bool split = false;
    for (int attempt = 0; attempt < tol::cluster_retries && !split; ++attempt) {
      const Matrix Y = random_hermitian(B.cols(), rng);
      const Matrix H = kernels::average_commutant(space->action(), space->phases(), B * Y * B.adjoint());
      Matrix M = B.adjoint() * H * B;
      M = (M + M.adjoint()).eval() * 0.5;
      std::vector<Eigenspace> spaces;
      try {
        spaces = eigenspaces_normal(M, tol::cluster);
      } catch (const ClusterAmbiguity&) {
        ++local.redraws;
        continue;
      }
      if (spaces.size() < 2) {
        ++local.redraws;
        continue;
      }
      for (auto& es : spaces) pending.push_back(B * es.basis);
      ++local.splits;
      split = true;
    }
    if (!split) throw ClusterAmbiguity("decompose: no clean split after retries");
  }

  Decomposition d;
  d.space = space;
  d.seed = seed;
  int total = 0;
  for (auto& B : accepted) {
    IrrepComponent c;
    c.basis = std::move(B);
    annotate_component(*space, c);
    total += c.dim();
    local.max_invariance_deviation =
        std::max(local.max_invariance_deviation, invariance_deviation(*space, c.basis));
    d.components.push_back(std::move(c));
  }
  if (total != n) throw Error("decompose: component dimensions do not sum to the space dimension");
  assign_component_ids(d.components);
  for (std::size_t i = 0; i < d.components.size(); ++i)
    for (std::size_t j = i + 1; j < d.components.size(); ++j)
      local.max_overlap = std::max(
          local.max_overlap,
          (d.components[i].basis.adjoint() * d.components[j].basis).cwiseAbs().maxCoeff());
  if (report) *report = local;
  return d;
}

int find_containing_component(const Decomposition& d, const Matrix& V, double tol) {
  for (const auto& c : d.components)
    if (subspace_residual(c.basis, V) < tol) return c.id;
  return -1;
}

}  // namespace ffgamma
