#include <algorithm>
#include <map>

#include "doctest.h"
#include "ffgamma/errors.hpp"
#include "ffgamma/spectra.hpp"

using namespace ffgamma;

namespace {

// Character of ind_U^G theta by the induced-character formula, from group
// elements alone: chi(g) = sum over representatives x with x g x^-1 in U of
// theta(x g x^-1).
std::vector<CScalar> induced_character(const RankContext& ctx, const AdditiveCharacter& psi) {
  const auto& G = *ctx.group;
  std::vector<CScalar> chi(G.size(), 0.0);
  for (int g = 0; g < G.size(); ++g) {
    for (int rid : ctx.cosets.representative_ids()) {
      const auto& x = G.element(rid);
      const auto c = x * G.element(g) * x.inverse();
      if (is_upper_unitriangular(c)) chi[g] += psi.at(superdiagonal_sum(c));
    }
  }
  return chi;
}

// Number of theta-relevant (U, U) double cosets = dim End_G(ind_U^G theta).
double hecke_dimension(const RankContext& ctx, const AdditiveCharacter& psi) {
  const auto& G = *ctx.group;
  const auto& U = G.unipotent_ids();
  double count = 0;
  for (int g = 0; g < G.size(); ++g) {
    const auto& ge = G.element(g);
    const auto gi = ge.inverse();
    bool relevant = true;
    int meet = 0;
    for (int uid : U) {
      const auto c = gi * G.element(uid) * ge;  // g^-1 u g
      if (!is_upper_unitriangular(c)) continue;
      ++meet;
      if (std::abs(psi.at(superdiagonal_sum(G.element(uid))) - psi.at(superdiagonal_sum(c))) > 1e-12)
        relevant = false;
    }
    if (relevant) count += double(meet) / (double(U.size()) * double(U.size()));
  }
  return count;
}

CScalar inner(const std::vector<CScalar>& a, const std::vector<CScalar>& b) {
  CScalar s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s / double(a.size());
}

// Jacquet criterion from characters: the dimension of N-fixed vectors is the
// average of chi over N.
bool cuspidal_by_character(const GroupTable& G, const std::vector<CScalar>& chi) {
  for (int k = 1; k < G.rank(); ++k) {
    const auto N = G.parabolic_radical_ids(k);
    CScalar s = 0;
    for (int x : N) s += chi[x];
    if (std::abs(s) / double(N.size()) > 1e-8) return false;
  }
  return true;
}

std::vector<int> dims(const Decomposition& d) {
  std::vector<int> out;
  for (const auto& c : d.components) out.push_back(c.dim());
  return out;
}

struct Case {
  int n, q, gg_dim, cuspidal;
  std::vector<int> dims;
};

}  // namespace

TEST_CASE("decomposition examples") {
  const std::vector<Case> cases = {
      {2, 3, 16, 3, {2, 2, 2, 3, 3, 4}},
      {3, 2, 21, 2, {3, 3, 7, 8}},
      {2, 5, 96, 10, {}},
      {1, 2, 1, 1, {1}},
  };
  for (const auto& c : cases) {
    CAPTURE(c.n);
    CAPTURE(c.q);
    const auto sp = build_gg_space(c.n, c.q, Direction::theta);
    CHECK(sp->dim() == c.gg_dim);
    const auto d = decompose(sp, 0);
    if (!c.dims.empty()) CHECK(dims(d) == c.dims);
    int total = 0;
    for (const auto& comp : d.components) total += comp.dim();
    CHECK(total == c.gg_dim);
    CHECK(static_cast<int>(d.cuspidal_ids().size()) == c.cuspidal);
    for (std::size_t i = 0; i < d.components.size(); ++i) CHECK(d.components[i].id == int(i));
  }
}

TEST_CASE("decomposition agrees with the induced character and the Hecke algebra") {
  for (auto [n, q] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {2, 5}}) {
    CAPTURE(n);
    CAPTURE(q);
    for (Direction dir : {Direction::theta, Direction::theta_bar}) {
      const auto sp = build_gg_space(n, q, dir);
      const auto d = decompose(sp, 3);
      const AdditiveCharacter theta(q, sp->psi().sign(dir));
      const auto chi_gg = induced_character(sp->context(), theta);
      const double hecke = hecke_dimension(sp->context(), theta);
      CHECK(std::abs(hecke - double(d.components.size())) < 1e-9);

      std::vector<CScalar> sum(chi_gg.size(), 0.0);
      int cusp = 0;
      for (const auto& c : d.components) {
        for (std::size_t g = 0; g < sum.size(); ++g) sum[g] += c.character[g];
        CHECK(std::abs(inner(c.character, c.character) - 1.0) < 1e-9);
        CHECK(std::abs(inner(c.character, chi_gg) - 1.0) < 1e-9);
        CHECK(c.cuspidal == cuspidal_by_character(*sp->context().group, c.character));
        cusp += c.cuspidal;
      }
      for (std::size_t g = 0; g < sum.size(); ++g) CHECK(std::abs(sum[g] - chi_gg[g]) < 1e-9);
      for (std::size_t i = 0; i < d.components.size(); ++i)
        for (std::size_t j = i + 1; j < d.components.size(); ++j)
          CHECK(std::abs(inner(d.components[i].character, d.components[j].character)) < 1e-9);
      if (n == 2) CHECK(cusp == q * (q - 1) / 2);
    }
  }
}

TEST_CASE("components are invariant, orthogonal and irreducible") {
  const auto sp = build_gg_space(2, 5, Direction::theta);
  DecomposeReport rep;
  const auto d = decompose(sp, 11, &rep);
  CHECK(rep.max_invariance_deviation < 1e-10);
  CHECK(rep.max_overlap < 1e-10);
  for (const auto& c : d.components) {
    CHECK((c.basis.adjoint() * c.basis - Matrix::Identity(c.dim(), c.dim())).norm() < 1e-10);
    CHECK(invariance_deviation(*sp, c.basis) < 1e-10);
    CHECK(std::abs(commutant_dimension(*sp, c.basis) - 1.0) < 1e-9);
  }
  // The whole space is not irreducible: its commutant has one dimension per component.
  CHECK(std::abs(commutant_dimension(*sp, Matrix::Identity(sp->dim(), sp->dim())) -
                 double(d.components.size())) < 1e-8);
}

TEST_CASE("component ids do not depend on the seed") {
  const auto sp = build_gg_space(2, 5, Direction::theta);
  const auto a = decompose(sp, 0);
  const auto b = decompose(sp, 12345);
  REQUIRE(a.components.size() == b.components.size());
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    CHECK(a.components[i].dim() == b.components[i].dim());
    CHECK(max_principal_cosine(a.components[i].basis, b.components[i].basis) > 1 - 1e-9);
    CHECK(a.components[i].cuspidal == b.components[i].cuspidal);
  }
  const auto again = decompose(sp, 0);
  for (std::size_t i = 0; i < a.components.size(); ++i) CHECK(a.components[i].basis == again.components[i].basis);
}

TEST_CASE("cuspidality and central characters") {
  const auto sp = build_gg_space(2, 3, Direction::theta);
  const auto d = decompose(sp, 0);
  int steinberg = 0;
  for (const auto& c : d.components) {
    CHECK(std::abs(c.omega(1) - 1.0) < 1e-12);
    if (c.dim() == 3 && !c.cuspidal) ++steinberg;
    // omega is a character of F_3^x
    CHECK(std::abs(c.omega(2) * c.omega(2) - c.omega(1)) < 1e-10);
    const auto w = central_character(*sp, c.basis);
    for (int z = 1; z < 3; ++z) CHECK(std::abs(w[z] - c.omega(z)) < 1e-12);
  }
  CHECK(steinberg >= 1);
  // A sum of two components with different central characters is not scalar on the center.
  Matrix mixed(sp->dim(), 2);
  mixed.col(0) = d.components[0].basis.col(0);
  mixed.col(1) = d.components[1].basis.col(0);
  CHECK_THROWS_AS(central_character(*sp, mixed), NotScalar);

  const auto line = build_gg_space(1, 5, Direction::theta);
  const auto dl = decompose(line, 0);
  CHECK(dl.components.size() == 4);  // every character of F_5^x
  for (const auto& c : dl.components) CHECK(c.cuspidal);
}

TEST_CASE("find_containing_component") {
  const auto sp = build_gg_space(3, 2, Direction::theta);
  const auto d = decompose(sp, 0);
  for (const auto& c : d.components) CHECK(find_containing_component(d, c.basis.col(0)) == c.id);
  const Matrix all = Matrix::Ones(sp->dim(), 1);
  CHECK(find_containing_component(d, all) == -1);
}

TEST_CASE("budget") {
  CHECK_THROWS_AS(build_gg_space(3, 3, Direction::theta, +1, 1000), BudgetExceeded);
}
