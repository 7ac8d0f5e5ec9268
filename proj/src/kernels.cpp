#include "ffgamma/kernels.hpp"

#include <omp.h>

namespace ffgamma::kernels {

ActionTable build_action_table(const RankContext& ctx) {
  const auto& group = *ctx.group;
  ActionTable t;
  t.group_size = group.size();
  t.dim = ctx.cosets.size();
  t.target.resize(std::size_t(t.group_size) * t.dim);
  t.exponent.resize(std::size_t(t.group_size) * t.dim);
  const auto& reps = ctx.cosets.representative_ids();
#pragma omp parallel for schedule(static)
  for (int g = 0; g < t.group_size; ++g) {
    const auto& ge = group.element(g);
    for (int r = 0; r < t.dim; ++r) {
      const auto& e = ctx.cosets.locate(group.id_of(group.element(reps[r]) * ge));
      t.target[std::size_t(g) * t.dim + r] = e.coset;
      t.exponent[std::size_t(g) * t.dim + r] = static_cast<std::uint8_t>(e.theta_sum);
    }
  }
  return t;
}

Matrix apply(const ActionTable& t, Phases phases, int g, const Matrix& B) {
  Matrix out(t.dim, B.cols());
  const std::int32_t* tg = &t.target[std::size_t(g) * t.dim];
  const std::uint8_t* ex = &t.exponent[std::size_t(g) * t.dim];
  for (Eigen::Index c = 0; c < B.cols(); ++c)
    for (int r = 0; r < t.dim; ++r) out(r, c) = phases[ex[r]] * B(tg[r], c);
  return out;
}

Matrix average_commutant(const ActionTable& t, Phases phases, const Matrix& X) {
  const int n = t.dim;
  const int q = static_cast<int>(phases.size());
  Matrix H = Matrix::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 4)
  for (int col = 0; col < n; ++col) {
    Vector acc = Vector::Zero(n);
    for (int g = 0; g < t.group_size; ++g) {
      const std::int32_t* tg = &t.target[std::size_t(g) * n];
      const std::uint8_t* ex = &t.exponent[std::size_t(g) * n];
      const int tc = tg[col];
      const int ec = ex[col];
      const CScalar* xcol = X.col(tc).data();
      for (int r = 0; r < n; ++r) {
        int e = ex[r] - ec;
        if (e < 0) e += q;
        acc[r] += phases[e] * xcol[tg[r]];
      }
    }
    H.col(col) = acc / double(t.group_size);
  }
  return H;
}

std::vector<CScalar> characters(const ActionTable& t, Phases phases, const Matrix& P) {
  std::vector<CScalar> chi(t.group_size);
  const int n = t.dim;
#pragma omp parallel for schedule(static)
  for (int g = 0; g < t.group_size; ++g) {
    const std::int32_t* tg = &t.target[std::size_t(g) * n];
    const std::uint8_t* ex = &t.exponent[std::size_t(g) * n];
    CScalar s = 0;
    for (int r = 0; r < n; ++r) s += phases[ex[r]] * P(tg[r], r);
    chi[g] = s;
  }
  return chi;
}

Matrix subgroup_average(const ActionTable& t, Phases phases, std::span<const int> ids,
                        const Matrix& B) {
  const int n = t.dim;
  Matrix out = Matrix::Zero(n, B.cols());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    for (int x : ids) {
      const std::size_t off = std::size_t(x) * n + r;
      const CScalar ph = phases[t.exponent[off]];
      out.row(r) += ph * B.row(t.target[off]);
    }
  }
  if (!ids.empty()) out /= double(ids.size());
  return out;
}

namespace reference {

Matrix dense_action(const ActionTable& t, Phases phases, int g) {
  Matrix R = Matrix::Zero(t.dim, t.dim);
  for (int r = 0; r < t.dim; ++r) R(r, t.to(g, r)) = phases[t.exp(g, r)];
  return R;
}

Matrix average_commutant(const ActionTable& t, Phases phases, const Matrix& X) {
  Matrix H = Matrix::Zero(t.dim, t.dim);
  for (int g = 0; g < t.group_size; ++g) {
    const Matrix R = dense_action(t, phases, g);
    H += R * X * R.adjoint();
  }
  return H / double(t.group_size);
}

std::vector<CScalar> characters(const ActionTable& t, Phases phases, const Matrix& P) {
  std::vector<CScalar> chi(t.group_size);
  for (int g = 0; g < t.group_size; ++g) chi[g] = (P * dense_action(t, phases, g)).trace();
  return chi;
}

Matrix subgroup_average(const ActionTable& t, Phases phases, std::span<const int> ids,
                        const Matrix& B) {
  Matrix out = Matrix::Zero(t.dim, B.cols());
  for (int x : ids) out += dense_action(t, phases, x) * B;
  if (!ids.empty()) out /= double(ids.size());
  return out;
}

}  // namespace reference

}  // namespace ffgamma::kernels
