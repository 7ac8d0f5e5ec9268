#include "ffgamma/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ffgamma {

bool is_supported_prime(int q) { return q == 2 || q == 3 || q == 5 || q == 7; }

FieldScalar::FieldScalar(long long value, int modulus) : modulus_(modulus) {
  if (modulus < 2) throw Error("field modulus must be at least 2");
  long long r = value % modulus;
  if (r < 0) r += modulus;
  value_ = static_cast<int>(r);
}

FieldScalar FieldScalar::operator+(FieldScalar o) const {
  return FieldScalar(value_ + o.value_, modulus_);
}
FieldScalar FieldScalar::operator-(FieldScalar o) const {
  return FieldScalar(value_ - o.value_, modulus_);
}
FieldScalar FieldScalar::operator*(FieldScalar o) const {
  return FieldScalar(static_cast<long long>(value_) * o.value_, modulus_);
}
FieldScalar FieldScalar::operator-() const { return FieldScalar(-value_, modulus_); }

FieldScalar FieldScalar::inverse() const {
  if (value_ == 0) throw NotInvertible("zero has no inverse in F_q");
  return FieldScalar(inverse_mod(value_, modulus_), modulus_);
}

int inverse_mod(int a, int q) {
  a %= q;
  if (a < 0) a += q;
  if (a == 0) throw NotInvertible("zero has no inverse in F_q");
  // q is tiny; Fermat by repeated multiplication.
  long long r = 1;
  for (int k = 0; k < q - 2; ++k) r = (r * a) % q;
  return static_cast<int>(r);
}

const char* to_string(Direction d) { return d == Direction::theta ? "theta" : "theta_bar"; }

AdditiveCharacter::AdditiveCharacter(int modulus, int direction)
    : modulus_(modulus), direction_(direction) {
  if (modulus < 2) throw Error("character modulus must be at least 2");
  if (direction != 1 && direction != -1) throw Error("character direction must be +1 or -1");
  roots_.reserve(modulus);
  for (int x = 0; x < modulus; ++x) {
    roots_.push_back(std::polar(1.0, 2.0 * std::numbers::pi * direction * x / modulus));
  }
}

CScalar AdditiveCharacter::operator()(FieldScalar x) const { return roots_[x.value()]; }

CScalar AdditiveCharacter::at(long long x) const {
  long long r = x % modulus_;
  if (r < 0) r += modulus_;
  return roots_[r];
}

std::string AdditiveCharacter::descriptor() const {
  return direction_ > 0 ? "exp(2*pi*i*x/q)" : "exp(-2*pi*i*x/q)";
}

CScalar psi_eval(const AdditiveCharacter& chi, FieldScalar x) { return chi(x); }

Matrix solve_linear(const Matrix& A, const Matrix& B, double tol, double rcond_bound) {
  if (A.rows() != A.cols()) throw Error("solve_linear: matrix is not square");
  if (A.rows() != B.rows()) throw Error("solve_linear: dimension mismatch");
  if (A.rows() == 0) return Matrix(0, B.cols());
  Eigen::PartialPivLU<Matrix> lu(A);
  const double rc = lu.rcond();
  if (!(rc > rcond_bound)) {
    throw SingularMatrix("solve_linear: reciprocal condition " + std::to_string(rc) +
                         " below bound");
  }
  Matrix X = lu.solve(B);
  const double bnorm = B.norm();
  const double res = (A * X - B).norm();
  if (res > tol * (A.norm() * X.norm() + bnorm)) {
    throw SingularMatrix("solve_linear: residual " + std::to_string(res) + " above tolerance");
  }
  return X;
}

Vector solve_linear(const Matrix& A, const Vector& b, double tol, double rcond_bound) {
  return solve_linear(A, Matrix(b), tol, rcond_bound).col(0);
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<Eigenspace> eigenspaces_normal(const Matrix& M, double tol_cluster) {
  if (M.rows() != M.cols()) throw Error("eigenspaces_normal: matrix is not square");
  const Eigen::Index n = M.rows();
  if (n == 0) return {};
  const double scale = std::max(1.0, M.norm());
  const Matrix adj = M.adjoint();
  if ((M * adj - adj * M).norm() > 1e-8 * scale * scale) {
    throw NotNormal("eigenspaces_normal: matrix is not normal");
  }

  std::vector<CScalar> values(n);
  Matrix vectors;
  if ((M - adj).norm() <= tol::linear_algebra * scale) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix((M + adj) * 0.5));
    for (Eigen::Index i = 0; i < n; ++i) values[i] = es.eigenvalues()(i);
    vectors = es.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<Matrix> es(M);
    for (Eigen::Index i = 0; i < n; ++i) values[i] = es.eigenvalues()(i);
    vectors = es.eigenvectors();
  }

  DisjointSets sets(static_cast<int>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) < tol_cluster) sets.unite(int(i), int(j));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (sets.find(int(i)) != sets.find(int(j)) &&
          std::abs(values[i] - values[j]) < 10.0 * tol_cluster) {
        throw ClusterAmbiguity("eigenspaces_normal: clusters closer than 10*tol");
      }

  std::vector<std::vector<Eigen::Index>> members;
  std::vector<int> root_slot(n, -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int r = sets.find(int(i));
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<int>(members.size());
      members.emplace_back();
    }
    members[root_slot[r]].push_back(i);
  }

  std::vector<Eigenspace> out;
  out.reserve(members.size());
  for (const auto& idx : members) {
    CScalar mean = 0;
    Matrix cols(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      mean += values[idx[k]];
      cols.col(Eigen::Index(k)) = vectors.col(idx[k]);
    }
    mean /= double(idx.size());
    Eigen::HouseholderQR<Matrix> qr(cols);
    Matrix q = qr.householderQ() * Matrix::Identity(n, cols.cols());
    out.push_back({mean, std::move(q)});
  }
  std::sort(out.begin(), out.end(), [](const Eigenspace& a, const Eigenspace& b) {
    if (a.eigenvalue.real() != b.eigenvalue.real()) return a.eigenvalue.real() < b.eigenvalue.real();
    return a.eigenvalue.imag() < b.eigenvalue.imag();
  });
  return out;
}

Matrix random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix X(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    X(i, i) = gauss(rng);
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      X(i, j) = CScalar(re, im);
      X(j, i) = CScalar(re, -im);
    }
  }
  return X;
}

Eigen::Index numerical_rank(const Matrix& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

double max_principal_cosine(const Matrix& A, const Matrix& B) {
  if (A.cols() == 0 || B.cols() == 0) return 0.0;
  Matrix overlap = A.adjoint() * B;
  Eigen::JacobiSVD<Matrix> svd(overlap);
  return svd.singularValues()(0);
}

double subspace_residual(const Matrix& B, const Matrix& V) {
  const double vn = V.norm();
  if (vn == 0.0) return 0.0;
  return (V - B * (B.adjoint() * V)).norm() / vn;
}

}  // namespace ffgamma
