#pragma once

// Scalars over F_q and C, the additive character psi, and the dense linear
// algebra used by the rest of the library.

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ffgamma/errors.hpp"

namespace ffgamma {

using CScalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace tol {
inline constexpr double assertion = 1e-8;
inline constexpr double linear_algebra = 1e-10;
inline constexpr double cluster = 1e-6;
inline constexpr int cluster_retries = 8;
}  // namespace tol

/// True for the supported prime moduli {2, 3, 5, 7}.
bool is_supported_prime(int q);

class FieldScalar {
 public:
  FieldScalar(long long value, int modulus);

  int value() const { return value_; }
  int modulus() const { return modulus_; }

  FieldScalar operator+(FieldScalar o) const;
  FieldScalar operator-(FieldScalar o) const;
  FieldScalar operator*(FieldScalar o) const;
  FieldScalar operator-() const;
  /// Multiplicative inverse; throws NotInvertible on zero.
  FieldScalar inverse() const;

  bool operator==(const FieldScalar&) const = default;

 private:
  int value_;
  int modulus_;
};

/// Inverse of a nonzero residue modulo a prime q.
int inverse_mod(int a, int q);

enum class Direction { theta, theta_bar };

constexpr Direction flip(Direction d) {
  return d == Direction::theta ? Direction::theta_bar : Direction::theta;
}
const char* to_string(Direction d);

/// psi(x) = exp(2 pi i dir x / q).  dir = -1 selects the conjugate character.
class AdditiveCharacter {
 public:
  explicit AdditiveCharacter(int modulus, int direction = +1);

  int modulus() const { return modulus_; }
  int direction() const { return direction_; }

  CScalar operator()(FieldScalar x) const;
  /// Value at an arbitrary integer (reduced mod q).
  CScalar at(long long x) const;

  AdditiveCharacter conjugate() const { return AdditiveCharacter(modulus_, -direction_); }
  /// Exponent sign of theta on functions of the given direction.
  int sign(Direction d) const { return d == Direction::theta ? direction_ : -direction_; }
  std::string descriptor() const;

 private:
  int modulus_;
  int direction_;
  std::vector<CScalar> roots_;
};

CScalar psi_eval(const AdditiveCharacter& chi, FieldScalar x);

/// Solves A x = b.  Throws SingularMatrix when the reciprocal condition
/// estimate falls below rcond_bound or the residual exceeds tol * |b|.
Vector solve_linear(const Matrix& A, const Vector& b, double tol = tol::linear_algebra,
                    double rcond_bound = 1e-10);
Matrix solve_linear(const Matrix& A, const Matrix& B, double tol = tol::linear_algebra,
                    double rcond_bound = 1e-10);

struct Eigenspace {
  CScalar eigenvalue;
  Matrix basis;  // orthonormal columns
};

/// Eigenspaces of a normal matrix, clustered by single linkage at tol_cluster.
/// Eigenspaces come back ordered by (real, imag) of the cluster mean.
/// Throws NotNormal, or ClusterAmbiguity when two clusters lie within
/// 10 * tol_cluster of each other.
std::vector<Eigenspace> eigenspaces_normal(const Matrix& M, double tol_cluster = tol::cluster);

/// Random Hermitian matrix with independent standard Gaussian entries.
Matrix random_hermitian(Eigen::Index d, std::mt19937_64& rng);

/// Number of singular values above rel_tol * largest singular value.
Eigen::Index numerical_rank(const Matrix& A, double rel_tol = tol::linear_algebra);

/// Largest cosine of the principal angles between the column spans of two
/// matrices with orthonormal columns.
double max_principal_cosine(const Matrix& A, const Matrix& B);

/// |(I - B B^*) V| / |V| for B with orthonormal columns (0 when V is in span B).
double subspace_residual(const Matrix& B, const Matrix& V);

}  // namespace ffgamma
