#pragma once

// Fully enumerated GL_m(F_q), its distinguished subgroups and elements, and
// canonical coset tables for U\G and U\P.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "ffgamma/algebra.hpp"

namespace ffgamma {

inline constexpr int kMaxRank = 4;
inline constexpr std::uint64_t kDefaultMaxOrder = 20000;

/// Invertible m x m matrix over F_q, m <= kMaxRank.
class GroupElement {
 public:
  /// Entries in row-major order; reduced mod q.  Throws NotInvertible if det = 0.
  GroupElement(int m, int q, std::span<const int> entries);

  static GroupElement identity(int m, int q);
  static GroupElement scalar(int m, int q, int z);
  static GroupElement diagonal(int q, std::span<const int> diag);

  int rank() const { return m_; }
  int modulus() const { return q_; }
  int operator()(int i, int j) const { return e_[i * m_ + j]; }
  FieldScalar det() const { return FieldScalar(det_, q_); }

  GroupElement operator*(const GroupElement& o) const;
  GroupElement inverse() const;
  GroupElement transpose() const;
  /// Multiplies every entry by the scalar z.
  GroupElement scaled(int z) const;

  /// Base-q code of the row-major entries, first entry most significant.
  /// Integer order of codes is the lexicographic order of entries.
  std::uint64_t code() const;

  /// Determinant mod q of raw row-major entries.
  static int determinant(int m, int q, const std::array<std::uint8_t, 16>& e);

  bool operator==(const GroupElement& o) const {
    return m_ == o.m_ && q_ == o.q_ && e_ == o.e_;
  }

 private:
  GroupElement() = default;

  int m_ = 0;
  int q_ = 0;
  std::array<std::uint8_t, 16> e_{};
  int det_ = 0;
};

/// Transpose inverse.
GroupElement iota(const GroupElement& g);

/// g -> diag(g, 1).
GroupElement embed_lower(const GroupElement& g);

/// Top-left (m-1) x (m-1) block of an element of the mirabolic subgroup.
/// Throws NotInAmbient when g is not in P.
GroupElement mirabolic_block(const GroupElement& g);

bool is_upper_unitriangular(const GroupElement& g);
/// Last row equal to (0, ..., 0, 1).
bool in_mirabolic(const GroupElement& g);
/// Sum of the superdiagonal entries mod q.
int superdiagonal_sum(const GroupElement& g);

/// prod_{k=0}^{m-1} (q^m - q^k).
std::uint64_t group_order(int m, int q);

class GroupTable {
 public:
  /// Lexicographically ordered enumeration.  Throws BudgetExceeded when the
  /// order formula exceeds max_order.
  static std::shared_ptr<const GroupTable> enumerate(int m, int q,
                                                     std::uint64_t max_order = kDefaultMaxOrder);

  int rank() const { return m_; }
  int modulus() const { return q_; }
  int size() const { return static_cast<int>(elements_.size()); }

  const GroupElement& element(int id) const { return elements_[id]; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  int id_of(const GroupElement& g) const;
  int multiply(int a, int b) const { return id_of(elements_[a] * elements_[b]); }
  int inverse(int a) const { return id_of(elements_[a].inverse()); }
  int identity_id() const { return identity_id_; }

  /// U: upper unitriangular.
  const std::vector<int>& unipotent_ids() const { return unipotent_; }
  /// P: last row (0, ..., 0, 1).
  const std::vector<int>& mirabolic_ids() const { return mirabolic_; }
  /// Unipotent radical of the standard maximal parabolic with blocks (k, m-k).
  std::vector<int> parabolic_radical_ids(int k) const;
  /// Elementary transvections I + E_ij and diag(z, 1, ..., 1), z a primitive root.
  const std::vector<int>& generator_ids() const { return generators_; }

 private:
  GroupTable() = default;

  int m_ = 0;
  int q_ = 0;
  std::vector<GroupElement> elements_;
  std::vector<std::int32_t> lookup_;
  int identity_id_ = 0;
  std::vector<int> unipotent_;
  std::vector<int> mirabolic_;
  std::vector<int> generators_;
};

enum class CosetTag { unipotent_in_group, unipotent_in_mirabolic };

/// U-cosets of the ambient group (G or P) with lexicographically least
/// representatives.  Each ambient g factors uniquely as g = u * rep.
class CosetTable {
 public:
  struct Entry {
    int coset;        // local coset index, -1 outside the ambient group
    int unipotent;    // group id of u
    int theta_sum;    // superdiagonal sum of u mod q
  };

  static CosetTable build(std::shared_ptr<const GroupTable> group, CosetTag tag);

  CosetTag tag() const { return tag_; }
  const GroupTable& group() const { return *group_; }
  int size() const { return static_cast<int>(reps_.size()); }
  int representative_id(int coset) const { return reps_[coset]; }
  const std::vector<int>& representative_ids() const { return reps_; }

  bool contains(int gid) const { return entries_[gid].coset >= 0; }
  /// Throws NotInAmbient for ids outside the ambient group.
  const Entry& locate(int gid) const;

  /// (u, rep) with g = u * rep.
  std::pair<GroupElement, GroupElement> coset_decompose(const GroupElement& g) const;

 private:
  CosetTag tag_ = CosetTag::unipotent_in_group;
  std::shared_ptr<const GroupTable> group_;
  std::vector<int> reps_;
  std::vector<Entry> entries_;
};

struct SpecialElements {
  GroupElement w;    // antidiagonal ones
  GroupElement eps;  // diag((-1)^{n-1}, ..., -1, 1)
  GroupElement s;    // ((-1)^{i-1} delta_{i, n+1-j})
};

SpecialElements special_elements(int n, int q);

/// Ad(s_n) o iota.
GroupElement hat_involution(const GroupElement& g);

/// Everything keyed to one (rank, q): the group, both coset tables, special
/// elements, and the P-coset -> G-coset index map (P representatives are G
/// representatives, since a U-coset of P is a U-coset of G).
struct RankContext {
  int rank = 0;
  int modulus = 0;
  std::shared_ptr<const GroupTable> group;
  CosetTable cosets;
  CosetTable p_cosets;
  SpecialElements special;
  std::vector<int> p_to_g;

  int dim() const { return cosets.size(); }
  int kirillov_dim() const { return p_cosets.size(); }
};

std::shared_ptr<const RankContext> make_rank_context(int m, int q,
                                                     std::uint64_t max_order = kDefaultMaxOrder);

}  // namespace ffgamma
