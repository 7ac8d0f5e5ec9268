#include "ffgamma/group.hpp"

#include <algorithm>
#include <string>

namespace ffgamma {

namespace {

int mod(long long x, int q) {
  long long r = x % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

int primitive_root(int q) {
  for (int z = 1; z < q; ++z) {
    int order = 1;
    long long p = z;
    while (p % q != 1) {
      p = (p * z) % q;
      ++order;
    }
    if (order == q - 1) return z;
  }
  return 1;
}

}  // namespace

int GroupElement::determinant(int m, int q, const std::array<std::uint8_t, 16>& e) {
  std::array<int, 16> a{};
  for (int i = 0; i < m * m; ++i) a[i] = e[i];
  long long det = 1;
  for (int col = 0; col < m; ++col) {
    int pivot = -1;
    for (int r = col; r < m; ++r)
      if (a[r * m + col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int j = 0; j < m; ++j) std::swap(a[col * m + j], a[pivot * m + j]);
      det = q - det;
    }
    const int p = a[col * m + col];
    det = (det * p) % q;
    const int pinv = inverse_mod(p, q);
    for (int r = col + 1; r < m; ++r) {
      const int f = mod(static_cast<long long>(a[r * m + col]) * pinv, q);
      if (f == 0) continue;
      for (int j = col; j < m; ++j) a[r * m + j] = mod(a[r * m + j] - static_cast<long long>(f) * a[col * m + j], q);
    }
  }
  return mod(det, q);
}

GroupElement::GroupElement(int m, int q, std::span<const int> entries) : m_(m), q_(q) {
  if (m < 1 || m > kMaxRank) throw Error("rank " + std::to_string(m) + " outside supported range");
  if (entries.size() != static_cast<std::size_t>(m * m)) throw Error("GroupElement: wrong entry count");
  for (int i = 0; i < m * m; ++i) e_[i] = static_cast<std::uint8_t>(mod(entries[i], q));
  det_ = determinant(m, q, e_);
  if (det_ == 0) throw NotInvertible("GroupElement: determinant is zero");
}

GroupElement GroupElement::identity(int m, int q) { return scalar(m, q, 1); }

GroupElement GroupElement::scalar(int m, int q, int z) {
  std::vector<int> e(m * m, 0);
  for (int i = 0; i < m; ++i) e[i * m + i] = z;
  return GroupElement(m, q, e);
}

GroupElement GroupElement::diagonal(int q, std::span<const int> diag) {
  const int m = static_cast<int>(diag.size());
  std::vector<int> e(m * m, 0);
  for (int i = 0; i < m; ++i) e[i * m + i] = diag[i];
  return GroupElement(m, q, e);
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  if (m_ != o.m_ || q_ != o.q_) throw Error("GroupElement: rank or field mismatch in product");
  GroupElement r;
  r.m_ = m_;
  r.q_ = q_;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) {
      int acc = 0;
      for (int k = 0; k < m_; ++k) acc += e_[i * m_ + k] * o.e_[k * m_ + j];
      r.e_[i * m_ + j] = static_cast<std::uint8_t>(acc % q_);
    }
  r.det_ = (det_ * o.det_) % q_;
  return r;
}

GroupElement GroupElement::inverse() const {
  // Gauss-Jordan on [A | I].
  std::array<int, 16> a{};
  std::array<int, 16> inv{};
  for (int i = 0; i < m_ * m_; ++i) a[i] = e_[i];
  for (int i = 0; i < m_; ++i) inv[i * m_ + i] = 1;
  for (int col = 0; col < m_; ++col) {
    int pivot = col;
    while (a[pivot * m_ + col] == 0) ++pivot;
    if (pivot != col)
      for (int j = 0; j < m_; ++j) {
        std::swap(a[col * m_ + j], a[pivot * m_ + j]);
        std::swap(inv[col * m_ + j], inv[pivot * m_ + j]);
      }
    const int pinv = inverse_mod(a[col * m_ + col], q_);
    for (int j = 0; j < m_; ++j) {
      a[col * m_ + j] = mod(static_cast<long long>(a[col * m_ + j]) * pinv, q_);
      inv[col * m_ + j] = mod(static_cast<long long>(inv[col * m_ + j]) * pinv, q_);
    }
    for (int r = 0; r < m_; ++r) {
      if (r == col) continue;
      const int f = a[r * m_ + col];
      if (f == 0) continue;
      for (int j = 0; j < m_; ++j) {
        a[r * m_ + j] = mod(a[r * m_ + j] - static_cast<long long>(f) * a[col * m_ + j], q_);
        inv[r * m_ + j] = mod(inv[r * m_ + j] - static_cast<long long>(f) * inv[col * m_ + j], q_);
      }
    }
  }
  GroupElement r;
  r.m_ = m_;
  r.q_ = q_;
  for (int i = 0; i < m_ * m_; ++i) r.e_[i] = static_cast<std::uint8_t>(inv[i]);
  r.det_ = inverse_mod(det_, q_);
  return r;
}

GroupElement GroupElement::transpose() const {
  GroupElement r = *this;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) r.e_[i * m_ + j] = e_[j * m_ + i];
  return r;
}

GroupElement GroupElement::scaled(int z) const {
  GroupElement r = *this;
  z = mod(z, q_);
  if (z == 0) throw NotInvertible("GroupElement: scaling by zero");
  long long d = 1;
  for (int i = 0; i < m_; ++i) d = (d * z) % q_;
  for (int i = 0; i < m_ * m_; ++i) r.e_[i] = static_cast<std::uint8_t>((e_[i] * z) % q_);
  r.det_ = static_cast<int>((det_ * d) % q_);
  return r;
}

std::uint64_t GroupElement::code() const {
  std::uint64_t c = 0;
  for (int i = 0; i < m_ * m_; ++i) c = c * q_ + e_[i];
  return c;
}

GroupElement iota(const GroupElement& g) { return g.inverse().transpose(); }

GroupElement embed_lower(const GroupElement& g) {
  const int m = g.rank() + 1;
  std::vector<int> e(m * m, 0);
  for (int i = 0; i < g.rank(); ++i)
    for (int j = 0; j < g.rank(); ++j) e[i * m + j] = g(i, j);
  e[m * m - 1] = 1;
  return GroupElement(m, g.modulus(), e);
}

GroupElement mirabolic_block(const GroupElement& g) {
  if (!in_mirabolic(g)) throw NotInAmbient("mirabolic_block: element is not in P");
  const int m = g.rank() - 1;
  if (m < 1) throw Error("mirabolic_block: rank-1 mirabolic has no block");
  std::vector<int> e(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) e[i * m + j] = g(i, j);
  return GroupElement(m, g.modulus(), e);
}

bool is_upper_unitriangular(const GroupElement& g) {
  for (int i = 0; i < g.rank(); ++i)
    for (int j = 0; j <= i; ++j)
      if (g(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool in_mirabolic(const GroupElement& g) {
  const int m = g.rank();
  for (int j = 0; j + 1 < m; ++j)
    if (g(m - 1, j) != 0) return false;
  return g(m - 1, m - 1) == 1;
}

int superdiagonal_sum(const GroupElement& g) {
  int s = 0;
  for (int i = 0; i + 1 < g.rank(); ++i) s += g(i, i + 1);
  return s % g.modulus();
}

std::uint64_t group_order(int m, int q) {
  std::uint64_t qm = 1;
  for (int i = 0; i < m; ++i) qm *= static_cast<std::uint64_t>(q);
  std::uint64_t order = 1;
  std::uint64_t qk = 1;
  for (int k = 0; k < m; ++k) {
    order *= (qm - qk);
    qk *= static_cast<std::uint64_t>(q);
  }
  return order;
}

std::shared_ptr<const GroupTable> GroupTable::enumerate(int m, int q, std::uint64_t max_order) {
  if (!is_supported_prime(q)) throw ConfigError("q must be prime <= 7");
  if (m < 1 || m > kMaxRank) throw BudgetExceeded("rank " + std::to_string(m) + " outside supported range");
  const std::uint64_t order = group_order(m, q);
  if (order > max_order) {
    throw BudgetExceeded("|GL_" + std::to_string(m) + "(F_" + std::to_string(q) + ")| = " +
                         std::to_string(order) + " exceeds budget " + std::to_string(max_order));
  }
  auto table = std::shared_ptr<GroupTable>(new GroupTable());
  table->m_ = m;
  table->q_ = q;
  std::uint64_t total = 1;
  for (int i = 0; i < m * m; ++i) total *= static_cast<std::uint64_t>(q);
  table->lookup_.assign(total, -1);
  table->elements_.reserve(order);

  std::vector<int> digits(m * m, 0);
  std::array<std::uint8_t, 16> raw{};
  for (std::uint64_t c = 0; c < total; ++c) {
    std::uint64_t x = c;
    for (int i = m * m - 1; i >= 0; --i) {
      digits[i] = static_cast<int>(x % q);
      x /= q;
    }
    for (int i = 0; i < m * m; ++i) raw[i] = static_cast<std::uint8_t>(digits[i]);
    if (GroupElement::determinant(m, q, raw) == 0) continue;
    table->lookup_[c] = static_cast<std::int32_t>(table->elements_.size());
    table->elements_.emplace_back(m, q, digits);
  }
  if (table->elements_.size() != order) throw Error("GroupTable: enumeration disagrees with order formula");

  table->identity_id_ = table->id_of(GroupElement::identity(m, q));
  for (int id = 0; id < table->size(); ++id) {
    const auto& g = table->elements_[id];
    if (is_upper_unitriangular(g)) table->unipotent_.push_back(id);
    if (in_mirabolic(g)) table->mirabolic_.push_back(id);
  }

  std::vector<int> gens;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      std::vector<int> e(m * m, 0);
      for (int k = 0; k < m; ++k) e[k * m + k] = 1;
      e[i * m + j] = 1;
      gens.push_back(table->id_of(GroupElement(m, q, e)));
    }
  std::vector<int> diag(m, 1);
  diag[0] = primitive_root(q);
  gens.push_back(table->id_of(GroupElement::diagonal(q, diag)));
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  table->generators_ = std::move(gens);
  return table;
}

int GroupTable::id_of(const GroupElement& g) const {
  if (g.rank() != m_ || g.modulus() != q_) throw NotInAmbient("GroupTable: element from another group");
  return lookup_[g.code()];
}

std::vector<int> GroupTable::parabolic_radical_ids(int k) const {
  if (k < 1 || k >= m_) throw Error("parabolic_radical_ids: block size out of range");
  std::vector<int> out;
  for (int id : unipotent_) {
    const auto& g = elements_[id];
    bool ok = true;
    for (int i = 0; i < m_ && ok; ++i)
      for (int j = i + 1; j < m_ && ok; ++j) {
        const bool in_block = i < k && j >= k;
        if (!in_block && g(i, j) != 0) ok = false;
      }
    if (ok) out.push_back(id);
  }
  return out;
}

CosetTable CosetTable::build(std::shared_ptr<const GroupTable> group, CosetTag tag) {
  CosetTable t;
  t.tag_ = tag;
  t.group_ = group;
  const int n = group->size();
  const int q = group->modulus();
  t.entries_.assign(n, Entry{-1, -1, 0});
  const auto& units = group->unipotent_ids();
  for (int id = 0; id < n; ++id) {
    if (t.entries_[id].coset >= 0) continue;
    const auto& g = group->element(id);
    if (tag == CosetTag::unipotent_in_mirabolic && !in_mirabolic(g)) continue;
    // Ids ascend lexicographically, so the first unvisited member of a coset is its least element.
    const int coset = static_cast<int>(t.reps_.size());
    t.reps_.push_back(id);
    for (int uid : units) {
      const auto& u = group->element(uid);
      const int member = group->id_of(u * g);
      t.entries_[member] = Entry{coset, uid, superdiagonal_sum(u) % q};
    }
  }
  return t;
}

const CosetTable::Entry& CosetTable::locate(int gid) const {
  const auto& e = entries_.at(gid);
  if (e.coset < 0) throw NotInAmbient("CosetTable: element outside the ambient group");
  return e;
}

std::pair<GroupElement, GroupElement> CosetTable::coset_decompose(const GroupElement& g) const {
  const auto& e = locate(group_->id_of(g));
  return {group_->element(e.unipotent), group_->element(reps_[e.coset])};
}

SpecialElements special_elements(int n, int q) {
  std::vector<int> w(n * n, 0), s(n * n, 0), eps(n, 1);
  for (int i = 0; i < n; ++i) {
    const int j = n - 1 - i;
    w[i * n + j] = 1;
    s[i * n + j] = (i % 2 == 0) ? 1 : -1;
    eps[i] = ((n - 1 - i) % 2 == 0) ? 1 : -1;
  }
  return SpecialElements{GroupElement(n, q, w), GroupElement::diagonal(q, eps), GroupElement(n, q, s)};
}

GroupElement hat_involution(const GroupElement& g) {
  const auto s = special_elements(g.rank(), g.modulus()).s;
  return s * iota(g) * s.inverse();
}

std::shared_ptr<const RankContext> make_rank_context(int m, int q, std::uint64_t max_order) {
  auto group = GroupTable::enumerate(m, q, max_order);
  auto cosets = CosetTable::build(group, CosetTag::unipotent_in_group);
  auto p_cosets = CosetTable::build(group, CosetTag::unipotent_in_mirabolic);
  std::vector<int> p_to_g(p_cosets.size());
  for (int j = 0; j < p_cosets.size(); ++j) {
    p_to_g[j] = cosets.locate(p_cosets.representative_id(j)).coset;
  }
  return std::make_shared<const RankContext>(RankContext{m, q, group, std::move(cosets),
                                                         std::move(p_cosets), special_elements(m, q),
                                                         std::move(p_to_g)});
}

}  // namespace ffgamma
