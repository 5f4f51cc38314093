// SPDX-License-Identifier: Apache-2.0
#include "bertini/monomial.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "bertini/errors.hpp"

namespace bertini {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

namespace {

struct BasisCache {
  std::mutex mu;
  std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> bases;
  std::map<std::tuple<int, int, int>, std::unique_ptr<std::vector<std::uint32_t>>> products;
};

BasisCache& cache() {
  static BasisCache c;
  return c;
}

// Enumerate exponent vectors of total degree d in lex-decreasing order.
void fill(int vars, int d, std::vector<std::uint8_t>& out) {
  std::vector<std::uint8_t> e(vars, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == vars - 1) {
      e[pos] = static_cast<std::uint8_t>(remaining);
      out.insert(out.end(), e.begin(), e.end());
      return;
    }
    for (int a = remaining; a >= 0; --a) {
      e[pos] = static_cast<std::uint8_t>(a);
      self(self, pos + 1, remaining - a);
    }
  };
  rec(rec, 0, d);
}

}  // namespace

MonomialBasis::MonomialBasis(int n, int d) : n_(n), d_(d) {
  size_ = static_cast<std::size_t>(binomial(d + n, n));
  exps_.reserve(size_ * (n + 1));
  fill(n + 1, d, exps_);
}

const MonomialBasis& MonomialBasis::get(int n, int d) {
  if (n < 0 || d < 0 || d > 255) throw DomainError("monomial basis needs n >= 0 and 0 <= d <= 255");
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto& slot = c.bases[{n, d}];
  if (!slot) slot.reset(new MonomialBasis(n, d));
  return *slot;
}

std::size_t MonomialBasis::rank_unchecked(const std::uint8_t* e) const {
  // Count monomials that are lex-greater: at position i with remaining
  // degree r, those with a larger exponent there number C(r - e_i - 1 + k, k)
  // where k = n - i.
  std::size_t r = 0;
  int remaining = d_;
  for (int i = 0; i < n_; ++i) {
    const int k = n_ - i;
    const int top = remaining - e[i] - 1;
    if (top >= 0) r += static_cast<std::size_t>(binomial(top + k, k));
    remaining -= e[i];
  }
  return r;
}

std::size_t MonomialBasis::rank(std::span<const int> e) const {
  if (static_cast<int>(e.size()) != n_ + 1) throw DomainError("monomial has wrong number of variables");
  int sum = 0;
  std::vector<std::uint8_t> packed(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0) throw DomainError("negative exponent");
    sum += e[i];
    packed[i] = static_cast<std::uint8_t>(e[i]);
  }
  if (sum != d_) throw DomainError("monomial degree mismatch");
  return rank_unchecked(packed.data());
}

std::vector<int> MonomialBasis::unrank(std::size_t i) const {
  if (i >= size_) throw DomainError("monomial index out of range");
  auto e = exps(i);
  return std::vector<int>(e.begin(), e.end());
}

const std::vector<std::uint32_t>& MonomialBasis::product_table(int n, int a, int b) {
  auto& c = cache();
  {
    std::lock_guard<std::mutex> lock(c.mu);
    auto it = c.products.find({n, a, b});
    if (it != c.products.end()) return *it->second;
  }
  const auto& A = get(n, a);
  const auto& B = get(n, b);
  const auto& C = get(n, a + b);
  auto table = std::make_unique<std::vector<std::uint32_t>>(A.size() * B.size());
  std::vector<std::uint8_t> e(n + 1);
  for (std::size_t i = 0; i < A.size(); ++i) {
    auto ea = A.exps(i);
    for (std::size_t j = 0; j < B.size(); ++j) {
      auto eb = B.exps(j);
      for (int k = 0; k <= n; ++k) e[k] = static_cast<std::uint8_t>(ea[k] + eb[k]);
      (*table)[i * B.size() + j] = static_cast<std::uint32_t>(C.rank_unchecked(e.data()));
    }
  }
  std::lock_guard<std::mutex> lock(c.mu);
  auto [it, inserted] = c.products.emplace(std::make_tuple(n, a, b), std::move(table));
  return *it->second;
}

}  // namespace bertini
