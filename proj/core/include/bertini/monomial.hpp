// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bertini {

std::uint64_t binomial(int n, int k);

/// Degree-d monomials in n+1 variables, in graded-lex order: x0^d first,
/// exponent vectors compared lexicographically and listed in decreasing
/// order. Instances are cached and immutable.
class MonomialBasis {
 public:
  static const MonomialBasis& get(int n, int d);

  int vars() const { return n_ + 1; }
  int n() const { return n_; }
  int degree() const { return d_; }
  std::size_t size() const { return size_; }

  std::span<const std::uint8_t> exps(std::size_t i) const {
    return {exps_.data() + i * (n_ + 1), static_cast<std::size_t>(n_ + 1)};
  }
  /// Index of a monomial; throws DomainError when the exponents do not sum to d.
  std::size_t rank(std::span<const int> e) const;
  std::size_t rank_unchecked(const std::uint8_t* e) const;
  std::vector<int> unrank(std::size_t i) const;

  /// Index of m_a * m_b in S_{a+b} for m_a in S_a (this basis) and m_b in S_b.
  /// Cached table of size size(a) * size(b), row-major in the S_a index.
  static const std::vector<std::uint32_t>& product_table(int n, int a, int b);

 private:
  MonomialBasis(int n, int d);
  int n_;
  int d_;
  std::size_t size_;
  std::vector<std::uint8_t> exps_;
};

}  // namespace bertini
