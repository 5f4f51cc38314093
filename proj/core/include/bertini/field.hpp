// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bertini {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// An element of a finite field: the owning field plus the packed
/// coefficient vector sum_i c_i p^i, where c_i is the coefficient of a^i
/// and a is the class of x modulo the field modulus.
struct FieldElem {
  const Field* owner = nullptr;
  std::uint32_t value = 0;

  bool is_zero() const { return value == 0; }
  std::vector<std::uint32_t> coeffs() const;

  FieldElem operator+(const FieldElem& b) const;
  FieldElem operator-(const FieldElem& b) const;
  FieldElem operator-() const;
  FieldElem operator*(const FieldElem& b) const;
  FieldElem operator/(const FieldElem& b) const;
  FieldElem inv() const;
  FieldElem pow(std::uint64_t e) const;

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.owner == b.owner && a.value == b.value;
  }
};

/// F_q with q = p^s, presented as F_p[x]/(m) for the lexicographically least
/// monic irreducible m of degree s. Instances are interned: one object per
/// (p, s) for the lifetime of the process, immutable and thread-safe.
class Field {
 public:
  /// Throws DomainError for composite p or s == 0, CapExceeded when
  /// p^s exceeds Caps::field_order.
  static FieldPtr get(std::uint64_t p, std::uint64_t s);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return s_; }
  std::uint32_t order() const { return q_; }
  bool is_prime_field() const { return s_ == 1; }
  /// Modulus coefficients, low degree first, monic, length degree()+1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t e = log_[a] + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
  /// Image of an integer under Z -> F_p -> F_q.
  std::uint32_t from_int(std::int64_t k) const;
  std::uint32_t frobenius(std::uint32_t a) const { return pow(a, p_); }

  std::vector<std::uint32_t> digits(std::uint32_t a) const;
  std::uint32_t from_digits(std::span<const std::uint32_t> c) const;

  /// Least primitive element in packed order; the "g" of the text format.
  std::uint32_t primitive() const { return exp_.empty() ? 1 : exp_[1 % (q_ - 1)]; }
  /// k with primitive()^k == a, for a != 0.
  std::uint32_t log(std::uint32_t a) const;
  std::uint32_t exp(std::uint64_t k) const { return exp_[k % (q_ - 1)]; }
  /// Class of x modulo the modulus.
  std::uint32_t generator() const;

  FieldElem elem(std::uint32_t v) const { return FieldElem{this, v}; }
  FieldElem zero() const { return elem(0); }
  FieldElem one() const { return elem(1); }
  /// All q elements in coefficient-lexicographic (packed) order.
  std::vector<FieldElem> elements() const;

  /// F_{q^r}, constructed directly over F_p.
  FieldPtr extension(std::uint32_t r) const;
  FieldPtr self() const;
  std::string name() const;
  std::string format(std::uint32_t a) const;

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

 private:
  Field(std::uint32_t p, std::uint32_t s);
  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t p_;
  std::uint32_t s_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> place_;  // p^i
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::weak_ptr<const Field> self_;

  friend struct FieldRegistry;
};

/// Checked constructor matching the library's public vocabulary.
inline FieldPtr make_field(std::uint64_t p, std::uint64_t s) { return Field::get(p, s); }

bool is_prime(std::uint64_t n);

/// Ring embedding F_{p^a} -> F_{p^b} (a | b). The generator of the source is
/// sent to a root of the source modulus, chosen so that embeddings compose:
/// for a | c | b, embedding(c,b) o embedding(a,c) == embedding(a,b).
class Embedding {
 public:
  const FieldPtr& source() const { return src_; }
  const FieldPtr& target() const { return dst_; }
  std::uint32_t operator()(std::uint32_t a) const { return table_[a]; }
  FieldElem operator()(const FieldElem& a) const;
  /// Inverse image of b if it lies in the embedded subfield.
  std::optional<std::uint32_t> preimage(std::uint32_t b) const;
  /// Image of the source generator.
  std::uint32_t root() const { return root_; }

 private:
  friend const Embedding& embedding(const FieldPtr&, const FieldPtr&);
  Embedding(FieldPtr src, FieldPtr dst, std::uint32_t root);

  FieldPtr src_;
  FieldPtr dst_;
  std::uint32_t root_;
  std::vector<std::uint32_t> table_;
  std::vector<std::int32_t> inverse_;
};

/// Canonical embedding between two fields of the same characteristic.
/// Throws DomainError when degree(src) does not divide degree(dst).
const Embedding& embedding(const FieldPtr& src, const FieldPtr& dst);

FieldElem embed(const FieldElem& a, const FieldPtr& target);
/// a viewed in F_{q^r}, q the order of a's field.
FieldElem embed(const FieldElem& a, std::uint32_t r);

/// Trace from F_{q^r} down to F_q, returned as an element of the base field.
std::uint32_t trace_to(const Field& big, std::uint32_t a, const FieldPtr& base);

}  // namespace bertini
