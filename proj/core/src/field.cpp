// SPDX-License-Identifier: Apache-2.0
#include "bertini/field.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include "bertini/caps.hpp"
#include "bertini/errors.hpp"

namespace bertini {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

using Poly = std::vector<std::uint32_t>;  // over F_p, low degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo monic b over F_p.
Poly poly_rem(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint32_t lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    if (lead != 0) {
      for (std::size_t i = 0; i <= db; ++i) {
        const std::uint64_t t = static_cast<std::uint64_t>(lead) * b[i] % p;
        a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - t) % p);
      }
    }
    a.pop_back();
    trim(a);
  }
  return a;
}

// Monic polynomial of degree deg whose lower coefficients are the base-p
// digits of code.
Poly monic_from_code(std::uint64_t code, std::uint32_t deg, std::uint32_t p) {
  Poly m(deg + 1, 0);
  for (std::uint32_t i = 0; i < deg; ++i) {
    m[i] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  m[deg] = 1;
  return m;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

bool irreducible(const Poly& m, std::uint32_t p) {
  const std::uint32_t s = static_cast<std::uint32_t>(m.size() - 1);
  if (s <= 1) return true;
  for (std::uint32_t e = 1; e <= s / 2; ++e) {
    const std::uint64_t count = ipow(p, e);
    for (std::uint64_t code = 0; code < count; ++code) {
      if (poly_rem(m, monic_from_code(code, e, p), p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

struct FieldRegistry {
  std::mutex mu;
  std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> fields;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::unique_ptr<Embedding>>
      embeddings;

  static FieldRegistry& instance() {
    static FieldRegistry r;
    return r;
  }

  FieldPtr get(std::uint32_t p, std::uint32_t s) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = fields.find({p, s});
    if (it != fields.end()) return it->second;
    std::shared_ptr<Field> f(new Field(p, s));
    f->self_ = f;
    FieldPtr out = f;
    fields.emplace(std::make_pair(p, s), out);
    return out;
  }
};

FieldPtr Field::get(std::uint64_t p, std::uint64_t s) {
  if (!is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
  if (s == 0) throw DomainError("extension degree must be positive");
  const std::uint64_t cap = Caps::current().field_order;
  std::uint64_t q = 1;
  for (std::uint64_t i = 0; i < s; ++i) {
    q *= p;
    if (q > cap)
      throw CapExceeded("field order " + std::to_string(p) + "^" + std::to_string(s) +
                        " exceeds cap " + std::to_string(cap) + " (BERTINI_FIELD_CAP)");
  }
  return FieldRegistry::instance().get(static_cast<std::uint32_t>(p),
                                       static_cast<std::uint32_t>(s));
}

Field::Field(std::uint32_t p, std::uint32_t s) : p_(p), s_(s) {
  q_ = static_cast<std::uint32_t>(ipow(p, s));
  place_.resize(s_ + 1);
  place_[0] = 1;
  for (std::uint32_t i = 1; i <= s_; ++i) place_[i] = place_[i - 1] * p_;

  // Lexicographically least monic irreducible: lower coefficients read with
  // the x^{s-1} coefficient most significant, i.e. increasing packed code.
  if (s_ == 1) {
    modulus_ = {0, 1};
  } else {
    for (std::uint64_t code = 0;; ++code) {
      Poly m = monic_from_code(code, s_, p_);
      if (m[0] != 0 && irreducible(m, p_)) {
        modulus_ = std::move(m);
        break;
      }
    }
  }

  // Discrete log tables over the least primitive element.
  if (q_ == 2) {
    exp_ = {1};
    log_ = {0, 0};
    return;
  }
  const std::uint64_t order = q_ - 1;
  const auto factors = prime_factors(order);
  auto slow_pow = [&](std::uint32_t a, std::uint64_t e) {
    std::uint32_t r = 1;
    while (e) {
      if (e & 1) r = slow_mul(r, a);
      a = slow_mul(a, a);
      e >>= 1;
    }
    return r;
  };
  std::uint32_t g = 0;
  for (std::uint32_t cand = 2; cand < q_; ++cand) {
    bool prim = true;
    for (auto f : factors) {
      if (slow_pow(cand, order / f) == 1) {
        prim = false;
        break;
      }
    }
    if (prim) {
      g = cand;
      break;
    }
  }
  if (g == 0) throw InternalError("no primitive element found in " + name());
  exp_.resize(order);
  log_.assign(q_, 0);
  std::uint32_t cur = 1;
  for (std::uint64_t k = 0; k < order; ++k) {
    exp_[k] = cur;
    log_[cur] = static_cast<std::uint32_t>(k);
    cur = slow_mul(cur, g);
  }
}

std::uint32_t Field::slow_mul(std::uint32_t a, std::uint32_t b) const {
  if (s_ == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  auto da = digits(a), db = digits(b);
  Poly prod(2 * s_, 0);
  for (std::uint32_t i = 0; i < s_; ++i)
    for (std::uint32_t j = 0; j < s_; ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_);
  Poly r = poly_rem(prod, modulus_, p_);
  r.resize(s_, 0);
  return from_digits(r);
}

std::uint32_t Field::add(std::uint32_t a, std::uint32_t b) const {
  if (p_ == 2) return a ^ b;
  if (s_ == 1) {
    std::uint32_t r = a + b;
    return r >= p_ ? r - p_ : r;
  }
  std::uint32_t out = 0;
  for (std::uint32_t i = 0; i < s_; ++i) {
    std::uint32_t d = (a % p_) + (b % p_);
    if (d >= p_) d -= p_;
    out += d * place_[i];
    a /= p_;
    b /= p_;
  }
  return out;
}

std::uint32_t Field::neg(std::uint32_t a) const {
  if (p_ == 2) return a;
  if (s_ == 1) return a == 0 ? 0 : p_ - a;
  std::uint32_t out = 0;
  for (std::uint32_t i = 0; i < s_; ++i) {
    std::uint32_t d = a % p_;
    out += (d == 0 ? 0 : p_ - d) * place_[i];
    a /= p_;
  }
  return out;
}

std::uint32_t Field::sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

std::uint32_t Field::inv(std::uint32_t a) const {
  if (a == 0) throw DivisionByZero();
  if (q_ == 2) return 1;
  const std::uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : (q_ - 1) - l];
}

std::uint32_t Field::pow(std::uint32_t a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (q_ == 2) return 1;
  const std::uint64_t k = (static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
  return exp_[k];
}

std::uint32_t Field::from_int(std::int64_t k) const {
  std::int64_t r = k % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<std::uint32_t>(r);
}

std::vector<std::uint32_t> Field::digits(std::uint32_t a) const {
  std::vector<std::uint32_t> d(s_);
  for (std::uint32_t i = 0; i < s_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

std::uint32_t Field::from_digits(std::span<const std::uint32_t> c) const {
  if (c.size() != s_) throw DomainError("coefficient vector length does not match field degree");
  std::uint32_t out = 0;
  for (std::uint32_t i = 0; i < s_; ++i) {
    if (c[i] >= p_) throw DomainError("coefficient out of range");
    out += c[i] * place_[i];
  }
  return out;
}

std::uint32_t Field::log(std::uint32_t a) const {
  if (a == 0) throw DomainError("logarithm of zero");
  return log_[a];
}

std::uint32_t Field::generator() const {
  if (s_ == 1) return 0;  // x mod x
  return p_;              // digits (0, 1, 0, ...)
}

std::vector<FieldElem> Field::elements() const {
  std::vector<FieldElem> out;
  out.reserve(q_);
  for (std::uint32_t v = 0; v < q_; ++v) out.push_back(elem(v));
  return out;
}

FieldPtr Field::extension(std::uint32_t r) const {
  if (r == 0) throw DomainError("extension degree must be positive");
  return Field::get(p_, static_cast<std::uint64_t>(s_) * r);
}

FieldPtr Field::self() const { return self_.lock(); }

std::string Field::name() const { return "F_" + std::to_string(q_); }

std::string Field::format(std::uint32_t a) const {
  if (s_ == 1) return std::to_string(a);
  if (a == 0) return "0";
  const std::uint32_t k = log(a);
  if (k == 0) return "1";
  if (k == 1) return "g";
  return "g^" + std::to_string(k);
}

// ---------------------------------------------------------------- FieldElem

namespace {
const Field& same_owner(const FieldElem& a, const FieldElem& b) {
  if (a.owner == nullptr || a.owner != b.owner) throw DomainError("field element owner mismatch");
  return *a.owner;
}
}  // namespace

std::vector<std::uint32_t> FieldElem::coeffs() const { return owner->digits(value); }

FieldElem FieldElem::operator+(const FieldElem& b) const {
  return {owner, same_owner(*this, b).add(value, b.value)};
}
FieldElem FieldElem::operator-(const FieldElem& b) const {
  return {owner, same_owner(*this, b).sub(value, b.value)};
}
FieldElem FieldElem::operator-() const { return {owner, owner->neg(value)}; }
FieldElem FieldElem::operator*(const FieldElem& b) const {
  return {owner, same_owner(*this, b).mul(value, b.value)};
}
FieldElem FieldElem::operator/(const FieldElem& b) const {
  return {owner, same_owner(*this, b).div(value, b.value)};
}
FieldElem FieldElem::inv() const { return {owner, owner->inv(value)}; }
FieldElem FieldElem::pow(std::uint64_t e) const { return {owner, owner->pow(value, e)}; }

// ---------------------------------------------------------------- Embedding

Embedding::Embedding(FieldPtr src, FieldPtr dst, std::uint32_t root)
    : src_(std::move(src)), dst_(std::move(dst)), root_(root) {
  const Field& S = *src_;
  const Field& D = *dst_;
  std::vector<std::uint32_t> powers(S.degree());
  std::uint32_t cur = 1;
  for (std::uint32_t i = 0; i < S.degree(); ++i) {
    powers[i] = cur;
    cur = D.mul(cur, root_);
  }
  table_.resize(S.order());
  inverse_.assign(D.order(), -1);
  for (std::uint32_t a = 0; a < S.order(); ++a) {
    const auto dig = S.digits(a);
    std::uint32_t img = 0;
    for (std::uint32_t i = 0; i < S.degree(); ++i)
      img = D.add(img, D.mul(D.from_int(dig[i]), powers[i]));
    table_[a] = img;
    inverse_[img] = static_cast<std::int32_t>(a);
  }
}

FieldElem Embedding::operator()(const FieldElem& a) const {
  if (a.owner != src_.get()) throw DomainError("embedding applied to element of another field");
  return dst_->elem(table_[a.value]);
}

std::optional<std::uint32_t> Embedding::preimage(std::uint32_t b) const {
  if (b >= inverse_.size() || inverse_[b] < 0) return std::nullopt;
  return static_cast<std::uint32_t>(inverse_[b]);
}

namespace {

// Evaluate a polynomial over F_p at an element of D.
std::uint32_t eval_prime_poly(const Field& D, const std::vector<std::uint32_t>& poly, std::uint32_t x) {
  std::uint32_t acc = 0;
  for (std::size_t i = poly.size(); i-- > 0;) acc = D.add(D.mul(acc, x), D.from_int(poly[i]));
  return acc;
}

}  // namespace

const Embedding& embedding(const FieldPtr& src, const FieldPtr& dst) {
  if (!src || !dst) throw DomainError("null field");
  if (src->characteristic() != dst->characteristic() || dst->degree() % src->degree() != 0)
    throw DomainError("incompatible tower: cannot embed " + src->name() + " into " + dst->name());
  auto& reg = FieldRegistry::instance();
  const auto key = std::make_tuple(src->characteristic(), src->degree(), dst->degree());
  {
    std::lock_guard<std::mutex> lock(reg.mu);
    auto it = reg.embeddings.find(key);
    if (it != reg.embeddings.end()) return *it->second;
  }

  const std::uint32_t a = src->degree();
  std::uint32_t root = 0;
  if (a == 1) {
    root = 0;  // x mod x: the prime field embeds coefficientwise
  } else {
    // Intermediate constraints: for every proper divisor c > 1 of a the
    // composite must agree with the direct embedding F_{p^c} -> dst.
    std::vector<std::pair<const Embedding*, const Embedding*>> constraints;
    for (std::uint32_t c = 2; c < a; ++c) {
      if (a % c != 0) continue;
      FieldPtr mid = Field::get(src->characteristic(), c);
      constraints.emplace_back(&embedding(mid, src), &embedding(mid, dst));
    }
    bool found = false;
    for (std::uint32_t beta = 0; beta < dst->order() && !found; ++beta) {
      if (eval_prime_poly(*dst, src->modulus(), beta) != 0) continue;
      bool ok = true;
      for (const auto& [to_src, to_dst] : constraints) {
        // Image of the mid generator: root of src expressed via beta.
        const auto dig = src->digits(to_src->root());
        std::uint32_t img = 0, pw = 1;
        for (std::uint32_t i = 0; i < a; ++i) {
          img = dst->add(img, dst->mul(dst->from_int(dig[i]), pw));
          pw = dst->mul(pw, beta);
        }
        if (img != to_dst->root()) {
          ok = false;
          break;
        }
      }
      if (ok) {
        root = beta;
        found = true;
      }
    }
    if (!found) throw InternalError("no compatible root for embedding " + src->name() + " -> " + dst->name());
  }

  std::unique_ptr<Embedding> e(new Embedding(src, dst, root));
  std::lock_guard<std::mutex> lock(reg.mu);
  auto [it, inserted] = reg.embeddings.emplace(key, std::move(e));
  return *it->second;
}

FieldElem embed(const FieldElem& a, const FieldPtr& target) {
  if (a.owner == nullptr) throw DomainError("embedding of an unowned element");
  return embedding(a.owner->self(), target)(a);
}

FieldElem embed(const FieldElem& a, std::uint32_t r) {
  if (a.owner == nullptr) throw DomainError("embedding of an unowned element");
  return embed(a, a.owner->extension(r));
}

std::uint32_t trace_to(const Field& big, std::uint32_t a, const FieldPtr& base) {
  if (big.degree() % base->degree() != 0) throw DomainError("trace to a non-subfield");
  const std::uint32_t r = big.degree() / base->degree();
  const std::uint64_t q = base->order();
  std::uint32_t acc = 0, cur = a;
  for (std::uint32_t i = 0; i < r; ++i) {
    acc = big.add(acc, cur);
    cur = big.pow(cur, q);
  }
  auto pre = embedding(base, big.self()).preimage(acc);
  if (!pre) throw InternalError("trace left the base field");
  return *pre;
}

}  // namespace bertini
