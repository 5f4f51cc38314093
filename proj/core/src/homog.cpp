// SPDX-License-Identifier: Apache-2.0
#include "bertini/homog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "bertini/caps.hpp"
#include "bertini/errors.hpp"
#include "bertini/linalg.hpp"

namespace bertini {

// ---------------------------------------------------------------- ProjPoint

ProjPoint::ProjPoint(FieldPtr field, std::vector<std::uint32_t> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  if (!field_) throw DomainError("point without a field");
  std::size_t j = 0;
  while (j < coords_.size() && coords_[j] == 0) ++j;
  if (j == coords_.size()) throw DomainError("the zero vector is not a projective point");
  if (coords_[j] != 1) {
    const std::uint32_t inv = field_->inv(coords_[j]);
    for (std::size_t i = j; i < coords_.size(); ++i) coords_[i] = field_->mul(coords_[i], inv);
  }
}

int ProjPoint::chart() const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] != 0) return static_cast<int>(i);
  return -1;
}

ProjPoint ProjPoint::embed(const FieldPtr& target) const {
  if (target == field_) return *this;
  const auto& emb = embedding(field_, target);
  std::vector<std::uint32_t> c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = emb(coords_[i]);
  return ProjPoint(target, std::move(c));
}

ProjPoint ProjPoint::frobenius(const Field& base) const {
  std::vector<std::uint32_t> c(coords_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = field_->pow(coords_[i], base.order());
  return ProjPoint(field_, std::move(c));
}

std::string ProjPoint::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ':';
    s += field_->format(coords_[i]);
  }
  return s + "]";
}

bool operator<(const ProjPoint& a, const ProjPoint& b) {
  const int ca = a.chart(), cb = b.chart();
  if (ca != cb) return ca < cb;
  return a.coords_ < b.coords_;
}

// ---------------------------------------------------------------- HomogPoly

HomogPoly::HomogPoly(FieldPtr field, int n, int d)
    : field_(std::move(field)), n_(n), d_(d) {
  if (d < 0) throw DomainError("negative degree");
  coeffs_.assign(MonomialBasis::get(n, d).size(), 0);
}

HomogPoly::HomogPoly(FieldPtr field, int n, int d, std::vector<std::uint32_t> coeffs)
    : field_(std::move(field)), n_(n), d_(d), coeffs_(std::move(coeffs)) {
  if (d < 0) throw DomainError("negative degree");
  if (coeffs_.size() != MonomialBasis::get(n, d).size())
    throw DomainError("coefficient vector has the wrong length");
}

HomogPoly HomogPoly::monomial(FieldPtr field, std::span<const int> exps, std::uint32_t coeff) {
  int d = 0;
  for (int e : exps) d += e;
  HomogPoly f(std::move(field), static_cast<int>(exps.size()) - 1, d);
  f.coeffs_[f.basis().rank(exps)] = coeff;
  return f;
}

HomogPoly HomogPoly::variable(FieldPtr field, int n, int i) {
  std::vector<int> e(n + 1, 0);
  e.at(i) = 1;
  return monomial(std::move(field), e);
}

HomogPoly HomogPoly::constant(FieldPtr field, int n, std::uint32_t c) {
  HomogPoly f(std::move(field), n, 0);
  f.coeffs_[0] = c;
  return f;
}

std::uint32_t HomogPoly::coeff_of(std::span<const int> exps) const {
  return coeffs_[basis().rank(exps)];
}

bool HomogPoly::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::uint32_t c) { return c == 0; });
}

std::size_t HomogPoly::term_count() const {
  return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(), [](std::uint32_t c) { return c != 0; }));
}

namespace {
void check_same(const HomogPoly& a, const HomogPoly& b) {
  if (a.field() != b.field()) throw DomainError("polynomials over different fields");
  if (a.n() != b.n()) throw DomainError("polynomials in different numbers of variables");
}
}  // namespace

HomogPoly HomogPoly::operator+(const HomogPoly& b) const {
  check_same(*this, b);
  if (d_ != b.d_) throw DomainError("sum of forms of different degree");
  HomogPoly r = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = field_->add(coeffs_[i], b.coeffs_[i]);
  return r;
}

HomogPoly HomogPoly::operator-(const HomogPoly& b) const {
  check_same(*this, b);
  if (d_ != b.d_) throw DomainError("difference of forms of different degree");
  HomogPoly r = *this;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = field_->sub(coeffs_[i], b.coeffs_[i]);
  return r;
}

HomogPoly HomogPoly::operator-() const {
  HomogPoly r = *this;
  for (auto& c : r.coeffs_) c = field_->neg(c);
  return r;
}

HomogPoly HomogPoly::operator*(const HomogPoly& b) const {
  check_same(*this, b);
  HomogPoly r(field_, n_, d_ + b.d_);
  const auto& table = MonomialBasis::product_table(n_, d_, b.d_);
  const std::size_t nb = b.coeffs_.size();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      if (b.coeffs_[j] == 0) continue;
      auto& slot = r.coeffs_[table[i * nb + j]];
      slot = field_->add(slot, field_->mul(coeffs_[i], b.coeffs_[j]));
    }
  }
  return r;
}

HomogPoly HomogPoly::scaled(std::uint32_t c) const {
  HomogPoly r = *this;
  for (auto& v : r.coeffs_) v = field_->mul(v, c);
  return r;
}

HomogPoly HomogPoly::pow(int k) const {
  if (k < 0) throw DomainError("negative power");
  HomogPoly r = constant(field_, n_, 1);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

HomogPoly HomogPoly::diff(int var) const {
  if (d_ == 0) throw DomainError("derivative of a degree-0 form");
  if (var < 0 || var > n_) throw DomainError("variable index out of range");
  HomogPoly r(field_, n_, d_ - 1);
  const auto& B = basis();
  const auto& R = r.basis();
  std::vector<std::uint8_t> e(n_ + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    auto ei = B.exps(i);
    if (ei[var] == 0) continue;
    std::copy(ei.begin(), ei.end(), e.begin());
    const std::uint32_t k = field_->from_int(e[var]);
    if (k == 0) continue;
    --e[var];
    r.coeffs_[R.rank_unchecked(e.data())] = field_->mul(coeffs_[i], k);
  }
  return r;
}

std::uint32_t HomogPoly::eval_in(const Field& at, std::span<const std::uint32_t> coords) const {
  if (static_cast<int>(coords.size()) != n_ + 1) throw DomainError("point has the wrong number of coordinates");
  const Embedding* emb = nullptr;
  if (&at != field_.get()) emb = &embedding(field_, at.self());
  // powers[i][k] = coords[i]^k
  std::vector<std::uint32_t> powers((n_ + 1) * (d_ + 1));
  for (int i = 0; i <= n_; ++i) {
    powers[i * (d_ + 1)] = 1;
    for (int k = 1; k <= d_; ++k)
      powers[i * (d_ + 1) + k] = at.mul(powers[i * (d_ + 1) + k - 1], coords[i]);
  }
  const auto& B = basis();
  std::uint32_t acc = 0;
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    if (coeffs_[m] == 0) continue;
    std::uint32_t term = emb ? (*emb)(coeffs_[m]) : coeffs_[m];
    auto e = B.exps(m);
    for (int i = 0; i <= n_ && term != 0; ++i) term = at.mul(term, powers[i * (d_ + 1) + e[i]]);
    acc = at.add(acc, term);
  }
  return acc;
}

FieldElem HomogPoly::eval(const ProjPoint& pt) const {
  return pt.field()->elem(eval_in(*pt.field(), pt.coords()));
}

HomogPoly HomogPoly::embed(const FieldPtr& target) const {
  if (target == field_) return *this;
  const auto& emb = embedding(field_, target);
  HomogPoly r(target, n_, d_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = emb(coeffs_[i]);
  return r;
}

HomogPoly HomogPoly::frobenius(const Field& base) const {
  HomogPoly r = *this;
  for (auto& c : r.coeffs_) c = field_->pow(c, base.order());
  return r;
}

HomogPoly HomogPoly::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != n_ + 1) throw DomainError("permutation has the wrong length");
  HomogPoly r(field_, n_, d_);
  const auto& B = basis();
  std::vector<std::uint8_t> e(n_ + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    auto ei = B.exps(i);
    for (int k = 0; k <= n_; ++k) e[perm[k]] = ei[k];
    r.coeffs_[B.rank_unchecked(e.data())] = coeffs_[i];
  }
  return r;
}

std::string HomogPoly::to_string() const {
  std::string out;
  const auto& B = basis();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!out.empty()) out += " + ";
    std::string term;
    if (coeffs_[i] != 1 || d_ == 0) term = field_->format(coeffs_[i]);
    auto e = B.exps(i);
    for (int k = 0; k <= n_; ++k) {
      if (e[k] == 0) continue;
      if (!term.empty()) term += '*';
      term += 'x' + std::to_string(k);
      if (e[k] > 1) term += '^' + std::to_string(e[k]);
    }
    out += term;
  }
  return out.empty() ? "0" : out;
}

namespace {

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool at_end() {
    skip();
    return pos >= s.size();
  }
  long long number() {
    skip();
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (ec != std::errc{} || v < 0) fail("expected a number");
    pos = static_cast<std::size_t>(p - s.data());
    return v;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("cannot parse polynomial \"" + std::string(s) + "\" at offset " + std::to_string(pos) + ": " + what);
  }
};

}  // namespace

HomogPoly HomogPoly::parse(std::string_view text, FieldPtr field, int n, std::optional<int> degree) {
  if (!field) throw DomainError("parse needs a field");
  Parser P{text};
  struct Term {
    std::uint32_t c;
    std::vector<int> e;
  };
  std::vector<Term> terms;
  bool negate = false;
  if (P.eat('-')) negate = true;
  while (true) {
    Term t{1, std::vector<int>(n + 1, 0)};
    bool any = false;
    do {
      P.skip();
      if (P.pos >= P.s.size()) P.fail("unexpected end");
      const char ch = P.s[P.pos];
      if (ch == 'x') {
        ++P.pos;
        const long long i = P.number();
        if (i > n) P.fail("variable index out of range");
        long long e = 1;
        if (P.eat('^')) e = P.number();
        t.e[i] += static_cast<int>(e);
      } else if (ch == 'g') {
        ++P.pos;
        long long k = 1;
        if (P.eat('^')) k = P.number();
        t.c = field->mul(t.c, field->pow(field->primitive(), static_cast<std::uint64_t>(k)));
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        const long long v = P.number();
        t.c = field->mul(t.c, field->from_int(v));
      } else if (ch == '(' ) {
        P.fail("parentheses are not supported");
      } else {
        P.fail(std::string("unexpected character '") + ch + "'");
      }
      any = true;
    } while (P.eat('*'));
    if (!any) P.fail("empty term");
    if (negate) t.c = field->neg(t.c);
    terms.push_back(std::move(t));
    if (P.eat('+')) {
      negate = false;
    } else if (P.eat('-')) {
      negate = true;
    } else {
      break;
    }
  }
  if (!P.at_end()) P.fail("trailing input");

  std::optional<int> d = degree;
  for (const auto& t : terms) {
    int td = 0;
    for (int e : t.e) td += e;
    // a bare "0" term carries no degree information
    if (t.c == 0) continue;
    if (!d) d = td;
    else if (*d != td) throw DomainError("polynomial \"" + std::string(text) + "\" is not homogeneous of degree " + std::to_string(*d));
  }
  if (!d) d = 0;
  HomogPoly f(field, n, *d);
  for (const auto& t : terms) {
    if (t.c == 0) continue;
    const std::size_t idx = f.basis().rank(t.e);
    f.coeffs_[idx] = field->add(f.coeffs_[idx], t.c);
  }
  return f;
}

// ---------------------------------------------------------------- division

std::optional<HomogPoly> poly_divides(const HomogPoly& g, const HomogPoly& f) {
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  if (g.field() != f.field() || g.n() != f.n()) throw DomainError("poly_divides: mismatched rings");
  const int e = g.degree(), d = f.degree();
  if (e > d) return std::nullopt;
  const auto& F = *f.field();
  const int n = f.n();
  const std::size_t M = MonomialBasis::get(n, d - e).size();
  const std::size_t N = f.size();
  // Equations: for every monomial of S_d, sum_j h_j (g*m_j)[row] = f[row].
  std::vector<std::vector<std::uint32_t>> rows(N, std::vector<std::uint32_t>(M + 1, 0));
  const auto& table = MonomialBasis::product_table(n, e, d - e);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.raw(i) == 0) continue;
    for (std::size_t j = 0; j < M; ++j) {
      auto& slot = rows[table[i * M + j]][j];
      slot = F.add(slot, g.raw(i));
    }
  }
  for (std::size_t r = 0; r < N; ++r) rows[r][M] = f.raw(r);
  Echelon<FqOps> ech(FqOps{&F}, M + 1);
  for (auto& r : rows) ech.insert(std::move(r));
  HomogPoly h(f.field(), n, d - e);
  for (const auto& r : ech.rref()) {
    std::size_t lead = 0;
    while (r[lead] == 0) ++lead;
    if (lead == M) return std::nullopt;  // inconsistent
    h.set(lead, r[M]);
  }
  return h;
}

// ---------------------------------------------------------------- points

std::uint64_t projective_point_count(std::uint64_t q, int n) {
  std::uint64_t total = 0, pw = 1;
  for (int i = 0; i <= n; ++i) {
    total += pw;
    pw *= q;
  }
  return total;
}

std::vector<ProjPoint> projective_points(const FieldPtr& field, int n) {
  const std::uint64_t q = field->order();
  const std::uint64_t count = projective_point_count(q, n);
  if (count > Caps::current().points)
    throw CapExceeded("P^" + std::to_string(n) + "(" + field->name() + ") has " + std::to_string(count) +
                      " points, above the point cap (BERTINI_POINT_CAP)");
  std::vector<ProjPoint> out;
  out.reserve(count);
  std::vector<std::uint32_t> c(n + 1);
  for (int chart = 0; chart <= n; ++chart) {
    std::fill(c.begin(), c.end(), 0);
    c[chart] = 1;
    // odometer over the trailing coordinates, most significant first
    while (true) {
      out.emplace_back(field, c);
      int k = n;
      while (k > chart) {
        if (++c[k] < q) break;
        c[k] = 0;
        --k;
      }
      if (k == chart) break;
    }
  }
  return out;
}

}  // namespace bertini
