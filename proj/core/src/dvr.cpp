// SPDX-License-Identifier: Apache-2.0
#include "bertini/dvr.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <exception>
#include <functional>
#include <limits>
#include <span>
#include <thread>

#include "bertini/errors.hpp"
#include "bertini/linalg.hpp"

namespace bertini {

// ---------------------------------------------------------------- UPoly

UPoly::UPoly(FieldPtr field, std::vector<std::uint32_t> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
  if (!field_) throw DomainError("polynomial in t without a field");
  trim();
}

UPoly UPoly::constant(FieldPtr field, std::uint32_t c) { return UPoly(std::move(field), {c}); }

UPoly UPoly::monomial(FieldPtr field, std::uint32_t c, int k) {
  if (k < 0) throw DomainError("negative power of t");
  std::vector<std::uint32_t> v(k + 1, 0);
  v[k] = c;
  return UPoly(std::move(field), std::move(v));
}

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int UPoly::valuation() const {
  if (c_.empty()) throw DomainError("valuation of zero");
  int v = 0;
  while (c_[v] == 0) ++v;
  return v;
}

std::uint32_t UPoly::eval(std::uint32_t a) const {
  std::uint32_t acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = field_->add(field_->mul(acc, a), c_[i]);
  return acc;
}

UPoly UPoly::operator+(const UPoly& b) const {
  const auto& F = field_ ? field_ : b.field_;
  std::vector<std::uint32_t> r(std::max(c_.size(), b.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F->add(coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
  return UPoly(F, std::move(r));
}

UPoly UPoly::operator-(const UPoly& b) const { return *this + (-b); }

UPoly UPoly::operator-() const {
  UPoly r = *this;
  for (auto& c : r.c_) c = field_->neg(c);
  return r;
}

UPoly UPoly::operator*(const UPoly& b) const {
  const auto& F = field_ ? field_ : b.field_;
  if (is_zero() || b.is_zero()) return UPoly(F);
  std::vector<std::uint32_t> r(c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = F->add(r[i + j], F->mul(c_[i], b.c_[j]));
  }
  return UPoly(F, std::move(r));
}

UPoly UPoly::scaled(std::uint32_t c) const {
  UPoly r = *this;
  for (auto& x : r.c_) x = field_->mul(x, c);
  r.trim();
  return r;
}

UPoly UPoly::shifted(int k) const {
  if (is_zero() || k == 0) return *this;
  UPoly r(field_);
  if (k > 0) {
    r.c_.assign(k, 0);
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  } else {
    if (valuation() < -k) throw DomainError("t^" + std::to_string(-k) + " does not divide " + to_string());
    r.c_.assign(c_.begin() - k, c_.end());
  }
  return r;
}

std::pair<UPoly, UPoly> UPoly::divmod(const UPoly& b) const {
  if (b.is_zero()) throw DivisionByZero();
  const auto& F = b.field_;
  UPoly q(F), r = *this;
  if (r.field_ == nullptr) r.field_ = F;
  if (r.degree() < b.degree()) return {q, r};
  q.c_.assign(r.degree() - b.degree() + 1, 0);
  const std::uint32_t li = F->inv(b.lead());
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const int s = r.degree() - b.degree();
    const std::uint32_t c = F->mul(r.lead(), li);
    q.c_[s] = c;
    for (int i = 0; i <= b.degree(); ++i) r.c_[s + i] = F->sub(r.c_[s + i], F->mul(c, b.c_[i]));
    r.trim();
  }
  q.trim();
  return {q, r};
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(field_->inv(lead()));
}

std::string UPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!out.empty()) out += " + ";
    std::string term;
    if (c_[i] != 1 || i == 0) term = field_->format(c_[i]);
    if (i > 0) {
      if (!term.empty()) term += '*';
      term += 't';
      if (i > 1) term += '^' + std::to_string(i);
    }
    out += term;
  }
  return out;
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(UPoly num) : num_(std::move(num)), den_(UPoly::constant(num_.field(), 1)) {}

RatFunc::RatFunc(UPoly num, UPoly den) {
  if (den.is_zero()) throw DivisionByZero();
  if (num.is_zero()) {
    num_ = UPoly(den.field());
    den_ = UPoly::constant(den.field(), 1);
    return;
  }
  const UPoly g = gcd(num, den);
  if (g.degree() > 0) {
    num = num.divmod(g).first;
    den = den.divmod(g).first;
  }
  const std::uint32_t li = den.field()->inv(den.lead());
  num_ = num.scaled(li);
  den_ = den.scaled(li);
}

std::uint32_t RatFunc::residue() const {
  if (!is_regular()) throw DomainError(to_string() + " is not in the local ring");
  const auto& F = *field();
  return F.div(num_.at_zero(), den_.at_zero());
}

RatFunc RatFunc::operator+(const RatFunc& b) const {
  if (is_zero()) return b;
  if (b.is_zero()) return *this;
  if (den_ == b.den_) return RatFunc(num_ + b.num_, den_);
  return RatFunc(num_ * b.den_ + b.num_ * den_, den_ * b.den_);
}

RatFunc RatFunc::operator-(const RatFunc& b) const { return *this + (-b); }

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -num_;
  return r;
}

RatFunc RatFunc::operator*(const RatFunc& b) const {
  if (is_zero()) return *this;
  if (b.is_zero()) return b;
  return RatFunc(num_ * b.num_, den_ * b.den_);
}

RatFunc RatFunc::operator/(const RatFunc& b) const { return *this * b.inv(); }

RatFunc RatFunc::inv() const {
  if (is_zero()) throw DivisionByZero();
  return RatFunc(den_, num_);
}

std::string RatFunc::to_string() const {
  if (den_.degree() == 0) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

// ---------------------------------------------------------------- DvrElem

DvrElem::DvrElem(RatFunc r) : r_(std::move(r)) {
  if (!r_.field()) throw DomainError("DVR element without a field");
  if (!r_.is_regular()) throw DomainError(r_.to_string() + " has a pole at t = 0");
}

DvrElem DvrElem::parse(std::string_view text, FieldPtr field) {
  const KForm f = KForm::parse(text, field, 0);
  if (f.degree() != 0) throw DomainError("\"" + std::string(text) + "\" is not a scalar");
  return DvrElem(f.coeff(0));
}

DvrElem DvrElem::divide(const DvrElem& b) const {
  if (b.is_zero()) throw DivisionByZero();
  if (is_zero()) return *this;
  if (valuation() < b.valuation()) throw DomainError(to_string() + " is not divisible by " + b.to_string() + " in A");
  return DvrElem(r_ / b.r_);
}

// ---------------------------------------------------------------- DvrPoint

DvrPoint::DvrPoint(std::vector<DvrElem> coords) : c_(std::move(coords)) {
  if (c_.empty() || std::all_of(c_.begin(), c_.end(), [](const DvrElem& x) { return x.is_zero(); }))
    throw DomainError("the zero vector is not a point");
}

DvrPoint DvrPoint::normalized() const {
  int l = std::numeric_limits<int>::max();
  for (const auto& x : c_)
    if (!x.is_zero()) l = std::min(l, x.valuation());
  if (l == 0) return *this;
  const auto& F = c_[0].value().field();
  const RatFunc s = RatFunc::t(F, l).inv();
  std::vector<DvrElem> out;
  for (const auto& x : c_) out.emplace_back(x.value() * s);
  return DvrPoint(std::move(out));
}

bool DvrPoint::same_point(const DvrPoint& other) const {
  if (other.c_.size() != c_.size()) return false;
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = i + 1; j < c_.size(); ++j)
      if (!((c_[i].value() * other.c_[j].value()) == (c_[j].value() * other.c_[i].value()))) return false;
  return true;
}

DvrPoint DvrPoint::scaled(const DvrElem& u) const {
  std::vector<DvrElem> out;
  for (const auto& x : c_) out.push_back(x * u);
  return DvrPoint(std::move(out));
}

std::string DvrPoint::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? " : " : "") + c_[i].to_string();
  return s + "]";
}

ProjPoint specialize_point(const DvrPoint& P) {
  const DvrPoint N = P.normalized();
  const auto& F = N.coords()[0].value().field();
  std::vector<std::uint32_t> c;
  for (const auto& x : N.coords()) c.push_back(x.residue());
  return ProjPoint(F, std::move(c));
}

DvrPoint psi_x(const ProjPoint& x, const std::vector<DvrElem>& c) {
  if (static_cast<int>(c.size()) != x.n()) throw DomainError("psi_x needs one perturbation per free coordinate");
  const int j = x.chart();
  const auto& F = x.field();
  const RatFunc t = RatFunc::t(F);
  std::vector<DvrElem> out;
  std::size_t k = 0;
  for (int i = 0; i <= x.n(); ++i) {
    if (i == j) {
      out.push_back(DvrElem::constant(F, 1));  // ProjPoint keeps its chart coordinate at 1
      continue;
    }
    if (c[k].value().field() != F) throw DomainError("perturbation over the wrong field");
    out.emplace_back(RatFunc::constant(F, x[i]) + t * c[k].value());
    ++k;
  }
  return DvrPoint(std::move(out));
}

// ---------------------------------------------------------------- KForm

KForm::KForm(FieldPtr field, int n, int d) : field_(std::move(field)), n_(n), d_(d) {
  if (!field_) throw DomainError("form without a field");
  if (n < 0 || d < 0) throw DomainError("form with negative n or degree");
  c_.assign(basis().size(), RatFunc(field_));
}

KForm::KForm(FieldPtr field, int n, int d, std::vector<RatFunc> coeffs) : KForm(std::move(field), n, d) {
  if (coeffs.size() != c_.size()) throw DomainError("coefficient vector has the wrong length");
  c_ = std::move(coeffs);
}

KForm KForm::lift(const HomogPoly& f) {
  KForm r(f.field(), f.n(), f.degree());
  for (std::size_t i = 0; i < f.size(); ++i) r.c_[i] = RatFunc::constant(f.field(), f.raw(i));
  return r;
}

namespace {

using Terms = std::map<std::vector<int>, RatFunc>;

struct FormParser {
  std::string_view s;
  FieldPtr F;
  int n;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("cannot parse \"" + std::string(s) + "\" at offset " + std::to_string(pos) + ": " + what);
  }
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
  long long number() {
    skip();
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (ec != std::errc{} || v < 0) fail("expected a number");
    pos = static_cast<std::size_t>(p - s.data());
    return v;
  }

  Terms scalar(const RatFunc& c) const {
    Terms t;
    if (!c.is_zero()) t.emplace(std::vector<int>(n + 1, 0), c);
    return t;
  }
  static void add_into(Terms& a, const Terms& b, bool negate) {
    for (const auto& [e, c] : b) {
      auto it = a.find(e);
      const RatFunc v = negate ? -c : c;
      if (it == a.end()) {
        a.emplace(e, v);
      } else {
        it->second = it->second + v;
        if (it->second.is_zero()) a.erase(it);
      }
    }
  }
  Terms mul(const Terms& a, const Terms& b) const {
    Terms r;
    for (const auto& [ea, ca] : a)
      for (const auto& [eb, cb] : b) {
        std::vector<int> e(n + 1);
        for (int i = 0; i <= n; ++i) e[i] = ea[i] + eb[i];
        add_into(r, Terms{{e, ca * cb}}, false);
      }
    return r;
  }

  Terms expr() {
    Terms acc;
    bool negate = eat('-');
    while (true) {
      add_into(acc, term(), negate);
      if (eat('+')) negate = false;
      else if (eat('-')) negate = true;
      else return acc;
    }
  }
  Terms term() {
    Terms acc = factor();
    while (true) {
      if (eat('*')) {
        acc = mul(acc, factor());
      } else if (eat('/')) {
        const Terms b = factor();
        if (b.empty()) fail("division by zero");
        if (b.size() != 1 || std::any_of(b.begin()->first.begin(), b.begin()->first.end(), [](int e) { return e; }))
          fail("only division by scalars is supported");
        for (auto& [e, c] : acc) c = c / b.begin()->second;
      } else {
        return acc;
      }
    }
  }
  Terms factor() {
    Terms base = atom();
    if (!eat('^')) return base;
    const long long k = number();
    Terms r = scalar(RatFunc::constant(F, 1));
    for (long long i = 0; i < k; ++i) r = mul(r, base);
    return r;
  }
  Terms atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end");
    const char ch = s[pos];
    if (ch == '(') {
      ++pos;
      Terms e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (ch == 't') {
      ++pos;
      return scalar(RatFunc::t(F));
    }
    if (ch == 'g') {
      ++pos;
      return scalar(RatFunc::constant(F, F->primitive()));
    }
    if (ch == 'x') {
      ++pos;
      const long long i = number();
      if (i > n) fail("variable index out of range");
      std::vector<int> e(n + 1, 0);
      e[i] = 1;
      return Terms{{e, RatFunc::constant(F, 1)}};
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) return scalar(RatFunc::constant(F, F->from_int(number())));
    fail(std::string("unexpected character '") + ch + "'");
  }
};

std::string monomial_string(std::span<const std::uint8_t> e) {
  std::string m;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!m.empty()) m += '*';
    m += 'x' + std::to_string(k);
    if (e[k] > 1) m += '^' + std::to_string(e[k]);
  }
  return m;
}

std::string coeff_string(const RatFunc& c) {
  const std::string s = c.to_string();
  return s.find_first_of(" /") == std::string::npos ? s : "(" + s + ")";
}

}  // namespace

KForm KForm::parse(std::string_view text, FieldPtr field, int n) {
  if (!field) throw DomainError("parse needs a field");
  FormParser P{text, field, n};
  const Terms terms = P.expr();
  P.skip();
  if (P.pos != text.size()) P.fail("trailing input");
  std::optional<int> d;
  for (const auto& [e, c] : terms) {
    int td = 0;
    for (int x : e) td += x;
    if (d && *d != td) throw DomainError("\"" + std::string(text) + "\" is not homogeneous");
    d = td;
  }
  KForm f(field, n, d.value_or(0));
  for (const auto& [e, c] : terms) f.c_[f.basis().rank(e)] = c;
  return f;
}

bool KForm::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const RatFunc& c) { return c.is_zero(); });
}

bool KForm::is_integral() const {
  return std::all_of(c_.begin(), c_.end(), [](const RatFunc& c) { return c.is_regular(); });
}

int KForm::min_valuation() const {
  int v = std::numeric_limits<int>::max();
  for (const auto& c : c_)
    if (!c.is_zero()) v = std::min(v, c.valuation());
  if (v == std::numeric_limits<int>::max()) throw DomainError("valuation of the zero form");
  return v;
}

HomogPoly KForm::reduce() const {
  HomogPoly f(field_, n_, d_);
  for (std::size_t i = 0; i < c_.size(); ++i) f.set(i, c_[i].residue());
  return f;
}

KForm KForm::operator+(const KForm& b) const {
  if (b.is_zero()) return *this;
  if (is_zero()) return b;
  if (b.n_ != n_ || b.d_ != d_) throw DomainError("adding forms of different shape");
  KForm r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + b.c_[i];
  return r;
}

KForm KForm::operator-(const KForm& b) const { return *this + b.scaled(RatFunc::constant(field_, field_->neg(1))); }

KForm KForm::operator*(const KForm& b) const {
  if (b.n_ != n_) throw DomainError("multiplying forms in different rings");
  KForm r(field_, n_, d_ + b.d_);
  const auto& T = MonomialBasis::product_table(n_, d_, b.d_);
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      if (b.c_[j].is_zero()) continue;
      auto& slot = r.c_[T[i * nb + j]];
      slot = slot + c_[i] * b.c_[j];
    }
  }
  return r;
}

KForm KForm::scaled(const RatFunc& c) const {
  KForm r = *this;
  for (auto& x : r.c_) x = x * c;
  return r;
}

KForm KForm::diff(int var) const {
  if (var < 0 || var > n_) throw DomainError("no such variable");
  if (d_ == 0) return KForm(field_, n_, 0);
  KForm r(field_, n_, d_ - 1);
  const auto& B = basis();
  const auto& R = r.basis();
  std::vector<std::uint8_t> e(n_ + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    auto ei = B.exps(i);
    if (ei[var] == 0) continue;
    const std::uint32_t k = field_->from_int(ei[var]);
    if (k == 0) continue;
    std::copy(ei.begin(), ei.end(), e.begin());
    --e[var];
    r.c_[R.rank_unchecked(e.data())] = c_[i] * RatFunc::constant(field_, k);
  }
  return r;
}

RatFunc KForm::eval(const std::vector<RatFunc>& pt) const {
  if (static_cast<int>(pt.size()) != n_ + 1) throw DomainError("point has the wrong number of coordinates");
  std::vector<std::vector<RatFunc>> pw(n_ + 1);
  for (int i = 0; i <= n_; ++i) {
    pw[i].push_back(RatFunc::constant(field_, 1));
    for (int k = 1; k <= d_; ++k) pw[i].push_back(pw[i].back() * pt[i]);
  }
  RatFunc acc(field_);
  const auto& B = basis();
  for (std::size_t m = 0; m < c_.size(); ++m) {
    if (c_[m].is_zero()) continue;
    RatFunc term = c_[m];
    auto e = B.exps(m);
    for (int i = 0; i <= n_ && !term.is_zero(); ++i) term = term * pw[i][e[i]];
    acc = acc + term;
  }
  return acc;
}

RatFunc KForm::eval(const DvrPoint& P) const {
  std::vector<RatFunc> pt;
  for (const auto& x : P.coords()) pt.push_back(x.value());
  return eval(pt);
}

std::string KForm::to_string() const {
  std::string out;
  const auto& B = basis();
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    const std::string m = monomial_string(B.exps(i));
    if (m.empty()) out += coeff_string(c_[i]);
    else if (c_[i].is_one()) out += m;
    else out += coeff_string(c_[i]) + "*" + m;
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- DvrHypersurface

DvrHypersurface::DvrHypersurface(KForm f) : f_(std::move(f)) {
  if (!f_.is_integral()) throw DomainError("hypersurface coefficient outside A: " + f_.to_string());
  if (f_.is_zero() || f_.min_valuation() > 0)
    throw DomainError("every coefficient of " + f_.to_string() + " lies in (t)");
}

std::pair<KForm, HomogPoly> fiberwise(const DvrHypersurface& H) { return {H.generic(), H.special()}; }

// ---------------------------------------------------------------- linear algebra over K

namespace {

std::vector<RatFunc> multiple_row(const KForm& g, std::size_t mono, int D) {
  const int e = D - g.degree();
  const auto& T = MonomialBasis::product_table(g.n(), g.degree(), e);
  const std::size_t ne = MonomialBasis::get(g.n(), e).size();
  std::vector<RatFunc> row(MonomialBasis::get(g.n(), D).size(), RatFunc(g.field()));
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.coeff(i).is_zero()) row[T[i * ne + mono]] = g.coeff(i);
  return row;
}

}  // namespace

std::size_t graded_rank_K(const FieldPtr& field, int n, const std::vector<KForm>& gens, int D) {
  const std::size_t N = MonomialBasis::get(n, D).size();
  Echelon<RatFuncOps> E(RatFuncOps{field}, N);
  for (const auto& g : gens) {
    if (g.is_zero() || g.degree() > D) continue;
    const std::size_t M = MonomialBasis::get(n, D - g.degree()).size();
    for (std::size_t j = 0; j < M && !E.full(); ++j) E.insert(multiple_row(g, j, D));
  }
  return E.rank();
}

bool is_empty_projective_K(const FieldPtr& field, int n, const std::vector<KForm>& gens) {
  std::vector<int> degs;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    if (g.degree() == 0) return true;
    degs.push_back(g.degree());
  }
  // fewer than n+1 equations always have a common zero over the closure
  if (static_cast<int>(degs.size()) < n + 1) return false;
  std::sort(degs.rbegin(), degs.rend());
  int D = 1;
  for (int i = 0; i <= n; ++i) D += degs[i] - 1;
  return graded_rank_K(field, n, gens, D) == MonomialBasis::get(n, D).size();
}

std::vector<std::vector<KForm>> jacobian(const std::vector<KForm>& gens) {
  std::vector<std::vector<KForm>> J;
  for (const auto& g : gens) {
    std::vector<KForm> row;
    for (int j = 0; j <= g.n(); ++j) row.push_back(g.diff(j));
    J.push_back(std::move(row));
  }
  return J;
}

namespace {

KForm det(const std::vector<std::vector<KForm>>& M, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() == 1) return M[rows[0]][cols[0]];
  const auto& F = M[rows[0]][cols[0]].field();
  const RatFunc minus = RatFunc::constant(F, F->neg(1));
  std::vector<int> rest(rows.begin() + 1, rows.end());
  KForm acc(F, M[rows[0]][cols[0]].n(), 0);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const KForm& a = M[rows[0]][cols[k]];
    if (a.is_zero()) continue;
    std::vector<int> c2;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (j != k) c2.push_back(cols[j]);
    KForm term = a * det(M, rest, c2);
    acc = acc + (k % 2 ? term.scaled(minus) : term);
  }
  return acc;
}

void subsets(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

}  // namespace

std::vector<KForm> minors(const std::vector<std::vector<KForm>>& M, int k) {
  std::vector<KForm> out;
  if (M.empty() || k <= 0 || k > static_cast<int>(M.size()) || k > static_cast<int>(M[0].size())) return out;
  std::vector<std::vector<int>> R, C;
  subsets(static_cast<int>(M.size()), k, R);
  subsets(static_cast<int>(M[0].size()), k, C);
  for (const auto& r : R)
    for (const auto& c : C) {
      KForm m = det(M, r, c);
      if (!m.is_zero()) out.push_back(std::move(m));
    }
  return out;
}

// ---------------------------------------------------------------- modules over A

std::size_t AModule::residue_rank() const {
  FqEchelon E(*field, MonomialBasis::get(n, d).size());
  for (const auto& f : reductions()) E.insert(f.coeffs());
  return E.rank();
}

bool AModule::saturated() const {
  return std::all_of(pivot_valuation.begin(), pivot_valuation.end(), [](int v) { return v == 0; });
}

std::vector<HomogPoly> AModule::reductions() const {
  std::vector<HomogPoly> out;
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(row_form(i).reduce());
  return out;
}

KForm AModule::row_form(std::size_t i) const { return KForm(field, n, d, rows[i]); }

std::optional<std::vector<RatFunc>> AModule::coordinates(const KForm& f) const {
  if (f.n() != n || (f.degree() != d && !f.is_zero())) throw DomainError("form outside S'_d");
  std::vector<RatFunc> v = f.is_zero() ? std::vector<RatFunc>(MonomialBasis::get(n, d).size(), RatFunc(field)) : f.coeffs();
  std::vector<RatFunc> a;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RatFunc& e = v[pivots[i]];
    if (e.is_zero()) {
      a.emplace_back(field);
      continue;
    }
    // pivot entry is t^v exactly
    const RatFunc c = e / RatFunc::t(field, pivot_valuation[i]);
    if (!c.is_regular()) return std::nullopt;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!rows[i][j].is_zero()) v[j] = v[j] - c * rows[i][j];
    a.push_back(c);
  }
  for (const auto& x : v)
    if (!x.is_zero()) return std::nullopt;
  return a;
}

AModule a_piece(const FieldPtr& field, int n, const std::vector<KForm>& gens, int d) {
  AModule M{field, n, d, {}, {}, {}};
  std::vector<std::vector<RatFunc>> pending;
  for (const auto& g : gens) {
    if (g.n() != n) throw DomainError("generator over the wrong ring");
    if (!g.is_integral()) throw DomainError("generator " + g.to_string() + " has coefficients outside A");
    if (g.is_zero() || g.degree() > d) continue;
    const std::size_t K = MonomialBasis::get(n, d - g.degree()).size();
    for (std::size_t j = 0; j < K; ++j) pending.push_back(multiple_row(g, j, d));
  }
  const std::size_t N = MonomialBasis::get(n, d).size();
  std::vector<bool> used(N, false);
  while (true) {
    int best_v = std::numeric_limits<int>::max();
    std::size_t br = 0, bc = 0;
    for (std::size_t r = 0; r < pending.size(); ++r)
      for (std::size_t c = 0; c < N; ++c) {
        if (used[c] || pending[r][c].is_zero()) continue;
        const int v = pending[r][c].valuation();
        if (v < best_v) best_v = v, br = r, bc = c;
      }
    if (best_v == std::numeric_limits<int>::max()) break;
    auto row = std::move(pending[br]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(br));
    // make the pivot exactly t^v
    const RatFunc unit_inv = RatFunc::t(field, best_v) / row[bc];
    for (auto& x : row) x = x * unit_inv;
    for (auto& other : pending) {
      if (other[bc].is_zero()) continue;
      const RatFunc c = other[bc] / row[bc];  // in A: valuations are >= best_v
      for (std::size_t j = 0; j < N; ++j)
        if (!row[j].is_zero()) other[j] = other[j] - c * row[j];
    }
    std::erase_if(pending, [](const std::vector<RatFunc>& r) {
      return std::all_of(r.begin(), r.end(), [](const RatFunc& x) { return x.is_zero(); });
    });
    used[bc] = true;
    M.rows.push_back(std::move(row));
    M.pivots.push_back(bc);
    M.pivot_valuation.push_back(best_v);
  }
  return M;
}

bool FlatReport::ok() const {
  return std::all_of(degrees.begin(), degrees.end(), [](const FlatDegree& g) { return g.ok(); });
}

nlohmann::json FlatReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& g : degrees)
    rows.push_back({{"d", g.d},
                    {"rank_K", g.rank_K},
                    {"rank_k", g.rank_k},
                    {"special_rank", g.special_rank},
                    {"max_pivot_valuation", g.max_pivot_valuation},
                    {"torsion_free", g.torsion_free},
                    {"spans_special", g.spans_special},
                    {"ok", g.ok()}});
  return {{"ok", ok()}, {"degrees", rows}};
}

namespace {

std::vector<HomogPoly> reduced_gens(const std::vector<KForm>& gens) {
  std::vector<HomogPoly> out;
  for (const auto& g : gens) {
    HomogPoly r = g.reduce();
    if (!r.is_zero()) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

FlatReport check_flat_restriction(const FieldPtr& field, int n, const std::vector<KForm>& gens, int d_lo, int d_hi) {
  if (d_lo < 0 || d_hi < d_lo) throw DomainError("bad degree range for the flatness check");
  const SubschemeSpec Zs = SubschemeSpec::from_ideal(field, n, reduced_gens(gens));
  FlatReport rep;
  for (int d = d_lo; d <= d_hi; ++d) {
    const AModule M = a_piece(field, n, gens, d);
    const GradedPiece special = vanishing_piece(Zs, d);
    FlatDegree g;
    g.d = d;
    g.rank_K = M.rank();
    g.rank_k = M.residue_rank();
    g.special_rank = special.rank();
    for (int v : M.pivot_valuation) g.max_pivot_valuation = std::max(g.max_pivot_valuation, v);
    // I_d / t I_d -> S_d has kernel (t S'_d cap I_d) / t I_d
    g.torsion_free = g.rank_k == g.rank_K;
    g.spans_special = g.rank_k == g.special_rank;
    for (const auto& r : M.reductions())
      if (!r.is_zero() && !special.contains(r)) g.spans_special = false;
    rep.degrees.push_back(g);
  }
  return rep;
}

// ---------------------------------------------------------------- lifting

std::string to_string(LiftPredicate p) {
  switch (p) {
    case LiftPredicate::Smooth: return "smooth";
    case LiftPredicate::Flat: return "flat";
    case LiftPredicate::Reduced: return "reduced";
    case LiftPredicate::Irreducible: return "irreducible";
    case LiftPredicate::ContainsZ: return "contains_Z";
  }
  return "?";
}

LiftPredicate lift_predicate_from_string(const std::string& s) {
  for (auto p : {LiftPredicate::Smooth, LiftPredicate::Flat, LiftPredicate::Reduced, LiftPredicate::Irreducible,
                 LiftPredicate::ContainsZ})
    if (to_string(p) == s) return p;
  throw DomainError("unknown lift predicate \"" + s + "\"");
}

void LiftProblem::validate() const {
  if (!field) throw DomainError("lift problem without a field");
  if (n < 1) throw DomainError("lift problem needs n >= 1");
  if (m < 1 || m > n) throw DomainError("relative dimension must lie in 1..n");
  if (X.empty() && m != n) throw DomainError("X = P^n has relative dimension n");
  if (d < 1) throw DomainError("lift degree must be positive");
  if (count < 1) throw DomainError("lift count must be positive");
  if (box_degree < 0) throw DomainError("negative box degree");
  if (predicates.empty()) throw DomainError("no lift predicates requested");
  for (const auto* v : {&X, &Z})
    for (const auto& g : *v) {
      if (g.field() != field || g.n() != n) throw DomainError("generator over the wrong ring");
      if (!g.is_integral()) throw DomainError("generator " + g.to_string() + " has coefficients outside A");
    }
  for (auto p : predicates) {
    if ((p == LiftPredicate::Reduced || p == LiftPredicate::Irreducible) && !X.empty())
      throw DomainError(to_string(p) + " is only supported for hypersurfaces of P^n_A");
    if (p == LiftPredicate::ContainsZ && Z.empty()) throw DomainError("contains_Z without Z");
  }
}

bool LiftCertificate::ok() const {
  for (const auto* m : {&special, &generic})
    for (const auto& [k, v] : *m)
      if (v != Verdict::True) return false;
  return true;
}

nlohmann::json LiftCertificate::to_json() const {
  nlohmann::json coeffs = nlohmann::json::object();
  const auto& f = H.generic();
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f.coeff(i).is_zero()) coeffs[monomial_string(f.basis().exps(i))] = f.coeff(i).to_string();
  nlohmann::json pert = nlohmann::json::array();
  for (const auto& g : perturbation) pert.push_back(g.to_string());
  nlohmann::json sp = nlohmann::json::object(), gen = nlohmann::json::object();
  for (const auto& [k, v] : special) sp[k] = bertini::to_string(v);
  for (const auto& [k, v] : generic) gen[k] = bertini::to_string(v);
  return {{"f_s", f_s.to_string()}, {"form", H.to_string()}, {"coefficients", coeffs}, {"perturbation", pert},
          {"special", sp},          {"generic", gen},          {"notes", notes}};
}

nlohmann::json LiftResult::to_json() const {
  nlohmann::json L = nlohmann::json::array();
  for (const auto& c : lifts) L.push_back(c.to_json());
  return {{"lifts", L},
          {"special_candidates", special_candidates},
          {"special_passed", special_passed},
          {"lifts_tried", lifts_tried},
          {"rejected", rejected}};
}

namespace {

struct LiftContext {
  const LiftProblem& P;
  SubschemeSpec Xs, Zs;
  SectionProblem section;
  std::optional<AModule> Zmod;
  std::optional<GradedPiece> Zs_piece;

  explicit LiftContext(const LiftProblem& p) : P(p) {
    Xs = P.X.empty() ? SubschemeSpec::ambient(P.field, P.n) : SubschemeSpec::from_ideal(P.field, P.n, reduced_gens(P.X));
    Zs = P.Z.empty() ? SubschemeSpec::empty(P.field, P.n) : SubschemeSpec::from_ideal(P.field, P.n, reduced_gens(P.Z));
    section.X = Xs;
    section.Z = Zs;
    section.T = SubschemeSpec::empty(P.field, P.n);
    section.m = P.m;
    if (!P.Z.empty()) {
      Zmod = a_piece(P.field, P.n, P.Z, P.d);
      Zs_piece = vanishing_piece(Zs, P.d);
    }
  }

  Verdict special(LiftPredicate p, const HomogPoly& fs) const {
    switch (p) {
      case LiftPredicate::Smooth: return is_smooth_section(section, fs).verdict;
      case LiftPredicate::Flat: return is_good_section(section, fs).g2.verdict;
      case LiftPredicate::Reduced: return is_reduced_section(fs).verdict;
      case LiftPredicate::Irreducible: return is_irreducible_section(fs, false).verdict;
      case LiftPredicate::ContainsZ: return Zs_piece->contains(fs) ? Verdict::True : Verdict::False;
    }
    return Verdict::NotEvaluated;
  }

  Verdict generic(LiftPredicate p, const KForm& f, Verdict special_verdict, std::vector<std::string>& notes) const {
    switch (p) {
      case LiftPredicate::Smooth: {
        std::vector<KForm> gens = P.X;
        gens.push_back(f);
        auto sing = minors(jacobian(gens), P.n - P.m + 1);
        sing.insert(sing.begin(), gens.begin(), gens.end());
        return is_empty_projective_K(P.field, P.n, sing) ? Verdict::True : Verdict::False;
      }
      case LiftPredicate::Flat: {
        std::vector<KForm> gens = P.X;
        gens.push_back(f);
        const auto rep = check_flat_restriction(P.field, P.n, gens, P.d, P.d + 1);
        bool tf = true;
        for (const auto& g : rep.degrees) tf = tf && g.torsion_free;
        if (!rep.ok() && tf) notes.push_back("flat: torsion free but the special piece is not saturated");
        return tf && special_verdict == Verdict::True ? Verdict::True : Verdict::False;
      }
      case LiftPredicate::Reduced:
      case LiftPredicate::Irreducible:
        // f = gh over K clears to a factorization over A (Gauss), and its
        // reduction factors f_s with the same degrees
        if (special_verdict == Verdict::True) {
          notes.push_back(to_string(p) + ": inherited from f_s through Gauss's lemma");
          return Verdict::True;
        }
        return Verdict::Inconclusive;
      case LiftPredicate::ContainsZ: return Zmod->contains(f) ? Verdict::True : Verdict::False;
    }
    return Verdict::NotEvaluated;
  }
};

template <class R>
std::vector<R> parallel_map(std::size_t count, int threads, const std::function<R(std::size_t)>& job) {
  std::vector<R> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        out[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int w = static_cast<int>(std::min<std::size_t>(std::max(1, threads), count));
  std::vector<std::thread> pool;
  for (int t = 1; t < w; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace

LiftCertificate verify_lift(const LiftProblem& problem, const DvrHypersurface& H) {
  problem.validate();
  if (H.n() != problem.n || H.degree() != problem.d) throw DomainError("hypersurface does not match the lift problem");
  const LiftContext ctx(problem);
  LiftCertificate cert;
  cert.H = H;
  cert.f_s = H.special();
  for (auto p : problem.predicates) {
    const Verdict s = ctx.special(p, cert.f_s);
    cert.special[to_string(p)] = s;
    cert.generic[to_string(p)] = ctx.generic(p, H.generic(), s, cert.notes);
  }
  return cert;
}

LiftResult lift_search(const LiftProblem& P) {
  P.validate();
  const LiftContext ctx(P);
  const auto& F = P.field;
  const std::uint64_t q = F->order();

  // A-basis b_i of I^Z_d; reductions b_i mod t span the special candidates
  std::vector<KForm> basis;
  if (ctx.Zmod) {
    if (!ctx.Zmod->saturated()) throw DomainError("Z is not flat over A in degree " + std::to_string(P.d));
    for (std::size_t i = 0; i < ctx.Zmod->rank(); ++i) basis.push_back(ctx.Zmod->row_form(i));
  } else {
    const std::size_t N = MonomialBasis::get(P.n, P.d).size();
    for (std::size_t i = 0; i < N; ++i) {
      KForm m(F, P.n, P.d);
      m.set(i, RatFunc::constant(F, 1));
      basis.push_back(std::move(m));
    }
  }
  const std::size_t r = basis.size();
  std::vector<HomogPoly> bred;
  for (const auto& b : basis) bred.push_back(b.reduce());

  auto capped_pow = [](std::uint64_t b, std::uint64_t e) {
    unsigned __int128 v = 1;
    for (std::uint64_t i = 0; i < e && v <= std::numeric_limits<std::uint64_t>::max(); ++i) v *= b;
    return v > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                         : static_cast<std::uint64_t>(v);
  };
  const std::uint64_t special_total = capped_pow(q, r);
  const std::uint64_t box = capped_pow(q, static_cast<std::uint64_t>(P.box_degree + 1) * r);
  const std::uint64_t per_candidate = std::min(box, P.max_lifts);
  const std::size_t batch = 16 * static_cast<std::size_t>(std::max(1, P.threads));

  LiftResult res;
  for (std::uint64_t k = 1; k < special_total && res.lifts.size() < P.count; ++k) {
    std::vector<std::uint32_t> a(r);
    for (std::uint64_t x = k, i = 0; i < r; ++i, x /= q) a[i] = static_cast<std::uint32_t>(x % q);
    HomogPoly fs(F, P.n, P.d);
    for (std::size_t i = 0; i < r; ++i)
      if (a[i]) fs = fs + bred[i].scaled(a[i]);
    ++res.special_candidates;
    if (fs.is_zero()) continue;
    bool pass = true;
    std::map<LiftPredicate, Verdict> sv;
    for (auto p : P.predicates) {
      sv[p] = ctx.special(p, fs);
      if (sv[p] != Verdict::True) {
        ++res.rejected["special:" + to_string(p)];
        pass = false;
        break;
      }
    }
    if (!pass) continue;
    ++res.special_passed;

    auto make_lift = [&](std::uint64_t idx) {
      std::vector<UPoly> g;
      KForm f(F, P.n, P.d);
      for (std::size_t i = 0; i < r; ++i) {
        std::vector<std::uint32_t> c(P.box_degree + 1);
        for (auto& x : c) {
          x = static_cast<std::uint32_t>(idx % q);
          idx /= q;
        }
        UPoly gi(F, std::move(c));
        const RatFunc coef = RatFunc(UPoly::constant(F, a[i]) + gi.shifted(1));
        g.push_back(std::move(gi));
        if (!coef.is_zero()) f = f + basis[i].scaled(coef);
      }
      return std::pair{DvrHypersurface(std::move(f)), std::move(g)};
    };

    for (std::uint64_t start = 0; start < per_candidate && res.lifts.size() < P.count; start += batch) {
      const std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(batch, per_candidate - start));
      auto certs = parallel_map<LiftCertificate>(len, P.threads, [&](std::size_t j) {
        auto [H, g] = make_lift(start + j);
        LiftCertificate c;
        c.H = std::move(H);
        c.f_s = fs;
        c.perturbation = std::move(g);
        for (auto p : P.predicates) {
          c.special[to_string(p)] = sv.at(p);
          c.generic[to_string(p)] = ctx.generic(p, c.H.generic(), sv.at(p), c.notes);
        }
        return c;
      });
      for (auto& c : certs) {
        if (res.lifts.size() >= P.count) break;
        ++res.lifts_tried;
        if (c.ok()) {
          res.lifts.push_back(std::move(c));
          continue;
        }
        for (const auto& [name, v] : c.generic)
          if (v != Verdict::True) ++res.rejected["generic:" + name];
      }
    }
  }
  return res;
}

}  // namespace bertini
