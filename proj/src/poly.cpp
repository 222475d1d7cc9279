#include "gpif/poly.hpp"

#include <algorithm>

namespace gpif::poly {

using arith::Coeff;

// ---------------------------------------------------------------- Monomial

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (auto e : exp) d += e;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (exp[i] > other.exp[i]) return false;
  }
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = static_cast<std::uint16_t>(a.exp[i] + b.exp[i]);
  return m;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = static_cast<std::uint16_t>(a.exp[i] - b.exp[i]);
  return m;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = std::max(a.exp[i], b.exp[i]);
  return m;
}

bool coprime(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    if (a.exp[i] != 0 && b.exp[i] != 0) return false;
  }
  return true;
}

// ----------------------------------------------------------- MonomialOrder

namespace {

int grevlex_range(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi) {
  unsigned da = 0, db = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    da += a.exp[i];
    db += b.exp[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = hi; i-- > lo;) {
    if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? 1 : -1;
  }
  return 0;
}

}  // namespace

int MonomialOrder::compare(const Monomial& a, const Monomial& b, std::size_t nvars) const {
  switch (kind_) {
    case Kind::Grevlex:
      return grevlex_range(a, b, 0, nvars);
    case Kind::Lex:
      for (std::size_t i = 0; i < nvars; ++i) {
        if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? -1 : 1;
      }
      return 0;
    case Kind::Elimination: {
      const std::size_t k = std::min(block_, nvars);
      if (int c = grevlex_range(a, b, 0, k); c != 0) return c;
      return grevlex_range(a, b, k, nvars);
    }
  }
  return 0;
}

std::string MonomialOrder::to_string() const {
  switch (kind_) {
    case Kind::Grevlex:
      return "grevlex";
    case Kind::Lex:
      return "lex";
    case Kind::Elimination:
      return "elimination(" + std::to_string(block_) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------- PolyRing

std::shared_ptr<const PolyRing> PolyRing::make(std::vector<std::string> vars, arith::Field field,
                                               MonomialOrder order) {
  if (vars.size() > kMaxVars) {
    throw LimitError("at most " + std::to_string(kMaxVars) + " variables supported");
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      if (vars[i] == vars[j]) throw DomainError("duplicate variable '" + vars[i] + "'");
    }
  }
  return std::shared_ptr<const PolyRing>(new PolyRing(std::move(vars), field, order));
}

std::shared_ptr<const PolyRing> PolyRing::with_order(MonomialOrder order) const {
  return make(vars_, field_, order);
}

std::shared_ptr<const PolyRing> PolyRing::with_eliminated_var(const std::string& name) const {
  std::vector<std::string> vars{name};
  vars.insert(vars.end(), vars_.begin(), vars_.end());
  return make(std::move(vars), field_, MonomialOrder::elimination(1));
}

std::string PolyRing::to_string() const {
  std::string out = field_.to_string() + "[";
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (i) out += ",";
    out += vars_[i];
  }
  return out + "]";
}

// -------------------------------------------------------------- Polynomial

void require_same_ring(const Polynomial& a, const Polynomial& b) {
  if (a.ring() != b.ring() && !(*a.ring() == *b.ring())) {
    throw DomainError("polynomials live in different rings: " + a.ring()->to_string() + " vs " +
                      b.ring()->to_string());
  }
}

Polynomial::Polynomial(RingPtr ring, std::vector<Term> terms) : ring_(std::move(ring)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!ring_->field().contains(t.coeff)) throw ArithmeticError("coefficient outside " + ring_->field().to_string());
  }
  normalize();
}

Polynomial Polynomial::constant(RingPtr ring, const Coeff& c) {
  return Polynomial(std::move(ring), {Term{Monomial{}, c}});
}

Polynomial Polynomial::variable(RingPtr ring, std::size_t index) {
  if (index >= ring->nvars()) throw DomainError("variable index out of range");
  Monomial m;
  m.exp[index] = 1;
  auto one = ring->field().one();
  return Polynomial(std::move(ring), {Term{m, one}});
}

Polynomial Polynomial::term(RingPtr ring, const Monomial& m, const Coeff& c) {
  return Polynomial(std::move(ring), {Term{m, c}});
}

void Polynomial::normalize() {
  const auto& order = ring_->order();
  const std::size_t n = ring_->nvars();
  std::sort(terms_.begin(), terms_.end(),
            [&](const Term& a, const Term& b) { return order.compare(a.mono, b.mono, n) > 0; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().mono == t.mono) {
      merged.back().coeff = merged.back().coeff + t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff.is_zero(); });
  terms_ = std::move(merged);
}

const Term& Polynomial::leading_term() const {
  if (terms_.empty()) throw DomainError("leading term of the zero polynomial");
  return terms_.front();
}

unsigned Polynomial::total_degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

bool Polynomial::uses_var(std::size_t index) const {
  return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono.exp[index] != 0; });
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  const Coeff inv = leading_coeff().inverse();
  Polynomial out(ring_);
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.coeff = t.coeff * inv;
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(ring_);
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

Polynomial Polynomial::scaled(const Coeff& c, const Monomial& m) const {
  Polynomial out(ring_);
  if (c.is_zero()) return out;
  out.terms_.reserve(terms_.size());
  // multiplication by a monomial preserves the term order
  for (const auto& t : terms_) out.terms_.push_back(Term{t.mono * m, t.coeff * c});
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  require_same_ring(a, b);
  const auto& order = a.ring_->order();
  const std::size_t n = a.ring_->nvars();
  Polynomial out(a.ring_);
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() && j < b.terms_.size()) {
    const int c = order.compare(a.terms_[i].mono, b.terms_[j].mono, n);
    if (c > 0) {
      out.terms_.push_back(a.terms_[i++]);
    } else if (c < 0) {
      out.terms_.push_back(b.terms_[j++]);
    } else {
      Coeff s = a.terms_[i].coeff + b.terms_[j].coeff;
      if (!s.is_zero()) out.terms_.push_back(Term{a.terms_[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  out.terms_.insert(out.terms_.end(), a.terms_.begin() + static_cast<std::ptrdiff_t>(i), a.terms_.end());
  out.terms_.insert(out.terms_.end(), b.terms_.begin() + static_cast<std::ptrdiff_t>(j), b.terms_.end());
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_same_ring(a, b);
  std::vector<Term> products;
  products.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) products.push_back(Term{s.mono * t.mono, s.coeff * t.coeff});
  }
  return Polynomial(a.ring_, std::move(products));
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial out = constant(ring_, ring_->field().one());
  for (unsigned i = 0; i < e; ++i) out = out * *this;
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return a.ring_->same_ambient(*b.ring_) && a.reordered(b.ring_).terms_ == b.terms_;
}

Polynomial Polynomial::reordered(const RingPtr& target) const {
  if (!ring_->same_ambient(*target)) throw DomainError("reordering needs the same variables and field");
  if (ring_->order() == target->order()) {
    Polynomial out(target);
    out.terms_ = terms_;
    return out;
  }
  return Polynomial(target, terms_);
}

Polynomial Polynomial::shifted_into(const RingPtr& target, std::size_t shift) const {
  if (target->nvars() != ring_->nvars() + shift) throw DomainError("variable count mismatch in embedding");
  std::vector<Term> moved;
  moved.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (std::size_t i = 0; i < ring_->nvars(); ++i) m.exp[i + shift] = t.mono.exp[i];
    moved.push_back(Term{m, t.coeff});
  }
  return Polynomial(target, std::move(moved));
}

Polynomial Polynomial::unshifted_into(const RingPtr& target, std::size_t shift) const {
  if (ring_->nvars() != target->nvars() + shift) throw DomainError("variable count mismatch in projection");
  std::vector<Term> moved;
  moved.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (std::size_t i = 0; i < shift; ++i) {
      if (t.mono.exp[i] != 0) throw DomainError("projection would drop an occurring variable");
    }
    for (std::size_t i = 0; i < target->nvars(); ++i) m.exp[i] = t.mono.exp[i + shift];
    moved.push_back(Term{m, t.coeff});
  }
  return Polynomial(target, std::move(moved));
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    std::string c = t.coeff.to_string();
    bool negative = !c.empty() && c.front() == '-';
    if (negative) c.erase(0, 1);
    if (k == 0) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    std::string mono;
    for (std::size_t i = 0; i < ring_->nvars(); ++i) {
      const auto e = t.mono.exp[i];
      if (e == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_->vars()[i];
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      out += c;
    } else if (c == "1") {
      out += mono;
    } else {
      out += c + "*" + mono;
    }
  }
  return out;
}

Term leading_term(const Polynomial& f, const MonomialOrder& order) {
  if (f.is_zero()) throw DomainError("leading term of the zero polynomial");
  const std::size_t n = f.ring()->nvars();
  const Term* best = &f.terms().front();
  for (const auto& t : f.terms()) {
    if (order.compare(t.mono, best->mono, n) > 0) best = &t;
  }
  return *best;
}

}  // namespace gpif::poly
