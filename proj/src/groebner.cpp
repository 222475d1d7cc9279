#include "gpif/groebner.hpp"

#include <algorithm>
#include <optional>
#include <tuple>

namespace gpif::groebner {

using arith::Coeff;
using poly::Monomial;
using poly::Term;

namespace {

// Index of the first basis element whose leading monomial divides m.
std::ptrdiff_t find_reducer(const Monomial& m, std::span<const Polynomial> basis) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!basis[i].is_zero() && basis[i].leading_monomial().divides(m)) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
  const auto& lf = f.leading_term();
  const auto& lg = g.leading_term();
  const Monomial m = poly::lcm(lf.mono, lg.mono);
  return f.scaled(lf.coeff.inverse(), m / lf.mono) - g.scaled(lg.coeff.inverse(), m / lg.mono);
}

struct Pair {
  unsigned degree;
  std::size_t i;
  std::size_t j;
};

}  // namespace

Polynomial reduce(const Polynomial& f, std::span<const Polynomial> basis) {
  for (const auto& g : basis) poly::require_same_ring(f, g);
  Polynomial p = f;
  std::vector<Term> remainder;
  while (!p.is_zero()) {
    const Term lt = p.leading_term();
    const auto k = find_reducer(lt.mono, basis);
    if (k < 0) {
      remainder.push_back(lt);
      p = p - Polynomial::term(p.ring(), lt.mono, lt.coeff);
      continue;
    }
    const auto& g = basis[static_cast<std::size_t>(k)];
    const auto& lg = g.leading_term();
    p = p - g.scaled(lt.coeff / lg.coeff, lt.mono / lg.mono);
  }
  return Polynomial(f.ring(), std::move(remainder));
}

Polynomial divide_exact(const Polynomial& g, const Polynomial& f) {
  poly::require_same_ring(g, f);
  if (f.is_zero()) throw DomainError("division by the zero polynomial");
  const auto& lf = f.leading_term();
  Polynomial p = g;
  std::vector<Term> quotient;
  while (!p.is_zero()) {
    const Term lt = p.leading_term();
    if (!lf.mono.divides(lt.mono)) throw DomainError(f.to_string() + " does not divide " + g.to_string());
    Term q{lt.mono / lf.mono, lt.coeff / lf.coeff};
    p = p - f.scaled(q.coeff, q.mono);
    quotient.push_back(std::move(q));
  }
  return Polynomial(g.ring(), std::move(quotient));
}

std::vector<Polynomial> buchberger(std::vector<Polynomial> gens) {
  std::erase_if(gens, [](const Polynomial& g) { return g.is_zero(); });
  if (gens.empty()) return {};
  const RingPtr ring = gens.front().ring();
  for (const auto& g : gens) poly::require_same_ring(gens.front(), g);

  std::vector<Polynomial> basis;
  for (const auto& g : gens) {
    if (g.is_constant()) return {Polynomial::constant(ring, ring->field().one())};
    basis.push_back(g.monic());
  }

  // normal strategy: smallest lcm degree first, oldest pair on ties
  auto later = [](const Pair& a, const Pair& b) { return std::tie(a.degree, a.j, a.i) > std::tie(b.degree, b.j, b.i); };
  std::vector<Pair> queue;
  auto add_pairs_for = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i) {
      const auto m = poly::lcm(basis[i].leading_monomial(), basis[j].leading_monomial());
      queue.push_back(Pair{m.degree(), i, j});
      std::push_heap(queue.begin(), queue.end(), later);
    }
  };
  for (std::size_t j = 1; j < basis.size(); ++j) add_pairs_for(j);

  while (!queue.empty()) {
    std::pop_heap(queue.begin(), queue.end(), later);
    const Pair pr = queue.back();
    queue.pop_back();
    const auto& f = basis[pr.i];
    const auto& g = basis[pr.j];
    if (poly::coprime(f.leading_monomial(), g.leading_monomial())) continue;
    Polynomial r = reduce(s_polynomial(f, g), basis);
    if (r.is_zero()) continue;
    if (r.is_constant()) return {Polynomial::constant(ring, ring->field().one())};
    basis.push_back(r.monic());
    add_pairs_for(basis.size() - 1);
  }

  // minimal basis: drop elements whose leading monomial is a multiple of another's
  std::vector<Polynomial> minimal;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      const auto& mi = basis[i].leading_monomial();
      const auto& mj = basis[j].leading_monomial();
      if (mj.divides(mi) && (!(mj == mi) || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(basis[i]);
  }

  // inter-reduce
  std::vector<Polynomial> reduced;
  reduced.reserve(minimal.size());
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial> others;
    for (std::size_t j = 0; j < minimal.size(); ++j) {
      if (j != i) others.push_back(minimal[j]);
    }
    const auto& lt = minimal[i].leading_term();
    Polynomial tail = minimal[i] - Polynomial::term(ring, lt.mono, lt.coeff);
    reduced.push_back((Polynomial::term(ring, lt.mono, lt.coeff) + reduce(tail, others)).monic());
  }
  const auto& order = ring->order();
  std::sort(reduced.begin(), reduced.end(), [&](const Polynomial& a, const Polynomial& b) {
    return order.compare(a.leading_monomial(), b.leading_monomial(), ring->nvars()) > 0;
  });
  return reduced;
}

// -------------------------------------------------------------------- Ideal

Ideal::Ideal(RingPtr ring, std::vector<Polynomial> gens) : ring_(std::move(ring)), cache_(std::make_shared<Cache>()) {
  for (auto& g : gens) {
    if (g.is_zero()) continue;
    gens_.push_back(g.ring() == ring_ ? std::move(g) : g.reordered(ring_));
  }
}

Ideal Ideal::unit(RingPtr ring) {
  auto one = Polynomial::constant(ring, ring->field().one());
  return Ideal(std::move(ring), {std::move(one)});
}

Ideal Ideal::zero(RingPtr ring) { return Ideal(std::move(ring), {}); }

const std::vector<Polynomial>& Ideal::groebner_basis() const {
  std::call_once(cache_->once, [this] { cache_->basis = buchberger(gens_); });
  return cache_->basis;
}

bool Ideal::contains(const Polynomial& f) const {
  const Polynomial g = f.ring() == ring_ ? f : f.reordered(ring_);
  return reduce(g, groebner_basis()).is_zero();
}

bool Ideal::contains(const Ideal& other) const {
  return std::all_of(other.gens_.begin(), other.gens_.end(), [&](const Polynomial& g) { return contains(g); });
}

bool Ideal::is_unit() const {
  const auto& gb = groebner_basis();
  return gb.size() == 1 && gb.front().is_constant();
}

Ideal Ideal::with_order(poly::MonomialOrder order) const {
  auto target = ring_->with_order(order);
  std::vector<Polynomial> moved;
  moved.reserve(gens_.size());
  for (const auto& g : gens_) moved.push_back(g.reordered(target));
  return Ideal(std::move(target), std::move(moved));
}

std::string Ideal::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (i) out += ", ";
    out += gens_[i].to_string();
  }
  if (gens_.empty()) out += "0";
  return out + ")";
}

// ------------------------------------------------------------ ideal calculus

namespace {

void require_same_ambient(const Ideal& a, const Ideal& b) {
  if (!a.ring()->same_ambient(*b.ring())) {
    throw DomainError("ideals live in different rings: " + a.ring()->to_string() + " vs " + b.ring()->to_string());
  }
}

}  // namespace

bool ideal_membership(const Polynomial& f, const Ideal& ideal) { return ideal.contains(f); }

bool ideal_eq(const Ideal& a, const Ideal& b) {
  require_same_ambient(a, b);
  const auto& ga = a.groebner_basis();
  const Ideal b_same = b.ring()->order() == a.ring()->order() ? b : b.with_order(a.ring()->order());
  const auto& gb = b_same.groebner_basis();
  if (ga.size() != gb.size()) return false;
  for (std::size_t i = 0; i < ga.size(); ++i) {
    if (ga[i].terms() != gb[i].terms()) return false;
  }
  return true;
}

Ideal ideal_sum(const Ideal& a, const Ideal& b) {
  require_same_ambient(a, b);
  auto gens = a.gens();
  gens.insert(gens.end(), b.gens().begin(), b.gens().end());
  return Ideal(a.ring(), std::move(gens));
}

Ideal ideal_product(const Ideal& a, const Ideal& b) {
  require_same_ambient(a, b);
  std::vector<Polynomial> gens;
  gens.reserve(a.gens().size() * b.gens().size());
  for (const auto& f : a.gens()) {
    for (const auto& g : b.gens()) gens.push_back(f * g.reordered(a.ring()));
  }
  return Ideal(a.ring(), std::move(gens));
}

Ideal ideal_power(const Ideal& a, unsigned r) {
  if (r == 0) return Ideal::unit(a.ring());
  Ideal out = a;
  for (unsigned k = 1; k < r; ++k) {
    // multiply the reduced basis to keep generator lists short
    out = ideal_product(Ideal(a.ring(), out.groebner_basis()), a);
  }
  return out;
}

Ideal ideal_intersection(const Ideal& a, const Ideal& b) {
  require_same_ambient(a, b);
  const RingPtr& ring = a.ring();
  const RingPtr ext = ring->with_eliminated_var("__t");
  const Polynomial t = Polynomial::variable(ext, 0);
  const Polynomial one_minus_t = Polynomial::constant(ext, ext->field().one()) - t;
  std::vector<Polynomial> gens;
  for (const auto& f : a.gens()) gens.push_back(t * f.shifted_into(ext, 1));
  for (const auto& g : b.gens()) gens.push_back(one_minus_t * g.reordered(ring).shifted_into(ext, 1));
  std::vector<Polynomial> kept;
  for (const auto& g : buchberger(std::move(gens))) {
    if (!g.uses_var(0)) kept.push_back(g.unshifted_into(ring, 1));
  }
  return Ideal(ring, std::move(kept));
}

Ideal ideal_colon(const Ideal& a, const Ideal& b) {
  require_same_ambient(a, b);
  if (b.is_zero()) throw DomainError("colon by the zero ideal");
  const RingPtr& ring = a.ring();
  std::optional<Ideal> out;
  for (const auto& f0 : b.gens()) {
    const Polynomial f = f0.reordered(ring);
    Ideal part = a;
    if (!f.is_constant()) {
      const Ideal cut = ideal_intersection(a, Ideal(ring, {f}));
      std::vector<Polynomial> quotients;
      for (const auto& g : cut.gens()) quotients.push_back(divide_exact(g, f));
      part = Ideal(ring, std::move(quotients));
    }
    out = out ? ideal_intersection(*out, part) : part;
  }
  return Ideal(ring, out->groebner_basis());
}

}  // namespace gpif::groebner
