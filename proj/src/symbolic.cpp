#include "gpif/symbolic.hpp"

namespace gpif::symbolic {

namespace {

void require_same_ctx(const QuotIdeal& a, const QuotIdeal& b) {
  if (a.ctx() != b.ctx()) throw DomainError("quotient ideals belong to different rings");
}

std::vector<Polynomial> with_base(const std::vector<Polynomial>& lift, const Ideal& base) {
  auto gens = lift;
  gens.insert(gens.end(), base.gens().begin(), base.gens().end());
  return gens;
}

}  // namespace

std::shared_ptr<const QuotientCtx> QuotientCtx::make(Ideal base) {
  if (base.is_unit()) throw DomainError("base ideal " + base.to_string() + " is the unit ideal");
  return std::shared_ptr<const QuotientCtx>(new QuotientCtx(std::move(base)));
}

QuotIdeal::QuotIdeal(CtxPtr ctx, std::vector<Polynomial> lift)
    : ctx_(std::move(ctx)), lift_(std::move(lift)), full_(ctx_->ring(), with_base(lift_, ctx_->base())) {
  std::erase_if(lift_, [](const Polynomial& f) { return f.is_zero(); });
}

QuotIdeal QuotIdeal::unit(CtxPtr ctx) {
  auto one = Polynomial::constant(ctx->ring(), ctx->ring()->field().one());
  return QuotIdeal(std::move(ctx), {std::move(one)});
}

QuotIdeal QuotIdeal::variables(CtxPtr ctx) {
  std::vector<Polynomial> vars;
  for (std::size_t i = 0; i < ctx->ring()->nvars(); ++i) vars.push_back(Polynomial::variable(ctx->ring(), i));
  return QuotIdeal(std::move(ctx), std::move(vars));
}

bool QuotIdeal::contains(const QuotIdeal& other) const {
  require_same_ctx(*this, other);
  return full_.contains(other.full_);
}

std::string QuotIdeal::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < lift_.size(); ++i) {
    if (i) out += ", ";
    out += lift_[i].to_string();
  }
  if (lift_.empty()) out += "0";
  return out + ")";
}

bool quot_ideal_eq(const QuotIdeal& a, const QuotIdeal& b) {
  require_same_ctx(a, b);
  return groebner::ideal_eq(a.full(), b.full());
}

QuotIdeal quot_sum(const QuotIdeal& a, const QuotIdeal& b) {
  require_same_ctx(a, b);
  auto gens = a.lift();
  gens.insert(gens.end(), b.lift().begin(), b.lift().end());
  return QuotIdeal(a.ctx(), std::move(gens));
}

QuotIdeal quot_product(const QuotIdeal& a, const QuotIdeal& b) {
  require_same_ctx(a, b);
  return QuotIdeal(a.ctx(), groebner::ideal_product(Ideal(a.ctx()->ring(), a.lift()),
                                                     Ideal(b.ctx()->ring(), b.lift()))
                                .gens());
}

QuotIdeal quot_power(const QuotIdeal& a, unsigned r) {
  if (r == 0) return QuotIdeal::unit(a.ctx());
  QuotIdeal out = a;
  for (unsigned k = 1; k < r; ++k) {
    // the reduced basis of (a^k + I0) represents a^k and keeps products small
    const QuotIdeal compact(a.ctx(), out.full().groebner_basis());
    out = quot_product(compact, a);
  }
  return out;
}

bool power_stabilizes(const QuotIdeal& p, unsigned r) {
  if (r < 1) throw DomainError("power_stabilizes needs r >= 1");
  return quot_ideal_eq(quot_power(p, r), quot_power(p, r - 1));
}

std::optional<QuotIdeal> obstruction_certificate(const QuotIdeal& p, unsigned r,
                                                 const std::vector<QuotIdeal>& candidates) {
  if (r < 2) throw DomainError("obstruction certificates need r >= 2");
  const QuotIdeal pr = quot_power(p, r);
  const QuotIdeal pr1 = quot_power(p, r - 1);
  for (const auto& a : candidates) {
    require_same_ctx(p, a);
    const bool strictly_larger = a.contains(p) && !p.contains(a);
    if (!strictly_larger) continue;
    if (pr.contains(quot_product(pr1, a))) return a;
  }
  return std::nullopt;
}

}  // namespace gpif::symbolic
