#include "gpif/module.hpp"

#include <algorithm>
#include <array>

namespace gpif::finmod {

namespace {

constexpr std::size_t kAddTableLimit = 512;
constexpr std::size_t kActTableLimit = std::size_t{1} << 20;

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    out *= base;
    if (out > kMaxModuleSize) {
      throw LimitError("|R|^g exceeds " + std::to_string(kMaxModuleSize));
    }
  }
  return out;
}

// |R| >= 2 and |R|^g <= kMaxModuleSize bound the rank of any component.
constexpr std::size_t kMaxRank = 12;
using Digits = std::array<Elem, kMaxRank>;

struct CodeBook {
  const finring::FiniteRing& ring;
  std::size_t rank;

  std::size_t encode(std::span<const Elem> digits) const {
    std::size_t code = 0;
    for (std::size_t k = 0; k < rank; ++k) code = code * ring.size() + digits[k];
    return code;
  }
  void decode(std::size_t code, std::span<Elem> digits) const {
    for (std::size_t k = rank; k-- > 0;) {
      digits[k] = static_cast<Elem>(code % ring.size());
      code /= ring.size();
    }
  }
  std::size_t add(std::size_t a, std::size_t b) const {
    Digits da{}, db{};
    decode(a, da);
    decode(b, db);
    for (std::size_t k = 0; k < rank; ++k) da[k] = ring.add(da[k], db[k]);
    return encode(da);
  }
  std::size_t act(Elem r, std::size_t a) const {
    Digits da{};
    decode(a, da);
    for (std::size_t k = 0; k < rank; ++k) da[k] = ring.mul(r, da[k]);
    return encode(da);
  }
};

}  // namespace

ModulePtr FiniteModule::present(const RingPtr& ring, std::size_t rank, std::vector<std::vector<Elem>> relations) {
  const std::size_t total = checked_power(ring->size(), rank);
  for (const auto& row : relations) {
    if (row.size() != rank) throw DomainError("relation row length differs from the rank");
    for (Elem e : row) {
      if (e >= ring->size()) throw DomainError("relation entry is not a ring element");
    }
  }
  const CodeBook book{*ring, rank};

  // relation submodule S as a set of codes
  std::vector<char> in_s(total, 0);
  std::vector<std::size_t> seeds;
  std::vector<char> is_seed(total, 0);
  for (const auto& row : relations) {
    const std::size_t code = book.encode(row);
    for (std::size_t r = 0; r < ring->size(); ++r) {
      const std::size_t y = book.act(static_cast<Elem>(r), code);
      if (!is_seed[y]) {
        is_seed[y] = 1;
        seeds.push_back(y);
      }
    }
  }
  std::vector<std::size_t> members{0};
  in_s[0] = 1;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t s : seeds) {
      const std::size_t y = book.add(members[i], s);
      if (!in_s[y]) {
        in_s[y] = 1;
        members.push_back(y);
      }
    }
  }

  auto pres = std::make_shared<Presentation>();
  pres->rank = rank;
  pres->relations = std::move(relations);
  constexpr auto kUnassigned = static_cast<std::uint32_t>(-1);
  pres->class_of_code.assign(total, kUnassigned);
  Digits digits{};
  for (std::size_t code = 0; code < total; ++code) {
    if (pres->class_of_code[code] != kUnassigned) continue;
    const auto id = static_cast<std::uint32_t>(pres->size++);
    book.decode(code, digits);
    pres->reps.insert(pres->reps.end(), digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(rank));
    for (std::size_t s : members) pres->class_of_code[book.add(code, s)] = id;
  }
  return ModulePtr(new FiniteModule(ring, {std::move(pres)}));
}

ModulePtr FiniteModule::direct_sum(std::span<const ModulePtr> parts) {
  if (parts.empty()) throw DomainError("direct sum of no modules");
  std::vector<std::shared_ptr<const Presentation>> comps;
  std::size_t size = 1;
  for (const auto& p : parts) {
    if (!finring::same_ring(p->ring(), parts.front()->ring())) throw DomainError("direct sum over different rings");
    size *= p->size();
    if (size > kMaxModuleSize) throw LimitError("direct sum exceeds " + std::to_string(kMaxModuleSize) + " elements");
    comps.insert(comps.end(), p->components().begin(), p->components().end());
  }
  return ModulePtr(new FiniteModule(parts.front()->ring(), std::move(comps)));
}

FiniteModule::FiniteModule(RingPtr ring, std::vector<std::shared_ptr<const Presentation>> comps)
    : ring_(std::move(ring)), comps_(std::move(comps)) {
  for (const auto& c : comps_) {
    size_ *= c->size;
    rank_ += c->rank;
  }
  if (size_ > kMaxModuleSize) throw LimitError("module exceeds " + std::to_string(kMaxModuleSize) + " elements");
  neg_table_.resize(size_);
  if (ring_->size() * size_ <= kActTableLimit) {
    act_table_.resize(ring_->size() * size_);
    for (std::size_t r = 0; r < ring_->size(); ++r) {
      for (std::size_t a = 0; a < size_; ++a) act_table_[r * size_ + a] = act_slow(static_cast<Elem>(r), static_cast<MElem>(a));
    }
  }
  const Elem minus_one = ring_->neg(ring_->one());
  for (std::size_t a = 0; a < size_; ++a) neg_table_[a] = act(minus_one, static_cast<MElem>(a));
  if (size_ <= kAddTableLimit) {
    add_table_.resize(size_ * size_);
    for (std::size_t a = 0; a < size_; ++a) {
      for (std::size_t b = 0; b < size_; ++b) add_table_[a * size_ + b] = add_slow(static_cast<MElem>(a), static_cast<MElem>(b));
    }
  }
}

MElem FiniteModule::add(MElem a, MElem b) const {
  if (!add_table_.empty()) return add_table_[a * size_ + b];
  return add_slow(a, b);
}

MElem FiniteModule::neg(MElem a) const { return neg_table_[a]; }

MElem FiniteModule::act(Elem r, MElem a) const {
  if (!act_table_.empty()) return act_table_[r * size_ + a];
  return act_slow(r, a);
}

MElem FiniteModule::add_slow(MElem a, MElem b) const {
  std::size_t out = 0;
  std::size_t stride = size_;
  for (const auto& c : comps_) {
    stride /= c->size;
    const std::size_t ia = (a / stride) % c->size;
    const std::size_t ib = (b / stride) % c->size;
    const CodeBook book{*ring_, c->rank};
    Digits sum{};
    for (std::size_t k = 0; k < c->rank; ++k) sum[k] = ring_->add(c->reps[ia * c->rank + k], c->reps[ib * c->rank + k]);
    out += c->class_of_code[book.encode(sum)] * stride;
  }
  return static_cast<MElem>(out);
}

MElem FiniteModule::act_slow(Elem r, MElem a) const {
  std::size_t out = 0;
  std::size_t stride = size_;
  for (const auto& c : comps_) {
    stride /= c->size;
    const std::size_t ia = (a / stride) % c->size;
    const CodeBook book{*ring_, c->rank};
    Digits prod{};
    for (std::size_t k = 0; k < c->rank; ++k) prod[k] = ring_->mul(r, c->reps[ia * c->rank + k]);
    out += c->class_of_code[book.encode(prod)] * stride;
  }
  return static_cast<MElem>(out);
}

MElem FiniteModule::from_tuple(std::span<const Elem> tuple) const {
  if (tuple.size() != rank_) throw DomainError("element tuple length differs from the module rank");
  std::size_t out = 0;
  std::size_t offset = 0;
  for (const auto& c : comps_) {
    for (std::size_t k = 0; k < c->rank; ++k) {
      if (tuple[offset + k] >= ring_->size()) throw DomainError("tuple entry is not a ring element");
    }
    const CodeBook book{*ring_, c->rank};
    out = out * c->size + c->class_of_code[book.encode(tuple.subspan(offset, c->rank))];
    offset += c->rank;
  }
  return static_cast<MElem>(out);
}

std::vector<Elem> FiniteModule::to_tuple(MElem a) const {
  std::vector<Elem> out;
  out.reserve(rank_);
  std::size_t stride = size_;
  for (const auto& c : comps_) {
    stride /= c->size;
    const std::size_t ia = (a / stride) % c->size;
    out.insert(out.end(), c->reps.begin() + static_cast<std::ptrdiff_t>(ia * c->rank),
               c->reps.begin() + static_cast<std::ptrdiff_t>((ia + 1) * c->rank));
  }
  return out;
}

std::string FiniteModule::element_to_string(MElem a) const {
  const auto t = to_tuple(a);
  std::string out = "[";
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) out += ",";
    out += ring_->element_to_string(t[k]);
  }
  return out + "]";
}

Bits FiniteModule::all_set() const {
  Bits b(size_);
  b.set();
  return b;
}

bool same_module(const ModulePtr& a, const ModulePtr& b) {
  if (a == b) return true;
  if (!finring::same_ring(a->ring(), b->ring()) || a->components().size() != b->components().size()) return false;
  for (std::size_t i = 0; i < a->components().size(); ++i) {
    const auto& x = *a->components()[i];
    const auto& y = *b->components()[i];
    if (x.rank != y.rank || x.class_of_code != y.class_of_code) return false;
  }
  return true;
}

// ---------------------------------------------------------------- Submodule

Submodule::Submodule(ModulePtr module, Bits bits) : module_(std::move(module)), bits_(std::move(bits)) {
  if (bits_.size() != module_->size()) throw DomainError("submodule bitset size does not match the module");
}

Submodule Submodule::whole(const ModulePtr& m) { return Submodule(m, m->all_set()); }

Submodule Submodule::zero(const ModulePtr& m) {
  Bits b = m->empty_set();
  b.set(0);
  return Submodule(m, std::move(b));
}

std::vector<MElem> Submodule::elements() const {
  std::vector<MElem> out;
  out.reserve(size());
  for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out.push_back(static_cast<MElem>(i));
  return out;
}

std::vector<MElem> Submodule::generators() const {
  std::vector<MElem> gens;
  Submodule span = zero(module_);
  for (MElem x : elements()) {
    if (span.contains(x)) continue;
    gens.push_back(x);
    span = submodule_closure(module_, gens);
    if (span.bits_ == bits_) break;
  }
  return gens;
}

std::string Submodule::to_string() const {
  std::string out = "{";
  bool first = true;
  const bool list_all = size() <= 16;
  for (MElem x : list_all ? elements() : generators()) {
    if (!first) out += ",";
    out += module_->element_to_string(x);
    first = false;
  }
  out += "}";
  return list_all ? out : "span " + out;
}

Submodule submodule_closure(const ModulePtr& m, std::span<const MElem> gens) {
  const auto& ring = *m->ring();
  std::vector<MElem> seeds;
  Bits seen = m->empty_set();
  for (MElem g : gens) {
    if (g >= m->size()) throw DomainError("generator is not a module element");
    for (std::size_t r = 0; r < ring.size(); ++r) {
      const MElem y = m->act(static_cast<Elem>(r), g);
      if (!seen.test(y)) {
        seen.set(y);
        seeds.push_back(y);
      }
    }
  }
  Bits out = m->empty_set();
  out.set(0);
  std::vector<MElem> frontier{0};
  while (!frontier.empty()) {
    const MElem x = frontier.back();
    frontier.pop_back();
    for (MElem s : seeds) {
      const MElem y = m->add(x, s);
      if (!out.test(y)) {
        out.set(y);
        frontier.push_back(y);
      }
    }
  }
  return Submodule(m, std::move(out));
}

}  // namespace gpif::finmod
