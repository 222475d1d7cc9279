#include "gpif/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <variant>

#include <json.hpp>

#include "gpif/finmod.hpp"
#include "gpif/props.hpp"
#include "gpif/symbolic.hpp"

namespace gpif::dsl {

bool operator==(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.text == b.text && a.exponent == b.exponent && a.kids == b.kids;
}

bool operator==(const Statement& a, const Statement& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Statement::Kind::Ring: return a.ring == b.ring;
    case Statement::Kind::Ideal: return a.ideal == b.ideal;
    case Statement::Kind::Module: return a.module == b.module;
    case Statement::Kind::Submodule: return a.submodule == b.submodule;
    case Statement::Kind::Query: return a.query == b.query;
  }
  return false;
}

namespace {

using Kind = Expr::Kind;

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// ------------------------------------------------------------------- cursor

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  std::size_t line() const { return line_; }
  std::size_t column() {
    ws();
    return pos_ + 1;
  }

  bool at_end() {
    ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  char peek() {
    ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool peek_is(std::string_view lit) {
    ws();
    return s_.substr(pos_).starts_with(lit);
  }
  bool accept(std::string_view lit) {
    if (!peek_is(lit)) return false;
    pos_ += lit.size();
    return true;
  }
  void expect(std::string_view lit) {
    if (!accept(lit)) fail("expected '" + std::string(lit) + "'");
  }

  /// Keyword match on a whole (possibly dashed) word.
  bool accept_word(std::string_view w) {
    ws();
    const std::size_t save = pos_;
    if (dashed_raw() == w) return true;
    pos_ = save;
    return false;
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected '" + std::string(w) + "'");
  }

  std::string ident(std::string_view what) {
    ws();
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected " + std::string(what));
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }
  std::string dashed(std::string_view what) {
    ws();
    std::string w = dashed_raw();
    if (w.empty()) fail("expected " + std::string(what));
    return w;
  }
  std::string digits(std::string_view what) {
    ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected " + std::string(what));
    return std::string(s_.substr(start, pos_ - start));
  }
  std::uint64_t number(std::string_view what, std::uint64_t max) {
    const std::size_t col = column();
    const std::string d = digits(what);
    if (d.size() > 18 || std::stoull(d) > max) fail_at(std::string(what) + " out of range", col);
    return std::stoull(d);
  }

  [[noreturn]] void fail(const std::string& msg) { fail_at(msg, column()); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t col) { throw ParseError(msg, line_, col); }

 private:
  void ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  // [A-Za-z_][A-Za-z0-9_]* ( '-' [A-Za-z0-9_]+ )*
  std::string dashed_raw() {
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) return {};
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    while (pos_ + 1 < s_.size() && s_[pos_] == '-' && ident_char(s_[pos_ + 1])) {
      ++pos_;
      while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

// -------------------------------------------------------------- expressions

Expr node(Kind k, std::size_t line, std::size_t col) {
  Expr e;
  e.kind = k;
  e.line = line;
  e.column = col;
  return e;
}

Expr binary(Kind k, Expr l, Expr r) {
  Expr e = node(k, l.line, l.column);
  e.kids.push_back(std::move(l));
  e.kids.push_back(std::move(r));
  return e;
}

Expr parse_expr(Cursor& c);

std::vector<Expr> parse_items(Cursor& c, char close) {
  std::vector<Expr> items;
  if (c.accept(std::string(1, close))) return items;
  do {
    items.push_back(parse_expr(c));
  } while (c.accept(","));
  c.expect(std::string(1, close));
  return items;
}

Expr parse_primary(Cursor& c) {
  const std::size_t col = c.column();
  const char ch = c.peek();
  if (std::isdigit(static_cast<unsigned char>(ch))) {
    Expr e = node(Kind::Num, c.line(), col);
    e.text = mpz_class(c.digits("number")).get_str();
    return e;
  }
  if (ident_start(ch)) {
    Expr e = node(Kind::Name, c.line(), col);
    e.text = c.ident("name");
    return e;
  }
  if (c.accept("(")) {
    Expr e = node(Kind::Group, c.line(), col);
    e.kids = parse_items(c, ')');
    if (e.kids.empty()) c.fail_at("empty parentheses", col);
    return e;
  }
  if (c.accept("<")) {
    Expr e = node(Kind::Tuple, c.line(), col);
    e.kids = parse_items(c, '>');
    if (e.kids.empty()) c.fail_at("empty tuple", col);
    return e;
  }
  c.fail("expected an expression");
}

Expr parse_power(Cursor& c) {
  Expr base = parse_primary(c);
  if (!c.accept("^")) return base;
  Expr e = node(Kind::Pow, base.line, base.column);
  e.exponent = static_cast<unsigned>(c.number("exponent", 1000));
  e.kids.push_back(std::move(base));
  return e;
}

Expr parse_unary(Cursor& c) {
  const std::size_t col = c.column();
  if (c.accept("-")) {
    Expr e = node(Kind::Neg, c.line(), col);
    e.kids.push_back(parse_unary(c));
    return e;
  }
  return parse_power(c);
}

Expr parse_term(Cursor& c) {
  Expr e = parse_unary(c);
  while (true) {
    if (c.accept("*")) {
      e = binary(Kind::Mul, std::move(e), parse_unary(c));
    } else if (c.accept("/")) {
      e = binary(Kind::Div, std::move(e), parse_unary(c));
    } else {
      return e;
    }
  }
}

Expr parse_expr(Cursor& c) {
  Expr e = parse_term(c);
  while (true) {
    if (c.peek_is("==")) return e;
    if (c.accept("+")) {
      e = binary(Kind::Add, std::move(e), parse_term(c));
    } else if (c.accept("-")) {
      e = binary(Kind::Sub, std::move(e), parse_term(c));
    } else {
      return e;
    }
  }
}

std::vector<Expr> parse_list(Cursor& c) {
  std::vector<Expr> out;
  do {
    out.push_back(parse_expr(c));
  } while (c.accept(","));
  return out;
}

int precedence(Kind k) {
  switch (k) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
  }
}

std::string render_at(const Expr& e, int need);

std::string join(const std::vector<Expr>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += render_at(items[i], 0);
  }
  return out;
}

std::string render_at(const Expr& e, int need) {
  std::string out;
  switch (e.kind) {
    case Kind::Num:
    case Kind::Name: out = e.text; break;
    case Kind::Group: return "(" + join(e.kids, ", ") + ")";
    case Kind::Tuple: return "<" + join(e.kids, ",") + ">";
    case Kind::Add: out = render_at(e.kids[0], 1) + " + " + render_at(e.kids[1], 2); break;
    case Kind::Sub: out = render_at(e.kids[0], 1) + " - " + render_at(e.kids[1], 2); break;
    case Kind::Mul: out = render_at(e.kids[0], 2) + "*" + render_at(e.kids[1], 3); break;
    case Kind::Div: out = render_at(e.kids[0], 2) + "/" + render_at(e.kids[1], 3); break;
    case Kind::Neg: out = "-" + render_at(e.kids[0], 3); break;
    case Kind::Pow: out = render_at(e.kids[0], 5) + "^" + std::to_string(e.exponent); break;
  }
  return precedence(e.kind) < need ? "(" + out + ")" : out;
}

// --------------------------------------------------------------- statements

struct Symbols {
  enum class Sym { Ideal, Module, Submodule };
  struct Entry {
    Sym kind;
    std::size_t rank = 0;   // modules
    bool free = false;      // modules
    std::string module;     // submodules
    static Entry of(Sym k) {
      Entry e;
      e.kind = k;
      return e;
    }
  };
  std::optional<RingDecl> ring;
  std::map<std::string, Entry> names;

  bool poly() const { return ring && ring->kind == RingDecl::Kind::Poly; }
  bool is_var(const std::string& n) const {
    return poly() && std::find(ring->vars.begin(), ring->vars.end(), n) != ring->vars.end();
  }
  const Entry* find(const std::string& n) const {
    auto it = names.find(n);
    return it == names.end() ? nullptr : &it->second;
  }
};

void need_ring(Cursor& c, const Symbols& sy, std::size_t col) {
  if (!sy.ring) c.fail_at("no ring declared", col);
}

void need_finite(Cursor& c, const Symbols& sy, std::size_t col, const std::string& what) {
  need_ring(c, sy, col);
  if (sy.poly()) c.fail_at("engine mismatch: " + what + " needs a finite ring, not a polynomial quotient", col);
}

void declare(Cursor& c, Symbols& sy, const std::string& name, std::size_t col, Symbols::Entry e) {
  if (sy.find(name) || sy.is_var(name)) c.fail_at("name '" + name + "' is already declared", col);
  sy.names.emplace(name, std::move(e));
}

// Names in an expression must be ideals or (poly rings) variables.
void resolve(Cursor& c, const Symbols& sy, const Expr& e, bool allow_ideals) {
  if (e.kind == Kind::Name) {
    const auto* s = sy.find(e.text);
    if (s && s->kind == Symbols::Sym::Ideal && allow_ideals) return;
    if (!s && sy.is_var(e.text)) return;
    if (s) c.fail_at("'" + e.text + "' cannot be used here", e.column);
    c.fail_at("undeclared name '" + e.text + "'", e.column);
  }
  if (e.kind == Kind::Tuple && sy.poly()) c.fail_at("tuple elements need a finite product ring", e.column);
  for (const auto& k : e.kids) resolve(c, sy, k, allow_ideals);
}

std::vector<std::vector<Expr>> parse_rows(Cursor& c, const Symbols& sy, std::size_t rank) {
  std::vector<std::vector<Expr>> rows;
  c.expect("[");
  if (c.accept("]")) return rows;
  do {
    const std::size_t col = c.column();
    c.expect("[");
    auto row = parse_items(c, ']');
    if (row.size() != rank) {
      c.fail_at("row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(rank), col);
    }
    for (const auto& e : row) resolve(c, sy, e, false);
    rows.push_back(std::move(row));
  } while (c.accept(","));
  c.expect("]");
  return rows;
}

finring::RingSpec parse_component(Cursor& c) {
  const std::size_t col = c.column();
  if (c.accept_word("Z")) {
    c.expect("/");
    return finring::RingSpec::zmod(static_cast<unsigned>(c.number("modulus", 1u << 20)));
  }
  if (c.accept_word("GF")) {
    c.expect("(");
    const auto p = static_cast<unsigned>(c.number("characteristic", 1u << 20));
    c.expect(")");
    return finring::RingSpec::gf(p);
  }
  c.fail_at("expected a ring: Z/<n>, GF(<p>), product or poly", col);
}

RingDecl parse_ring(Cursor& c) {
  RingDecl r;
  if (c.accept_word("poly")) {
    r.kind = RingDecl::Kind::Poly;
    if (c.accept_word("QQ") || c.accept_word("Q")) {
      r.field = "QQ";
    } else {
      c.expect_word("GF");
      c.expect("(");
      r.field = "GF(" + c.digits("characteristic") + ")";
      c.expect(")");
    }
    c.expect("[");
    do {
      const std::size_t col = c.column();
      std::string v = c.ident("variable");
      if (std::find(r.vars.begin(), r.vars.end(), v) != r.vars.end()) c.fail_at("repeated variable '" + v + "'", col);
      r.vars.push_back(std::move(v));
    } while (c.accept(","));
    c.expect("]");
    if (c.accept("/")) {
      const std::size_t col = c.column();
      c.expect("(");
      r.relations = parse_items(c, ')');
      if (r.relations.empty()) c.fail_at("empty relation list", col);
    }
    return r;
  }
  if (c.accept_word("product")) {
    std::vector<finring::RingSpec> parts;
    do {
      parts.push_back(parse_component(c));
    } while (c.accept(","));
    r.finite = finring::RingSpec::product(std::move(parts));
    return r;
  }
  r.finite = parse_component(c);
  return r;
}

std::optional<bool> parse_expect(Cursor& c) {
  if (!c.accept_word("expect")) return std::nullopt;
  if (c.accept_word("true")) return true;
  if (c.accept_word("false")) return false;
  c.fail("expected 'true' or 'false'");
}

// `N in M` with N a submodule of M
void sub_in_module(Cursor& c, const Symbols& sy, std::string& sub, std::string& mod) {
  const std::size_t col = c.column();
  sub = c.ident("submodule name");
  c.expect_word("in");
  const std::size_t mcol = c.column();
  mod = c.ident("module name");
  const auto* s = sy.find(sub);
  if (!s || s->kind != Symbols::Sym::Submodule) c.fail_at("'" + sub + "' is not a declared submodule", col);
  const auto* m = sy.find(mod);
  if (!m || m->kind != Symbols::Sym::Module) c.fail_at("'" + mod + "' is not a declared module", mcol);
  if (s->module != mod) c.fail_at("'" + sub + "' is a submodule of '" + s->module + "', not of '" + mod + "'", col);
}

Expr parse_ideal_primary(Cursor& c, const Symbols& sy) {
  Expr e = parse_primary(c);
  resolve(c, sy, e, true);
  return e;
}

Query parse_query(Cursor& c, const Symbols& sy) {
  Query q;
  const std::size_t col = c.column();
  const std::string kw = c.dashed("query kind");
  if (kw == "factorize" || kw == "filtration") {
    need_finite(c, sy, col, kw);
    q.kind = kw == "factorize" ? Query::Kind::Factorize : Query::Kind::Filtration;
    sub_in_module(c, sy, q.sub, q.module);
    if (q.kind == Query::Kind::Filtration && c.accept_word("order")) {
      q.order = parse_list(c);
      for (const auto& e : q.order) resolve(c, sy, e, true);
    }
  } else if (kw == "ass") {
    need_finite(c, sy, col, kw);
    q.kind = Query::Kind::Ass;
    const std::size_t mcol = c.column();
    q.module = c.ident("module name");
    c.expect("/");
    const std::size_t scol = c.column();
    q.sub = c.ident("submodule name");
    const auto* m = sy.find(q.module);
    if (!m || m->kind != Symbols::Sym::Module) c.fail_at("'" + q.module + "' is not a declared module", mcol);
    const auto* s = sy.find(q.sub);
    if (!s || s->kind != Symbols::Sym::Submodule || s->module != q.module) {
      c.fail_at("'" + q.sub + "' is not a declared submodule of '" + q.module + "'", scol);
    }
  } else if (kw == "ideal-eq") {
    need_ring(c, sy, col);
    q.kind = Query::Kind::IdealEq;
    q.lhs = parse_expr(c);
    c.expect("==");
    q.rhs = parse_expr(c);
    resolve(c, sy, q.lhs, true);
    resolve(c, sy, q.rhs, true);
  } else if (kw == "power-stabilizes" || kw == "obstruction") {
    need_ring(c, sy, col);
    q.kind = kw == "obstruction" ? Query::Kind::Obstruction : Query::Kind::PowerStabilizes;
    q.lhs = parse_ideal_primary(c, sy);
    c.expect("^");
    const std::size_t rcol = c.column();
    q.power = static_cast<unsigned>(c.number("exponent", 64));
    const unsigned least = q.kind == Query::Kind::Obstruction ? 2 : 1;
    if (q.power < least) c.fail_at("exponent must be at least " + std::to_string(least), rcol);
    if (q.kind == Query::Kind::Obstruction && c.accept_word("candidates")) {
      q.candidates = parse_list(c);
      for (const auto& e : q.candidates) resolve(c, sy, e, true);
    }
  } else if (kw == "check") {
    q.kind = Query::Kind::Check;
    const std::size_t pcol = c.column();
    q.property = c.dashed("property id");
    if (!props::parse_property(q.property)) c.fail_at("unknown property '" + q.property + "'", pcol);
    if (sy.poly()) c.fail_at("engine mismatch: property checks need a finite ring, not a polynomial quotient", col);
    if (c.accept_word("exhaustive")) {
      q.mode = Query::Mode::Exhaustive;
    } else if (c.accept_word("samples")) {
      q.mode = Query::Mode::Samples;
      q.samples = c.number("sample count", 100000000);
      if (q.samples == 0) c.fail("sample count must be positive");
      c.expect_word("seed");
      q.seed = c.number("seed", ~std::uint64_t{0} >> 8);
    } else if (c.accept_word("on")) {
      q.mode = Query::Mode::On;
      need_finite(c, sy, col, "check ... on");
      do {
        const std::size_t tcol = c.column();
        const std::string first = c.ident("name");
        if (c.accept("^")) {
          const auto* s = sy.find(first);
          if (!s || s->kind != Symbols::Sym::Ideal) c.fail_at("'" + first + "' is not a declared ideal", tcol);
          if (!q.targets.empty()) c.fail_at("cannot mix module and power targets", tcol);
          q.powers.emplace_back(first, static_cast<unsigned>(c.number("exponent", 64)));
        } else {
          if (!q.powers.empty()) c.fail_at("cannot mix module and power targets", tcol);
          Target t;
          t.sub = first;
          c.expect_word("in");
          const std::size_t mcol = c.column();
          t.module = c.ident("module name");
          const auto* s = sy.find(t.sub);
          if (!s || s->kind != Symbols::Sym::Submodule) c.fail_at("'" + t.sub + "' is not a declared submodule", tcol);
          const auto* m = sy.find(t.module);
          if (!m || m->kind != Symbols::Sym::Module || !m->free) {
            c.fail_at("'" + t.module + "' is not a module declared with 'free'", mcol);
          }
          if (s->module != t.module) c.fail_at("'" + t.sub + "' is not a submodule of '" + t.module + "'", tcol);
          q.targets.push_back(std::move(t));
        }
      } while (c.accept(","));
    }
  } else {
    c.fail_at("unknown query '" + kw + "'", col);
  }
  q.expect = parse_expect(c);
  return q;
}

Statement parse_statement(Cursor& c, Symbols& sy) {
  Statement st;
  st.line = c.line();
  const std::size_t col = c.column();
  const std::string kw = c.ident("statement keyword");
  if (kw == "ring") {
    if (sy.ring) c.fail_at("a ring is already declared", col);
    st.kind = Statement::Kind::Ring;
    st.ring = parse_ring(c);
    sy.ring = st.ring;
    for (const auto& e : st.ring.relations) resolve(c, sy, e, false);
  } else if (kw == "ideal") {
    st.kind = Statement::Kind::Ideal;
    need_ring(c, sy, col);
    const std::size_t ncol = c.column();
    st.ideal.name = c.ident("ideal name");
    c.expect("=");
    st.ideal.value = parse_expr(c);
    resolve(c, sy, st.ideal.value, true);
    st.ideal.prime = c.accept_word("prime");
    declare(c, sy, st.ideal.name, ncol, Symbols::Entry::of(Symbols::Sym::Ideal));
  } else if (kw == "module") {
    st.kind = Statement::Kind::Module;
    need_finite(c, sy, col, "module");
    const std::size_t ncol = c.column();
    auto& m = st.module;
    m.name = c.ident("module name");
    c.expect("=");
    auto entry = Symbols::Entry::of(Symbols::Sym::Module);
    if (c.accept_word("free")) {
      m.rank = c.number("rank", 12);
      if (m.rank == 0) c.fail("rank must be positive");
      if (c.accept_word("relations")) m.relations = parse_rows(c, sy, m.rank);
      entry.rank = m.rank;
      entry.free = true;
    } else if (c.accept_word("dsum")) {
      m.dsum = true;
      do {
        const std::size_t pcol = c.column();
        m.parts.push_back(c.ident("module name"));
        const auto* p = sy.find(m.parts.back());
        if (!p || p->kind != Symbols::Sym::Module) c.fail_at("'" + m.parts.back() + "' is not a declared module", pcol);
        entry.rank += p->rank;
      } while (c.accept(","));
      if (m.parts.size() < 2) c.fail("dsum needs at least two modules");
    } else {
      c.fail("expected 'free' or 'dsum'");
    }
    declare(c, sy, m.name, ncol, entry);
  } else if (kw == "submodule") {
    st.kind = Statement::Kind::Submodule;
    need_finite(c, sy, col, "submodule");
    const std::size_t ncol = c.column();
    auto& s = st.submodule;
    s.name = c.ident("submodule name");
    c.expect_word("in");
    const std::size_t mcol = c.column();
    s.module = c.ident("module name");
    const auto* m = sy.find(s.module);
    if (!m || m->kind != Symbols::Sym::Module) c.fail_at("'" + s.module + "' is not a declared module", mcol);
    c.expect("=");
    c.expect_word("span");
    s.span = parse_rows(c, sy, m->rank);
    auto entry = Symbols::Entry::of(Symbols::Sym::Submodule);
    entry.module = s.module;
    declare(c, sy, s.name, ncol, entry);
  } else if (kw == "query") {
    st.kind = Statement::Kind::Query;
    st.query = parse_query(c, sy);
  } else {
    c.fail_at("unknown statement '" + kw + "'", col);
  }
  if (!c.at_end()) c.fail("unexpected input");
  return st;
}

std::string rows_text(const std::vector<std::vector<Expr>>& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) out += ", ";
    out += "[" + join(rows[i], ", ") + "]";
  }
  return out + "]";
}

std::string query_text(const Query& q, bool with_expect = true) {
  std::string out;
  switch (q.kind) {
    case Query::Kind::Factorize: out = "factorize " + q.sub + " in " + q.module; break;
    case Query::Kind::Ass: out = "ass " + q.module + " / " + q.sub; break;
    case Query::Kind::Filtration:
      out = "filtration " + q.sub + " in " + q.module;
      if (!q.order.empty()) out += " order " + join(q.order, ", ");
      break;
    case Query::Kind::IdealEq: out = "ideal-eq " + render(q.lhs) + " == " + render(q.rhs); break;
    case Query::Kind::PowerStabilizes:
      out = "power-stabilizes " + render(q.lhs) + " ^ " + std::to_string(q.power);
      break;
    case Query::Kind::Obstruction:
      out = "obstruction " + render(q.lhs) + " ^ " + std::to_string(q.power);
      if (!q.candidates.empty()) out += " candidates " + join(q.candidates, ", ");
      break;
    case Query::Kind::Check:
      out = "check " + q.property;
      switch (q.mode) {
        case Query::Mode::Default: break;
        case Query::Mode::Exhaustive: out += " exhaustive"; break;
        case Query::Mode::Samples:
          out += " samples " + std::to_string(q.samples) + " seed " + std::to_string(q.seed);
          break;
        case Query::Mode::On: {
          out += " on ";
          for (std::size_t i = 0; i < q.targets.size(); ++i) {
            if (i) out += ", ";
            out += q.targets[i].sub + " in " + q.targets[i].module;
          }
          for (std::size_t i = 0; i < q.powers.size(); ++i) {
            if (i) out += ", ";
            out += q.powers[i].first + " ^ " + std::to_string(q.powers[i].second);
          }
          break;
        }
      }
      break;
  }
  if (with_expect && q.expect) out += *q.expect ? " expect true" : " expect false";
  return out;
}

std::string statement_text(const Statement& st) {
  switch (st.kind) {
    case Statement::Kind::Ring: {
      const auto& r = st.ring;
      if (r.kind == RingDecl::Kind::Finite) return "ring " + r.finite.to_string();
      std::string out = "ring poly " + r.field + "[";
      for (std::size_t i = 0; i < r.vars.size(); ++i) out += (i ? "," : "") + r.vars[i];
      out += "]";
      if (!r.relations.empty()) out += " / (" + join(r.relations, ", ") + ")";
      return out;
    }
    case Statement::Kind::Ideal:
      return "ideal " + st.ideal.name + " = " + render(st.ideal.value) + (st.ideal.prime ? " prime" : "");
    case Statement::Kind::Module: {
      const auto& m = st.module;
      if (m.dsum) {
        std::string out = "module " + m.name + " = dsum ";
        for (std::size_t i = 0; i < m.parts.size(); ++i) out += (i ? ", " : "") + m.parts[i];
        return out;
      }
      std::string out = "module " + m.name + " = free " + std::to_string(m.rank);
      if (!m.relations.empty()) out += " relations " + rows_text(m.relations);
      return out;
    }
    case Statement::Kind::Submodule:
      return "submodule " + st.submodule.name + " in " + st.submodule.module + " = span " + rows_text(st.submodule.span);
    case Statement::Kind::Query: return "query " + query_text(st.query);
  }
  return {};
}

}  // namespace

std::string render(const Expr& e) { return render_at(e, 0); }

std::string render(const Script& s) {
  std::string out;
  for (const auto& st : s.statements) out += statement_text(st) + "\n";
  return out;
}

Script parse_script(std::string_view text) {
  Script script;
  Symbols sy;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    Cursor c(text.substr(start, end - start), line);
    if (!c.at_end()) script.statements.push_back(parse_statement(c, sy));
    start = end + 1;
  }
  return script;
}

// ================================================================ execution

namespace {

using finring::FiniteIdeal;
using symbolic::QuotIdeal;
using IdealVal = std::variant<FiniteIdeal, QuotIdeal>;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail_expr(const Expr& e, const std::string& msg) { throw ParseError(msg, e.line, e.column); }

struct Env {
  std::optional<RingDecl> decl;
  finring::RingPtr fring;
  symbolic::CtxPtr ctx;
  std::map<std::string, IdealVal> ideals;
  struct Mod {
    finmod::ModulePtr module;
    std::vector<std::vector<finring::Elem>> relations;
  };
  std::map<std::string, Mod> modules;
  struct Sub {
    finmod::Submodule sub;
    std::vector<std::vector<finring::Elem>> span;
  };
  std::map<std::string, Sub> subs;

  bool poly() const { return decl && decl->kind == RingDecl::Kind::Poly; }
};

bool mentions_ideal(const Env& env, const Expr& e) {
  if (e.kind == Kind::Name) return env.ideals.count(e.text) > 0;
  return std::any_of(e.kids.begin(), e.kids.end(), [&](const Expr& k) { return mentions_ideal(env, k); });
}

long small_integer(const Expr& e) {
  if (e.kind == Kind::Neg) return -small_integer(e.kids[0]);
  if (e.kind != Kind::Num) fail_expr(e, "tuple components must be integers");
  mpz_class v(e.text);
  if (!v.fits_slong_p()) fail_expr(e, "integer out of range");
  return v.get_si();
}

finring::Elem finite_element(const Env& env, const Expr& e) {
  const auto& r = *env.fring;
  switch (e.kind) {
    case Kind::Num: {
      mpz_class v(e.text);
      v %= static_cast<unsigned long>(r.size());
      return r.element_from_integer(v.get_si());
    }
    case Kind::Tuple: {
      std::vector<long> comps;
      for (const auto& k : e.kids) comps.push_back(small_integer(k));
      return r.element_from_components(comps);
    }
    case Kind::Group:
      if (e.kids.size() != 1) fail_expr(e, "a parenthesized list is not a ring element");
      return finite_element(env, e.kids[0]);
    case Kind::Add: return r.add(finite_element(env, e.kids[0]), finite_element(env, e.kids[1]));
    case Kind::Sub: return r.sub(finite_element(env, e.kids[0]), finite_element(env, e.kids[1]));
    case Kind::Mul: return r.mul(finite_element(env, e.kids[0]), finite_element(env, e.kids[1]));
    case Kind::Neg: return r.neg(finite_element(env, e.kids[0]));
    case Kind::Pow: {
      const auto base = finite_element(env, e.kids[0]);
      finring::Elem acc = r.one();
      for (unsigned i = 0; i < e.exponent; ++i) acc = r.mul(acc, base);
      return acc;
    }
    case Kind::Div: fail_expr(e, "division is not available for finite ring elements");
    case Kind::Name: fail_expr(e, "'" + e.text + "' is not a ring element");
  }
  fail_expr(e, "bad element");
}

poly::Polynomial poly_element(const Env& env, const Expr& e) {
  const auto& ring = env.ctx->ring();
  switch (e.kind) {
    case Kind::Num:
      return poly::Polynomial::constant(ring, ring->field().from_rational(arith::Rational(mpz_class(e.text), 1)));
    case Kind::Name: {
      const auto& vars = ring->vars();
      auto it = std::find(vars.begin(), vars.end(), e.text);
      if (it == vars.end()) fail_expr(e, "'" + e.text + "' is not a ring element");
      return poly::Polynomial::variable(ring, static_cast<std::size_t>(it - vars.begin()));
    }
    case Kind::Group:
      if (e.kids.size() != 1) fail_expr(e, "a parenthesized list is not a ring element");
      return poly_element(env, e.kids[0]);
    case Kind::Add: return poly_element(env, e.kids[0]) + poly_element(env, e.kids[1]);
    case Kind::Sub: return poly_element(env, e.kids[0]) - poly_element(env, e.kids[1]);
    case Kind::Mul: return poly_element(env, e.kids[0]) * poly_element(env, e.kids[1]);
    case Kind::Neg: return -poly_element(env, e.kids[0]);
    case Kind::Pow: return poly_element(env, e.kids[0]).pow(e.exponent);
    case Kind::Div: {
      const auto den = poly_element(env, e.kids[1]);
      if (den.is_zero() || !den.is_constant()) fail_expr(e.kids[1], "can only divide by a nonzero constant");
      return poly_element(env, e.kids[0]) * poly::Polynomial::constant(ring, den.leading_coeff().inverse());
    }
    case Kind::Tuple: fail_expr(e, "tuple elements need a finite product ring");
  }
  fail_expr(e, "bad element");
}

IdealVal generated(const Env& env, const std::vector<Expr>& items) {
  if (env.poly()) {
    std::vector<poly::Polynomial> gens;
    for (const auto& k : items) gens.push_back(poly_element(env, k));
    return QuotIdeal(env.ctx, std::move(gens));
  }
  std::vector<finring::Elem> gens;
  for (const auto& k : items) gens.push_back(finite_element(env, k));
  return finring::ideal_closure(env.fring, gens);
}

IdealVal ideal_value(const Env& env, const Expr& e) {
  if (e.kind == Kind::Group) {
    if (e.kids.size() == 1 && mentions_ideal(env, e.kids[0])) return ideal_value(env, e.kids[0]);
    return generated(env, e.kids);
  }
  if (!mentions_ideal(env, e)) return generated(env, {e});
  auto both = [&](auto fin, auto sym) -> IdealVal {
    const IdealVal a = ideal_value(env, e.kids[0]);
    const IdealVal b = ideal_value(env, e.kids[1]);
    if (env.poly()) return sym(std::get<QuotIdeal>(a), std::get<QuotIdeal>(b));
    return fin(std::get<FiniteIdeal>(a), std::get<FiniteIdeal>(b));
  };
  switch (e.kind) {
    case Kind::Name: return env.ideals.at(e.text);
    case Kind::Add:
      return both([](const FiniteIdeal& a, const FiniteIdeal& b) { return finring::ideal_sum(a, b); },
                  [](const QuotIdeal& a, const QuotIdeal& b) { return symbolic::quot_sum(a, b); });
    case Kind::Mul:
      return both([](const FiniteIdeal& a, const FiniteIdeal& b) { return finring::ideal_product(a, b); },
                  [](const QuotIdeal& a, const QuotIdeal& b) { return symbolic::quot_product(a, b); });
    case Kind::Pow: {
      const IdealVal a = ideal_value(env, e.kids[0]);
      if (env.poly()) return symbolic::quot_power(std::get<QuotIdeal>(a), e.exponent);
      return finring::ideal_power(std::get<FiniteIdeal>(a), e.exponent);
    }
    default: fail_expr(e, "only +, * and ^ combine ideals");
  }
}

std::string ideal_text(const IdealVal& v) {
  return std::visit([](const auto& i) { return i.to_string(); }, v);
}

bool ideal_equal(const IdealVal& a, const IdealVal& b) {
  if (const auto* fa = std::get_if<FiniteIdeal>(&a)) return *fa == std::get<FiniteIdeal>(b);
  return symbolic::quot_ideal_eq(std::get<QuotIdeal>(a), std::get<QuotIdeal>(b));
}

std::vector<std::vector<finring::Elem>> rows_value(const Env& env, const std::vector<std::vector<Expr>>& rows) {
  std::vector<std::vector<finring::Elem>> out;
  for (const auto& row : rows) {
    std::vector<finring::Elem> r;
    for (const auto& e : row) r.push_back(finite_element(env, e));
    out.push_back(std::move(r));
  }
  return out;
}

void exec_ring(Env& env, const RingDecl& d) {
  env.decl = d;
  if (d.kind == RingDecl::Kind::Finite) {
    env.fring = props::ring_for(d.finite);
    return;
  }
  const arith::Field field =
      d.field == "QQ" ? arith::Field::rationals() : arith::Field::prime(std::stoull(d.field.substr(3)));
  const auto ring = poly::PolyRing::make(d.vars, field);
  // relations are parsed before a context exists
  env.ctx = symbolic::QuotientCtx::make(groebner::Ideal::zero(ring));
  std::vector<poly::Polynomial> rels;
  for (const auto& e : d.relations) rels.push_back(poly_element(env, e));
  env.ctx = symbolic::QuotientCtx::make(groebner::Ideal(ring, std::move(rels)));
}

struct Outcome {
  std::string text;                 // one-line result
  std::vector<std::string> extra;   // indented detail lines
  std::optional<bool> value;        // boolean queries
  ordered_json json = ordered_json::object();
  bool property_check = false;
};

std::string primes_text(const std::vector<finring::PrimeIdealFin>& ps) {
  std::string out = "{";
  for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? ", " : "") + ps[i].to_string();
  return out + "}";
}

props::InstanceFamily family_for(const Env& env, const Query& q) {
  props::InstanceFamily fam =
      env.fring ? props::InstanceFamily::of_rings({env.decl->finite}) : props::InstanceFamily::default_family();
  if (q.mode == Query::Mode::Samples) {
    fam.exhaustive = false;
    fam.samples = q.samples;
    fam.seed = q.seed;
  }
  return fam;
}

Outcome exec_query(const Env& env, const Query& q, const RunOptions& opts) {
  Outcome out;
  switch (q.kind) {
    case Query::Kind::Factorize: {
      const auto f = finmod::factorize(env.modules.at(q.module).module, env.subs.at(q.sub).sub);
      out.text = f.to_string();
      out.json["factorization"] = out.text;
      ordered_json fs = ordered_json::array();
      for (const auto& [p, r] : f.factors()) fs.push_back({{"prime", p.to_string()}, {"exponent", r}});
      out.json["factors"] = fs;
      break;
    }
    case Query::Kind::Ass: {
      const auto ps = finmod::associated_primes(env.modules.at(q.module).module, env.subs.at(q.sub).sub);
      out.text = primes_text(ps);
      ordered_json arr = ordered_json::array();
      for (const auto& p : ps) arr.push_back(p.to_string());
      out.json["primes"] = arr;
      break;
    }
    case Query::Kind::Filtration: {
      finmod::TieBreak tie = finmod::TieBreak::canonical();
      if (!q.order.empty()) {
        std::vector<FiniteIdeal> pref;
        for (const auto& e : q.order) pref.push_back(std::get<FiniteIdeal>(ideal_value(env, e)));
        tie = finmod::TieBreak::given(std::move(pref));
      }
      const auto f = finmod::rpe_filtration(env.modules.at(q.module).module, env.subs.at(q.sub).sub, tie);
      out.text = f.to_string();
      ordered_json steps = ordered_json::array();
      for (const auto& s : f.steps()) steps.push_back({{"prime", s.prime.to_string()}, {"submodule", s.sub.to_string()}});
      out.json["base"] = f.base().to_string();
      out.json["steps"] = steps;
      break;
    }
    case Query::Kind::IdealEq: {
      const bool eq = ideal_equal(ideal_value(env, q.lhs), ideal_value(env, q.rhs));
      out.value = eq;
      out.text = eq ? "true" : "false";
      break;
    }
    case Query::Kind::PowerStabilizes: {
      const IdealVal p = ideal_value(env, q.lhs);
      bool stab;
      if (const auto* fp = std::get_if<FiniteIdeal>(&p)) {
        stab = finring::ideal_power(*fp, q.power) == finring::ideal_power(*fp, q.power - 1);
      } else {
        stab = symbolic::power_stabilizes(std::get<QuotIdeal>(p), q.power);
      }
      out.value = stab;
      out.text = stab ? "true" : "false";
      break;
    }
    case Query::Kind::Obstruction: {
      const IdealVal p = ideal_value(env, q.lhs);
      std::optional<std::string> cert;
      if (const auto* qp = std::get_if<QuotIdeal>(&p)) {
        std::vector<QuotIdeal> cands;
        for (const auto& e : q.candidates) cands.push_back(std::get<QuotIdeal>(ideal_value(env, e)));
        cands.push_back(QuotIdeal::variables(env.ctx));
        if (auto a = symbolic::obstruction_certificate(*qp, q.power, cands)) cert = a->to_string();
      } else {
        // finite rings: the stated candidates, then the whole lattice
        const auto& fp = std::get<FiniteIdeal>(p);
        std::vector<FiniteIdeal> cands;
        for (const auto& e : q.candidates) cands.push_back(std::get<FiniteIdeal>(ideal_value(env, e)));
        for (auto& a : finring::all_ideals(env.fring)) cands.push_back(std::move(a));
        const FiniteIdeal pr = finring::ideal_power(fp, q.power);
        const FiniteIdeal pr1 = finring::ideal_power(fp, q.power - 1);
        for (const auto& a : cands) {
          if (!fp.is_subset_of(a) || a == fp) continue;
          if (finring::ideal_product(pr1, a).is_subset_of(pr)) {
            cert = a.to_string();
            break;
          }
        }
      }
      out.value = cert.has_value();
      out.text = cert ? "certificate " + *cert : "none";
      out.json["certificate"] = cert ? ordered_json(*cert) : ordered_json(nullptr);
      break;
    }
    case Query::Kind::Check: {
      const auto id = *props::parse_property(q.property);
      out.property_check = true;
      if (q.mode != Query::Mode::On) {
        const auto report = props::check_property(id, family_for(env, q));
        out.value = report.pass;
        std::string t = props::report_text(report, opts.timing);
        // first line is the summary; the rest is detail
        std::size_t nl = t.find('\n');
        out.text = t.substr(0, nl);
        while (nl != std::string::npos && nl + 1 < t.size()) {
          const std::size_t next = t.find('\n', nl + 1);
          out.extra.push_back(t.substr(nl + 1, next == std::string::npos ? std::string::npos : next - nl - 1));
          nl = next;
        }
        out.json["report"] = ordered_json::parse(props::report_json(report, opts.timing));
        break;
      }
      props::Instance inst;
      if (!q.powers.empty()) {
        props::PowerCase pc;
        pc.ring_spec = env.decl->finite;
        for (const auto& [name, r] : q.powers) {
          pc.powers.emplace_back(std::get<FiniteIdeal>(env.ideals.at(name)).generators(), r);
        }
        inst = std::move(pc);
      } else {
        std::vector<props::ModuleCase> cases;
        for (const auto& t : q.targets) {
          const auto& m = env.modules.at(t.module);
          cases.push_back(props::ModuleCase::make(env.decl->finite, m.module->rank(), m.relations, env.subs.at(t.sub).span));
        }
        inst = std::move(cases);
      }
      const auto failure = props::check_instance(id, inst);
      out.value = !failure;
      out.text = failure ? "FAIL  " + q.property : "PASS  " + q.property;
      if (failure) out.extra.push_back("assertion " + failure->assertion + ": " + failure->detail);
      out.json["pass"] = !failure;
      if (failure) {
        out.json["assertion"] = failure->assertion;
        out.json["detail"] = failure->detail;
      }
      break;
    }
  }
  return out;
}

}  // namespace

poly::Polynomial parse_polynomial(std::string_view text, const poly::RingPtr& ring) {
  if (text.find('\n') != std::string_view::npos) throw ParseError("polynomial spans several lines", 1, 1);
  Cursor c(text, 1);
  const Expr e = parse_expr(c);
  if (!c.at_end()) c.fail("unexpected input");
  Env env;
  RingDecl d;
  d.kind = RingDecl::Kind::Poly;
  env.decl = d;
  env.ctx = symbolic::QuotientCtx::make(groebner::Ideal::zero(ring));
  return poly_element(env, e);
}

RunResult run_script(const Script& s, const RunOptions& opts) {
  RunResult res;
  Env env;
  std::size_t query_index = 0;
  auto emit_json = [&](const ordered_json& j) { res.output += j.dump() + "\n"; };
  const bool json = opts.format == RunOptions::Format::Json;

  for (const auto& st : s.statements) {
    const bool is_query = st.kind == Statement::Kind::Query;
    if (is_query) ++query_index;
    try {
      switch (st.kind) {
        case Statement::Kind::Ring: exec_ring(env, st.ring); break;
        case Statement::Kind::Ideal: {
          IdealVal v = ideal_value(env, st.ideal.value);
          if (st.ideal.prime) {
            std::string note;
            if (auto* fi = std::get_if<FiniteIdeal>(&v)) {
              if (!finring::is_prime(*fi)) {
                throw DomainError("ideal " + st.ideal.name + " = " + fi->to_string() + " is declared prime but is not");
              }
              note = "prime (verified)";
            } else {
              note = "asserted prime (unchecked)";
            }
            if (json) {
              emit_json({{"schema", "gpif-report/1"}, {"kind", "note"}, {"ideal", st.ideal.name},
                         {"value", ideal_text(v)}, {"note", note}});
            } else {
              res.output += "ideal " + st.ideal.name + " = " + ideal_text(v) + ": " + note + "\n";
            }
          }
          env.ideals.insert_or_assign(st.ideal.name, std::move(v));
          break;
        }
        case Statement::Kind::Module: {
          const auto& d = st.module;
          Env::Mod m;
          if (d.dsum) {
            std::vector<finmod::ModulePtr> parts;
            for (const auto& p : d.parts) parts.push_back(env.modules.at(p).module);
            m.module = finmod::FiniteModule::direct_sum(parts);
          } else {
            m.relations = rows_value(env, d.relations);
            m.module = finmod::build_module(env.fring, d.rank, m.relations);
          }
          env.modules.insert_or_assign(d.name, std::move(m));
          break;
        }
        case Statement::Kind::Submodule: {
          const auto& d = st.submodule;
          const auto& m = env.modules.at(d.module).module;
          Env::Sub sub{finmod::Submodule::zero(m), rows_value(env, d.span)};
          std::vector<finmod::MElem> gens;
          for (const auto& row : sub.span) gens.push_back(m->from_tuple(row));
          sub.sub = finmod::submodule_closure(m, gens);
          env.subs.insert_or_assign(d.name, std::move(sub));
          break;
        }
        case Statement::Kind::Query: {
          const Query& q = st.query;
          Outcome o = exec_query(env, q, opts);
          bool ok = true;
          if (o.value) {
            // property checks must pass unless annotated otherwise
            const bool want_true = o.property_check || opts.expect_pass;
            if (q.expect) {
              ok = *o.value == *q.expect;
            } else if (want_true) {
              ok = *o.value;
            }
          }
          if (!ok) res.exit_code = std::max(res.exit_code, 1);
          const std::string qtext = query_text(q, false);
          if (json) {
            ordered_json j{{"schema", "gpif-report/1"}, {"kind", "query"}, {"index", query_index}, {"query", qtext},
                           {"result", o.text}};
            if (o.value) j["value"] = *o.value;
            if (q.expect) j["expect"] = *q.expect;
            j["ok"] = ok;
            for (auto& [k, v] : o.json.items()) j[k] = v;
            emit_json(j);
          } else {
            res.output += qtext + ": " + o.text;
            if (!ok) res.output += q.expect ? "  [MISMATCH: expected " + std::string(*q.expect ? "true" : "false") + "]"
                                            : "  [MISMATCH: expected true]";
            res.output += "\n";
            for (const auto& line : o.extra) res.output += line.empty() ? "\n" : "    " + line + "\n";
          }
          break;
        }
      }
    } catch (const std::exception& e) {
      std::string where = "line " + std::to_string(st.line);
      if (is_query) where += " (query " + std::to_string(query_index) + ")";
      if (json) {
        emit_json({{"schema", "gpif-report/1"}, {"kind", "error"}, {"line", st.line},
                   {"query", is_query ? ordered_json(query_index) : ordered_json(nullptr)}, {"message", e.what()}});
      } else {
        res.output += "error at " + where + ": " + e.what() + "\n";
      }
      res.exit_code = 2;
      break;
    }
  }
  if (json) {
    emit_json({{"schema", "gpif-report/1"}, {"kind", "summary"}, {"queries", query_index}, {"exit_code", res.exit_code}});
  }
  return res;
}

}  // namespace gpif::dsl
