#pragma once

// Line-oriented input language: one ring, named ideals / modules /
// submodules, and queries dispatched to the symbolic or the finite engine.
//
//   ring Z/12 | ring GF(5) | ring product Z/4, GF(3)
//   ring poly GF(2)[x,y,z] / (x*y - z^2, x^2 - y*z)
//   ideal p = (x, z) prime
//   module M = free 2 relations [[2, 0]]   |   module S = dsum M, M
//   submodule N in M = span [[1, 0]]
//   query factorize N in M
//   query ass M / N
//   query filtration N in M order p, q
//   query ideal-eq p*(x,y,z) == p^2 expect true
//   query power-stabilizes p ^ 2
//   query obstruction p ^ 2 candidates (x,y,z)
//   query check DSUM-MAX samples 200 seed 7
//   query check COLON-CHAR on N1 in M1
//
// '#' starts a comment. Names must be declared before use.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gpif/finring.hpp"
#include "gpif/poly.hpp"

namespace gpif::dsl {

/// Expression tree shared by polynomials, ring elements and ideal
/// expressions. `( ... )` is always kept as a Group node so that
/// rendering reproduces the parse.
struct Expr {
  enum class Kind { Num, Name, Group, Tuple, Add, Sub, Mul, Div, Neg, Pow };
  Kind kind = Kind::Num;
  std::string text;        // Num digits / Name identifier
  unsigned exponent = 0;   // Pow
  std::vector<Expr> kids;  // operands, group or tuple items
  std::size_t line = 0, column = 0;  // not part of equality

  friend bool operator==(const Expr& a, const Expr& b);
};

struct RingDecl {
  enum class Kind { Finite, Poly };
  Kind kind = Kind::Finite;
  finring::RingSpec finite;
  std::string field;               // "QQ" or "GF(p)"
  std::vector<std::string> vars;
  std::vector<Expr> relations;
  friend bool operator==(const RingDecl&, const RingDecl&) = default;
};

struct IdealDecl {
  std::string name;
  Expr value;
  bool prime = false;
  friend bool operator==(const IdealDecl&, const IdealDecl&) = default;
};

struct ModuleDecl {
  std::string name;
  bool dsum = false;
  std::size_t rank = 0;                      // free
  std::vector<std::vector<Expr>> relations;  // free
  std::vector<std::string> parts;            // dsum
  friend bool operator==(const ModuleDecl&, const ModuleDecl&) = default;
};

struct SubmoduleDecl {
  std::string name;
  std::string module;
  std::vector<std::vector<Expr>> span;
  friend bool operator==(const SubmoduleDecl&, const SubmoduleDecl&) = default;
};

/// `N in M` target of `check ... on`.
struct Target {
  std::string sub;
  std::string module;
  friend bool operator==(const Target&, const Target&) = default;
};

struct Query {
  enum class Kind { Factorize, Ass, Filtration, IdealEq, PowerStabilizes, Obstruction, Check };
  Kind kind = Kind::Factorize;
  std::string sub, module;    // factorize / ass / filtration
  std::vector<Expr> order;    // filtration
  Expr lhs, rhs;              // ideal-eq; lhs is the ideal for power queries
  unsigned power = 0;         // power-stabilizes / obstruction
  std::vector<Expr> candidates;
  std::string property;       // check
  enum class Mode { Default, Exhaustive, Samples, On } mode = Mode::Default;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<Target> targets;                      // check ... on N in M, ...
  std::vector<std::pair<std::string, unsigned>> powers;  // check ... on p ^ r, ...
  std::optional<bool> expect;
  friend bool operator==(const Query&, const Query&) = default;
};

struct Statement {
  enum class Kind { Ring, Ideal, Module, Submodule, Query };
  Kind kind = Kind::Query;
  RingDecl ring;
  IdealDecl ideal;
  ModuleDecl module;
  SubmoduleDecl submodule;
  Query query;
  std::size_t line = 0;  // not part of equality

  friend bool operator==(const Statement& a, const Statement& b);
};

struct Script {
  std::vector<Statement> statements;
  friend bool operator==(const Script&, const Script&) = default;
};

/// Parses and resolves names. Throws ParseError (with line and column) on
/// syntax errors, undeclared or duplicate names and engine mismatches.
Script parse_script(std::string_view text);

/// Canonical text; parse_script(render(s)) == s.
std::string render(const Script& s);
std::string render(const Expr& e);

/// One polynomial in `x^2*y - 3/2*z` syntax over `ring`.
poly::Polynomial parse_polynomial(std::string_view text, const poly::RingPtr& ring);

struct RunOptions {
  enum class Format { Text, Json };
  Format format = Format::Text;
  /// Boolean queries without an `expect` annotation must come out true.
  bool expect_pass = false;
  bool timing = false;
};

struct RunResult {
  std::string output;
  /// 0 all queries ran and met expectations, 1 an expectation or property
  /// check failed, 2 an engine or configuration error stopped the run.
  int exit_code = 0;
};

RunResult run_script(const Script& s, const RunOptions& opts = {});

}  // namespace gpif::dsl
