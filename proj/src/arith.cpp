#include "gpif/arith.hpp"

#include <charconv>
#include <numeric>
#include <tuple>
#include <utility>

namespace gpif::arith {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

BigInt parse_bigint(std::string_view s) {
  s = trim(s);
  std::string digits(s);
  BigInt out;
  if (digits.empty() || out.set_str(digits, 10) != 0) {
    throw DomainError("not an integer: '" + digits + "'");
  }
  return out;
}

std::int64_t parse_int64(std::string_view s) {
  s = trim(s);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("not an integer: '" + std::string(s) + "'");
  }
  return out;
}

void check_same_modulus(const ModularInt& a, const ModularInt& b) {
  if (a.modulus() != b.modulus()) {
    throw ArithmeticError("mixed moduli: " + std::to_string(a.modulus()) + " vs " +
                          std::to_string(b.modulus()));
  }
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- Rational

Rational::Rational(long value) : value_(value) {}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw ArithmeticError("division by zero");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

Rational Rational::reciprocal() const {
  if (is_zero()) throw ArithmeticError("division by zero");
  return Rational(mpq_class(1 / value_));
}

Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw ArithmeticError("division by zero");
  return Rational(mpq_class(a.value_ / b.value_));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational Rational::parse(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text), BigInt(1));
  return Rational(parse_bigint(text.substr(0, slash)), parse_bigint(text.substr(slash + 1)));
}

// -------------------------------------------------------------- ModularInt

ModularInt::ModularInt(std::int64_t value, std::uint64_t modulus) : modulus_(modulus) {
  if (modulus < 2 || modulus >= (std::uint64_t{1} << 32)) {
    throw DomainError("modulus must lie in [2, 2^32): " + std::to_string(modulus));
  }
  const auto m = static_cast<std::int64_t>(modulus);
  value_ = static_cast<std::uint64_t>(((value % m) + m) % m);
}

ModularInt ModularInt::operator-() const {
  return ModularInt(static_cast<std::int64_t>(value_ == 0 ? 0 : modulus_ - value_), modulus_);
}

ModularInt ModularInt::inverse() const {
  // extended Euclid on (value, modulus)
  std::int64_t old_r = static_cast<std::int64_t>(value_), r = static_cast<std::int64_t>(modulus_);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  if (old_r != 1) {
    throw ArithmeticError(to_string() + " is not invertible (gcd " + std::to_string(old_r) + ")");
  }
  return ModularInt(old_s, modulus_);
}

ModularInt operator+(const ModularInt& a, const ModularInt& b) {
  check_same_modulus(a, b);
  return ModularInt(static_cast<std::int64_t>((a.value_ + b.value_) % a.modulus_), a.modulus_);
}

ModularInt operator-(const ModularInt& a, const ModularInt& b) {
  check_same_modulus(a, b);
  return ModularInt(static_cast<std::int64_t>((a.value_ + a.modulus_ - b.value_) % a.modulus_), a.modulus_);
}

ModularInt operator*(const ModularInt& a, const ModularInt& b) {
  check_same_modulus(a, b);
  return ModularInt(static_cast<std::int64_t>((a.value_ * b.value_) % a.modulus_), a.modulus_);
}

ModularInt operator/(const ModularInt& a, const ModularInt& b) {
  check_same_modulus(a, b);
  if (b.is_zero()) throw ArithmeticError("division by zero");
  return a * b.inverse();
}

std::string ModularInt::to_string() const {
  return std::to_string(value_) + " mod " + std::to_string(modulus_);
}

ModularInt ModularInt::parse(std::string_view text) {
  text = trim(text);
  const auto pos = text.find(" mod ");
  if (pos == std::string_view::npos) throw DomainError("expected 'v mod n': '" + std::string(text) + "'");
  const auto modulus = parse_int64(text.substr(pos + 5));
  if (modulus < 2) throw DomainError("modulus must be at least 2");
  return ModularInt(parse_int64(text.substr(0, pos)), static_cast<std::uint64_t>(modulus));
}

// ------------------------------------------------------------------- Coeff

bool Coeff::is_zero() const {
  return std::visit([](const auto& x) { return x.is_zero(); }, v_);
}

bool Coeff::is_one() const {
  if (is_rational()) return rational() == Rational(1);
  return modular().value() == 1;
}

Coeff Coeff::operator-() const {
  return std::visit([](const auto& x) { return Coeff(-x); }, v_);
}

Coeff Coeff::inverse() const {
  if (is_rational()) return Coeff(rational().reciprocal());
  return Coeff(modular().inverse());
}

namespace {

template <typename Op>
Coeff combine(const Coeff& a, const Coeff& b, Op op) {
  if (a.is_rational() && b.is_rational()) return Coeff(op(a.rational(), b.rational()));
  if (!a.is_rational() && !b.is_rational()) return Coeff(op(a.modular(), b.modular()));
  throw ArithmeticError("mixed coefficient fields (rational vs modular)");
}

}  // namespace

Coeff operator+(const Coeff& a, const Coeff& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
}
Coeff operator-(const Coeff& a, const Coeff& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
}
Coeff operator*(const Coeff& a, const Coeff& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
}
Coeff operator/(const Coeff& a, const Coeff& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x / y; });
}

std::string Coeff::to_string() const {
  if (is_rational()) return rational().to_string();
  return std::to_string(modular().value());
}

// ------------------------------------------------------------------- Field

Field Field::prime(std::uint64_t p) {
  if (p >= (std::uint64_t{1} << 31) || !is_prime(p)) {
    throw DomainError("GF(" + std::to_string(p) + "): characteristic must be prime");
  }
  return Field(Kind::Prime, p);
}

Coeff Field::from_int(long value) const {
  if (kind_ == Kind::Rational) return Coeff(Rational(value));
  return Coeff(ModularInt(value, p_));
}

Coeff Field::from_rational(const Rational& r) const {
  if (kind_ == Kind::Rational) return Coeff(r);
  const BigInt p(static_cast<unsigned long>(p_));
  BigInt n = r.num() % p;
  BigInt d = r.den() % p;
  if (d == 0) throw ArithmeticError(r.to_string() + " has no image in " + to_string());
  const ModularInt num(n.get_si(), p_);
  const ModularInt den(d.get_si(), p_);
  return Coeff(num / den);
}

bool Field::contains(const Coeff& c) const {
  if (kind_ == Kind::Rational) return c.is_rational();
  return !c.is_rational() && c.modular().modulus() == p_;
}

std::string Field::to_string() const {
  if (kind_ == Kind::Rational) return "QQ";
  return "GF(" + std::to_string(p_) + ")";
}

}  // namespace gpif::arith
