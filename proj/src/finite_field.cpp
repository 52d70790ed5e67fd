#include "chshq/finite_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chshq/errors.hpp"

namespace chshq {

namespace {

using Poly = std::vector<std::uint64_t>;  // low degree first, residues mod p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  // Fermat; p is prime and small.
  std::uint64_t result = 1;
  std::uint64_t base = a % p;
  std::uint64_t e = p - 2;
  while (e > 0) {
    if (e & 1U) result = result * base % p;
    base = base * base % p;
    e >>= 1U;
  }
  return result;
}

// a mod m, m nonzero (not necessarily monic).
Poly poly_mod(Poly a, const Poly& m, std::uint64_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::uint64_t factor = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + p * p - factor * m[i] % p) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    }
  }
  trim(out);
  return out;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  return poly_mod(poly_mul(a, b, p), m, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1U) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1U;
  }
  return result;
}

Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
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

bool has_root(const Poly& f, std::uint64_t p) {
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + f[i]) % p;
    if (acc == 0) return true;
  }
  return false;
}

// Monic f of degree s >= 1.
bool is_irreducible(const Poly& f, std::uint64_t p) {
  const std::size_t s = f.size() - 1;
  if (s == 1) return true;
  if (s <= 3) return !has_root(f, p);
  // Rabin: x^(p^s) = x mod f and gcd(x^(p^(s/r)) - x, f) = 1 for primes r | s.
  const Poly x{0, 1};
  auto frobenius_power = [&](std::size_t k) {
    Poly h = x;
    for (std::size_t i = 0; i < k; ++i) h = poly_powmod(h, p, f, p);
    return h;
  };
  if (poly_sub(frobenius_power(s), x, p) != Poly{}) return false;
  for (const std::uint64_t r : prime_factors(s)) {
    const Poly g = poly_gcd(f, poly_sub(frobenius_power(s / r), x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldSpec::FieldSpec(std::uint32_t p, std::uint32_t s, std::shared_ptr<const Tables> tables)
    : p_(p), s_(s), q_(tables->pow_p.back()), tables_(std::move(tables)) {}

FieldSpec FieldSpec::create(std::uint32_t p, std::uint32_t s) {
  if (!is_prime(p)) throw InvalidInput("p = " + std::to_string(p) + " is not prime");
  if (s == 0) throw InvalidInput("extension degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < s; ++i) {
    q *= p;
    if (q > kMaxFieldOrder) {
      throw InvalidInput("field order " + std::to_string(p) + "^" + std::to_string(s) +
                         " exceeds the supported maximum 2^16");
    }
  }
  if (s == 1) return build(p, s, {0, 1});

  // Lexicographic over (c_0, ..., c_{s-1}) with c_0 most significant.
  Poly f(s + 1, 0);
  f[s] = 1;
  for (std::uint64_t index = 0; index < q; ++index) {
    std::uint64_t rest = index;
    for (std::uint32_t i = s; i-- > 0;) {
      f[i] = rest % p;
      rest /= p;
    }
    if (f[0] == 0) continue;  // divisible by x
    if (is_irreducible(f, p)) {
      return build(p, s, std::vector<std::uint32_t>(f.begin(), f.end()));
    }
  }
  throw InvariantViolation("no irreducible polynomial found");  // unreachable
}

FieldSpec FieldSpec::of_order(std::uint64_t q) {
  if (q < 2) throw InvalidInput("field order must be at least 2");
  if (q > kMaxFieldOrder) throw InvalidInput("field order " + std::to_string(q) + " exceeds 2^16");
  const auto factors = prime_factors(q);
  if (factors.size() != 1) throw InvalidInput(std::to_string(q) + " is not a prime power");
  std::uint32_t s = 0;
  for (std::uint64_t n = q; n > 1; n /= factors[0]) ++s;
  return create(static_cast<std::uint32_t>(factors[0]), s);
}

FieldSpec FieldSpec::with_modulus(std::uint32_t p, std::uint32_t s,
                                  std::span<const std::uint32_t> modulus) {
  const FieldSpec reference = create(p, s);  // validates p, s and size
  if (modulus.size() != s + 1 || modulus[s] != 1) {
    throw InvalidInput("modulus must be monic of degree s");
  }
  for (const auto c : modulus) {
    if (c >= p) throw InvalidInput("modulus coefficient not reduced mod p");
  }
  std::vector<std::uint32_t> m(modulus.begin(), modulus.end());
  if (s == 1) {
    if (m != std::vector<std::uint32_t>{0, 1}) throw InvalidInput("prime-field modulus must be x");
    return reference;
  }
  if (!is_irreducible(Poly(m.begin(), m.end()), p)) throw InvalidInput("modulus is reducible");
  return build(p, s, std::move(m));
}

FieldSpec FieldSpec::build(std::uint32_t p, std::uint32_t s, std::vector<std::uint32_t> modulus) {
  auto tables = std::make_shared<Tables>();
  tables->modulus = std::move(modulus);
  tables->pow_p.resize(s + 1);
  tables->pow_p[0] = 1;
  for (std::uint32_t i = 1; i <= s; ++i) tables->pow_p[i] = tables->pow_p[i - 1] * p;
  const std::uint32_t q = tables->pow_p[s];

  // Temporary handle with polynomial multiplication only; log tables follow.
  FieldSpec scratch(p, s, tables);
  const auto order_factors = prime_factors(q - 1);
  auto slow_pow = [&](Elem a, std::uint64_t e) {
    Elem r = scratch.one();
    while (e > 0) {
      if (e & 1U) r = scratch.mul_poly(r, a);
      a = scratch.mul_poly(a, a);
      e >>= 1U;
    }
    return r;
  };
  std::uint32_t g = 1;
  if (q > 2) {
    for (g = 2; g < q; ++g) {
      bool primitive = true;
      for (const auto r : order_factors) {
        if (slow_pow(Elem{g}, (q - 1) / r) == scratch.one()) {
          primitive = false;
          break;
        }
      }
      if (primitive) break;
    }
  }
  tables->primitive = g;
  tables->exp.resize(2 * static_cast<std::size_t>(q - 1));
  tables->log.assign(q, 0);
  Elem x = scratch.one();
  for (std::uint32_t i = 0; i < q - 1; ++i) {
    tables->exp[i] = x.value;
    tables->exp[i + q - 1] = x.value;
    tables->log[x.value] = i;
    x = scratch.mul_poly(x, Elem{g});
  }
  if (x != scratch.one()) throw InvariantViolation("primitive element order mismatch");
  return FieldSpec(p, s, std::move(tables));
}

Elem FieldSpec::element(std::uint64_t encoding) const {
  if (encoding >= q_) {
    throw InvalidInput("encoding " + std::to_string(encoding) + " out of range for q = " +
                       std::to_string(q_));
  }
  return Elem{static_cast<std::uint32_t>(encoding)};
}

Elem FieldSpec::from_integer(std::int64_t n) const {
  const auto pp = static_cast<std::int64_t>(p_);
  return Elem{static_cast<std::uint32_t>(((n % pp) + pp) % pp)};
}

std::vector<std::uint32_t> FieldSpec::coeffs(Elem x) const {
  std::vector<std::uint32_t> out(s_);
  std::uint32_t v = x.value;
  for (std::uint32_t i = 0; i < s_; ++i) {
    out[i] = v % p_;
    v /= p_;
  }
  return out;
}

Elem FieldSpec::from_coeffs(std::span<const std::uint32_t> c) const {
  if (c.size() > s_) throw InvalidInput("too many coefficients");
  std::uint32_t v = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] >= p_) throw InvalidInput("coefficient not reduced mod p");
    v = v * p_ + c[i];
  }
  return Elem{v};
}

Elem FieldSpec::add(Elem a, Elem b) const {
  if (p_ == 2) return Elem{a.value ^ b.value};
  if (s_ == 1) return Elem{(a.value + b.value) % p_};
  std::uint32_t out = 0;
  std::uint32_t x = a.value;
  std::uint32_t y = b.value;
  for (std::uint32_t i = 0; i < s_; ++i) {
    out += ((x % p_ + y % p_) % p_) * tables_->pow_p[i];
    x /= p_;
    y /= p_;
  }
  return Elem{out};
}

Elem FieldSpec::neg(Elem a) const {
  if (p_ == 2) return a;
  if (s_ == 1) return Elem{(p_ - a.value) % p_};
  std::uint32_t out = 0;
  std::uint32_t x = a.value;
  for (std::uint32_t i = 0; i < s_; ++i) {
    out += ((p_ - x % p_) % p_) * tables_->pow_p[i];
    x /= p_;
  }
  return Elem{out};
}

Elem FieldSpec::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Elem FieldSpec::mul(Elem a, Elem b) const {
  if (a.value == 0 || b.value == 0) return zero();
  return Elem{tables_->exp[tables_->log[a.value] + tables_->log[b.value]]};
}

Elem FieldSpec::inv(Elem a) const {
  if (a.value == 0) throw InvalidInput("inverse of zero");
  const std::uint32_t l = tables_->log[a.value];
  return Elem{tables_->exp[l == 0 ? 0 : q_ - 1 - l]};
}

Elem FieldSpec::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return one();
  if (a.value == 0) return zero();
  const std::uint64_t l = tables_->log[a.value] * (e % (q_ - 1)) % (q_ - 1);
  return Elem{tables_->exp[l]};
}

std::uint64_t FieldSpec::multiplicative_order(Elem a) const {
  if (a.value == 0) throw InvalidInput("zero has no multiplicative order");
  const std::uint64_t l = tables_->log[a.value];
  std::uint64_t n = q_ - 1;
  std::uint64_t g = l;
  std::uint64_t h = n;
  while (h != 0) {
    const std::uint64_t t = g % h;
    g = h;
    h = t;
  }
  return n / g;
}

Elem FieldSpec::frobenius(Elem x, std::uint32_t t) const {
  Elem y = x;
  for (std::uint32_t i = 0; i < t; ++i) y = pow(y, p_);
  return y;
}

Elem FieldSpec::trace(Elem x) const {
  Elem acc = zero();
  Elem conj = x;
  for (std::uint32_t i = 0; i < s_; ++i) {
    acc = add(acc, conj);
    conj = pow(conj, p_);
  }
  return acc;
}

Elem FieldSpec::mul_poly(Elem a, Elem b) const {
  if (s_ == 1) {
    return Elem{static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.value) * b.value % p_)};
  }
  const auto ca = coeffs(a);
  const auto cb = coeffs(b);
  const Poly pa(ca.begin(), ca.end());
  const Poly pb(cb.begin(), cb.end());
  const Poly m(tables_->modulus.begin(), tables_->modulus.end());
  Poly r = poly_mulmod(pa, pb, m, p_);
  r.resize(s_, 0);
  return from_coeffs(std::vector<std::uint32_t>(r.begin(), r.end()));
}

Elem FieldSpec::inv_euclid(Elem a) const {
  if (a.value == 0) throw InvalidInput("inverse of zero");
  if (s_ == 1) return Elem{static_cast<std::uint32_t>(inv_mod(a.value, p_))};
  const auto ca = coeffs(a);
  Poly r0(tables_->modulus.begin(), tables_->modulus.end());
  Poly r1(ca.begin(), ca.end());
  trim(r1);
  Poly t0{};
  Poly t1{1};
  while (r1.size() > 1) {
    // q = r0 / r1
    Poly quotient(r0.size() - r1.size() + 1, 0);
    Poly rem = r0;
    const std::uint64_t lead_inv = inv_mod(r1.back(), p_);
    while (rem.size() >= r1.size()) {
      const std::uint64_t factor = rem.back() * lead_inv % p_;
      const std::size_t shift = rem.size() - r1.size();
      quotient[shift] = factor;
      for (std::size_t i = 0; i < r1.size(); ++i) {
        rem[shift + i] = (rem[shift + i] + static_cast<std::uint64_t>(p_) * p_ -
                          factor * r1[i] % p_) % p_;
      }
      trim(rem);
    }
    trim(quotient);
    Poly t2 = poly_sub(t0, poly_mul(quotient, t1, p_), p_);
    r0 = std::move(r1);
    r1 = std::move(rem);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  // r1 is a nonzero constant c; inverse is t1 / c.
  const std::uint64_t c_inv = inv_mod(r1[0], p_);
  Poly out = t1;
  for (auto& c : out) c = c * c_inv % p_;
  out = poly_mod(out, Poly(tables_->modulus.begin(), tables_->modulus.end()), p_);
  out.resize(s_, 0);
  return from_coeffs(std::vector<std::uint32_t>(out.begin(), out.end()));
}

std::vector<Elem> elements(const FieldSpec& field) {
  std::vector<Elem> out(field.q());
  for (std::uint32_t i = 0; i < field.q(); ++i) out[i] = Elem{i};
  return out;
}

std::vector<Elem> subfield_elements(const FieldSpec& field, std::uint32_t t) {
  if (t == 0 || field.s() % t != 0) {
    throw InvalidInput("subfield degree " + std::to_string(t) + " does not divide s = " +
                       std::to_string(field.s()));
  }
  std::vector<Elem> out;
  for (const Elem x : elements(field)) {
    if (field.frobenius(x, t) == x) out.push_back(x);
  }
  return out;
}

Character::Character(FieldSpec field, std::vector<std::complex<double>> values)
    : field_(std::move(field)), values_(std::move(values)) {
  if (values_.size() != field_.q()) throw InvalidInput("character table size must equal q");
}

Character additive_character(const FieldSpec& field) {
  std::vector<std::complex<double>> values(field.q());
  const double step = 2.0 * std::numbers::pi / field.p();
  for (const Elem x : elements(field)) {
    const std::uint32_t t = field.trace(x).value;  // in [0, p)
    values[x.value] = std::polar(1.0, step * t);
  }
  return Character(field, std::move(values));
}

}  // namespace chshq
