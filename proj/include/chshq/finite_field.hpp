#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace chshq {

/// Element of F_q stored by its canonical encoding enc(x) = sum c_i p^i,
/// where c_0..c_{s-1} are the polynomial-basis coefficients.
struct Elem {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(Elem, Elem) = default;
};

inline constexpr std::uint64_t kMaxFieldOrder = 1ULL << 16U;

bool is_prime(std::uint64_t n);

/// F_q for q = p^s, represented as F_p[x]/(modulus).
///
/// The modulus is the lexicographically smallest monic irreducible of degree s
/// (coefficients compared from c_0 upward), so encodings are reproducible.
/// For s = 1 the modulus is the degenerate x + 0. Copies share immutable tables
/// and may be used concurrently.
class FieldSpec {
 public:
  /// Throws InvalidInput for non-prime p, s = 0, or q > 2^16.
  static FieldSpec create(std::uint32_t p, std::uint32_t s);

  /// Field of order q; q must be a prime power.
  static FieldSpec of_order(std::uint64_t q);

  /// Field with an explicit monic modulus c_0..c_s (validated irreducible).
  static FieldSpec with_modulus(std::uint32_t p, std::uint32_t s,
                                std::span<const std::uint32_t> modulus);

  std::uint32_t p() const { return p_; }
  std::uint32_t s() const { return s_; }
  std::uint32_t q() const { return q_; }
  /// Monic modulus coefficients c_0..c_s.
  std::span<const std::uint32_t> modulus() const { return tables_->modulus; }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  /// Element with the given encoding; throws InvalidInput if out of range.
  Elem element(std::uint64_t encoding) const;
  /// Image of the integer n under Z -> F_p -> F_q.
  Elem from_integer(std::int64_t n) const;

  std::vector<std::uint32_t> coeffs(Elem x) const;
  Elem from_coeffs(std::span<const std::uint32_t> coeffs) const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  /// Throws InvalidInput on zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  /// Smallest-encoding element of multiplicative order q - 1.
  Elem primitive_element() const { return Elem{tables_->primitive}; }
  std::uint64_t multiplicative_order(Elem a) const;

  /// x -> x^(p^t).
  Elem frobenius(Elem x, std::uint32_t t = 1) const;
  /// Sum of the s Galois conjugates; lands in the prime subfield.
  Elem trace(Elem x) const;

  /// Inverse via the extended Euclidean algorithm on polynomials. Agrees with
  /// inv(); kept as an independent route for tests.
  Elem inv_euclid(Elem a) const;
  /// Schoolbook multiply-and-reduce. Agrees with mul(); independent route.
  Elem mul_poly(Elem a, Elem b) const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.p_ == b.p_ && a.s_ == b.s_ && a.tables_->modulus == b.tables_->modulus;
  }

 private:
  struct Tables {
    std::vector<std::uint32_t> modulus;
    std::vector<std::uint32_t> exp;  // exp[i] = g^i, length 2(q-1)
    std::vector<std::uint32_t> log;  // log[x] for x != 0
    std::vector<std::uint32_t> pow_p;  // p^i, i = 0..s
    std::uint32_t primitive = 1;
  };

  FieldSpec(std::uint32_t p, std::uint32_t s, std::shared_ptr<const Tables> tables);
  static FieldSpec build(std::uint32_t p, std::uint32_t s, std::vector<std::uint32_t> modulus);

  std::uint32_t p_;
  std::uint32_t s_;
  std::uint32_t q_;
  std::shared_ptr<const Tables> tables_;
};

/// All q elements in encoding order.
std::vector<Elem> elements(const FieldSpec& field);

/// Elements fixed by x -> x^(p^t): the subfield of order p^t. Requires t | s.
std::vector<Elem> subfield_elements(const FieldSpec& field, std::uint32_t t);

/// Additive character table, indexed by encoding.
class Character {
 public:
  Character(FieldSpec field, std::vector<std::complex<double>> values);

  const FieldSpec& field() const { return field_; }
  std::complex<double> operator()(Elem x) const { return values_[x.value]; }
  std::span<const std::complex<double>> values() const { return values_; }

 private:
  FieldSpec field_;
  std::vector<std::complex<double>> values_;
};

/// chi(x) = exp(2 pi i Tr(x) / p).
Character additive_character(const FieldSpec& field);

}  // namespace chshq
