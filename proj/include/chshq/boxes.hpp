#pragma once

#include <cstdint>
#include <vector>

#include "chshq/finite_field.hpp"
#include "chshq/game.hpp"
#include "chshq/rational.hpp"

namespace chshq {

/// Distribution of the error e = a + b - x y over F_q, indexed by encoding.
struct ErrorDist {
  std::vector<Rational> pmf;

  friend bool operator==(const ErrorDist&, const ErrorDist&) = default;
};

/// Throws InvalidInput unless entries are nonnegative and sum to 1.
void validate(const ErrorDist& d);

ErrorDist point_mass(std::uint32_t q, Elem at);

/// Error of a + b where a ~ lhs, b ~ rhs independently (additive convolution over F_q).
ErrorDist convolve(const FieldSpec& field, const ErrorDist& lhs, const ErrorDist& rhs);

/// Every nonzero error equally likely.
bool is_regular(const ErrorDist& d);

/// A box whose error, on every input pair, is 0 with probability
/// 1/q + (q-1)E/q and each nonzero k with probability 1/q - E/q.
class RegularBox {
 public:
  /// Throws InvalidInput unless -1/(q-1) <= bias <= 1.
  RegularBox(std::uint32_t q, Rational bias);

  std::uint32_t q() const { return q_; }
  const Rational& bias() const { return bias_; }
  Rational p_win() const;
  ErrorDist error() const;

  /// Reads E off a regular error distribution. Throws InvariantViolation if
  /// the distribution is not regular.
  static RegularBox from_error(const ErrorDist& d);

  friend bool operator==(const RegularBox&, const RegularBox&) = default;

 private:
  std::uint32_t q_;
  Rational bias_;
};

struct RegularizedStrategy {
  RegularBox box;
  /// Error distribution of the wrapped strategy for each input (x, y), row-major.
  std::vector<ErrorDist> per_input;
  GameValue original;
};

/// Exact error distribution of the affine-relabelling wrapper around a
/// deterministic strategy, averaged over alpha, beta in F_q^* and
/// gamma, delta in F_q. Throws InvariantViolation if the result depends on the
/// input, is not uniform off zero, or changes the winning probability.
RegularizedStrategy regularize(const FieldSpec& field, const Strategy& s);

/// m-fold additive convolution of the box's error: the error of the sum of
/// outputs when the box is used once per coordinate of an inner product.
ErrorDist compose_m(const FieldSpec& field, const RegularBox& box, unsigned m);

/// Closed form of compose_m: p(0) = 1/q + (q-1)E^m/q, p(k != 0) = 1/q - E^m/q.
ErrorDist compose_closed_form(std::uint32_t q, const Rational& bias, unsigned m);

/// Error of the two-use protocol for the distributed game, with target
/// (alpha + beta)(gamma + delta): the convolution of two independent errors.
ErrorDist distribute_error(const FieldSpec& field, const RegularBox& box);

/// Regular box for the distributed game; its bias is E^2.
RegularBox distribute(const FieldSpec& field, const RegularBox& box);

enum class GameKind { base, distributed };

struct WinEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t wins = 0;
};

WinEstimate monte_carlo_win(const FieldSpec& field, const RegularBox& box, GameKind game,
                            std::uint64_t samples, std::uint64_t seed);

/// Plays a deterministic strategy on uniform inputs. For the distributed
/// game the strategy is used on (alpha, delta) and (gamma, beta) and the
/// players add alpha gamma and beta delta respectively.
WinEstimate monte_carlo_win(const FieldSpec& field, const Strategy& s, GameKind game,
                            std::uint64_t samples, std::uint64_t seed);

}  // namespace chshq
