#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "chshq/finite_field.hpp"
#include "chshq/rational.hpp"

namespace chshq {

/// Deterministic classical strategy: Alice answers f(x), Bob answers g(y).
struct Strategy {
  std::vector<Elem> f;
  std::vector<Elem> g;

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Winning statistics of a strategy over the q^2 uniform input pairs.
struct GameValue {
  std::uint64_t wins = 0;
  std::uint32_t q = 0;
  Rational p_win;
  /// (q p_win - 1) / (q - 1)
  Rational bias;

  static GameValue from_wins(std::uint32_t q, std::uint64_t wins);
};

struct ValueWithWitness {
  GameValue value;
  Strategy strategy;
};

/// Throws InvalidInput unless both tables are total functions on F_q.
void validate(const FieldSpec& field, const Strategy& s);

Strategy zero_strategy(const FieldSpec& field);

/// Number of (x, y) with f(x) + g(y) = x y.
GameValue win_count(const FieldSpec& field, const Strategy& s);

struct BestResponse {
  std::vector<Elem> table;
  std::uint64_t wins = 0;
};

/// Optimal Bob table against a fixed f: g(y) = most frequent x y - f(x),
/// ties to the smallest encoding.
BestResponse best_response_g(const FieldSpec& field, const std::vector<Elem>& f);
/// Mirror image: f(x) = most frequent x y - g(y).
BestResponse best_response_f(const FieldSpec& field, const std::vector<Elem>& g);

inline constexpr std::uint32_t kExactValueMaxQ = 8;

/// Exact classical value by enumerating every f with f(0) = 0 and pairing it
/// with its best response. Work is about q^(q-1) q^2.
///
/// `threads` = 0 reads CHSHQ_THREADS (default 1). The witness is the
/// lexicographically smallest optimal f regardless of the thread count.
/// Throws CapExceeded for q > 8.
ValueWithWitness exact_classical_value(const FieldSpec& field, unsigned threads = 0);

struct LocalSearchResult {
  ValueWithWitness best;
  /// Wins after each half-step (alternating g then f updates).
  std::vector<std::uint64_t> history;
  unsigned rounds = 0;
  bool converged = false;
};

/// Alternating best response from a random (f, g) until neither update
/// improves, or `max_rounds` rounds. Deterministic given the seed.
LocalSearchResult local_search(const FieldSpec& field, std::uint64_t seed, unsigned max_rounds);

/// Same iteration from a given starting strategy.
LocalSearchResult polish(const FieldSpec& field, Strategy start, unsigned max_rounds);

/// Best of `restarts` local searches (restart 0 polishes the zero strategy,
/// the others start at random). Returns a lower bound on the classical value.
ValueWithWitness search_classical_value(const FieldSpec& field, std::uint64_t seed,
                                        unsigned restarts, unsigned max_rounds = 1000);

/// 1/q + (q-1)/(q sqrt q), the quantum upper bound on the winning probability.
double tsirelson_bound(std::uint64_t q);

/// Affine relabelling used by the regularization wrapper, with the shared
/// randomness (alpha, beta, gamma, delta) fixed:
///   f'(x) = (f(alpha x + gamma) - delta alpha x - gamma delta) / (alpha beta)
///   g'(y) = (g(beta y + delta) - beta gamma y) / (alpha beta)
/// f'(x) + g'(y) - x y equals the original error at the relabelled inputs
/// divided by alpha beta, so win counts agree. alpha, beta must be nonzero.
Strategy affine_transform(const FieldSpec& field, const Strategy& s, Elem alpha, Elem beta,
                          Elem gamma, Elem delta);

}  // namespace chshq
