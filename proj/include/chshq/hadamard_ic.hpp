#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "chshq/finite_field.hpp"
#include "chshq/rational.hpp"

namespace chshq {

using Index = std::vector<Elem>;

/// Pairwise-independent subcode of the generalized Hadamard code: the
/// indices xi in F_q^m whose first nonzero coordinate is 1, one per point of
/// PG(m-1, q).
struct HadamardTask {
  FieldSpec field;
  unsigned m = 0;
  std::vector<Index> indices;
};

HadamardTask build_U_m(const FieldSpec& field, unsigned m);

/// (q^m - 1) / (q - 1)
std::uint64_t hadamard_subcode_size(std::uint64_t q, unsigned m);

/// Had_xi(Y) = sum_i xi_i Y_i
Elem hadamard(const FieldSpec& field, std::span<const Elem> seed, std::span<const Elem> xi);

inline constexpr std::uint64_t kPairwiseCheckMaxSeeds = 1ULL << 20U;

/// Exhaustive over all q^m seeds: every coordinate is uniform on F_q and every
/// pair of distinct indices is uniform on F_q^2. Throws CapExceeded when
/// q^m > 2^20.
bool pairwise_independent(const FieldSpec& field, unsigned m, std::span<const Index> indices);
bool pairwise_independence_check(const HadamardTask& task);

struct IcRow {
  unsigned m = 0;
  std::uint64_t subcode_size = 0;
  /// I(X_xi; Z) from the explicit joint table.
  double per_index_mi = 0.0;
  double total = 0.0;
  /// Independent route: Z is uniform, so I = log2 q - H(error).
  double per_index_mi_entropy_route = 0.0;
  /// The two-term display with coefficient (q-1)/q^2 on the second term, for
  /// comparison only.
  double displayed_expression = 0.0;
};

/// Bob's output is Z = X_xi + e with e the m-fold composed error of a regular
/// box of bias E; the information sum multiplies the per-index MI by |U_m|.
/// Requires 0 <= E <= 1.
IcRow ic_sum(const FieldSpec& field, unsigned m, const Rational& bias);

enum class Verdict { bounded, growing, indeterminate };

std::string_view to_string(Verdict v);

/// "bounded" when the last three totals are nonincreasing, "growing" when
/// each of the last two is at least 1.1 times its predecessor.
Verdict classify(std::span<const double> totals);

struct IcSweep {
  std::vector<IcRow> rows;
  Verdict verdict = Verdict::indeterminate;
};

IcSweep ic_dichotomy_experiment(const FieldSpec& field, const Rational& bias, unsigned m_min,
                                unsigned m_max);

}  // namespace chshq
