#include "chshq/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "chshq/errors.hpp"
#include "chshq/random.hpp"

namespace chshq {

GameValue GameValue::from_wins(std::uint32_t q, std::uint64_t wins) {
  GameValue v;
  v.q = q;
  v.wins = wins;
  v.p_win = Rational(wins, static_cast<std::uint64_t>(q) * q);
  v.bias = (q * v.p_win - 1) / (q - 1);
  return v;
}

void validate(const FieldSpec& field, const Strategy& s) {
  if (s.f.size() != field.q() || s.g.size() != field.q()) {
    throw InvalidInput("strategy tables must have exactly q entries");
  }
  for (const auto& table : {s.f, s.g}) {
    for (const Elem e : table) {
      if (e.value >= field.q()) throw InvalidInput("strategy entry outside F_q");
    }
  }
}

Strategy zero_strategy(const FieldSpec& field) {
  return Strategy{std::vector<Elem>(field.q()), std::vector<Elem>(field.q())};
}

GameValue win_count(const FieldSpec& field, const Strategy& s) {
  validate(field, s);
  std::uint64_t wins = 0;
  for (std::uint32_t x = 0; x < field.q(); ++x) {
    for (std::uint32_t y = 0; y < field.q(); ++y) {
      if (field.add(s.f[x], s.g[y]) == field.mul(Elem{x}, Elem{y})) ++wins;
    }
  }
  return GameValue::from_wins(field.q(), wins);
}

namespace {

// For each `outer` value u, pick the most frequent xy - other(v) over v.
BestResponse best_response(const FieldSpec& field, const std::vector<Elem>& other) {
  const std::uint32_t q = field.q();
  if (other.size() != q) throw InvalidInput("strategy table must have exactly q entries");
  BestResponse out;
  out.table.resize(q);
  std::vector<std::uint32_t> counts(q);
  for (std::uint32_t u = 0; u < q; ++u) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint32_t v = 0; v < q; ++v) {
      ++counts[field.sub(field.mul(Elem{u}, Elem{v}), other[v]).value];
    }
    const auto best = std::max_element(counts.begin(), counts.end());  // first max wins ties
    out.table[u] = Elem{static_cast<std::uint32_t>(best - counts.begin())};
    out.wins += *best;
  }
  return out;
}

struct SearchTables {
  std::uint32_t q;
  std::vector<std::uint8_t> product;     // product[x*q + y] = x y
  std::vector<std::uint8_t> difference;  // difference[a*q + b] = a - b
};

struct PartialBest {
  std::uint64_t wins = 0;
  std::vector<std::uint8_t> f;
};

PartialBest search_partition(const SearchTables& t, unsigned part, unsigned parts) {
  const std::uint32_t q = t.q;
  PartialBest best;
  std::vector<std::uint8_t> f(q, 0);
  std::vector<std::uint32_t> counts(q);

  auto evaluate = [&]() {
    std::uint64_t wins = 0;
    for (std::uint32_t y = 0; y < q; ++y) {
      std::fill(counts.begin(), counts.end(), 0);
      std::uint32_t top = 0;
      for (std::uint32_t x = 0; x < q; ++x) {
        const std::uint32_t c = ++counts[t.difference[t.product[x * q + y] * q + f[x]]];
        top = std::max(top, c);
      }
      wins += top;
    }
    if (wins > best.wins || best.f.empty()) {
      best.wins = wins;
      best.f = f;
    }
  };

  // f(1) selects the partition; f(2..q-1) enumerated as an odometer (last digit fastest).
  for (std::uint32_t lead = part; lead < q; lead += parts) {
    f[1] = static_cast<std::uint8_t>(lead);
    std::fill(f.begin() + 2, f.end(), 0);
    while (true) {
      evaluate();
      std::uint32_t i = q - 1;
      while (i >= 2 && f[i] == q - 1) {
        f[i] = 0;
        --i;
      }
      if (i < 2) break;
      ++f[i];
    }
  }
  return best;
}

unsigned thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CHSHQ_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return 1;
}

}  // namespace

BestResponse best_response_g(const FieldSpec& field, const std::vector<Elem>& f) {
  return best_response(field, f);
}

BestResponse best_response_f(const FieldSpec& field, const std::vector<Elem>& g) {
  return best_response(field, g);
}

ValueWithWitness exact_classical_value(const FieldSpec& field, unsigned threads) {
  const std::uint32_t q = field.q();
  if (q > kExactValueMaxQ) {
    throw CapExceeded("exact classical value is limited to q <= " +
                      std::to_string(kExactValueMaxQ) + " (got q = " + std::to_string(q) + ")");
  }
  SearchTables t{q, std::vector<std::uint8_t>(q * q), std::vector<std::uint8_t>(q * q)};
  for (std::uint32_t a = 0; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      t.product[a * q + b] = static_cast<std::uint8_t>(field.mul(Elem{a}, Elem{b}).value);
      t.difference[a * q + b] = static_cast<std::uint8_t>(field.sub(Elem{a}, Elem{b}).value);
    }
  }

  const unsigned parts = std::min<unsigned>(thread_count(threads), q);
  std::vector<PartialBest> results(parts);
  if (parts == 1) {
    results[0] = search_partition(t, 0, 1);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(parts);
    for (unsigned k = 0; k < parts; ++k) {
      workers.emplace_back([&, k] { results[k] = search_partition(t, k, parts); });
    }
  }

  PartialBest best;
  for (const auto& r : results) {
    if (r.f.empty()) continue;
    if (best.f.empty() || r.wins > best.wins || (r.wins == best.wins && r.f < best.f)) best = r;
  }

  ValueWithWitness out;
  out.strategy.f.resize(q);
  for (std::uint32_t x = 0; x < q; ++x) out.strategy.f[x] = Elem{best.f[x]};
  auto response = best_response_g(field, out.strategy.f);
  out.strategy.g = std::move(response.table);
  out.value = win_count(field, out.strategy);
  if (out.value.wins != best.wins || response.wins != best.wins) {
    throw InvariantViolation("exhaustive search witness does not reproduce its win count");
  }
  return out;
}

LocalSearchResult polish(const FieldSpec& field, Strategy start, unsigned max_rounds) {
  validate(field, start);
  LocalSearchResult out;
  Strategy current = std::move(start);
  std::uint64_t wins = win_count(field, current).wins;
  out.history.push_back(wins);
  for (unsigned round = 0; round < max_rounds; ++round) {
    auto g = best_response_g(field, current.f);
    current.g = std::move(g.table);
    out.history.push_back(g.wins);
    auto f = best_response_f(field, current.g);
    current.f = std::move(f.table);
    out.history.push_back(f.wins);
    out.rounds = round + 1;
    if (f.wins <= wins) {
      out.converged = true;
      wins = f.wins;
      break;
    }
    wins = f.wins;
  }
  out.best.value = win_count(field, current);
  out.best.strategy = std::move(current);
  if (out.best.value.wins != wins) throw InvariantViolation("local search bookkeeping mismatch");
  return out;
}

LocalSearchResult local_search(const FieldSpec& field, std::uint64_t seed, unsigned max_rounds) {
  Rng rng(seed);
  Strategy start{std::vector<Elem>(field.q()), std::vector<Elem>(field.q())};
  for (auto& e : start.f) e = Elem{static_cast<std::uint32_t>(rng.below(field.q()))};
  for (auto& e : start.g) e = Elem{static_cast<std::uint32_t>(rng.below(field.q()))};
  return polish(field, std::move(start), max_rounds);
}

ValueWithWitness search_classical_value(const FieldSpec& field, std::uint64_t seed,
                                        unsigned restarts, unsigned max_rounds) {
  ValueWithWitness best = polish(field, zero_strategy(field), max_rounds).best;
  for (unsigned r = 1; r < restarts; ++r) {
    auto candidate = local_search(field, derive_seed(seed, r), max_rounds).best;
    if (candidate.value.wins > best.value.wins) best = std::move(candidate);
  }
  return best;
}

double tsirelson_bound(std::uint64_t q) {
  if (q < 2) throw InvalidInput("q must be at least 2");
  const double qd = static_cast<double>(q);
  return 1.0 / qd + (qd - 1.0) / (qd * std::sqrt(qd));
}

Strategy affine_transform(const FieldSpec& field, const Strategy& s, Elem alpha, Elem beta,
                          Elem gamma, Elem delta) {
  validate(field, s);
  if (alpha == field.zero() || beta == field.zero()) {
    throw InvalidInput("alpha and beta must be nonzero");
  }
  const Elem scale = field.inv(field.mul(alpha, beta));
  Strategy out{std::vector<Elem>(field.q()), std::vector<Elem>(field.q())};
  for (std::uint32_t i = 0; i < field.q(); ++i) {
    const Elem x{i};
    const Elem a_tilde = s.f[field.add(field.mul(alpha, x), gamma).value];
    const Elem shift_a = field.add(field.mul(field.mul(delta, alpha), x), field.mul(gamma, delta));
    out.f[i] = field.mul(scale, field.sub(a_tilde, shift_a));

    const Elem y{i};
    const Elem b_tilde = s.g[field.add(field.mul(beta, y), delta).value];
    const Elem shift_b = field.mul(field.mul(beta, gamma), y);
    out.g[i] = field.mul(scale, field.sub(b_tilde, shift_b));
  }
  return out;
}

}  // namespace chshq
