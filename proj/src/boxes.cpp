#include "chshq/boxes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chshq/errors.hpp"
#include "chshq/random.hpp"

namespace chshq {

void validate(const ErrorDist& d) {
  Rational total = 0;
  for (const auto& p : d.pmf) {
    if (p < 0) throw InvalidInput("negative error probability");
    total += p;
  }
  if (total != 1) throw InvalidInput("error distribution sums to " + to_string(total));
}

ErrorDist point_mass(std::uint32_t q, Elem at) {
  ErrorDist d{std::vector<Rational>(q, Rational(0))};
  d.pmf.at(at.value) = 1;
  return d;
}

ErrorDist convolve(const FieldSpec& field, const ErrorDist& lhs, const ErrorDist& rhs) {
  const std::uint32_t q = field.q();
  if (lhs.pmf.size() != q || rhs.pmf.size() != q) throw InvalidInput("pmf size must equal q");
  ErrorDist out{std::vector<Rational>(q, Rational(0))};
  for (std::uint32_t a = 0; a < q; ++a) {
    if (lhs.pmf[a] == 0) continue;
    for (std::uint32_t b = 0; b < q; ++b) {
      out.pmf[field.add(Elem{a}, Elem{b}).value] += lhs.pmf[a] * rhs.pmf[b];
    }
  }
  return out;
}

bool is_regular(const ErrorDist& d) {
  if (d.pmf.size() < 2) return true;
  return std::all_of(d.pmf.begin() + 1, d.pmf.end(), [&](const Rational& p) { return p == d.pmf[1]; });
}

RegularBox::RegularBox(std::uint32_t q, Rational bias) : q_(q), bias_(std::move(bias)) {
  if (q < 2) throw InvalidInput("q must be at least 2");
  if (bias_ > 1 || bias_ < Rational(-1, q - 1)) {
    throw InvalidInput("bias " + to_string(bias_) + " outside [-1/(q-1), 1]");
  }
}

Rational RegularBox::p_win() const { return Rational(1, q_) + (q_ - 1) * bias_ / q_; }

ErrorDist RegularBox::error() const {
  ErrorDist d{std::vector<Rational>(q_, (1 - bias_) / q_)};
  d.pmf[0] = p_win();
  return d;
}

RegularBox RegularBox::from_error(const ErrorDist& d) {
  validate(d);
  if (!is_regular(d)) throw InvariantViolation("error distribution is not uniform off zero");
  const auto q = static_cast<std::uint32_t>(d.pmf.size());
  return RegularBox(q, (q * d.pmf[0] - 1) / (q - 1));
}

RegularizedStrategy regularize(const FieldSpec& field, const Strategy& s) {
  validate(field, s);
  const std::uint32_t q = field.q();
  const GameValue original = win_count(field, s);

  // Tally errors as integer counts per input, then normalise once.
  std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(q) * q,
                                                 std::vector<std::uint64_t>(q, 0));
  for (std::uint32_t alpha = 1; alpha < q; ++alpha) {
    for (std::uint32_t beta = 1; beta < q; ++beta) {
      for (std::uint32_t gamma = 0; gamma < q; ++gamma) {
        for (std::uint32_t delta = 0; delta < q; ++delta) {
          const Strategy wrapped =
              affine_transform(field, s, Elem{alpha}, Elem{beta}, Elem{gamma}, Elem{delta});
          for (std::uint32_t x = 0; x < q; ++x) {
            for (std::uint32_t y = 0; y < q; ++y) {
              const Elem e = field.sub(field.add(wrapped.f[x], wrapped.g[y]),
                                       field.mul(Elem{x}, Elem{y}));
              ++counts[x * q + y][e.value];
            }
          }
        }
      }
    }
  }
  const std::uint64_t draws = static_cast<std::uint64_t>(q - 1) * (q - 1) * q * q;

  RegularizedStrategy out{RegularBox(q, 0), {}, original};
  out.per_input.reserve(counts.size());
  for (const auto& row : counts) {
    ErrorDist d{std::vector<Rational>(q)};
    for (std::uint32_t e = 0; e < q; ++e) d.pmf[e] = Rational(row[e], draws);
    out.per_input.push_back(std::move(d));
  }
  for (const auto& d : out.per_input) {
    if (d != out.per_input.front()) throw InvariantViolation("regularized error depends on the input");
  }
  out.box = RegularBox::from_error(out.per_input.front());
  if (out.box.p_win() != original.p_win) {
    throw InvariantViolation("regularization changed the winning probability");
  }
  return out;
}

ErrorDist compose_m(const FieldSpec& field, const RegularBox& box, unsigned m) {
  if (m == 0) throw InvalidInput("m must be at least 1");
  if (box.q() != field.q()) throw InvalidInput("box and field disagree on q");
  const ErrorDist single = box.error();
  ErrorDist acc = single;
  for (unsigned i = 1; i < m; ++i) acc = convolve(field, acc, single);
  return acc;
}

ErrorDist compose_closed_form(std::uint32_t q, const Rational& bias, unsigned m) {
  const Rational em = pow(bias, m);
  ErrorDist d{std::vector<Rational>(q, Rational(1, q) - em / q)};
  d.pmf[0] = Rational(1, q) + (q - 1) * em / q;
  return d;
}

ErrorDist distribute_error(const FieldSpec& field, const RegularBox& box) {
  if (box.q() != field.q()) throw InvalidInput("box and field disagree on q");
  return convolve(field, box.error(), box.error());
}

RegularBox distribute(const FieldSpec& field, const RegularBox& box) {
  return RegularBox::from_error(distribute_error(field, box));
}

namespace {

WinEstimate finish(std::uint64_t wins, std::uint64_t samples) {
  WinEstimate est;
  est.samples = samples;
  est.wins = wins;
  est.mean = static_cast<double>(wins) / static_cast<double>(samples);
  est.stderr_ = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(samples));
  return est;
}

Elem sample(const std::vector<double>& cumulative, Rng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
  return Elem{static_cast<std::uint32_t>(idx)};
}

}  // namespace

WinEstimate monte_carlo_win(const FieldSpec& field, const RegularBox& box, GameKind game,
                            std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidInput("samples must be at least 1");
  const ErrorDist d = box.error();
  std::vector<double> cumulative(d.pmf.size());
  double running = 0.0;
  for (std::size_t i = 0; i < d.pmf.size(); ++i) {
    running += to_double(d.pmf[i]);
    cumulative[i] = running;
  }
  // Pin the tail to exactly 1 from the last entry with mass, so rounding never
  // selects a zero-probability error.
  std::size_t last = d.pmf.size() - 1;
  while (last > 0 && d.pmf[last] == 0) --last;
  std::fill(cumulative.begin() + static_cast<std::ptrdiff_t>(last), cumulative.end(), 1.0);
  Rng rng(seed);
  std::uint64_t wins = 0;
  for (std::uint64_t n = 0; n < samples; ++n) {
    Elem e = sample(cumulative, rng);
    if (game == GameKind::distributed) e = field.add(e, sample(cumulative, rng));
    if (e == field.zero()) ++wins;
  }
  return finish(wins, samples);
}

WinEstimate monte_carlo_win(const FieldSpec& field, const Strategy& s, GameKind game,
                            std::uint64_t samples, std::uint64_t seed) {
  validate(field, s);
  if (samples == 0) throw InvalidInput("samples must be at least 1");
  Rng rng(seed);
  const std::uint32_t q = field.q();
  auto draw = [&] { return Elem{static_cast<std::uint32_t>(rng.below(q))}; };
  std::uint64_t wins = 0;
  for (std::uint64_t n = 0; n < samples; ++n) {
    if (game == GameKind::base) {
      const Elem x = draw();
      const Elem y = draw();
      if (field.add(s.f[x.value], s.g[y.value]) == field.mul(x, y)) ++wins;
      continue;
    }
    const Elem alpha = draw();
    const Elem gamma = draw();
    const Elem beta = draw();
    const Elem delta = draw();
    const Elem a = field.add(field.add(s.f[alpha.value], s.f[gamma.value]), field.mul(alpha, gamma));
    const Elem b = field.add(field.add(s.g[delta.value], s.g[beta.value]), field.mul(beta, delta));
    if (field.add(a, b) == field.mul(field.add(alpha, beta), field.add(gamma, delta))) ++wins;
  }
  return finish(wins, samples);
}

}  // namespace chshq
