#include "chshq/hadamard_ic.hpp"

#include <cmath>
#include <string>

#include "chshq/boxes.hpp"
#include "chshq/errors.hpp"
#include "chshq/information.hpp"

namespace chshq {

namespace {

std::uint64_t checked_power(std::uint64_t q, unsigned m, std::uint64_t cap) {
  std::uint64_t n = 1;
  for (unsigned i = 0; i < m; ++i) {
    n *= q;
    if (n > cap) {
      throw CapExceeded(std::to_string(q) + "^" + std::to_string(m) + " exceeds the enumeration cap " +
                        std::to_string(cap));
    }
  }
  return n;
}

// Seed number n as a vector of m digits in base q (first coordinate fastest).
void decode_seed(std::uint64_t n, std::uint32_t q, std::vector<Elem>& out) {
  for (auto& e : out) {
    e = Elem{static_cast<std::uint32_t>(n % q)};
    n /= q;
  }
}

}  // namespace

std::uint64_t hadamard_subcode_size(std::uint64_t q, unsigned m) {
  std::uint64_t qm = 1;
  for (unsigned i = 0; i < m; ++i) qm *= q;
  return (qm - 1) / (q - 1);
}

HadamardTask build_U_m(const FieldSpec& field, unsigned m) {
  if (m == 0) throw InvalidInput("m must be at least 1");
  const std::uint32_t q = field.q();
  const std::uint64_t count = checked_power(q, m, kPairwiseCheckMaxSeeds * 64);
  HadamardTask task{field, m, {}};
  // Lead position k: zeros before, 1 at k, anything after.
  for (unsigned lead = 0; lead < m; ++lead) {
    const unsigned free = m - lead - 1;
    std::uint64_t tails = 1;
    for (unsigned i = 0; i < free; ++i) tails *= q;
    for (std::uint64_t t = 0; t < tails; ++t) {
      Index xi(m, field.zero());
      xi[lead] = field.one();
      std::uint64_t rest = t;
      for (unsigned i = m; i-- > lead + 1;) {
        xi[i] = Elem{static_cast<std::uint32_t>(rest % q)};
        rest /= q;
      }
      task.indices.push_back(std::move(xi));
    }
  }
  if (task.indices.size() != hadamard_subcode_size(q, m) || count < task.indices.size()) {
    throw InvariantViolation("unexpected subcode size");
  }
  return task;
}

Elem hadamard(const FieldSpec& field, std::span<const Elem> seed, std::span<const Elem> xi) {
  if (seed.size() != xi.size()) throw InvalidInput("seed and index dimensions differ");
  Elem acc = field.zero();
  for (std::size_t i = 0; i < xi.size(); ++i) acc = field.add(acc, field.mul(xi[i], seed[i]));
  return acc;
}

bool pairwise_independent(const FieldSpec& field, unsigned m, std::span<const Index> indices) {
  const std::uint32_t q = field.q();
  const std::uint64_t seeds = checked_power(q, m, kPairwiseCheckMaxSeeds);
  for (const auto& xi : indices) {
    if (xi.size() != m) throw InvalidInput("index dimension differs from m");
  }
  if (indices.size() * seeds > (1ULL << 26U)) {
    throw CapExceeded("codeword table of " + std::to_string(indices.size()) + " x " +
                      std::to_string(seeds) + " entries exceeds 2^26");
  }
  // values[k * seeds + n] = Had_{indices[k]}(seed n)
  std::vector<std::uint16_t> values(indices.size() * seeds);
  std::vector<Elem> seed(m);
  for (std::uint64_t n = 0; n < seeds; ++n) {
    decode_seed(n, q, seed);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      values[k * seeds + n] = static_cast<std::uint16_t>(hadamard(field, seed, indices[k]).value);
    }
  }
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(q) * q);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    std::fill(hist.begin(), hist.begin() + q, 0);
    for (std::uint64_t n = 0; n < seeds; ++n) ++hist[values[k * seeds + n]];
    for (std::uint32_t v = 0; v < q; ++v) {
      if (hist[v] * q != seeds) return false;
    }
  }
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      std::fill(hist.begin(), hist.end(), 0);
      for (std::uint64_t n = 0; n < seeds; ++n) {
        ++hist[values[a * seeds + n] * q + values[b * seeds + n]];
      }
      for (const auto h : hist) {
        if (h * q * q != seeds) return false;
      }
    }
  }
  return true;
}

bool pairwise_independence_check(const HadamardTask& task) {
  return pairwise_independent(task.field, task.m, task.indices);
}

IcRow ic_sum(const FieldSpec& field, unsigned m, const Rational& bias) {
  if (bias < 0 || bias > 1) throw InvalidInput("bias must lie in [0, 1]");
  const std::uint32_t q = field.q();
  const ErrorDist error = compose_m(field, RegularBox(q, bias), m);
  Eigen::VectorXd e(q);
  for (std::uint32_t k = 0; k < q; ++k) e[k] = to_double(error.pmf[k]);

  // Pr[X = x, Z = z] = Pr[X = x] Pr[e = z - x], X uniform.
  Eigen::MatrixXd table(q, q);
  for (std::uint32_t x = 0; x < q; ++x) {
    for (std::uint32_t z = 0; z < q; ++z) {
      table(x, z) = e[field.sub(Elem{z}, Elem{x}).value] / q;
    }
  }
  IcRow row;
  row.m = m;
  row.subcode_size = hadamard_subcode_size(q, m);
  row.per_index_mi = mutual_information(JointDist(std::move(table)));
  row.total = row.per_index_mi * static_cast<double>(row.subcode_size);
  row.per_index_mi_entropy_route = std::log2(static_cast<double>(q)) - entropy(e);

  const double em = std::pow(to_double(bias), static_cast<double>(m));
  const double qd = q;
  auto xlog = [](double scale, double arg) { return scale == 0.0 ? 0.0 : scale * std::log2(arg); };
  row.displayed_expression = xlog(1.0 / qd + (qd - 1.0) / qd * em, 1.0 + (qd - 1.0) * em) +
                             xlog((qd - 1.0) / (qd * qd) * (1.0 - em), 1.0 - em);
  return row;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::bounded:
      return "bounded";
    case Verdict::growing:
      return "growing";
    case Verdict::indeterminate:
      break;
  }
  return "indeterminate";
}

Verdict classify(std::span<const double> totals) {
  if (totals.size() < 3) return Verdict::indeterminate;
  const double a = totals[totals.size() - 3];
  const double b = totals[totals.size() - 2];
  const double c = totals[totals.size() - 1];
  if (a >= b && b >= c) return Verdict::bounded;
  if (b >= 1.1 * a && c >= 1.1 * b && b > a && c > b) return Verdict::growing;
  return Verdict::indeterminate;
}

IcSweep ic_dichotomy_experiment(const FieldSpec& field, const Rational& bias, unsigned m_min,
                                unsigned m_max) {
  if (m_min == 0 || m_min > m_max) throw InvalidInput("need 1 <= m_min <= m_max");
  IcSweep sweep;
  std::vector<double> totals;
  for (unsigned m = m_min; m <= m_max; ++m) {
    sweep.rows.push_back(ic_sum(field, m, bias));
    totals.push_back(sweep.rows.back().total);
  }
  sweep.verdict = classify(totals);
  return sweep;
}

}  // namespace chshq
