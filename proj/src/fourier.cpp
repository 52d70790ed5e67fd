#include "chshq/fourier.hpp"

#include <cmath>

#include "chshq/errors.hpp"
#include "chshq/random.hpp"

namespace chshq {

void validate(const VectorFamily& fam) {
  if (fam.u.rows() != fam.v.rows() || fam.u.cols() != fam.v.cols()) {
    throw InvalidInput("u and v families must have the same shape");
  }
  if (fam.u.rows() == 0 || fam.u.cols() == 0) throw InvalidInput("empty vector family");
  const Eigen::ArrayXd deviation_u = (fam.u.colwise().norm().array() - 1.0).abs();
  const Eigen::ArrayXd deviation_v = (fam.v.colwise().norm().array() - 1.0).abs();
  if ((deviation_u > 1e-10).any() || (deviation_v > 1e-10).any()) {
    throw InvalidInput("family vectors must have unit norm");
  }
}

Eigen::MatrixXcd kernel_matrix(const Character& chi) {
  const FieldSpec& field = chi.field();
  const auto q = static_cast<Eigen::Index>(field.q());
  Eigen::MatrixXcd k(q, q);
  for (Eigen::Index x = 0; x < q; ++x) {
    for (Eigen::Index y = 0; y < q; ++y) {
      const Elem xy = field.mul(Elem{static_cast<std::uint32_t>(x)}, Elem{static_cast<std::uint32_t>(y)});
      k(x, y) = chi(field.neg(xy));
    }
  }
  return k;
}

Eigen::MatrixXcd fourier_matrix(const Character& chi) {
  // chi(x y) = conj(chi(-x y))
  return kernel_matrix(chi).conjugate() / std::sqrt(static_cast<double>(chi.field().q()));
}

double character_bilinear_sum(const VectorFamily& fam, const Character& chi) {
  validate(fam);
  if (fam.u.cols() != static_cast<Eigen::Index>(chi.field().q())) {
    throw InvalidInput("family must have one vector per field element");
  }
  const Eigen::MatrixXcd gram = fam.u.adjoint() * fam.v;  // <u_x, v_y>
  return std::abs((gram.array() * kernel_matrix(chi).array()).sum());
}

double cauchy_schwarz_intermediate(const VectorFamily& fam) {
  const double q = static_cast<double>(fam.u.cols());
  return std::sqrt(q) * fam.u.rowwise().norm().dot(fam.v.rowwise().norm());
}

double bilinear_bound(std::uint32_t q) {
  const double qd = q;
  return qd * std::sqrt(qd);
}

bool verify_bound(const VectorFamily& fam, const Character& chi) {
  return character_bilinear_sum(fam, chi) <= bilinear_bound(chi.field().q()) + 1e-9;
}

namespace {

Eigen::MatrixXcd random_unit_columns(Eigen::Index n, Eigen::Index count, Rng& rng, bool real) {
  Eigen::MatrixXcd m(n, count);
  for (Eigen::Index c = 0; c < count; ++c) {
    do {
      for (Eigen::Index r = 0; r < n; ++r) {
        const double re = rng.normal();
        const double im = real ? 0.0 : rng.normal();
        m(r, c) = {re, im};
      }
    } while (m.col(c).norm() < 1e-12);
    m.col(c).normalize();
  }
  return m;
}

}  // namespace

VectorFamily random_family(std::uint32_t q, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("dimension must be at least 1");
  Rng rng(seed);
  VectorFamily fam;
  fam.u = random_unit_columns(n, q, rng, false);
  fam.v = random_unit_columns(n, q, rng, false);
  return fam;
}

VectorFamily random_real_family(std::uint32_t q, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("dimension must be at least 1");
  Rng rng(seed);
  VectorFamily fam;
  fam.u = random_unit_columns(n, q, rng, true);
  fam.v = random_unit_columns(n, q, rng, true);
  return fam;
}

VectorFamily fourier_tight_family(const Character& chi) {
  const auto q = static_cast<Eigen::Index>(chi.field().q());
  VectorFamily fam;
  fam.u = Eigen::MatrixXcd::Identity(q, q);
  fam.v = fourier_matrix(chi);  // v_y(i) = chi(i y) / sqrt(q)
  return fam;
}

namespace {

// Replace each column of `target` by the normalised column of `direction`,
// leaving it unchanged where the direction vanishes. Returns sum of norms.
double align_columns(Eigen::MatrixXcd& target, const Eigen::MatrixXcd& direction) {
  double objective = 0.0;
  for (Eigen::Index c = 0; c < direction.cols(); ++c) {
    const double norm = direction.col(c).norm();
    objective += norm;
    if (norm > 1e-14) target.col(c) = direction.col(c) / norm;
  }
  return objective;
}

}  // namespace

MaximizeResult maximize_sum(const Character& chi, VectorFamily start, unsigned rounds) {
  if (rounds < 1) throw InvalidInput("rounds must be at least 1");
  validate(start);
  const Eigen::MatrixXcd k = kernel_matrix(chi);
  MaximizeResult out;
  out.family = std::move(start);
  for (unsigned r = 0; r < rounds; ++r) {
    const Eigen::MatrixXcd w = out.family.v * k.transpose();  // w_x = sum_y K(x,y) v_y
    out.history.push_back(align_columns(out.family.u, w));
    const Eigen::MatrixXcd z = out.family.u * k.conjugate();  // z_y = sum_x conj K(x,y) u_x
    out.history.push_back(align_columns(out.family.v, z));
  }
  out.value = character_bilinear_sum(out.family, chi);
  return out;
}

MaximizeResult maximize_sum(const Character& chi, Eigen::Index n, std::uint64_t seed,
                            unsigned rounds) {
  return maximize_sum(chi, random_family(chi.field().q(), n, seed), rounds);
}

double implied_bias_ceiling(std::uint64_t q) {
  if (q < 2) throw InvalidInput("q must be at least 2");
  return 1.0 / std::sqrt(static_cast<double>(q));
}

}  // namespace chshq
