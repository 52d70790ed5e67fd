#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "chshq/finite_field.hpp"

namespace chshq {

/// Unit vectors u_x, v_y in C^n indexed by F_q, stored as the columns of
/// n x q matrices (column x is the vector for encoding x).
struct VectorFamily {
  Eigen::MatrixXcd u;
  Eigen::MatrixXcd v;

  Eigen::Index dimension() const { return u.rows(); }
};

/// Throws InvalidInput unless u and v share shape and every column has norm 1
/// within 1e-10.
void validate(const VectorFamily& fam);

/// K(x, y) = chi(-x y)
Eigen::MatrixXcd kernel_matrix(const Character& chi);

/// H(x, y) = chi(x y) / sqrt(q); unitary for a nontrivial additive character.
Eigen::MatrixXcd fourier_matrix(const Character& chi);

/// | sum_{x,y} chi(-x y) <u_x, v_y> |, inner product conjugate-linear in u.
double character_bilinear_sum(const VectorFamily& fam, const Character& chi);

/// sqrt(q) sum_i ||u_.(i)||_2 ||v_.(i)||_2: the intermediate quantity in the
/// Cauchy-Schwarz chain between the bilinear sum and q^{3/2}.
double cauchy_schwarz_intermediate(const VectorFamily& fam);

double bilinear_bound(std::uint32_t q);

/// character_bilinear_sum <= q^{3/2} + 1e-9
bool verify_bound(const VectorFamily& fam, const Character& chi);

/// Independent Gaussian directions, normalised.
VectorFamily random_family(std::uint32_t q, Eigen::Index n, std::uint64_t seed);

/// Random family with real entries only (n-dimensional real unit vectors).
VectorFamily random_real_family(std::uint32_t q, Eigen::Index n, std::uint64_t seed);

/// n = q, u_x = e_x, v_y(i) = chi(i y) / sqrt(q); attains q^{3/2}.
VectorFamily fourier_tight_family(const Character& chi);

struct MaximizeResult {
  VectorFamily family;
  double value = 0.0;
  /// Objective after every half-step (u update, then v update).
  std::vector<double> history;
};

/// Alternating maximisation from `start`: with v fixed each u_x becomes
/// w_x / |w_x| for w_x = sum_y chi(-x y) v_y (left alone when w_x = 0), then
/// symmetrically for v.
MaximizeResult maximize_sum(const Character& chi, VectorFamily start, unsigned rounds);

/// Same, from random_family(q, n, seed).
MaximizeResult maximize_sum(const Character& chi, Eigen::Index n, std::uint64_t seed,
                            unsigned rounds);

/// q^{-1/2}: the largest bias compatible with the bilinear bound.
double implied_bias_ceiling(std::uint64_t q);

}  // namespace chshq
