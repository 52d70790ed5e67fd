#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "chshq/finite_field.hpp"
#include "chshq/game.hpp"
#include "chshq/rational.hpp"

namespace chshq {

struct Point {
  Elem x;
  Elem y;

  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

/// The non-vertical line { (z1, z2) : z2 = slope * z1 - intercept }.
struct Line {
  Elem slope;
  Elem intercept;

  friend constexpr auto operator<=>(const Line&, const Line&) = default;
};

/// Points and lines of F_q^2; both kept sorted and duplicate-free.
struct Config {
  std::vector<Point> points;
  std::vector<Line> lines;

  friend bool operator==(const Config&, const Config&) = default;
};

Config make_config(std::vector<Point> points, std::vector<Line> lines);

bool incident(const FieldSpec& field, const Point& pt, const Line& ln);

std::uint64_t incidences(const FieldSpec& field, const Config& c);

/// Distinct x-coordinates, distinct slopes, at most q of each.
bool is_legal(const FieldSpec& field, const Config& c);

/// Points (x, f(x)) and lines l_{y, g(y)}; incidences equal the strategy's wins.
Config strategy_to_config(const FieldSpec& field, const Strategy& s);

/// Inverse on legal configs; unused inputs map to 0. Throws InvalidInput on
/// an illegal config.
Strategy config_to_strategy(const FieldSpec& field, const Config& c);

/// K x K with lines l_{c,d}, c, d in K, for the index-2 subfield K.
/// q^{3/2} incidences. Requires even s.
Config subfield_construction(const FieldSpec& field);

/// Prime q: points [q^{1/3}] x [q^{2/3}] (integer lifts from 0), lines
/// y = c x + d with c in [q^{1/3}/2], d in [q^{2/3}/2].
Config grid_construction(const FieldSpec& field);

/// Closed-form incidence count of grid_construction:
/// floor(q^{1/3}/2) floor(q^{2/3}/2) floor(q^{1/3}).
std::uint64_t grid_incidence_formula(std::uint64_t q);

std::uint64_t integer_cube_root(std::uint64_t n);

struct SubspaceConstruction {
  Config config;
  /// F_p-dimensions of A, B, C (spans of leading powers of the primitive element).
  std::uint32_t dim_a = 0;
  std::uint32_t dim_b = 0;
  std::uint32_t dim_c = 0;
  /// Probability each line of C x B is kept: 1, 1/p or 1/p^2 by s mod 3.
  double keep_probability = 1.0;
  std::uint64_t unthinned_lines = 0;
  std::uint64_t unthinned_incidences = 0;
};

/// Odd s >= 3: P = A x B, lines l_{c,-d} for c in C, d in B, randomly thinned
/// when s mod 3 != 2. Throws InvalidInput for even s or s < 3.
SubspaceConstruction subspace_construction(const FieldSpec& field, std::uint64_t seed,
                                           bool thin = true);

/// |P|^{3/4} |L|^{3/4} + |P| + |L|
double trivial_incidence_bound(double num_points, double num_lines);

// --- projective plane PG(2, q) ---

/// Homogeneous triple with its first nonzero coordinate scaled to 1.
struct ProjPoint {
  std::array<Elem, 3> coords;

  friend constexpr auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
};

/// The line { (x:y:z) : c0 x + c1 y + c2 z = 0 }, canonicalized the same way.
struct ProjLine {
  std::array<Elem, 3> coeffs;

  friend constexpr auto operator<=>(const ProjLine&, const ProjLine&) = default;
};

/// Throws InvalidInput for the zero triple.
std::array<Elem, 3> canonical_triple(const FieldSpec& field, std::array<Elem, 3> v);

ProjPoint make_proj_point(const FieldSpec& field, std::array<Elem, 3> v);
ProjLine make_proj_line(const FieldSpec& field, std::array<Elem, 3> v);

bool incident(const FieldSpec& field, const ProjPoint& pt, const ProjLine& ln);

/// All q^2 + q + 1 canonical triples in increasing order. Points and lines
/// share this list (duality).
std::vector<std::array<Elem, 3>> canonical_triples(const FieldSpec& field);
std::vector<ProjPoint> projective_points(const FieldSpec& field);
std::vector<ProjLine> projective_lines(const FieldSpec& field);
std::vector<ProjPoint> points_on(const FieldSpec& field, const ProjLine& ln);

ProjPoint lift(const Point& pt);
ProjLine lift(const FieldSpec& field, const Line& ln);
/// Empty for points on z = 0.
std::optional<Point> to_affine(const FieldSpec& field, const ProjPoint& pt);
/// Empty for the line at infinity and for vertical lines (through (0:1:0)).
std::optional<Line> to_affine(const FieldSpec& field, const ProjLine& ln);

ProjLine line_at_infinity(const FieldSpec& field);
ProjPoint vertical_infinity(const FieldSpec& field);

/// Invertible 3x3 matrix over F_q acting on column vectors; lines transform
/// as row vectors by the inverse, so incidence is preserved.
class ProjTransform {
 public:
  using Matrix = std::array<std::array<Elem, 3>, 3>;

  /// Throws InvalidInput when the determinant vanishes.
  ProjTransform(const FieldSpec& field, const Matrix& m);

  const Matrix& matrix() const { return m_; }
  const Matrix& inverse() const { return inv_; }

  ProjPoint apply(const ProjPoint& pt) const;
  ProjLine apply(const ProjLine& ln) const;

  /// Sends `infinity` to z = 0 and `vertical` (a point on it) to (0:1:0).
  static ProjTransform moving_to_infinity(const FieldSpec& field, const ProjLine& infinity,
                                          const ProjPoint& vertical);

 private:
  FieldSpec field_;
  Matrix m_;
  Matrix inv_;
};

Elem determinant(const FieldSpec& field, const ProjTransform::Matrix& m);

std::uint64_t incidences(const FieldSpec& field, const std::vector<ProjPoint>& points,
                         const std::vector<ProjLine>& lines);

struct PlaneCensus {
  std::uint64_t points = 0;
  std::uint64_t lines = 0;
  std::uint64_t points_per_line = 0;
};

/// Enumerates PG(2, q) and checks every line carries the same number of points.
PlaneCensus projective_plane_census(const FieldSpec& field);

/// Over all choices of a new line at infinity other than `first`, the fraction
/// for which `first` and `second` meet it in the same point (so end up parallel).
Rational slope_collision_fraction(const FieldSpec& field, const ProjLine& first,
                                  const ProjLine& second);

struct RegularizationStats {
  std::uint64_t input_points = 0;
  std::uint64_t input_lines = 0;
  std::uint64_t input_incidences = 0;
  std::uint64_t sampled_points = 0;
  std::uint64_t sampled_lines = 0;
  std::uint64_t sampled_incidences = 0;
  /// Incidences among the transformed projective images, before any removal.
  std::uint64_t transformed_incidences = 0;
  std::uint64_t points_at_infinity = 0;
  std::uint64_t lines_removed_infinity_or_vertical = 0;
  std::uint64_t points_removed_same_vertical = 0;
  std::uint64_t lines_removed_same_slope = 0;
  std::uint64_t retained_points = 0;
  std::uint64_t retained_lines = 0;
  std::uint64_t retained_incidences = 0;
  ProjLine infinity{};
  ProjPoint vertical{};
};

struct RegularizationResult {
  Config config;
  RegularizationStats stats;
};

/// Random projective regularization: optionally thin P and L to at most
/// floor(q/2) each, send a uniformly random projective line to infinity with
/// a uniformly random point on it as the vertical direction, drop what lands
/// at infinity or vertical, then keep the smallest point on each vertical
/// line and the smallest line of each slope. The output is always legal.
RegularizationResult random_projective_regularize(const FieldSpec& field, const Config& c,
                                                  std::uint64_t seed, bool downsample = true);

/// The deterministic core of the above for a fixed draw.
RegularizationResult regularize_with(const FieldSpec& field, const Config& c,
                                     const ProjLine& infinity, const ProjPoint& vertical);

}  // namespace chshq
