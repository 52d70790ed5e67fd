#include "chshq/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chshq/errors.hpp"
#include "chshq/random.hpp"

namespace chshq {

Config make_config(std::vector<Point> points, std::vector<Line> lines) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  return Config{std::move(points), std::move(lines)};
}

bool incident(const FieldSpec& field, const Point& pt, const Line& ln) {
  return pt.y == field.sub(field.mul(ln.slope, pt.x), ln.intercept);
}

std::uint64_t incidences(const FieldSpec& field, const Config& c) {
  std::uint64_t count = 0;
  for (const Line& ln : c.lines) {
    for (const Point& pt : c.points) {
      if (incident(field, pt, ln)) ++count;
    }
  }
  return count;
}

bool is_legal(const FieldSpec& field, const Config& c) {
  if (c.points.size() > field.q() || c.lines.size() > field.q()) return false;
  std::vector<bool> seen(field.q(), false);
  for (const Point& pt : c.points) {
    if (seen[pt.x.value]) return false;
    seen[pt.x.value] = true;
  }
  std::fill(seen.begin(), seen.end(), false);
  for (const Line& ln : c.lines) {
    if (seen[ln.slope.value]) return false;
    seen[ln.slope.value] = true;
  }
  return true;
}

Config strategy_to_config(const FieldSpec& field, const Strategy& s) {
  validate(field, s);
  std::vector<Point> points;
  std::vector<Line> lines;
  for (std::uint32_t i = 0; i < field.q(); ++i) {
    points.push_back(Point{Elem{i}, s.f[i]});
    lines.push_back(Line{Elem{i}, s.g[i]});
  }
  return make_config(std::move(points), std::move(lines));
}

Strategy config_to_strategy(const FieldSpec& field, const Config& c) {
  for (const Point& pt : c.points) {
    if (pt.x.value >= field.q() || pt.y.value >= field.q()) throw InvalidInput("point outside F_q^2");
  }
  for (const Line& ln : c.lines) {
    if (ln.slope.value >= field.q() || ln.intercept.value >= field.q()) {
      throw InvalidInput("line parameters outside F_q");
    }
  }
  if (!is_legal(field, c)) {
    throw InvalidInput("config is not legal: points need distinct x-coordinates and lines distinct slopes");
  }
  Strategy s = zero_strategy(field);
  for (const Point& pt : c.points) s.f[pt.x.value] = pt.y;
  for (const Line& ln : c.lines) s.g[ln.slope.value] = ln.intercept;
  return s;
}

Config subfield_construction(const FieldSpec& field) {
  if (field.s() % 2 != 0) {
    throw InvalidInput("subfield construction needs an even extension degree (s = " +
                       std::to_string(field.s()) + ")");
  }
  const auto k = subfield_elements(field, field.s() / 2);
  std::vector<Point> points;
  std::vector<Line> lines;
  for (const Elem a : k) {
    for (const Elem b : k) {
      points.push_back(Point{a, b});
      lines.push_back(Line{a, b});
    }
  }
  return make_config(std::move(points), std::move(lines));
}

std::uint64_t integer_cube_root(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
  while (r > 0 && r * r * r > n) --r;
  while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t grid_incidence_formula(std::uint64_t q) {
  const std::uint64_t cube = integer_cube_root(q);
  const std::uint64_t square = integer_cube_root(q * q);
  return (cube / 2) * (square / 2) * cube;
}

Config grid_construction(const FieldSpec& field) {
  if (field.s() != 1) throw InvalidInput("grid construction needs a prime field");
  const std::uint64_t q = field.q();
  const std::uint64_t width = integer_cube_root(q);        // floor(q^{1/3})
  const std::uint64_t height = integer_cube_root(q * q);   // floor(q^{2/3})
  const std::uint64_t slopes = width / 2;                  // floor(q^{1/3} / 2)
  const std::uint64_t offsets = height / 2;                // floor(q^{2/3} / 2)
  std::vector<Point> points;
  points.reserve(width * height);
  for (std::uint64_t x = 0; x < width; ++x) {
    for (std::uint64_t y = 0; y < height; ++y) {
      points.push_back(Point{field.element(x), field.element(y)});
    }
  }
  std::vector<Line> lines;
  for (std::uint64_t c = 0; c < slopes; ++c) {
    for (std::uint64_t d = 0; d < offsets; ++d) {
      // y = c x + d  is  l_{c, -d}
      lines.push_back(Line{field.element(c), field.neg(field.element(d))});
    }
  }
  return make_config(std::move(points), std::move(lines));
}

namespace {

std::vector<Elem> power_span(const FieldSpec& field, Elem g, std::uint32_t dim) {
  std::vector<Elem> basis;
  Elem power = field.one();
  for (std::uint32_t i = 0; i < dim; ++i) {
    basis.push_back(power);
    power = field.mul(power, g);
  }
  std::vector<Elem> span{field.zero()};
  for (const Elem b : basis) {
    std::vector<Elem> next;
    next.reserve(span.size() * field.p());
    for (const Elem v : span) {
      for (std::uint32_t c = 0; c < field.p(); ++c) {
        next.push_back(field.add(v, field.mul(field.from_integer(c), b)));
      }
    }
    span = std::move(next);
  }
  std::sort(span.begin(), span.end());
  return span;
}

}  // namespace

SubspaceConstruction subspace_construction(const FieldSpec& field, std::uint64_t seed, bool thin) {
  const std::uint32_t s = field.s();
  if (s % 2 == 0 || s < 3) {
    throw InvalidInput("subspace construction needs odd s >= 3 (s = " + std::to_string(s) + ")");
  }
  SubspaceConstruction out;
  const std::uint32_t k = s / 3;
  switch (s % 3) {
    case 0:
      out.dim_b = 2 * k;
      out.keep_probability = 1.0 / field.p();
      break;
    case 1:
      out.dim_b = 2 * k + 1;
      out.keep_probability = 1.0 / (static_cast<double>(field.p()) * field.p());
      break;
    default:
      // the integer in [2s/3 - 1/2, 2s/3 - 1/3]
      out.dim_b = 2 * k + 1;
      out.keep_probability = 1.0;
      break;
  }
  out.dim_a = s - out.dim_b;
  out.dim_c = out.dim_b - out.dim_a + 1;

  const Elem g = field.primitive_element();
  const auto a_set = power_span(field, g, out.dim_a);
  const auto b_set = power_span(field, g, out.dim_b);
  const auto c_set = power_span(field, g, out.dim_c);

  std::vector<Point> points;
  points.reserve(a_set.size() * b_set.size());
  for (const Elem x : a_set) {
    for (const Elem y : b_set) points.push_back(Point{x, y});
  }
  std::vector<Line> all_lines;
  for (const Elem c : c_set) {
    for (const Elem d : b_set) all_lines.push_back(Line{c, field.neg(d)});
  }
  Config unthinned = make_config(points, all_lines);
  out.unthinned_lines = unthinned.lines.size();
  out.unthinned_incidences = incidences(field, unthinned);

  if (!thin || out.keep_probability >= 1.0) {
    out.config = std::move(unthinned);
    return out;
  }
  Rng rng(seed);
  std::vector<Line> kept;
  for (const Line& ln : unthinned.lines) {
    if (rng.bernoulli(out.keep_probability)) kept.push_back(ln);
  }
  out.config = make_config(std::move(unthinned.points), std::move(kept));
  return out;
}

double trivial_incidence_bound(double num_points, double num_lines) {
  if (num_points < 0 || num_lines < 0) throw InvalidInput("counts must be nonnegative");
  return std::pow(num_points, 0.75) * std::pow(num_lines, 0.75) + num_points + num_lines;
}

// --- projective plane ---

std::array<Elem, 3> canonical_triple(const FieldSpec& field, std::array<Elem, 3> v) {
  for (const Elem lead : v) {
    if (lead != field.zero()) {
      const Elem scale = field.inv(lead);
      for (Elem& c : v) c = field.mul(c, scale);
      return v;
    }
  }
  throw InvalidInput("the zero triple is not a projective point");
}

ProjPoint make_proj_point(const FieldSpec& field, std::array<Elem, 3> v) {
  return ProjPoint{canonical_triple(field, v)};
}

ProjLine make_proj_line(const FieldSpec& field, std::array<Elem, 3> v) {
  return ProjLine{canonical_triple(field, v)};
}

namespace {

Elem dot(const FieldSpec& field, const std::array<Elem, 3>& a, const std::array<Elem, 3>& b) {
  Elem acc = field.zero();
  for (std::size_t i = 0; i < 3; ++i) acc = field.add(acc, field.mul(a[i], b[i]));
  return acc;
}

}  // namespace

bool incident(const FieldSpec& field, const ProjPoint& pt, const ProjLine& ln) {
  return dot(field, pt.coords, ln.coeffs) == field.zero();
}

std::vector<std::array<Elem, 3>> canonical_triples(const FieldSpec& field) {
  const std::uint32_t q = field.q();
  std::vector<std::array<Elem, 3>> out;
  out.reserve(static_cast<std::size_t>(q) * q + q + 1);
  out.push_back({field.zero(), field.zero(), field.one()});
  for (std::uint32_t z = 0; z < q; ++z) out.push_back({field.zero(), field.one(), Elem{z}});
  for (std::uint32_t y = 0; y < q; ++y) {
    for (std::uint32_t z = 0; z < q; ++z) out.push_back({field.one(), Elem{y}, Elem{z}});
  }
  return out;
}

std::vector<ProjPoint> projective_points(const FieldSpec& field) {
  std::vector<ProjPoint> out;
  for (const auto& t : canonical_triples(field)) out.push_back(ProjPoint{t});
  return out;
}

std::vector<ProjLine> projective_lines(const FieldSpec& field) {
  std::vector<ProjLine> out;
  for (const auto& t : canonical_triples(field)) out.push_back(ProjLine{t});
  return out;
}

std::vector<ProjPoint> points_on(const FieldSpec& field, const ProjLine& ln) {
  std::vector<ProjPoint> out;
  for (const auto& t : canonical_triples(field)) {
    if (dot(field, t, ln.coeffs) == field.zero()) out.push_back(ProjPoint{t});
  }
  return out;
}

ProjPoint lift(const Point& pt) { return ProjPoint{{pt.x, pt.y, Elem{1}}}; }

ProjLine lift(const FieldSpec& field, const Line& ln) {
  // slope x - y - intercept z = 0
  return make_proj_line(field, {ln.slope, field.neg(field.one()), field.neg(ln.intercept)});
}

std::optional<Point> to_affine(const FieldSpec& field, const ProjPoint& pt) {
  const auto& c = pt.coords;
  if (c[2] == field.zero()) return std::nullopt;
  const Elem scale = field.inv(c[2]);
  return Point{field.mul(c[0], scale), field.mul(c[1], scale)};
}

std::optional<Line> to_affine(const FieldSpec& field, const ProjLine& ln) {
  const auto& c = ln.coeffs;
  if (c[1] == field.zero()) return std::nullopt;  // vertical, or z = 0 itself
  const Elem m_inv = field.inv(c[1]);
  return Line{field.neg(field.mul(c[0], m_inv)), field.mul(c[2], m_inv)};
}

ProjLine line_at_infinity(const FieldSpec& field) {
  return ProjLine{{field.zero(), field.zero(), field.one()}};
}

ProjPoint vertical_infinity(const FieldSpec& field) {
  return ProjPoint{{field.zero(), field.one(), field.zero()}};
}

Elem determinant(const FieldSpec& field, const ProjTransform::Matrix& m) {
  auto minor = [&](int r0, int r1, int c0, int c1) {
    return field.sub(field.mul(m[r0][c0], m[r1][c1]), field.mul(m[r0][c1], m[r1][c0]));
  };
  Elem det = field.mul(m[0][0], minor(1, 2, 1, 2));
  det = field.sub(det, field.mul(m[0][1], minor(1, 2, 0, 2)));
  det = field.add(det, field.mul(m[0][2], minor(1, 2, 0, 1)));
  return det;
}

ProjTransform::ProjTransform(const FieldSpec& field, const Matrix& m) : field_(field), m_(m) {
  const Elem det = determinant(field, m);
  if (det == field.zero()) throw InvalidInput("projective transform must be invertible");
  const Elem det_inv = field.inv(det);
  // inverse = adjugate / det; adj[j][i] = cofactor(i, j)
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (i + 1) % 3;
      const int r1 = (i + 2) % 3;
      const int c0 = (j + 1) % 3;
      const int c1 = (j + 2) % 3;
      const Elem cof = field.sub(field.mul(m[r0][c0], m[r1][c1]), field.mul(m[r0][c1], m[r1][c0]));
      inv_[j][i] = field.mul(cof, det_inv);
    }
  }
}

ProjPoint ProjTransform::apply(const ProjPoint& pt) const {
  std::array<Elem, 3> out{};
  for (int r = 0; r < 3; ++r) out[r] = dot(field_, m_[r], pt.coords);
  return make_proj_point(field_, out);
}

ProjLine ProjTransform::apply(const ProjLine& ln) const {
  std::array<Elem, 3> out{};
  for (int c = 0; c < 3; ++c) {
    Elem acc = field_.zero();
    for (int r = 0; r < 3; ++r) acc = field_.add(acc, field_.mul(ln.coeffs[r], inv_[r][c]));
    out[c] = acc;
  }
  return make_proj_line(field_, out);
}

ProjTransform ProjTransform::moving_to_infinity(const FieldSpec& field, const ProjLine& infinity,
                                                const ProjPoint& vertical) {
  if (!incident(field, vertical, infinity)) {
    throw InvalidInput("vertical point must lie on the chosen line at infinity");
  }
  // Rows r0, r2 span the annihilator of `vertical` (r2 = the new z = 0 line);
  // r1 pairs nontrivially with `vertical`, so it maps to (0:1:0).
  Matrix m{};
  m[2] = infinity.coeffs;
  bool found = false;
  for (const auto& t : canonical_triples(field)) {
    if (t == infinity.coeffs || dot(field, t, vertical.coords) != field.zero()) continue;
    m[0] = t;
    found = true;
    break;
  }
  if (!found) throw InvariantViolation("no complementary row for projective transform");
  for (int i = 0; i < 3; ++i) {
    if (vertical.coords[i] != field.zero()) {
      m[1] = {field.zero(), field.zero(), field.zero()};
      m[1][i] = field.one();
      break;
    }
  }
  return ProjTransform(field, m);
}

std::uint64_t incidences(const FieldSpec& field, const std::vector<ProjPoint>& points,
                         const std::vector<ProjLine>& lines) {
  std::uint64_t count = 0;
  for (const auto& ln : lines) {
    for (const auto& pt : points) {
      if (incident(field, pt, ln)) ++count;
    }
  }
  return count;
}

PlaneCensus projective_plane_census(const FieldSpec& field) {
  PlaneCensus census;
  const auto points = projective_points(field);
  const auto lines = projective_lines(field);
  census.points = points.size();
  census.lines = lines.size();
  std::vector<std::uint64_t> per_point(points.size(), 0);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    std::uint64_t on_line = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (incident(field, points[i], lines[l])) {
        ++on_line;
        ++per_point[i];
      }
    }
    if (l == 0) census.points_per_line = on_line;
    if (on_line != census.points_per_line) {
      throw InvariantViolation("projective lines of unequal size");
    }
  }
  for (const auto n : per_point) {
    if (n != census.points_per_line) throw InvariantViolation("point and line degrees differ");
  }
  return census;
}

Rational slope_collision_fraction(const FieldSpec& field, const ProjLine& first,
                                  const ProjLine& second) {
  if (first == second) throw InvalidInput("lines must be distinct");
  // Meeting point of the two lines: cross product of their coefficient vectors.
  const auto& a = first.coeffs;
  const auto& b = second.coeffs;
  const ProjPoint meet = make_proj_point(
      field, {field.sub(field.mul(a[1], b[2]), field.mul(a[2], b[1])),
              field.sub(field.mul(a[2], b[0]), field.mul(a[0], b[2])),
              field.sub(field.mul(a[0], b[1]), field.mul(a[1], b[0]))});
  std::uint64_t candidates = 0;
  std::uint64_t collisions = 0;
  for (const auto& candidate : projective_lines(field)) {
    if (candidate == first) continue;
    ++candidates;
    if (incident(field, meet, candidate)) ++collisions;
  }
  return Rational(collisions, candidates);
}

namespace {

template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> items, std::size_t keep, Rng& rng) {
  if (items.size() <= keep) return items;
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + rng.below(items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(keep);
  std::sort(items.begin(), items.end());
  return items;
}

}  // namespace

RegularizationResult regularize_with(const FieldSpec& field, const Config& c,
                                     const ProjLine& infinity, const ProjPoint& vertical) {
  const ProjTransform transform = ProjTransform::moving_to_infinity(field, infinity, vertical);
  RegularizationResult out;
  out.stats.infinity = infinity;
  out.stats.vertical = vertical;
  out.stats.sampled_points = c.points.size();
  out.stats.sampled_lines = c.lines.size();
  out.stats.sampled_incidences = incidences(field, c);

  std::vector<ProjPoint> moved_points;
  std::vector<ProjLine> moved_lines;
  for (const auto& pt : c.points) moved_points.push_back(transform.apply(lift(pt)));
  for (const auto& ln : c.lines) moved_lines.push_back(transform.apply(lift(field, ln)));
  out.stats.transformed_incidences = incidences(field, moved_points, moved_lines);

  std::vector<Point> points;
  for (const auto& pt : moved_points) {
    if (auto affine = to_affine(field, pt)) {
      points.push_back(*affine);
    } else {
      ++out.stats.points_at_infinity;
    }
  }
  std::vector<Line> lines;
  for (const auto& ln : moved_lines) {
    if (auto affine = to_affine(field, ln)) {
      lines.push_back(*affine);
    } else {
      ++out.stats.lines_removed_infinity_or_vertical;
    }
  }
  std::sort(points.begin(), points.end());
  std::sort(lines.begin(), lines.end());

  std::vector<Point> kept_points;
  for (const auto& pt : points) {
    if (!kept_points.empty() && kept_points.back().x == pt.x) {
      ++out.stats.points_removed_same_vertical;
    } else {
      kept_points.push_back(pt);
    }
  }
  std::vector<Line> kept_lines;
  for (const auto& ln : lines) {
    if (!kept_lines.empty() && kept_lines.back().slope == ln.slope) {
      ++out.stats.lines_removed_same_slope;
    } else {
      kept_lines.push_back(ln);
    }
  }
  out.config = make_config(std::move(kept_points), std::move(kept_lines));
  out.stats.retained_points = out.config.points.size();
  out.stats.retained_lines = out.config.lines.size();
  out.stats.retained_incidences = incidences(field, out.config);
  if (!is_legal(field, out.config)) throw InvariantViolation("regularized config is not legal");
  return out;
}

RegularizationResult random_projective_regularize(const FieldSpec& field, const Config& c,
                                                  std::uint64_t seed, bool downsample) {
  Rng rng(seed);
  Config working = c;
  if (downsample) {
    const std::size_t cap = field.q() / 2;
    working.points = sample_without_replacement(working.points, cap, rng);
    working.lines = sample_without_replacement(working.lines, cap, rng);
  }
  const auto lines = projective_lines(field);
  const ProjLine infinity = lines[rng.below(lines.size())];
  const auto on_infinity = points_on(field, infinity);
  const ProjPoint vertical = on_infinity[rng.below(on_infinity.size())];

  RegularizationResult out = regularize_with(field, working, infinity, vertical);
  out.stats.input_points = c.points.size();
  out.stats.input_lines = c.lines.size();
  out.stats.input_incidences = incidences(field, c);
  return out;
}

}  // namespace chshq
