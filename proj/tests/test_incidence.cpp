#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "chshq/errors.hpp"
#include "chshq/game.hpp"
#include "chshq/incidence.hpp"
#include "chshq/random.hpp"
#include "oracles.hpp"

namespace {

using chshq::Config;
using chshq::Elem;
using chshq::FieldSpec;
using chshq::Line;
using chshq::Point;
using chshq::ProjLine;
using chshq::ProjPoint;
using chshq::ProjTransform;
using chshq::Rational;

oracle::NaiveField naive(const FieldSpec& f) {
  const auto m = f.modulus();
  return oracle::NaiveField(static_cast<int>(f.p()), static_cast<int>(f.s()), oracle::Poly(m.begin(), m.end()));
}

std::uint64_t naive_incidences(const FieldSpec& f, const Config& c) {
  const auto nf = naive(f);
  std::uint64_t count = 0;
  for (const auto& pt : c.points)
    for (const auto& ln : c.lines) {
      const int rhs = nf.add(nf.mul(static_cast<int>(ln.slope.value), static_cast<int>(pt.x.value)),
                             nf.neg(static_cast<int>(ln.intercept.value)));
      if (rhs == static_cast<int>(pt.y.value)) ++count;
    }
  return count;
}

chshq::Strategy random_strategy(const FieldSpec& f, std::uint64_t seed) {
  chshq::Rng rng(seed);
  chshq::Strategy s;
  for (std::uint32_t i = 0; i < f.q(); ++i) {
    s.f.push_back(Elem{static_cast<std::uint32_t>(rng.below(f.q()))});
    s.g.push_back(Elem{static_cast<std::uint32_t>(rng.below(f.q()))});
  }
  return s;
}

Config random_config(const FieldSpec& f, std::size_t points, std::size_t lines, std::uint64_t seed) {
  chshq::Rng rng(seed);
  std::vector<Point> ps;
  std::vector<Line> ls;
  const auto draw = [&rng, &f] { return Elem{static_cast<std::uint32_t>(rng.below(f.q()))}; };
  for (std::size_t i = 0; i < points; ++i) ps.push_back(Point{draw(), draw()});
  for (std::size_t i = 0; i < lines; ++i) ls.push_back(Line{draw(), draw()});
  return chshq::make_config(std::move(ps), std::move(ls));
}

ProjTransform random_transform(const FieldSpec& f, chshq::Rng& rng) {
  while (true) {
    ProjTransform::Matrix m{};
    for (auto& row : m)
      for (auto& e : row) e = Elem{static_cast<std::uint32_t>(rng.below(f.q()))};
    if (chshq::determinant(f, m) != f.zero()) return ProjTransform(f, m);
  }
}

bool naive_proj_incident(const oracle::NaiveField& nf, const ProjPoint& p, const ProjLine& l) {
  int sum = 0;
  for (int i = 0; i < 3; ++i) {
    sum = nf.add(sum, nf.mul(static_cast<int>(p.coords[i].value), static_cast<int>(l.coeffs[i].value)));
  }
  return sum == 0;
}

}  // namespace

TEST(Incidences, Examples) {
  const FieldSpec f = FieldSpec::create(5, 1);
  const Config one = chshq::make_config({Point{Elem{1}, Elem{2}}}, {Line{Elem{3}, Elem{1}}});  // 2 = 3 - 1
  EXPECT_EQ(chshq::incidences(f, one), 1u);
  EXPECT_EQ(chshq::incidences(f, chshq::make_config({}, {Line{Elem{0}, Elem{0}}})), 0u);
  EXPECT_EQ(chshq::incidences(f, chshq::make_config({Point{Elem{0}, Elem{0}}}, {})), 0u);
  EXPECT_EQ(chshq::incidences(FieldSpec::create(2, 2), chshq::subfield_construction(FieldSpec::create(2, 2))), 8u);
}

TEST(Incidences, MatchNaiveCount) {
  for (const std::uint64_t q : {5, 8, 9, 13, 27}) {
    const FieldSpec f = FieldSpec::of_order(q);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Config c = random_config(f, q, q, seed);
      EXPECT_EQ(chshq::incidences(f, c), naive_incidences(f, c));
    }
  }
}

TEST(Incidences, MakeConfigDeduplicates) {
  const Config c = chshq::make_config({Point{Elem{1}, Elem{1}}, Point{Elem{0}, Elem{1}}, Point{Elem{1}, Elem{1}}},
                                      {Line{Elem{2}, Elem{0}}, Line{Elem{2}, Elem{0}}});
  EXPECT_EQ(c.points, (std::vector<Point>{Point{Elem{0}, Elem{1}}, Point{Elem{1}, Elem{1}}}));
  EXPECT_EQ(c.lines.size(), 1u);
}

TEST(StrategyConfig, Q2ZeroStrategy) {
  const FieldSpec f = FieldSpec::create(2, 1);
  const Config c = chshq::strategy_to_config(f, chshq::zero_strategy(f));
  EXPECT_EQ(c.points, (std::vector<Point>{Point{Elem{0}, Elem{0}}, Point{Elem{1}, Elem{0}}}));
  EXPECT_EQ(c.lines, (std::vector<Line>{Line{Elem{0}, Elem{0}}, Line{Elem{1}, Elem{0}}}));
  EXPECT_EQ(chshq::incidences(f, c), 3u);
}

TEST(StrategyConfig, IncidencesEqualWinsAndRoundTrip) {
  for (const std::uint64_t q : {5, 4, 9}) {
    const FieldSpec f = FieldSpec::of_order(q);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto s = random_strategy(f, seed);
      const Config c = chshq::strategy_to_config(f, s);
      ASSERT_TRUE(chshq::is_legal(f, c));
      ASSERT_EQ(chshq::incidences(f, c), chshq::win_count(f, s).wins);
      ASSERT_EQ(chshq::config_to_strategy(f, c), s);
      ASSERT_EQ(chshq::strategy_to_config(f, chshq::config_to_strategy(f, c)), c);
    }
  }
}

TEST(StrategyConfig, PartialConfigsPadWithoutLosingIncidences) {
  const FieldSpec f = FieldSpec::create(7, 1);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = random_strategy(f, seed);
    Config full = chshq::strategy_to_config(f, s);
    chshq::Rng rng(seed + 1000);
    std::vector<Point> pts;
    std::vector<Line> lns;
    for (const auto& p : full.points)
      if (rng.bernoulli(0.5)) pts.push_back(p);
    for (const auto& l : full.lines)
      if (rng.bernoulli(0.5)) lns.push_back(l);
    const Config part = chshq::make_config(pts, lns);
    const auto padded = chshq::config_to_strategy(f, part);
    EXPECT_GE(chshq::win_count(f, padded).wins, chshq::incidences(f, part));
    for (std::uint32_t x = 0; x < f.q(); ++x) {
      const bool present = std::any_of(pts.begin(), pts.end(), [x](const Point& p) { return p.x.value == x; });
      if (!present) {
        EXPECT_EQ(padded.f[x], Elem{0});
      }
    }
  }
}

TEST(StrategyConfig, IllegalConfigsRejected) {
  const FieldSpec f = FieldSpec::create(5, 1);
  const Config same_x = chshq::make_config({Point{Elem{0}, Elem{0}}, Point{Elem{0}, Elem{1}}}, {});
  const Config same_slope = chshq::make_config({}, {Line{Elem{2}, Elem{0}}, Line{Elem{2}, Elem{1}}});
  EXPECT_FALSE(chshq::is_legal(f, same_x));
  EXPECT_FALSE(chshq::is_legal(f, same_slope));
  EXPECT_THROW(chshq::config_to_strategy(f, same_x), chshq::InvalidInput);
  EXPECT_THROW(chshq::config_to_strategy(f, same_slope), chshq::InvalidInput);
}

TEST(SubfieldConstruction, ExactCounts) {
  for (const std::uint64_t q : {4, 9, 16, 25, 49, 64}) {
    const FieldSpec f = FieldSpec::of_order(q);
    const Config c = chshq::subfield_construction(f);
    const auto root = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(q))));
    EXPECT_EQ(c.points.size(), q);
    EXPECT_EQ(c.lines.size(), q);
    EXPECT_EQ(chshq::incidences(f, c), q * root) << "q=" << q;
    EXPECT_EQ(naive_incidences(f, c), q * root);
    EXPECT_FALSE(chshq::is_legal(f, c));
  }
  EXPECT_THROW(chshq::subfield_construction(FieldSpec::create(2, 3)), chshq::InvalidInput);
  EXPECT_THROW(chshq::subfield_construction(FieldSpec::create(7, 1)), chshq::InvalidInput);
}

TEST(GridConstruction, Q101) {
  const FieldSpec f = FieldSpec::create(101, 1);
  const Config c = chshq::grid_construction(f);
  EXPECT_EQ(c.points.size(), 4u * 21u);
  EXPECT_EQ(c.lines.size(), 20u);
  EXPECT_EQ(chshq::incidences(f, c), 80u);
  EXPECT_EQ(chshq::grid_incidence_formula(101), 80u);
}

TEST(GridConstruction, CountMatchesFormulaAndLowerBound) {
  for (const std::uint32_t q : {1009u, 1013u, 2003u, 4099u, 10007u, 32003u}) {
    const FieldSpec f = FieldSpec::create(q, 1);
    const Config c = chshq::grid_construction(f);
    const auto count = chshq::incidences(f, c);
    EXPECT_EQ(count, chshq::grid_incidence_formula(q)) << q;
    EXPECT_GE(static_cast<double>(count), std::pow(static_cast<double>(q), 4.0 / 3.0) / 8.0) << q;
    EXPECT_LE(c.points.size(), q);
    EXPECT_LE(c.lines.size(), q);
  }
  EXPECT_EQ(chshq::grid_incidence_formula(1009), 5u * 50u * 10u);
  EXPECT_THROW(chshq::grid_construction(FieldSpec::create(2, 4)), chshq::InvalidInput);
}

TEST(GridConstruction, IntegerCubeRoot) {
  EXPECT_EQ(chshq::integer_cube_root(0), 0u);
  EXPECT_EQ(chshq::integer_cube_root(7), 1u);
  EXPECT_EQ(chshq::integer_cube_root(8), 2u);
  EXPECT_EQ(chshq::integer_cube_root(1009), 10u);
  EXPECT_EQ(chshq::integer_cube_root(999), 9u);
  for (std::uint64_t n = 0; n < 5000; ++n) {
    const auto r = chshq::integer_cube_root(n);
    ASSERT_LE(r * r * r, n);
    ASSERT_GT((r + 1) * (r + 1) * (r + 1), n);
  }
}

TEST(SubspaceConstruction, Q243) {
  const FieldSpec f = FieldSpec::create(3, 5);
  const auto sc = chshq::subspace_construction(f, 1);
  EXPECT_EQ(sc.dim_a, 2u);
  EXPECT_EQ(sc.dim_b, 3u);
  EXPECT_EQ(sc.dim_c, 2u);
  EXPECT_EQ(sc.config.points.size(), 243u);
  EXPECT_EQ(sc.config.lines.size(), 243u);
  EXPECT_EQ(sc.unthinned_incidences, 2187u);
  EXPECT_EQ(chshq::incidences(f, sc.config), 2187u);
  EXPECT_GT(2187.0, std::pow(243.0, 4.0 / 3.0));
}

TEST(SubspaceConstruction, CaseSplitAndThinning) {
  struct Case {
    std::uint32_t p, s, a, b, c;
    double keep;
  };
  for (const Case k : {Case{3, 3, 1, 2, 2, 1.0 / 3}, Case{2, 7, 2, 5, 4, 0.25}, Case{2, 5, 2, 3, 2, 1.0},
                       Case{2, 9, 3, 6, 4, 0.5}, Case{5, 3, 1, 2, 2, 0.2}}) {
    const FieldSpec f = FieldSpec::create(k.p, k.s);
    const auto full = chshq::subspace_construction(f, 4, false);
    EXPECT_EQ(full.dim_a, k.a);
    EXPECT_EQ(full.dim_b, k.b);
    EXPECT_EQ(full.dim_c, k.c);
    EXPECT_EQ(full.dim_c, 2 * k.b - k.s + 1);
    EXPECT_DOUBLE_EQ(full.keep_probability, k.keep);
    std::uint64_t size_a = 1, size_b = 1, size_c = 1;
    for (std::uint32_t i = 0; i < k.a; ++i) size_a *= k.p;
    for (std::uint32_t i = 0; i < k.b; ++i) size_b *= k.p;
    for (std::uint32_t i = 0; i < k.c; ++i) size_c *= k.p;
    EXPECT_EQ(full.config.points.size(), size_a * size_b);
    EXPECT_EQ(full.unthinned_lines, size_b * size_c);
    EXPECT_EQ(full.config.lines.size(), size_b * size_c);
    EXPECT_EQ(chshq::incidences(f, full.config), size_a * size_b * size_c);
    EXPECT_EQ(full.unthinned_incidences, size_a * size_b * size_c);

    const auto thinned = chshq::subspace_construction(f, 4, true);
    EXPECT_LE(thinned.config.lines.size(), full.config.lines.size());
    EXPECT_EQ(thinned.config, chshq::subspace_construction(f, 4, true).config);
    for (const auto& ln : thinned.config.lines) {
      EXPECT_TRUE(std::binary_search(full.config.lines.begin(), full.config.lines.end(), ln));
    }
  }
  EXPECT_THROW(chshq::subspace_construction(FieldSpec::create(3, 4), 1), chshq::InvalidInput);
  EXPECT_THROW(chshq::subspace_construction(FieldSpec::create(3, 1), 1), chshq::InvalidInput);
}

TEST(TrivialBound, ExamplesAndConstructions) {
  EXPECT_DOUBLE_EQ(chshq::trivial_incidence_bound(0, 5), 5.0);
  EXPECT_NEAR(chshq::trivial_incidence_bound(9, 9), 27.0 + 18.0, 1e-9);
  EXPECT_THROW(chshq::trivial_incidence_bound(-1, 2), chshq::InvalidInput);
  const auto within = [](const FieldSpec& f, const Config& c) {
    return static_cast<double>(chshq::incidences(f, c)) <=
           chshq::trivial_incidence_bound(static_cast<double>(c.points.size()), static_cast<double>(c.lines.size()));
  };
  for (const std::uint64_t q : {4, 9, 16, 25, 49, 64, 81, 121, 169}) {
    const FieldSpec f = FieldSpec::of_order(q);
    EXPECT_TRUE(within(f, chshq::subfield_construction(f)));
  }
  for (const std::uint64_t q : {67, 101, 127, 211}) {
    const FieldSpec f = FieldSpec::of_order(q);
    EXPECT_TRUE(within(f, chshq::grid_construction(f)));
  }
  for (const std::uint64_t q : {27, 32, 125, 128, 243}) {
    const FieldSpec f = FieldSpec::of_order(q);
    EXPECT_TRUE(within(f, chshq::subspace_construction(f, 2, false).config));
  }
}

TEST(ProjectivePlane, Census) {
  const auto c2 = chshq::projective_plane_census(FieldSpec::create(2, 1));
  EXPECT_EQ(c2.points, 7u);
  EXPECT_EQ(c2.lines, 7u);
  EXPECT_EQ(c2.points_per_line, 3u);
  const auto c3 = chshq::projective_plane_census(FieldSpec::create(3, 1));
  EXPECT_EQ(c3.points, 13u);
  EXPECT_EQ(c3.points_per_line, 4u);
  for (const std::uint64_t q : {4, 5, 7, 8, 9, 16}) {
    const auto c = chshq::projective_plane_census(FieldSpec::of_order(q));
    EXPECT_EQ(c.points, q * q + q + 1);
    EXPECT_EQ(c.lines, q * q + q + 1);
    EXPECT_EQ(c.points_per_line, q + 1);
  }
}

TEST(ProjectivePlane, CanonicalFormIsUniquePerClass) {
  const FieldSpec f = FieldSpec::create(5, 1);
  const auto triples = chshq::canonical_triples(f);
  EXPECT_EQ(triples.size(), 31u);
  EXPECT_TRUE(std::is_sorted(triples.begin(), triples.end()));
  std::set<std::array<Elem, 3>> seen;
  for (std::uint32_t a = 0; a < 5; ++a)
    for (std::uint32_t b = 0; b < 5; ++b)
      for (std::uint32_t c = 0; c < 5; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const std::array<Elem, 3> v{Elem{a}, Elem{b}, Elem{c}};
        const auto canon = chshq::canonical_triple(f, v);
        seen.insert(canon);
        for (std::uint32_t k = 1; k < 5; ++k) {
          const std::array<Elem, 3> w{f.mul(v[0], Elem{k}), f.mul(v[1], Elem{k}), f.mul(v[2], Elem{k})};
          ASSERT_EQ(chshq::canonical_triple(f, w), canon);
        }
      }
  EXPECT_EQ(seen.size(), 31u);
  EXPECT_THROW(chshq::canonical_triple(f, {Elem{0}, Elem{0}, Elem{0}}), chshq::InvalidInput);
}

TEST(ProjectivePlane, AffineChartRoundTrip) {
  const FieldSpec f = FieldSpec::create(2, 3);
  for (std::uint32_t x = 0; x < f.q(); ++x)
    for (std::uint32_t y = 0; y < f.q(); ++y) {
      const Point pt{Elem{x}, Elem{y}};
      ASSERT_EQ(chshq::to_affine(f, chshq::lift(pt)), pt);
      const Line ln{Elem{x}, Elem{y}};
      ASSERT_EQ(chshq::to_affine(f, chshq::lift(f, ln)), ln);
      ASSERT_EQ(chshq::incident(f, pt, ln), chshq::incident(f, chshq::lift(pt), chshq::lift(f, ln)));
    }
  EXPECT_FALSE(chshq::to_affine(f, chshq::line_at_infinity(f)).has_value());
  EXPECT_FALSE(chshq::to_affine(f, chshq::vertical_infinity(f)).has_value());
  // x = 0 is vertical: it passes through (0:1:0).
  const ProjLine vertical = chshq::make_proj_line(f, {Elem{1}, Elem{0}, Elem{0}});
  EXPECT_TRUE(chshq::incident(f, chshq::vertical_infinity(f), vertical));
  EXPECT_FALSE(chshq::to_affine(f, vertical).has_value());
}

TEST(ProjectiveTransform, PreservesIncidenceExhaustively) {
  for (const std::uint64_t q : {2, 3, 4, 5}) {
    const FieldSpec f = FieldSpec::of_order(q);
    const auto nf = naive(f);
    const auto points = chshq::projective_points(f);
    const auto lines = chshq::projective_lines(f);
    chshq::Rng rng(q);
    for (int trial = 0; trial < 25; ++trial) {
      const ProjTransform t = random_transform(f, rng);
      for (const auto& p : points)
        for (const auto& l : lines) {
          ASSERT_EQ(chshq::incident(f, p, l), naive_proj_incident(nf, p, l));
          ASSERT_EQ(chshq::incident(f, t.apply(p), t.apply(l)), chshq::incident(f, p, l));
        }
      std::vector<ProjPoint> moved;
      for (const auto& p : points) moved.push_back(t.apply(p));
      std::sort(moved.begin(), moved.end());
      ASSERT_EQ(moved, points);
    }
  }
}

TEST(ProjectiveTransform, SingularMatrixRejected) {
  const FieldSpec f = FieldSpec::create(3, 1);
  ProjTransform::Matrix m{};
  m[0] = {Elem{1}, Elem{2}, Elem{0}};
  m[1] = {Elem{2}, Elem{1}, Elem{0}};  // 2 * row0 over F_3
  m[2] = {Elem{0}, Elem{0}, Elem{1}};
  EXPECT_EQ(chshq::determinant(f, m), f.zero());
  EXPECT_THROW(ProjTransform(f, m), chshq::InvalidInput);
}

TEST(ProjectiveTransform, MovingToInfinity) {
  for (const std::uint64_t q : {2, 3, 4, 5}) {
    const FieldSpec f = FieldSpec::of_order(q);
    for (const auto& l : chshq::projective_lines(f)) {
      for (const auto& v : chshq::points_on(f, l)) {
        const auto t = ProjTransform::moving_to_infinity(f, l, v);
        ASSERT_EQ(t.apply(l), chshq::line_at_infinity(f));
        ASSERT_EQ(t.apply(v), chshq::vertical_infinity(f));
      }
    }
  }
}

TEST(SlopeCollision, ExactlyOneOverQPlusOne) {
  for (const std::uint64_t q : {2, 3, 4, 5, 7}) {
    const FieldSpec f = FieldSpec::of_order(q);
    chshq::Rng rng(q);
    for (int trial = 0; trial < 10; ++trial) {
      const Line a{Elem{static_cast<std::uint32_t>(rng.below(q))}, Elem{static_cast<std::uint32_t>(rng.below(q))}};
      Line b = a;
      while (b == a) b = Line{Elem{static_cast<std::uint32_t>(rng.below(q))}, Elem{static_cast<std::uint32_t>(rng.below(q))}};
      const ProjLine la = chshq::lift(f, a);
      const ProjLine lb = chshq::lift(f, b);
      EXPECT_EQ(chshq::slope_collision_fraction(f, la, lb), Rational(1, q + 1));
    }
  }
}

TEST(SlopeCollision, IndependentCountThroughTransforms) {
  // For each choice of infinity line other than the first line, move it to
  // infinity with a vertical point off both lines and see whether the two
  // lines survive with distinct slopes.
  for (const std::uint64_t q : {3, 4, 5, 7}) {
    const FieldSpec f = FieldSpec::of_order(q);
    const Line a{Elem{1}, Elem{0}};
    const Line b{Elem{2 % static_cast<std::uint32_t>(q)}, Elem{1}};
    const ProjLine la = chshq::lift(f, a);
    const ProjLine lb = chshq::lift(f, b);
    std::uint64_t collisions = 0;
    std::uint64_t total = 0;
    for (const auto& inf : chshq::projective_lines(f)) {
      if (inf == la) continue;
      ++total;
      if (inf == lb) {
        ++collisions;
        continue;
      }
      ProjPoint vertical{};
      for (const auto& v : chshq::points_on(f, inf)) {
        if (!chshq::incident(f, v, la) && !chshq::incident(f, v, lb)) {
          vertical = v;
          break;
        }
      }
      const auto t = ProjTransform::moving_to_infinity(f, inf, vertical);
      const auto ma = chshq::to_affine(f, t.apply(la));
      const auto mb = chshq::to_affine(f, t.apply(lb));
      ASSERT_TRUE(ma && mb);
      if (ma->slope == mb->slope) ++collisions;
    }
    EXPECT_EQ(total, q * q + q);
    EXPECT_EQ(Rational(collisions, total), Rational(1, q + 1)) << "q=" << q;
  }
}

TEST(Regularization, IdentityDrawKeepsLegalConfig) {
  const FieldSpec f = FieldSpec::create(7, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Config c = chshq::strategy_to_config(f, random_strategy(f, seed));
    const auto r = chshq::regularize_with(f, c, chshq::line_at_infinity(f), chshq::vertical_infinity(f));
    EXPECT_EQ(r.config, c);
    EXPECT_EQ(r.stats.retained_incidences, chshq::incidences(f, c));
  }
}

TEST(Regularization, OutputLegalAndPlayable) {
  for (const std::uint64_t q : {4, 5, 9, 16, 25}) {
    const FieldSpec f = FieldSpec::of_order(q);
    std::vector<Config> inputs = {random_config(f, q, q, 1), random_config(f, 2 * q, q / 2, 2),
                                  chshq::strategy_to_config(f, random_strategy(f, 3))};
    if (f.s() % 2 == 0) inputs.push_back(chshq::subfield_construction(f));
    for (const auto& c : inputs) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        for (const bool downsample : {true, false}) {
          const auto r = chshq::random_projective_regularize(f, c, seed, downsample);
          ASSERT_TRUE(chshq::is_legal(f, r.config));
          ASSERT_EQ(r.stats.retained_incidences, chshq::incidences(f, r.config));
          ASSERT_EQ(r.stats.transformed_incidences, r.stats.sampled_incidences);
          ASSERT_EQ(r.stats.retained_points, r.config.points.size());
          ASSERT_EQ(r.stats.retained_lines, r.config.lines.size());
          ASSERT_EQ(r.stats.input_incidences, chshq::incidences(f, c));
          if (downsample) {
            ASSERT_LE(r.stats.sampled_points, q / 2);
            ASSERT_LE(r.stats.sampled_lines, q / 2);
          }
          const auto v = chshq::win_count(f, chshq::config_to_strategy(f, r.config));
          ASSERT_GE(v.p_win, Rational(r.stats.retained_incidences, q * q));
          ASSERT_TRUE(chshq::incident(f, r.stats.vertical, r.stats.infinity));
        }
      }
    }
  }
}

TEST(Regularization, SeededDeterminism) {
  const FieldSpec f = FieldSpec::create(3, 2);
  const Config c = chshq::subfield_construction(f);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = chshq::random_projective_regularize(f, c, seed);
    const auto b = chshq::random_projective_regularize(f, c, seed);
    EXPECT_EQ(a.config, b.config);
    EXPECT_EQ(a.stats.infinity, b.stats.infinity);
  }
}

TEST(Regularization, LineSurvivalOnAverage) {
  const FieldSpec f = FieldSpec::create(3, 2);
  const Config c = chshq::subfield_construction(f);
  const int runs = 300;
  double sum = 0.0;
  double sum_sq = 0.0;
  double incidence_sum = 0.0;
  for (int seed = 0; seed < runs; ++seed) {
    const auto r = chshq::random_projective_regularize(f, c, static_cast<std::uint64_t>(seed));
    const double lines = static_cast<double>(r.stats.retained_lines);
    sum += lines;
    sum_sq += lines * lines;
    incidence_sum += static_cast<double>(r.stats.retained_incidences);
  }
  const double mean = sum / runs;
  const double sd = std::sqrt(std::max(0.0, sum_sq / runs - mean * mean));
  EXPECT_GE(mean, 10.0 / 4.0 - 3.0 * sd / std::sqrt(static_cast<double>(runs)));
  EXPECT_GE(incidence_sum / runs, 27.0 / 16.0);
}
