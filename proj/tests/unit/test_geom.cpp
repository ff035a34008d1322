#include <cmath>
#include <random>

#include "doctest.h"
#include "oqe/geom/triangle_group.hpp"

using namespace oqe;
using namespace oqe::geom;

namespace {

using P = HalfPlanePoint<double>;

Mobius<double> random_mobius(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (;;) {
    Matrix2<double> m{u(rng), u(rng), u(rng), u(rng)};
    if (m.det() > 0.2) return Mobius<double>::from_matrix(m);
  }
}

P random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(-2, 2), uy(0.2, 3);
  return {ux(rng), uy(rng)};
}

// Random interior point of the kite via rejection in the disk model.
P random_domain_point(const HyperbolicTriangle<double>& t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (;;) {
    const P z = disk_to_half_plane(u(rng), u(rng));
    if (t.in_domain(z, -1e-6)) return z;
  }
}

}  // namespace

TEST_CASE("classify_signature trichotomy and areas") {
  auto e = classify_signature(2, 3, 6);
  CHECK(e.geometry == GeometryClass::euclidean);
  CHECK(e.degenerate);
  CHECK(e.area == 0.0);

  auto h = classify_signature(2, 3, 7);
  CHECK(h.geometry == GeometryClass::hyperbolic);
  CHECK(h.area == doctest::Approx(M_PI / 21).epsilon(1e-14));
  CHECK(h.area == doctest::Approx(0.1495996).epsilon(1e-6));

  auto s = classify_signature(2, 3, 3);
  CHECK(s.geometry == GeometryClass::spherical);
  CHECK(s.area == doctest::Approx(M_PI / 3).epsilon(1e-14));
  // tetrahedral rotation group has order 12
  CHECK(s.area == doctest::Approx(4 * M_PI / 12).epsilon(1e-14));

  CHECK_THROWS_AS(classify_signature(1, 3, 7), DomainError);
  CHECK_THROWS_AS(classify_signature(2, 3, 1), DomainError);
  CHECK(classify_signature(2, 4, 4).geometry == GeometryClass::euclidean);
  CHECK(classify_signature(3, 3, 3).geometry == GeometryClass::euclidean);
  CHECK(classify_signature(2, 2, 50).geometry == GeometryClass::spherical);
}

TEST_CASE("hyperbolic_distance basics") {
  CHECK(hyperbolic_distance(P{0, 1}, P{0, 1}) == 0.0);
  // integral of dy/y from 1 to 2 by composite Simpson
  const int n = 2000;
  double s = 0;
  for (int k = 0; k <= n; ++k) {
    const double y = 1.0 + static_cast<double>(k) / n;
    const double w = (k == 0 || k == n) ? 1 : (k % 2 ? 4 : 2);
    s += w / y;
  }
  s /= 3.0 * n;
  CHECK(hyperbolic_distance(P{0, 1}, P{0, 2}) == doctest::Approx(s).epsilon(1e-12));
  CHECK_THROWS_AS(hyperbolic_distance(P{0, 0}, P{0, 1}), DomainError);
  CHECK_THROWS_AS(hyperbolic_distance(P{0, 1}, P{0, -1}), DomainError);
}

TEST_CASE("Mobius algebra: associativity, isometry, M ~ -M") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_mobius(rng), g = random_mobius(rng), h = random_mobius(rng);
    CHECK(transform_distance((f * g) * h, f * (g * h)) <= 1e-12);
    CHECK(std::abs((f * g).det() - 1.0) <= 1e-12);
    const P z = random_point(rng), w = random_point(rng), v = random_point(rng);
    const double d = hyperbolic_distance(z, w);
    CHECK(std::abs(hyperbolic_distance(f.apply(z), f.apply(w)) - d) <= 1e-10 * (1 + d));
    // triangle inequality on random triples
    CHECK(hyperbolic_distance(z, v) <= hyperbolic_distance(z, w) + hyperbolic_distance(w, v) + 1e-12);
    CHECK(std::abs(hyperbolic_distance(z, w) - hyperbolic_distance(w, z)) <= 1e-15);
    const Mobius<double> neg{-f.a, -f.b, -f.c, -f.d};
    CHECK(same_transform(f, neg, 1e-15));
  }
}

TEST_CASE("Cayley maps are inverse to each other") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const P z = random_point(rng);
    const auto [u, v] = half_plane_to_disk(z);
    const P back = disk_to_half_plane(u, v);
    CHECK(std::abs(back.x - z.x) <= 1e-12 * (1 + std::abs(z.x)));
    CHECK(std::abs(back.y - z.y) <= 1e-12 * (1 + z.y));
  }
}

TEST_CASE("build_triangle_group (2,3,7): angles, area, generator relations") {
  const auto orb = build_triangle_group(2, 3, 7);
  const auto& t = orb.hyperbolic();
  const auto a = orb.angles();
  CHECK(a[0] == doctest::Approx(M_PI / 2).epsilon(1e-10));
  CHECK(a[1] == doctest::Approx(M_PI / 3).epsilon(1e-10));
  CHECK(a[2] == doctest::Approx(M_PI / 7).epsilon(1e-10));
  CHECK(a[0] + a[1] + a[2] == doctest::Approx(41 * M_PI / 42).epsilon(1e-10));
  CHECK(std::abs(orb.numeric_area() - orb.area) <= 1e-10);
  CHECK(orb.numeric_area() == doctest::Approx(M_PI / 21).epsilon(1e-10));

  for (int k = 0; k < 3; ++k) {
    Mobius<double> g = Mobius<double>::identity();
    for (int e = 0; e < t.orders[k]; ++e) g = g * t.generators[k];
    CHECK(transform_distance(g, Mobius<double>::identity()) <= 1e-10);
    // the rotation fixes its vertex
    const P v = t.generators[k].apply(t.vertices[k]);
    CHECK(hyperbolic_distance(v, t.vertices[k]) <= 1e-10);
  }
  CHECK(transform_distance(t.generators[0] * t.generators[1] * t.generators[2],
                           Mobius<double>::identity()) <= 1e-10);
  // side pairings carry each side onto its partner
  const P cm{-t.vertices[2].x, t.vertices[2].y};
  CHECK(hyperbolic_distance(orb.domain[0].pairing.apply(cm), t.vertices[2]) <= 1e-10);
  CHECK(hyperbolic_distance(orb.domain[1].pairing.apply(cm), t.vertices[2]) <= 1e-10);
}

TEST_CASE("doubled hyperbolic triangle area by Monte Carlo in the disk") {
  const auto orb = build_triangle_group(2, 3, 7);
  const auto& t = orb.hyperbolic();
  std::mt19937_64 rng(11);
  const double box = 0.35;
  std::uniform_real_distribution<double> u(-box, box);
  const int n = 1'000'000;
  double acc = 0;
  for (int k = 0; k < n; ++k) {
    const double x = u(rng), y = u(rng);
    const double rr = x * x + y * y;
    if (rr >= 1) continue;
    if (t.in_domain(disk_to_half_plane(x, y), 0)) acc += 4.0 / ((1 - rr) * (1 - rr));
  }
  const double area = acc / n * (2 * box) * (2 * box);
  CHECK(area == doctest::Approx(M_PI / 21).epsilon(0.01));
}

TEST_CASE("spherical (2,3,3): relations and area") {
  const auto orb = build_triangle_group(2, 3, 3);
  const auto& t = orb.spherical();
  const auto a = orb.angles();
  CHECK(a[0] == doctest::Approx(M_PI / 2).epsilon(1e-10));
  CHECK(a[1] == doctest::Approx(M_PI / 3).epsilon(1e-10));
  CHECK(a[2] == doctest::Approx(M_PI / 3).epsilon(1e-10));
  CHECK(std::abs(orb.numeric_area() - M_PI / 3) <= 1e-10);
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  CHECK((t.generators[0] * t.generators[1] * t.generators[2] - I).norm() <= 1e-10);
  for (int k = 0; k < 3; ++k) {
    Eigen::Matrix3d g = I;
    for (int e = 0; e < t.orders[k]; ++e) g = g * t.generators[k];
    CHECK((g - I).norm() <= 1e-10);
  }
  CHECK_THROWS_AS(build_triangle_group(2, 3, 6), DomainError);
}

TEST_CASE("incenter is equidistant from the three sides") {
  const auto t = build_hyperbolic_triangle<double>(2, 3, 7);
  const double d0 = t.sides[0].distance(t.incenter);
  CHECK(t.sides[1].distance(t.incenter) == doctest::Approx(d0).epsilon(1e-10));
  CHECK(t.sides[2].distance(t.incenter) == doctest::Approx(d0).epsilon(1e-10));
  CHECK(t.in_triangle(t.incenter, 0));
  CHECK(t.inradius == doctest::Approx(d0));
}

TEST_CASE("fold_to_domain: interior points, round trips, boundary idempotence") {
  const auto orb = build_triangle_group(2, 3, 7);
  const auto& t = orb.hyperbolic();
  std::mt19937_64 rng(5);

  const auto fi = fold_to_domain(t, t.incenter);
  CHECK(fi.word_length == 0);
  CHECK(transform_distance(fi.element, Mobius<double>::identity()) == 0.0);

  const std::array<Mobius<double>, 3> gens = t.generators;
  std::uniform_int_distribution<int> pick(0, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    const P w = random_domain_point(t, rng);
    Mobius<double> g = Mobius<double>::identity();
    const int len = 1 + trial % 12;
    for (int k = 0; k < len; ++k) {
      const int i = pick(rng);
      g = g * (i < 3 ? gens[i] : gens[i - 3].inverse());
    }
    const P z = g.apply(w);
    const auto f = fold_to_domain(t, z);
    CHECK(t.in_domain(f.point, 1e-12));
    // the returned word maps z to z'
    const P img = f.element.apply(z);
    CHECK(hyperbolic_distance(img, f.point) <= 1e-9);
    // folding any group image gives the same representative
    CHECK(hyperbolic_distance(f.point, w) <= 1e-9);
    // the word acts as g^-1 on w's orbit point
    CHECK(hyperbolic_distance(f.element.apply(g.apply(w)), w) <= 1e-9);
  }

  // a point on side BC stays put and folding is idempotent
  const P mid = [&] {
    const auto& s = t.sides[0];
    const double ang = 0.5 * (std::atan2(t.vertices[1].y, t.vertices[1].x - s.center) +
                              std::atan2(t.vertices[2].y, t.vertices[2].x - s.center));
    return P{s.center + s.radius * std::cos(ang), s.radius * std::sin(ang)};
  }();
  const auto f1 = fold_to_domain(t, mid);
  CHECK(hyperbolic_distance(f1.point, mid) <= 1e-12);
  const auto f2 = fold_to_domain(t, f1.point);
  CHECK(hyperbolic_distance(f2.point, f1.point) <= 1e-12);

  CHECK_THROWS_AS(fold_to_domain(t, P{0, -1}), DomainError);
}

TEST_CASE("fold_to_domain: cap overflow reports the partial word") {
  const auto t = build_hyperbolic_triangle<double>(2, 3, 7);
  const P far{0.3, 1e-6};
  try {
    (void)fold_to_domain(t, far, 3);
    FAIL("expected FoldError");
  } catch (const FoldError& e) {
    CHECK(e.partial_word().size() == 3);
  }
  CHECK_NOTHROW((void)fold_to_domain(t, far));
}

TEST_CASE("spherical folding lands in the kite and is group invariant") {
  const auto orb = build_triangle_group(2, 3, 3);
  const auto& t = orb.spherical();
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::Vector3d x(n01(rng), n01(rng), n01(rng));
    x.normalize();
    const auto f = fold_to_domain(t, x);
    CHECK(t.in_domain(f.point, 1e-12));
    CHECK((f.element * x - f.point).norm() <= 1e-12);
    CHECK(std::abs(f.element.determinant() - 1.0) <= 1e-12);
    const Eigen::Vector3d gx = t.generators[trial % 3] * x;
    CHECK((fold_to_domain(t, gx).point - f.point).norm() <= 1e-9);
  }
}

TEST_CASE("high-precision triangle matches the double construction") {
  const auto td = build_hyperbolic_triangle<double>(2, 3, 7);
  const auto th = build_hyperbolic_triangle<HighPrecision>(2, 3, 7);
  for (int k = 0; k < 3; ++k) {
    CHECK(to_double(th.vertices[k].y) == doctest::Approx(td.vertices[k].y).epsilon(1e-14));
    CHECK(to_double(th.vertices[k].x) == doctest::Approx(td.vertices[k].x).epsilon(1e-13));
  }
  const auto a = th.angles();
  CHECK(abs(a[2] - pi<HighPrecision>() / 7) < HighPrecision(1e-80));
  Mobius<HighPrecision> g = Mobius<HighPrecision>::identity();
  for (int e = 0; e < 7; ++e) g = g * th.generators[2];
  CHECK(transform_distance(g, Mobius<HighPrecision>::identity()) < HighPrecision(1e-80));
}
