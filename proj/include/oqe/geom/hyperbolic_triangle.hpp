#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "oqe/core/errors.hpp"
#include "oqe/core/scalar.hpp"
#include "oqe/geom/mobius.hpp"

namespace oqe::geom {

/// Complete geodesic of the upper half-plane: either the vertical line
/// x = center, or the semicircle |z - center| = radius.
template <class Real>
struct HalfPlaneGeodesic {
  bool vertical{true};
  Real center{0};
  Real radius{0};

  static HalfPlaneGeodesic through(const HalfPlanePoint<Real>& p, const HalfPlanePoint<Real>& q) {
    using std::abs;
    using std::sqrt;
    const Real scale = Real(1) + abs(p.x) + abs(q.x) + p.y + q.y;
    if (abs(p.x - q.x) <= Real(64) * std::numeric_limits<Real>::epsilon() * scale)
      return {true, (p.x + q.x) / Real(2), Real(0)};
    const Real c = (p.x * p.x + p.y * p.y - q.x * q.x - q.y * q.y) / (Real(2) * (p.x - q.x));
    const Real dx = p.x - c;
    return {false, c, sqrt(dx * dx + p.y * p.y)};
  }

  /// Signed side function; its sign separates the two half-planes bounded by the geodesic.
  Real side(const HalfPlanePoint<Real>& z) const {
    if (vertical) return z.x - center;
    const Real dx = z.x - center;
    return dx * dx + z.y * z.y - radius * radius;
  }

  /// Side function scale used to build tolerances.
  Real side_scale(const HalfPlanePoint<Real>& z) const {
    using std::abs;
    if (vertical) return Real(1) + abs(z.x) + abs(center);
    return Real(1) + radius * radius + (z.x - center) * (z.x - center) + z.y * z.y;
  }

  /// Reflection across the geodesic (det -1).
  Matrix2<Real> reflection() const {
    if (vertical) return {Real(-1), Real(2) * center, Real(0), Real(1)};
    return Matrix2<Real>{center, radius * radius - center * center, Real(1), -center}.unimodular();
  }

  /// Hyperbolic distance from z to the geodesic.
  Real distance(const HalfPlanePoint<Real>& z) const {
    using std::abs;
    using std::asinh;
    if (vertical) return asinh(abs(z.x - center) / z.y);
    return asinh(abs(side(z)) / (Real(2) * radius * z.y));
  }

  /// Unit Euclidean tangent at p pointing along the geodesic toward q.
  std::pair<Real, Real> tangent_toward(const HalfPlanePoint<Real>& p,
                                       const HalfPlanePoint<Real>& q) const {
    using std::sqrt;
    Real tx, ty;
    if (vertical) {
      tx = Real(0);
      ty = q.y > p.y ? Real(1) : Real(-1);
    } else {
      tx = -p.y;
      ty = p.x - center;
      if (tx * (q.x - p.x) + ty * (q.y - p.y) < Real(0)) {
        tx = -tx;
        ty = -ty;
      }
      const Real n = sqrt(tx * tx + ty * ty);
      tx /= n;
      ty /= n;
    }
    return {tx, ty};
  }
};

/// Geodesic triangle with angles pi/p, pi/q, pi/r in the upper half-plane.
/// Vertex A sits at i (the disk origin), B on the imaginary axis above i, so
/// side AB is the line x = 0 and the doubling reflection is z -> -conj(z).
/// Side k is opposite vertex k.
template <class Real>
struct HyperbolicTriangle {
  std::array<int, 3> orders{};
  std::array<HalfPlanePoint<Real>, 3> vertices{};
  std::array<HalfPlaneGeodesic<Real>, 3> sides{};
  std::array<int, 3> interior_sign{};
  std::array<Matrix2<Real>, 3> reflections{};
  /// Rotations by 2pi/p, 2pi/q, 2pi/r about A, B, C with g_A g_B g_C = 1.
  std::array<Mobius<Real>, 3> generators{};
  /// Disk-model description: radii of B and C, and the geodesic circle through B, C.
  Real disk_radius_b{0}, disk_radius_c{0}, disk_angle_a{0};
  Real disk_arc_center_x{0}, disk_arc_center_y{0}, disk_arc_radius{0};
  HalfPlanePoint<Real> incenter{};
  Real inradius{0};

  static constexpr int doubling_side = 2;

  bool in_triangle(const HalfPlanePoint<Real>& z, Real rel_tol) const {
    for (int k = 0; k < 3; ++k) {
      const Real s = sides[k].side(z) * Real(interior_sign[k]);
      if (s < -rel_tol * sides[k].side_scale(z)) return false;
    }
    return true;
  }

  /// Closed fundamental domain of the rotation subgroup: T union its mirror image across AB.
  bool in_domain(const HalfPlanePoint<Real>& z, Real rel_tol) const {
    return in_triangle(z, rel_tol) || in_triangle(HalfPlanePoint<Real>{-z.x, z.y}, rel_tol);
  }

  /// Interior angles at A, B, C measured from the constructed sides.
  std::array<Real, 3> angles() const {
    std::array<Real, 3> out{};
    for (int v = 0; v < 3; ++v) {
      const int s1 = (v + 1) % 3;  // sides through v are the two not opposite it
      const int s2 = (v + 2) % 3;
      // side s1 is opposite vertex s1, so it joins v and s2
      const auto t1 = sides[s1].tangent_toward(vertices[v], vertices[s2]);
      const auto t2 = sides[s2].tangent_toward(vertices[v], vertices[s1]);
      using std::acos;
      Real dot = t1.first * t2.first + t1.second * t2.second;
      if (dot > Real(1)) dot = Real(1);
      if (dot < Real(-1)) dot = Real(-1);
      out[v] = acos(dot);
    }
    return out;
  }
};

template <class Real>
HyperbolicTriangle<Real> build_hyperbolic_triangle(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2) throw DomainError("triangle orders must be >= 2");
  if (static_cast<long long>(q) * r + static_cast<long long>(p) * r +
          static_cast<long long>(p) * q >=
      static_cast<long long>(p) * q * r)
    throw DomainError("signature is not hyperbolic");
  using std::acosh;
  using std::cos;
  using std::sin;
  using std::sqrt;
  using std::tanh;

  HyperbolicTriangle<Real> t;
  t.orders = {p, q, r};
  const Real alpha = pi<Real>() / Real(p);
  const Real beta = pi<Real>() / Real(q);
  const Real gamma = pi<Real>() / Real(r);
  // hyperbolic law of cosines for the two sides at A
  const Real len_ab = acosh((cos(gamma) + cos(alpha) * cos(beta)) / (sin(alpha) * sin(beta)));
  const Real len_ac = acosh((cos(beta) + cos(alpha) * cos(gamma)) / (sin(alpha) * sin(gamma)));
  const Real len_bc = acosh((cos(alpha) + cos(beta) * cos(gamma)) / (sin(beta) * sin(gamma)));
  const Real rb = tanh(len_ab / Real(2));
  const Real rc = tanh(len_ac / Real(2));
  t.disk_radius_b = rb;
  t.disk_radius_c = rc;
  t.disk_angle_a = alpha;

  t.vertices[0] = disk_to_half_plane<Real>(Real(0), Real(0));
  t.vertices[1] = disk_to_half_plane<Real>(rb, Real(0));
  t.vertices[2] = disk_to_half_plane<Real>(rc * cos(alpha), rc * sin(alpha));
  t.sides[0] = HalfPlaneGeodesic<Real>::through(t.vertices[1], t.vertices[2]);
  t.sides[1] = HalfPlaneGeodesic<Real>::through(t.vertices[2], t.vertices[0]);
  t.sides[2] = HalfPlaneGeodesic<Real>{true, Real(0), Real(0)};

  for (int k = 0; k < 3; ++k) {
    const Real s = t.sides[k].side(t.vertices[k]);
    t.interior_sign[k] = s > Real(0) ? 1 : -1;
    t.reflections[k] = t.sides[k].reflection();
  }
  t.generators[0] = Mobius<Real>::from_matrix(t.reflections[1] * t.reflections[2]);
  t.generators[1] = Mobius<Real>::from_matrix(t.reflections[2] * t.reflections[0]);
  t.generators[2] = Mobius<Real>::from_matrix(t.reflections[0] * t.reflections[1]);

  // geodesic circle through B and C in the disk: the circle orthogonal to
  // |w| = 1 through two points has center c with |c|^2 = R^2 + 1.
  {
    const Real bx = rb, by = Real(0);
    const Real cx = rc * cos(alpha), cy = rc * sin(alpha);
    // |w - c|^2 = |c|^2 - 1  <=>  2 w.c = |w|^2 + 1
    const Real e1 = (bx * bx + by * by + Real(1)) / Real(2);
    const Real e2 = (cx * cx + cy * cy + Real(1)) / Real(2);
    const Real det = bx * cy - by * cx;
    t.disk_arc_center_x = (e1 * cy - by * e2) / det;
    t.disk_arc_center_y = (bx * e2 - e1 * cx) / det;
    t.disk_arc_radius = sqrt(t.disk_arc_center_x * t.disk_arc_center_x +
                             t.disk_arc_center_y * t.disk_arc_center_y - Real(1));
  }

  // Incenter: in the hyperboloid model it is proportional to sum sinh(a_k) V_k.
  {
    using std::sinh;
    const std::array<Real, 3> opposite = {len_bc, len_ac, len_ab};
    Real X0 = 0, X1 = 0, X2 = 0;
    for (int k = 0; k < 3; ++k) {
      const auto [u, v] = half_plane_to_disk(t.vertices[k]);
      const Real rr = u * u + v * v;
      const Real w = sinh(opposite[k]);
      X0 += w * (Real(1) + rr) / (Real(1) - rr);
      X1 += w * Real(2) * u / (Real(1) - rr);
      X2 += w * Real(2) * v / (Real(1) - rr);
    }
    const Real norm = sqrt(X0 * X0 - X1 * X1 - X2 * X2);
    X0 /= norm;
    X1 /= norm;
    X2 /= norm;
    t.incenter = disk_to_half_plane<Real>(X1 / (Real(1) + X0), X2 / (Real(1) + X0));
    t.inradius = t.sides[0].distance(t.incenter);
  }
  return t;
}

template <class Real>
struct FoldResult {
  HalfPlanePoint<Real> point;
  Mobius<Real> element;  // element * (input point) = point
  std::size_t word_length{0};
};

inline constexpr std::size_t kDefaultWordCap = 10000;

/// Folds z into the closed fundamental domain T u rho_AB(T) of the rotation
/// subgroup. Reflects across any violated side of T until z lies in T, then
/// undoes the last parity with the doubling reflection so the accumulated
/// word is orientation preserving.
template <class Real>
FoldResult<Real> fold_to_domain(const HyperbolicTriangle<Real>& tri, HalfPlanePoint<Real> z,
                                std::size_t cap = kDefaultWordCap) {
  if (!(z.y > Real(0))) throw DomainError("fold_to_domain: point must lie in the upper half-plane");
  const Real tol = Real(64) * std::numeric_limits<Real>::epsilon();
  Matrix2<Real> word{Real(1), Real(0), Real(0), Real(1)};
  std::vector<int> letters;
  std::size_t length = 0;
  for (;;) {
    int worst = -1;
    Real worst_value = Real(0);
    for (int k = 0; k < 3; ++k) {
      const Real s = tri.sides[k].side(z) * Real(tri.interior_sign[k]);
      const Real scaled = s / tri.sides[k].side_scale(z);
      if (scaled < -tol && scaled < worst_value) {
        worst = k;
        worst_value = scaled;
      }
    }
    if (worst < 0) break;
    if (length >= cap) {
      throw FoldError("fold_to_domain: word-length cap exceeded", letters);
    }
    z = act(tri.reflections[worst], z);
    word = (tri.reflections[worst] * word).unimodular();
    letters.push_back(worst);
    ++length;
  }
  if (length % 2 == 1) {
    const int s = HyperbolicTriangle<Real>::doubling_side;
    z = act(tri.reflections[s], z);
    word = (tri.reflections[s] * word).unimodular();
    ++length;
  }
  return {z, Mobius<Real>::from_matrix(word), length};
}

/// Quotient-space distance: minimum over nearby images of w under the
/// rotation subgroup (powers of the vertex rotations and their mirror
/// conjugates). Exact for points whose distance is below the domain's
/// injectivity scale, an upper bound otherwise.
template <class Real>
Real quotient_distance(const HyperbolicTriangle<Real>& tri, const HalfPlanePoint<Real>& z,
                       const HalfPlanePoint<Real>& w) {
  Real best = hyperbolic_distance(z, w);
  const Matrix2<Real> mirror = tri.reflections[HyperbolicTriangle<Real>::doubling_side];
  for (int v = 0; v < 3; ++v) {
    std::array<Mobius<Real>, 2> rots = {tri.generators[v],
                                        Mobius<Real>::from_matrix(mirror * tri.generators[v].matrix() * mirror)};
    for (const auto& g : rots) {
      Mobius<Real> h = g;
      for (int k = 1; k < tri.orders[v]; ++k) {
        const Real d = hyperbolic_distance(z, h.apply(w));
        if (d < best) best = d;
        h = h * g;
      }
    }
  }
  return best;
}

}  // namespace oqe::geom
