#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include "oqe/core/errors.hpp"
#include "oqe/qe/qe.hpp"
#include "oqe/symbols/symbols.hpp"

using namespace oqe;
using namespace oqe::symbols;

namespace {

const auto P = geom::GeometryBackend::pillowcase();

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-12);
}

// (2pi)^-2 times the plain 2-d integral of the full symbol, in polar coordinates
double plain_integral(const ClassicalSymbol& s) {
  const auto radial = [&](double r) {
    const int n = 256;
    double acc = 0;
    for (int i = 0; i < n; ++i) acc += s(r, 2 * M_PI * i / n).real();
    return acc * 2 * M_PI / n * r;
  };
  return (gk(radial, 0.0, 0.5) + gk(radial, 0.5, 1.0) + boost::math::quadrature::tanh_sinh<double>().integrate(radial, 1.0, std::numeric_limits<double>::infinity())) /
         (4 * M_PI * M_PI);
}

}  // namespace

TEST_CASE("obstruction coefficients") {
  const auto inv2 = HomogeneousTerm::constant(-2.0, 1.0);
  const auto s0 = obstruction_coefficients(inv2, 0);
  REQUIRE(s0.size() == 1);
  CHECK(s0[0].value == doctest::Approx(2 * M_PI).epsilon(1e-14));

  const HomogeneousTerm odd{-2.0, [](double p) { return std::cos(p) + 0.3 * std::sin(3 * p); }};
  CHECK(std::abs(obstruction_coefficients(odd, 0)[0].value) < 1e-14);
  const HomogeneousTerm odd4{-4.0, [](double p) { return std::sin(p) * (1 + std::cos(2 * p)); }};
  for (const auto& o : obstruction_coefficients(odd4, 2)) CHECK(std::abs(o.value) < 1e-14);

  const HomogeneousTerm e1{-3.0, [](double p) { return std::cos(p) * std::cos(p); }};
  const auto s1 = obstruction_coefficients(e1, 1);
  REQUIRE(s1.size() == 2);
  CHECK(s1[0].alpha1 == 1);
  CHECK(std::abs(s1[0].value) < 1e-14);
  CHECK(std::abs(s1[1].value) < 1e-14);
  // an even density of weight 2 does not vanish: S(eta_1^2 |eta|^-4) = pi
  CHECK(obstruction_coefficients(HomogeneousTerm::constant(-4.0, 1.0), 2)[0].value == doctest::Approx(M_PI));
  CHECK_THROWS_AS(obstruction_coefficients(inv2, 1), DomainError);
}

TEST_CASE("finite part equals the plain integral below order -2") {
  const auto s = homogeneous_symbol(HomogeneousTerm::constant(-4.0, 1.0));
  CHECK(finite_part(s).real() == doctest::Approx(plain_integral(s)).epsilon(1e-8));
  CHECK(std::abs(finite_part(s).imag()) < 1e-15);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0), Z(-4.5, -2.3);
  for (int t = 0; t < 20; ++t) {
    ClassicalSymbol sym;
    sym.order = Z(rng);
    const int J = t % 3;
    for (int j = 0; j <= J; ++j) {
      const double a0 = 1.5 + U(rng), a1 = U(rng), a2 = U(rng), a3 = U(rng);
      sym.terms.push_back({sym.order - static_cast<double>(j), [=](double p) {
                             return a0 + a1 * std::cos(p) + a2 * std::sin(2 * p) + a3 * std::cos(3 * p);
                           }});
    }
    CAPTURE(t);
    CHECK(finite_part(sym).real() == doctest::Approx(plain_integral(sym)).epsilon(1e-8));
  }
}

TEST_CASE("finite part of a non-integrable homogeneous term and holomorphy in the order") {
  const auto s = homogeneous_symbol(HomogeneousTerm::constant(-1.5, 1.0));
  const double oracle = boost::math::quadrature::tanh_sinh<double>().integrate(
                            [](double r) { return (default_cutoff(r) - 1) * std::pow(r, -0.5); }, 0.0, 1.0) *
                        2 * M_PI / (4 * M_PI * M_PI);
  CHECK(finite_part(s).real() == doctest::Approx(oracle).epsilon(1e-8));

  const auto fp = [](complex z) { return finite_part(homogeneous_symbol(HomogeneousTerm::constant(z, 1.0))); };
  const double h = 1e-4, z = -1.5;
  const complex fd = (fp(z + h) - fp(z - h)) / (2 * h);
  const double deriv = (gk([&](double r) { return default_cutoff(r) * std::pow(r, z + 1) * std::log(r); }, 0.5, 1.0) +
                        1 / ((z + 2) * (z + 2))) /
                       (2 * M_PI);
  CHECK(fd.real() == doctest::Approx(deriv).epsilon(1e-5));
  // complex orders: the analytic continuation obeys Cauchy-Riemann
  const complex w(-1.5, 0.4);
  const complex dx = (fp(w + h) - fp(w - h)) / (2 * h);
  const complex dy = (fp(w + complex(0, h)) - fp(w - complex(0, h))) / (2 * h);
  CHECK(std::abs(dx - dy / complex(0, 1)) < 1e-6);
  CHECK_THROWS_AS(fp(-2.0), PoleError);
}

TEST_CASE("Epstein zeta and Dirichlet beta") {
  CHECK(dirichlet_beta(1.0) == doctest::Approx(M_PI / 4).epsilon(1e-14));
  CHECK(dirichlet_beta(2.0) == doctest::Approx(0.915965594177219015).epsilon(1e-14));
  CHECK(dirichlet_beta(0.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std::abs(dirichlet_beta(-1.0)) < 1e-13);
  CHECK(dirichlet_beta(-2.0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(dirichlet_beta(-4.0) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(epstein_zeta(0.0) == doctest::Approx(-1.0).epsilon(1e-13));

  // direct lattice sum with the continuum tail
  for (double s : {3.0, 4.0, 5.5}) {
    const int R = 1500;
    double acc = 0;
    for (int a = -R; a <= R; ++a)
      for (int b = -R; b <= R; ++b) {
        const long long r2 = 1LL * a * a + 1LL * b * b;
        if (r2 == 0 || r2 > 1LL * R * R) continue;
        acc += std::pow(static_cast<double>(r2), -s / 2);
      }
    acc += 2 * M_PI * std::pow(R, 2 - s) / (s - 2);
    CAPTURE(s);
    CHECK(epstein_zeta(s) == doctest::Approx(acc).epsilon(1e-7));
  }
  CHECK_THROWS_AS(epstein_zeta(2.0), PoleError);
}

TEST_CASE("canonical trace coincides with the lattice trace below order -2") {
  const auto A = japanese_bracket_symbol(4);
  const int R = 4000;
  double direct = 0;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b) {
      const long long r2 = 1LL * a * a + 1LL * b * b;
      if (r2 > 1LL * R * R) continue;
      const double q = 1.0 + static_cast<double>(r2);
      direct += 1.0 / (q * q);
    }
  direct += M_PI / (1.0 + static_cast<double>(R) * R);
  direct *= 0.5;
  const complex tr = canonical_trace(A, P);
  CHECK(tr.real() == doctest::Approx(direct).epsilon(1e-6));
  CHECK(tr.imag() == 0.0);
  // the chart integral alone misses the periodization part of the local symbol
  CHECK(chart_trace(A, P).real() == doctest::Approx(M_PI / 2).epsilon(1e-8));
  CHECK(std::abs(tr.real() - M_PI / 2) > 0.01);
  // and J only reorganizes the expansion
  CHECK(canonical_trace(japanese_bracket_symbol(2), P).real() == doctest::Approx(tr.real()).epsilon(1e-12));
}

TEST_CASE("canonical trace: linearity and commutators") {
  const auto A = japanese_bracket_symbol(4);
  const auto B = homogeneous_symbol(HomogeneousTerm::constant(-1.3, 0.7));
  const auto C = homogeneous_symbol({-3.4, [](double p) { return std::cos(p) * std::cos(p); }});
  const double a = 2.0, b = -3.0, c = 0.5;
  const complex lhs = canonical_trace(a * A + b * B + c * C, P);
  const complex rhs = a * canonical_trace(A, P) + b * canonical_trace(B, P) + c * canonical_trace(C, P);
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));

  const auto D = homogeneous_symbol(HomogeneousTerm::constant(-0.6, 1.0));
  const complex ab = canonical_trace(multiply(A, D), P), ba = canonical_trace(multiply(D, A), P);
  CHECK(std::abs(ab - ba) <= 1e-14 * std::abs(ab));
  CHECK_THROWS_AS(canonical_trace(homogeneous_symbol(HomogeneousTerm::constant(-2.0, 1.0)), P), PoleError);
  CHECK_THROWS_AS(canonical_trace(A, geom::GeometryBackend::sphere_quotient(1)), UnsupportedBackend);
}

TEST_CASE("residue trace") {
  CHECK(residue_trace(japanese_bracket_symbol(4), P) == 0.0);
  CHECK(residue_trace(homogeneous_symbol(HomogeneousTerm::constant(-2.0, 1.0)), P) == doctest::Approx(M_PI));
  const auto c2 = homogeneous_symbol({-2.0, [](double p) { return std::cos(p) * std::cos(p); }});
  CHECK(residue_trace(c2, P) == doctest::Approx(M_PI / 2).epsilon(1e-14));
  const auto mix = 3.0 * c2 + japanese_bracket_symbol(3);
  CHECK(residue_trace(mix, P) == doctest::Approx(3 * M_PI / 2).epsilon(1e-14));
}

TEST_CASE("zeta residue on the pillowcase and the Tauberian identities") {
  const auto e = spectral::pillowcase_spectrum(200.0);
  const auto one = qe::make_qe_observable("one", P);
  const auto probe = zeta_residue(e, one);
  CHECK(std::abs(probe.residue) == doctest::Approx(M_PI).epsilon(0.01));
  CHECK(probe.sign == -1);
  // zeta_A(z) = (1/2) Z(-z) over the nonzero canonical modes
  for (std::size_t i = 0; i < probe.eps.size(); ++i)
    CHECK(probe.zeta_values[i] == doctest::Approx(0.5 * epstein_zeta(2 + probe.eps[i])).epsilon(2e-3));

  for (const std::string name : {"one", "cos2dir", "cos4dir"}) {
    const auto obs = qe::make_qe_observable(name, P);
    const auto r = zeta_residue(e, obs);
    const auto fit = qe::local_weyl_fit(qe::matrix_elements(e, obs));
    const double tau = residue_trace(residue_symbol(obs, P), P);
    CAPTURE(name);
    CHECK(std::abs(r.residue) == doctest::Approx(2 * fit.C).epsilon(0.02));
    CHECK(std::abs(r.residue) == doctest::Approx(tau).epsilon(0.02));
  }
}

TEST_CASE("zeta residue on a sphere quotient and error cases") {
  const auto s = spectral::sphere_quotient_spectrum(2, 150);
  const auto r = zeta_residue(s, qe::make_qe_observable("one", s.backend));
  CHECK(std::abs(r.residue) == doctest::Approx(1.0).epsilon(0.02));
  const auto e = spectral::pillowcase_spectrum(50.0);
  CHECK_THROWS_AS(zeta_residue(e, qe::make_qe_observable("one", P), {0.1, 0.2, 0.05}), DomainError);
  CHECK_THROWS_AS(zeta_residue(e, qe::make_qe_observable("one", P), {0.1, 0.05}), DomainError);
}
