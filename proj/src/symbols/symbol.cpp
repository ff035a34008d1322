#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oqe/core/errors.hpp"
#include "oqe/symbols/symbols.hpp"

namespace oqe::symbols {

namespace {

constexpr double kDegreeTol = 1e-12;

bool is_degree(complex d, double target) { return std::abs(d - complex(target, 0.0)) < kDegreeTol; }

complex rpow(double r, complex d) { return std::exp(d * std::log(r)); }

double circle_integral(const std::function<double(double)>& g) {
  const int n = 4096;
  double acc = 0;
  for (int i = 0; i < n; ++i) acc += g(2 * M_PI * i / n);
  return acc * 2 * M_PI / n;
}

double circle_integral(const HomogeneousTerm& t) { return t.radial ? 2 * M_PI * t.h(0.0) : circle_integral(t.h); }

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

complex terms_value(const ClassicalSymbol& s, double r, double phi) {
  complex acc = 0;
  for (const auto& t : s.terms) acc += t.h(phi) * rpow(r, t.degree);
  return acc;
}

}  // namespace

HomogeneousTerm HomogeneousTerm::constant(complex degree, double c) {
  return {degree, [c](double) { return c; }, true};
}

double default_cutoff(double r) {
  if (r <= 0.5) return 0.0;
  if (r >= 1.0) return 1.0;
  const double s = (r - 0.5) / 0.5;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

complex ClassicalSymbol::operator()(double r, double phi) const {
  complex v = remainder ? complex(remainder(r, phi)) : complex(0.0);
  const double th = cutoff(r);
  if (th != 0.0) v += th * terms_value(*this, r, phi);
  return v;
}

ClassicalSymbol operator+(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  ClassicalSymbol s;
  s.order = a.order.real() >= b.order.real() ? a.order : b.order;
  s.terms = a.terms;
  s.terms.insert(s.terms.end(), b.terms.begin(), b.terms.end());
  s.cutoff = a.cutoff;
  s.remainder_radial = a.remainder_radial && b.remainder_radial;
  // b's terms are re-cut with a's cutoff; the difference joins the remainder
  s.remainder = [a, b](double r, double phi) {
    double v = 0;
    if (a.remainder) v += a.remainder(r, phi);
    if (b.remainder) v += b.remainder(r, phi);
    const double dth = b.cutoff(r) - a.cutoff(r);
    if (dth != 0.0) v += dth * terms_value(b, r, phi).real();
    return v;
  };
  return s;
}

ClassicalSymbol operator*(double c, const ClassicalSymbol& a) {
  ClassicalSymbol s = a;
  for (auto& t : s.terms) t.h = [h = t.h, c](double phi) { return c * h(phi); };
  if (a.remainder) s.remainder = [r = a.remainder, c](double x, double phi) { return c * r(x, phi); };
  return s;
}

ClassicalSymbol multiply(const ClassicalSymbol& a, const ClassicalSymbol& b) {
  for (const auto* s : {&a, &b})
    for (const auto& t : s->terms)
      if (std::abs(t.degree.imag()) > kDegreeTol) throw DomainError("multiply: complex degrees are not supported");
  ClassicalSymbol s;
  s.order = a.order + b.order;
  s.cutoff = a.cutoff;
  for (const auto& t : a.terms)
    for (const auto& u : b.terms)
      s.terms.push_back({t.degree + u.degree, [f = t.h, g = u.h](double phi) { return f(phi) * g(phi); },
                         t.radial && u.radial});
  s.remainder_radial = a.remainder_radial && b.remainder_radial &&
                       std::all_of(a.terms.begin(), a.terms.end(), [](const auto& t) { return t.radial; }) &&
                       std::all_of(b.terms.begin(), b.terms.end(), [](const auto& t) { return t.radial; });
  s.remainder = [a, b, terms = s.terms](double r, double phi) {
    const double full = a(r, phi).real() * b(r, phi).real();
    const double th = a.cutoff(r);
    if (th == 0.0) return full;
    double hom = 0;
    for (const auto& t : terms) hom += t.h(phi) * std::pow(r, t.degree.real());
    return full - th * hom;
  };
  return s;
}

ClassicalSymbol japanese_bracket_symbol(int J) {
  if (J < 0) throw DomainError("japanese_bracket_symbol: J must be >= 0");
  ClassicalSymbol s;
  s.order = -4.0;
  for (int j = 0; j <= J; ++j) s.terms.push_back(HomogeneousTerm::constant(-4.0 - 2 * j, (j + 1) * (j % 2 ? -1.0 : 1.0)));
  s.remainder = [J](double r, double) {
    const double exact = 1.0 / ((1 + r * r) * (1 + r * r));
    const double th = default_cutoff(r);
    if (th == 0.0) return exact;
    double hom = 0;
    for (int j = 0; j <= J; ++j) hom += (j + 1) * (j % 2 ? -1.0 : 1.0) * std::pow(r, -4.0 - 2 * j);
    return exact - th * hom;
  };
  s.remainder_radial = true;
  return s;
}

ClassicalSymbol homogeneous_symbol(HomogeneousTerm t) {
  ClassicalSymbol s;
  s.order = t.degree;
  s.terms.push_back(std::move(t));
  return s;
}

std::vector<Obstruction> obstruction_coefficients(const HomogeneousTerm& term, int k) {
  if (k < 0) throw DomainError("obstruction_coefficients: k must be >= 0");
  if (!is_degree(term.degree, -2.0 - k))
    throw DomainError("obstruction_coefficients: term degree must be -2-k");
  std::vector<Obstruction> out;
  for (int a1 = k; a1 >= 0; --a1) {
    const int a2 = k - a1;
    const double v = circle_integral([&](double phi) {
      return std::pow(std::cos(phi), a1) * std::pow(std::sin(phi), a2) * term.h(phi);
    });
    out.push_back({a1, a2, v});
  }
  return out;
}

complex finite_part(const ClassicalSymbol& symbol) {
  complex acc = 0;
  for (const auto& t : symbol.terms) {
    if (is_degree(t.degree, -2.0))
      throw PoleError("finite_part: degree -2 term; the residue is given by residue_trace");
    const complex d = t.degree;
    // FP int_0^inf theta r^{d+1} dr = int_0^1 theta r^{d+1} dr - 1/(d+2)
    const double re = gk([&](double r) { return r > 0 ? symbol.cutoff(r) * rpow(r, d + 1.0).real() : 0.0; }, 0.0, 1.0);
    const double im = gk([&](double r) { return r > 0 ? symbol.cutoff(r) * rpow(r, d + 1.0).imag() : 0.0; }, 0.0, 1.0);
    acc += circle_integral(t) * (complex(re, im) - 1.0 / (d + 2.0));
  }
  if (symbol.remainder) {
    std::function<double(double)> radial;
    if (symbol.remainder_radial) {
      radial = [&](double r) { return 2 * M_PI * symbol.remainder(r, 0.0) * r; };
    } else {
      radial = [&](double r) {
        return circle_integral([&](double phi) { return symbol.remainder(r, phi); }) * r;
      };
    }
    acc += gk(radial, 0.0, 1.0) + gk(radial, 1.0, std::numeric_limits<double>::infinity());
  }
  return acc / (4 * M_PI * M_PI);
}

complex chart_trace(const ClassicalSymbol& symbol, const geom::GeometryBackend& backend) {
  if (backend.kind != geom::BackendKind::pillowcase) throw UnsupportedBackend("chart_trace: pillowcase only");
  return 0.5 * 4 * M_PI * M_PI * finite_part(symbol);
}

namespace {

double lattice_remainder_sum(const ClassicalSymbol& s) {
  if (!s.remainder) return 0.0;
  auto at = [&](int a, int b) {
    const double r = std::hypot(static_cast<double>(a), static_cast<double>(b));
    return s.remainder(r, r > 0 ? std::atan2(static_cast<double>(b), static_cast<double>(a)) : 0.0);
  };
  double total = at(0, 0);
  int quiet = 0;
  for (int k = 1; k <= 4000; ++k) {
    double ring = 0;
    for (int i = -k; i < k; ++i) ring += at(i, -k) + at(k, i) + at(-i, k) + at(-k, -i);
    total += ring;
    quiet = std::abs(ring) <= 1e-17 * std::max(1.0, std::abs(total)) ? quiet + 1 : 0;
    if (k >= 8 && quiet >= 3) return total;
  }
  throw ZetaTailError("canonical_trace: remainder lattice sum did not converge");
}

double angular_lattice_sum(const HomogeneousTerm& t, double d) {
  const int R = 600;
  double acc = 0;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b) {
      const long long r2 = static_cast<long long>(a) * a + static_cast<long long>(b) * b;
      if (r2 == 0 || r2 > static_cast<long long>(R) * R) continue;
      const double r = std::sqrt(static_cast<double>(r2));
      acc += t.h(std::atan2(static_cast<double>(b), static_cast<double>(a))) * std::pow(r, d);
    }
  // continuum tail beyond the disk of radius R
  return acc + circle_integral(t) * std::pow(static_cast<double>(R), d + 2) / -(d + 2);
}

}  // namespace

complex canonical_trace(const ClassicalSymbol& symbol, const geom::GeometryBackend& backend) {
  if (backend.kind != geom::BackendKind::pillowcase) throw UnsupportedBackend("canonical_trace: pillowcase only");
  double acc = lattice_remainder_sum(symbol);
  for (const auto& t : symbol.terms) {
    if (std::abs(t.degree.imag()) > kDegreeTol)
      throw DomainError("canonical_trace: lattice continuation needs real degrees");
    const double d = t.degree.real();
    if (is_degree(t.degree, -2.0)) throw PoleError("canonical_trace: degree -2 term (pole of the trace)");
    if (t.radial) {
      acc += t.h(0.0) * epstein_zeta(-d);
    } else if (d < -2) {
      acc += angular_lattice_sum(t, d);
    } else {
      throw DomainError("canonical_trace: angular terms of degree >= -2 are not supported");
    }
  }
  return 0.5 * acc;
}

double residue_trace(const ClassicalSymbol& symbol, const geom::GeometryBackend& backend) {
  if (backend.kind != geom::BackendKind::pillowcase) throw UnsupportedBackend("residue_trace: pillowcase only");
  double acc = 0;
  for (const auto& t : symbol.terms)
    if (is_degree(t.degree, -2.0)) acc += 0.5 * circle_integral(t);
  return acc;
}

ClassicalSymbol residue_symbol(const qe::Observable& obs, const geom::GeometryBackend& backend) {
  if (backend.kind != geom::BackendKind::pillowcase) throw UnsupportedBackend("residue_symbol: pillowcase only");
  if (obs.kind == qe::ObservableKind::direction) return homogeneous_symbol({-2.0, obs.a, false});
  return homogeneous_symbol(HomogeneousTerm::constant(-2.0, qe::liouville_average(obs, backend)));
}

}  // namespace oqe::symbols
