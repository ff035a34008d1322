#include "oqe/acceptance/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "oqe/flow/flow.hpp"
#include "oqe/qe/qe.hpp"
#include "oqe/spectral/eigen_system.hpp"
#include "oqe/symbols/symbols.hpp"

namespace oqe::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Accumulates sub-checks into one verdict and a detail line.
struct Verdict {
  bool pass{true};
  std::ostringstream detail;
  Verdict() { detail << std::setprecision(6); }

  void check(bool ok, const std::string& label) {
    if (!ok) {
      pass = false;
      detail << "[FAIL " << label << "] ";
    }
  }
  template <class T>
  Verdict& put(const std::string& key, const T& v) {
    detail << key << "=" << v << " ";
    return *this;
  }
};

// (2,3,7) FEM spectra shared by criteria 4 and 5
struct FemCache {
  std::optional<spectral::EigenSystem> fine, coarse;
  double fine_seconds{0};
  const spectral::EigenSystem& get_fine() {
    if (!fine) {
      const auto t0 = Clock::now();
      fine = spectral::triangle_orbifold_spectrum(2, 3, 7, 170, 5);
      fine_seconds = seconds_since(t0);
    }
    return *fine;
  }
  const spectral::EigenSystem& get_coarse() {
    if (!coarse) coarse = spectral::triangle_orbifold_spectrum(2, 3, 7, 150, 4);
    return *coarse;
  }
};

Verdict weyl_exact() {
  Verdict v;
  const auto t0 = Clock::now();
  for (int n : {1, 2, 3}) {
    const auto fit = qe::weyl_fit(spectral::sphere_quotient_spectrum(n, 60));
    v.put("C_n" + std::to_string(n), fit.C).put("exp_n" + std::to_string(n), fit.exponent);
    v.check(std::abs(fit.C * n - 1) <= 0.05, "sphere n=" + std::to_string(n));
    v.check(std::abs(fit.exponent - 2) <= 0.1, "exponent n=" + std::to_string(n));
  }
  const auto fit = qe::weyl_fit(spectral::pillowcase_spectrum(200.0));
  v.put("C_pillowcase", fit.C).put("pi/2", M_PI / 2);
  v.check(std::abs(fit.C / (M_PI / 2) - 1) <= 0.03, "pillowcase");
  v.check(seconds_since(t0) < 5.0, "runtime");
  return v;
}

Verdict pointwise_cone() {
  Verdict v;
  for (int n : {1, 2, 3}) {
    const auto e = spectral::sphere_quotient_spectrum(n, 70);
    double worst = 0;
    for (int L : {10, 40, 59}) {
      const auto r = qe::pointwise_weyl_at_cone(e, n, std::sqrt(L * (L + 1.0)) + 0.1);
      const double exact = n * (L + 1.0) * (L + 1.0) / (4 * M_PI);
      worst = std::max(worst, std::abs(r.measured - exact) / exact);
    }
    const auto r = qe::pointwise_weyl_at_cone(e, n, 60.0);
    v.put("ratio_n" + std::to_string(n), r.ratio).put("relerr_n" + std::to_string(n), worst);
    v.check(worst <= 1e-10, "closed form n=" + std::to_string(n));
    v.check(r.ratio >= 0.9 && r.ratio <= 1.1, "ratio n=" + std::to_string(n));
  }
  return v;
}

Verdict local_weyl() {
  Verdict v;
  const std::vector<spectral::EigenSystem> systems{spectral::sphere_quotient_spectrum(3, 60),
                                                   spectral::pillowcase_spectrum(200.0)};
  for (const auto& e : systems) {
    const double c_id = qe::weyl_fit(e).C;
    std::vector<qe::Observable> obs;
    std::vector<qe::MatrixElementSeries> series;
    for (const auto& name : qe::test_observable_names(e.backend.kind)) {
      obs.push_back(qe::make_qe_observable(name, e.backend));
      series.push_back(qe::matrix_elements(e, obs.back()));
      const auto fit = qe::local_weyl_fit(series.back());
      const double target = series.back().omega * c_id;
      const double rel = std::abs(fit.C - target) / std::abs(target);
      v.put(name, rel);
      v.check(rel <= 0.05, name);
    }
    // additivity: N_{A+B} = N_A + N_B sample by sample
    const std::size_t i0 = obs[0].kind == obs[1].kind ? 0 : 1, i1 = i0 + 1;
    const auto joint = qe::top_decade_samples(qe::matrix_elements(e, obs[i0] + obs[i1]));
    const auto a = qe::top_decade_samples(series[i0]), b = qe::top_decade_samples(series[i1]);
    double worst = 0;
    for (std::size_t i = 0; i < joint.N.size(); ++i)
      worst = std::max(worst, std::abs(joint.N[i] - a.N[i] - b.N[i]) / std::max(1.0, std::abs(joint.N[i])));
    v.put("additivity_" + std::string(e.backend.kind == geom::BackendKind::pillowcase ? "pillowcase" : "sphere"),
          worst);
    v.check(worst <= 1e-12, "additivity");
  }
  return v;
}

Verdict fem_backend(FemCache& cache) {
  Verdict v;
  const double j01 = 2.404825557695773;
  const double mu = spectral::unit_disk_dirichlet(1, 3)(0);
  v.put("disk_mu", mu).put("j01^2", j01 * j01);
  v.check(std::abs(mu / (j01 * j01) - 1) <= 0.005, "disk");

  const auto& fine = cache.get_fine();
  const auto& coarse = cache.get_coarse();
  v.put("pairs", fine.size()).put("fine_seconds_under_300", cache.fine_seconds < 300.0);
  v.check(fine.size() >= 300, "pair count");
  v.check(cache.fine_seconds < 300.0, "runtime");
  double drift = 0;
  for (std::size_t j = 0; j < 20; ++j) {
    const double a = fine.eigenvalues[j] * fine.eigenvalues[j], b = coarse.eigenvalues[j] * coarse.eigenvalues[j];
    if (j > 0) drift = std::max(drift, std::abs(a - b) / std::abs(a));
  }
  v.put("self_convergence", drift);
  v.check(drift < 0.01, "self-convergence");
  const auto fit = qe::weyl_fit(fine);
  v.put("C", fit.C).put("1/84", 1.0 / 84);
  v.check(std::abs(fit.C * 84 - 1) <= 0.10, "Weyl C");
  return v;
}

Verdict qe_positive(FemCache& cache) {
  Verdict v;
  const auto& e = cache.get_fine();
  const double top = e.eigenvalues.back(), eps = 0.1;
  v.put("pairs", e.size());
  v.check(e.size() >= 300, "pair count");
  for (const auto& name : qe::test_observable_names(e.backend.kind)) {
    const auto obs = qe::make_qe_observable(name, e.backend);
    const auto series = qe::matrix_elements(e, obs);
    const auto prof = qe::qe_variance_and_density(series, series.omega, eps);
    const double hi = prof.variance_at(top), lo = prof.variance_at(top / 2);
    v.put(name + "_V", hi).put(name + "_Vhalf", lo);
    v.check(hi < lo, name + " decay");
    v.check(prof.excluded_at(top) <= hi / (eps * eps), name + " Chebyshev");
  }
  return v;
}

Verdict qe_negative() {
  Verdict v;
  const auto p = spectral::pillowcase_spectrum(200.0);
  const auto obs = qe::make_qe_observable("cos2dir", p.backend);
  const auto prof = qe::qe_variance_and_density(qe::matrix_elements(p, obs), 0.5, 0.1);
  const double v200 = prof.variance_at(200.0), v100 = prof.variance_at(100.0);
  v.put("V200", v200).put("V100", v100).put("1/8", 0.125);
  v.check(std::abs(v200 / 0.125 - 1) <= 0.2, "circle variance");
  v.check(v200 >= 0.95 * v100, "no decay");
  return v;
}

// dense block of f psi_i psi_j by the torus trapezoid rule
double pillow_brute(const spectral::EigenSystem& e, const qe::Observable& obs, std::size_t i, std::size_t j) {
  const int n = 96;
  double acc = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double x = 2 * M_PI * a / n, y = 2 * M_PI * b / n;
      acc += obs.f(x, y) * e.evaluate(i, x, y) * e.evaluate(j, x, y);
    }
  return 0.5 * acc * 4 * M_PI * M_PI / (static_cast<double>(n) * n);
}

Verdict defect() {
  Verdict v;
  const auto p = spectral::pillowcase_spectrum(std::sqrt(50.0) + 0.5);
  for (const std::string name : {"cos_x1", "exp_cos"}) {
    const auto obs = qe::make_qe_observable(name, p.backend);
    double brute = 0;
    for (const auto& [first, size] : p.multiplets) {
      if (p.eigenvalues[first] * p.eigenvalues[first] > 50.0 + 1e-9) break;
      Eigen::MatrixXd B(size, size);
      for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) B(i, j) = pillow_brute(p, obs, first + i, first + j);
      B.diagonal().array() -= *obs.exact_average;
      brute = std::max(brute, B.jacobiSvd().singularValues()(0));
    }
    const double fast = qe::operator_average_defect(p, obs, std::sqrt(50.0)).norm;
    const double err = std::abs(fast - brute) / std::max(1.0, brute);
    v.put(name + "_err", err);
    v.check(err <= 1e-10, name + " brute force");
  }
  const auto s = spectral::sphere_quotient_spectrum(1, 40);
  const auto c2 = qe::make_qe_observable("cos2theta", s.backend);
  const double r20 = qe::operator_average_defect(s, c2, 20.0).ratio, r40 = qe::operator_average_defect(s, c2, 40.0).ratio;
  v.put("ratio20", r20).put("ratio40", r40);
  v.check(r40 < r20, "sphere decrease");
  return v;
}

Verdict egorov() {
  Verdict v;
  const double a = qe::egorov_phase_check({1, 0}, 200, 400), b = qe::egorov_phase_check({1, 0}, 400, 800);
  v.put("mismatch_200_400", a).put("mismatch_400_800", b).put("factor", a / b);
  v.check(a <= 2.5e-3, "bound");
  v.check(a >= 1.6 * b, "decrease");
  return v;
}

Verdict classical() {
  Verdict v;
  const flow::HyperbolicFlow<double> hb(2, 3, 7);
  std::mt19937_64 rng(21);
  const auto lyap = flow::lyapunov_exponent(hb.sample_liouville(rng), 1e4, hb);
  v.put("lyapunov", lyap.exponent).put("half_width", lyap.half_width);
  v.check(lyap.exponent >= 0.95 && lyap.exponent <= 1.05, "Lyapunov");

  const std::vector<flow::PhaseObservable> bump = {flow::make_observable("bump", flow::FlowBackend(hb))};
  const double v_short = flow::ergodicity_report(bump, 100, 1e2, hb, 7).observables[0].variance;
  const double v_long = flow::ergodicity_report(bump, 100, 1e4, hb, 7).observables[0].variance;
  v.put("var_T1e2", v_short).put("var_T1e4", v_long);
  v.check(v_long < 0.1 * v_short, "Birkhoff concentration");

  const flow::PillowcaseFlow pb;
  const std::vector<flow::PhaseObservable> flat = {flow::make_observable("cos2dir", flow::FlowBackend(pb))};
  const double f_short = flow::ergodicity_report(flat, 100, 1e2, pb, 7).observables[0].variance;
  const double f_long = flow::ergodicity_report(flat, 100, 1e4, pb, 7).observables[0].variance;
  v.put("flat_var_T1e2", f_short).put("flat_var_T1e4", f_long);
  v.check(f_long >= f_short * (1 - 1e-9), "flat control");

  const flow::HyperbolicFlow<oqe::HighPrecision> hp(2, 3, 7);
  std::mt19937_64 rng2(4);
  double worst = 0;
  for (int k = 0; k < 3; ++k) {
    const auto s = hp.sample_liouville(rng2);
    const auto back = flow::geodesic_advance(flow::geodesic_advance(s, oqe::HighPrecision(100), hp),
                                             oqe::HighPrecision(-100), hp);
    worst = std::max(worst, to_double(hp.quotient_distance(back, s)));
  }
  const flow::UnitPhasePoint<double> s0{1.0, 1.0, 0.3};
  worst = std::max(worst, pb.quotient_distance(flow::geodesic_advance(flow::geodesic_advance(s0, 100.0, pb), -100.0, pb), s0));
  const flow::SphereFlow sb(2);
  const flow::UnitPhasePoint<double> s1{1.0, 0.2, 0.4};
  worst = std::max(worst, sb.quotient_distance(flow::geodesic_advance(flow::geodesic_advance(s1, 100.0, sb), -100.0, sb), s1));
  v.put("reversibility", worst);
  v.check(worst <= 1e-9, "reversibility");
  return v;
}

Verdict canonical_trace() {
  Verdict v;
  const auto P = geom::GeometryBackend::pillowcase();
  const auto A = symbols::japanese_bracket_symbol(4);
  const int R = 4000;
  double direct = 0;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b) {
      const long long r2 = 1LL * a * a + 1LL * b * b;
      if (r2 > 1LL * R * R) continue;
      const double q = 1.0 + static_cast<double>(r2);
      direct += 1.0 / (q * q);
    }
  direct = 0.5 * (direct + M_PI / (1.0 + static_cast<double>(R) * R));
  const double tr = symbols::canonical_trace(A, P).real();
  v.put("TR", tr).put("direct", direct);
  v.check(std::abs(tr / direct - 1) <= 1e-6, "lattice sum");

  const auto B = symbols::homogeneous_symbol(symbols::HomogeneousTerm::constant(-1.3, 0.7));
  const auto C = symbols::homogeneous_symbol({-3.4, [](double p) { return std::cos(p) * std::cos(p); }});
  const auto lhs = symbols::canonical_trace(2.0 * A + (-3.0) * B + 0.5 * C, P);
  const auto rhs = 2.0 * symbols::canonical_trace(A, P) - 3.0 * symbols::canonical_trace(B, P) +
                   0.5 * symbols::canonical_trace(C, P);
  const double lin = std::abs(lhs - rhs) / std::abs(rhs);
  v.put("linearity", lin);
  v.check(lin <= 1e-10, "linearity");
  return v;
}

Verdict zeta() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto P = geom::GeometryBackend::pillowcase();
  const auto e = spectral::pillowcase_spectrum(200.0);
  for (const std::string name : {"one", "cos2dir", "cos4dir"}) {
    const auto obs = qe::make_qe_observable(name, P);
    const auto probe = symbols::zeta_residue(e, obs);
    const double R = std::abs(probe.residue);
    const double C = qe::local_weyl_fit(qe::matrix_elements(e, obs)).C;
    const double tau = symbols::residue_trace(symbols::residue_symbol(obs, P), P);
    v.put(name + "_R", probe.residue).put(name + "_2C", 2 * C).put(name + "_res", tau);
    if (name == "one") v.check(std::abs(R / M_PI - 1) <= 0.01, "identity residue");
    v.check(std::abs(R / (2 * C) - 1) <= 0.02, name + " Tauberian");
    v.check(std::abs(R / tau - 1) <= 0.02, name + " residue trace");
  }
  v.check(seconds_since(t0) < 30.0, "runtime");
  return v;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& only,
                                            const std::function<void(const CriterionResult&)>& progress) {
  FemCache cache;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> table = {
      {"Weyl law, exact backends", weyl_exact},
      {"pointwise Weyl at a cone point", pointwise_cone},
      {"local Weyl law", local_weyl},
      {"FEM backend", [&] { return fem_backend(cache); }},
      {"quantum ergodicity, positive case", [&] { return qe_positive(cache); }},
      {"quantum ergodicity, negative control", qe_negative},
      {"operator-average defect", defect},
      {"Egorov phase", egorov},
      {"classical ergodicity", classical},
      {"canonical trace", canonical_trace},
      {"residue and zeta", zeta},
  };
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    CriterionResult r;
    r.id = id;
    r.name = table[id - 1].first;
    const auto t0 = Clock::now();
    try {
      auto v = table[id - 1].second();
      r.pass = v.pass;
      r.detail = v.detail.str();
      if (!r.detail.empty() && r.detail.back() == ' ') r.detail.pop_back();
    } catch (const std::exception& ex) {
      r.pass = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = seconds_since(t0);
    if (progress) progress(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace oqe::acceptance
