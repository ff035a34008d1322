#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "oqe/core/errors.hpp"
#include "oqe/flow/backends.hpp"
#include "oqe/geom/backend.hpp"

namespace oqe::flow {

struct LyapunovReport {
  double exponent{0};
  double half_width{0};  // 95% batch-means confidence half-width
  double T{0};
  int renormalizations{0};
  std::vector<double> batch_exponents;
};

/// Real function on the unit cosphere bundle of the fundamental domain.
struct PhaseObservable {
  std::string name;
  std::function<double(const UnitPhasePoint<double>&)> f;
  std::optional<double> liouville_average;  // exact value when known
};

struct ObservableStatistics {
  std::string name;
  std::vector<UnitPhasePoint<double>> starts;
  std::vector<double> averages;
  double variance{0};  // unbiased across-start variance
  double liouville_reference{0};
};

struct ErgodicityReport {
  double T{0};
  double dt{0};
  int n_starts{0};
  std::vector<ObservableStatistics> observables;
};

inline constexpr double kLyapunovDelta0 = 1e-9;
inline constexpr double kLyapunovThreshold = 1e-6;
inline constexpr int kLyapunovBatches = 10;

inline bool isfinite_real(double x) { return std::isfinite(x); }
inline bool isfinite_real(const HighPrecision& x) { return boost::multiprecision::isfinite(x); }

/// Advances a state by t in sub-steps of at most max_step, folding after each.
template <class B>
typename B::State advance_state(const B& b, typename B::State st, typename B::real_type t) {
  using Real = typename B::real_type;
  using std::abs;
  using std::ceil;
  if (!isfinite_real(t)) throw DomainError("geodesic_advance: t must be finite");
  const Real span = abs(t) / b.max_step();
  const long long n = span > Real(0) ? static_cast<long long>(oqe::to_double(ceil(span))) : 0;
  if (n == 0) return st;
  const Real h = t / Real(n);
  for (long long k = 0; k < n; ++k) {
    st = b.flow(st, h);
    b.fold(st);
  }
  return st;
}

/// Exact constant-curvature geodesic motion by arclength t, folded into the domain.
template <class B>
UnitPhasePoint<typename B::real_type> geodesic_advance(const UnitPhasePoint<typename B::real_type>& s,
                                                      typename B::real_type t, const B& b) {
  auto st = b.lift(s);
  b.fold(st);
  return b.project(advance_state(b, st, t));
}

/// Number of samples k with k * dt < T.
std::size_t birkhoff_sample_count(double T, double dt);

/// Mean of f over the samples f_{k dt}(s0), k < T/dt.
template <class B>
double birkhoff_average(const std::function<double(const UnitPhasePoint<double>&)>& f,
                        const UnitPhasePoint<typename B::real_type>& s0, double T, double dt,
                        const B& b) {
  using Real = typename B::real_type;
  if (!(T > 0) || !(dt > 0) || dt > T) throw DomainError("birkhoff_average: need T > 0, 0 < dt <= T");
  const std::size_t N = birkhoff_sample_count(T, dt);
  auto st = b.lift(s0);
  b.fold(st);
  double acc = 0;
  for (std::size_t k = 0; k < N; ++k) {
    if (k > 0) st = advance_state(b, st, Real(dt));
    acc += f(to_double(b.project(st)));
  }
  return acc / static_cast<double>(N);
}

/// Top Lyapunov exponent from a shadow trajectory renormalized at separation 1e-6.
template <class B>
LyapunovReport lyapunov_exponent(const UnitPhasePoint<typename B::real_type>& s0, double T,
                                 const B& b) {
  using Real = typename B::real_type;
  using std::log;
  if (!(T >= 100)) throw DomainError("lyapunov_exponent: T must be >= 100");
  const double delta0 = kLyapunovDelta0;
  auto main = b.lift(s0);
  const Real eps = Real(delta0);
  auto shadow = b.lift({s0.x1 + eps, s0.x2 + eps, s0.direction + eps});
  const auto g0 = b.fold(main);
  b.apply(g0, shadow);
  {
    const Real d = b.separation(main, shadow);
    b.rescale(main, shadow, Real(delta0) / d);
  }

  const long long steps = static_cast<long long>(std::ceil(T / oqe::to_double(b.max_step())));
  const long long per_batch = steps / kLyapunovBatches;
  const Real h = Real(T / static_cast<double>(per_batch * kLyapunovBatches));
  LyapunovReport rep;
  rep.T = T;
  double total = 0;
  for (int batch = 0; batch < kLyapunovBatches; ++batch) {
    double log_sum = 0;
    for (long long k = 0; k < per_batch; ++k) {
      main = b.flow(main, h);
      shadow = b.flow(shadow, h);
      const auto g = b.fold(main);
      b.apply(g, shadow);
      const double d = oqe::to_double(b.separation(main, shadow));
      if (!std::isfinite(d)) throw NumericalBlowup("lyapunov_exponent: non-finite separation");
      if (d > kLyapunovThreshold || k + 1 == per_batch) {
        log_sum += std::log(d / delta0);
        b.rescale(main, shadow, Real(delta0 / d));
        if (d > kLyapunovThreshold) ++rep.renormalizations;
      }
    }
    const double batch_time = oqe::to_double(h) * static_cast<double>(per_batch);
    rep.batch_exponents.push_back(log_sum / batch_time);
    total += log_sum;
  }
  rep.exponent = total / T;
  double mean = 0, var = 0;
  for (double e : rep.batch_exponents) mean += e;
  mean /= kLyapunovBatches;
  for (double e : rep.batch_exponents) var += (e - mean) * (e - mean);
  var /= kLyapunovBatches - 1;
  // Student t quantile, 9 degrees of freedom, two-sided 95%
  rep.half_width = 2.262 * std::sqrt(var / kLyapunovBatches);
  if (!std::isfinite(rep.exponent)) throw NumericalBlowup("lyapunov_exponent: non-finite estimate");
  return rep;
}

/// Independent generator for start k under a run seed.
std::mt19937_64 sub_rng(std::uint64_t seed, std::uint64_t stream);

template <class B>
double monte_carlo_liouville(const std::function<double(const UnitPhasePoint<double>&)>& f,
                             const B& b, std::uint64_t seed, std::size_t samples = 100000) {
  auto rng = sub_rng(seed, 0xA5A5A5A5ull);
  double acc = 0;
  for (std::size_t k = 0; k < samples; ++k) acc += f(to_double(b.sample_liouville(rng)));
  return acc / static_cast<double>(samples);
}

/// Birkhoff averages from n_starts Liouville-distributed starts, one sub-seed per start.
template <class B>
ErgodicityReport ergodicity_report(const std::vector<PhaseObservable>& observables, int n_starts,
                                   double T, const B& b, std::uint64_t seed, double dt = 0.25) {
  if (n_starts < 2) throw DomainError("ergodicity_report: n_starts must be >= 2");
  std::vector<UnitPhasePoint<typename B::real_type>> starts;
  for (int k = 0; k < n_starts; ++k) {
    auto rng = sub_rng(seed, static_cast<std::uint64_t>(k));
    starts.push_back(b.sample_liouville(rng));
  }
  ErgodicityReport rep;
  rep.T = T;
  rep.dt = dt;
  rep.n_starts = n_starts;
  for (const auto& obs : observables) {
    ObservableStatistics st;
    st.name = obs.name;
    double mean = 0;
    for (const auto& s : starts) {
      st.starts.push_back(to_double(s));
      st.averages.push_back(birkhoff_average(obs.f, s, T, dt, b));
      mean += st.averages.back();
    }
    mean /= n_starts;
    double var = 0;
    for (double a : st.averages) var += (a - mean) * (a - mean);
    st.variance = var / (n_starts - 1);
    st.liouville_reference =
        obs.liouville_average ? *obs.liouville_average : monte_carlo_liouville(obs.f, b, seed);
    rep.observables.push_back(std::move(st));
  }
  return rep;
}

// ------------------------------------------------------------ runtime dispatch

using FlowBackend = std::variant<SphereFlow, PillowcaseFlow, HyperbolicFlow<double>>;

FlowBackend make_flow_backend(const geom::GeometryBackend& g);

/// Named observables available for a backend: "one", "ball" (metric ball at
/// the incenter of 10% area, hyperbolic), "bump" (smooth bump at the incenter,
/// hyperbolic), "cos2dir" (cos^2 of the direction, flat), "cos_x1", "cos_x2"
/// (flat), "cos2theta" (sphere).
PhaseObservable make_observable(const std::string& name, const FlowBackend& b);

/// Radius of the metric ball of area 10% of vol(X) (inside the triangle).
double ball_radius_ten_percent(int p, int q, int r);

}  // namespace oqe::flow
