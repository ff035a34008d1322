#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>

#include <fftw3.h>

#include "oqe/core/errors.hpp"
#include "oqe/qe/qe.hpp"
#include "oqe/qe/quadrature.hpp"
#include "oqe/spectral/legendre.hpp"
#include "oqe/spectral/mesh.hpp"

namespace oqe::qe {

namespace {

/// <A psi_i, psi_j> for one eigen system and observable.
class Engine {
 public:
  virtual ~Engine() = default;
  virtual double entry(std::size_t i, std::size_t j) const = 0;
};

// Real harmonics sqrt(n) Pbar_l^|m|(cos t) T_m(phi) with T_0 = 1, T_m = sqrt2 cos(m phi),
// T_{-m} = sqrt2 sin(m phi). The X-integral of f psi psi' is the S^2 integral of f Y Y'.
class SphereEngine : public Engine {
 public:
  SphereEngine(const spectral::SphereData& d, const Observable& obs) : modes_(d.modes) {
    int l_max = 0;
    for (const auto& m : modes_) l_max = std::max(l_max, m.l);
    l_max_ = l_max;
    const auto gl = gauss_legendre(l_max + 64);
    w_ = gl.weights;
    const int nphi = 2 * l_max + 128;
    const int qmax = 2 * l_max;
    gc_.assign(w_.size(), std::vector<double>(qmax + 1, 0.0));
    gs_ = gc_;
    std::vector<double> row(nphi);
    for (std::size_t k = 0; k < w_.size(); ++k) {
      const double t = std::acos(gl.nodes[k]);
      for (int j = 0; j < nphi; ++j) row[j] = obs.f(t, 2 * M_PI * j / nphi);
      for (int q = 0; q <= qmax; ++q) {
        double c = 0, s = 0;
        for (int j = 0; j < nphi; ++j) {
          const double ang = 2 * M_PI * static_cast<double>((static_cast<long long>(q) * j) % nphi) / nphi;
          c += row[j] * std::cos(ang);
          s += row[j] * std::sin(ang);
        }
        gc_[k][q] = c * 2 * M_PI / nphi;
        gs_[k][q] = s * 2 * M_PI / nphi;
      }
    }
    legendre_.resize(l_max + 1);
    for (int m = 0; m <= l_max; ++m) {
      legendre_[m].resize(w_.size());
      for (std::size_t k = 0; k < w_.size(); ++k) legendre_[m][k] = spectral::normalized_legendre(l_max, m, gl.nodes[k]);
    }
  }

  double entry(std::size_t i, std::size_t j) const override {
    const auto& A = modes_[i];
    const auto& B = modes_[j];
    const int a = std::abs(A.m), b = std::abs(B.m);
    double acc = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) {
      const double pa = legendre_[a][k][A.l - a], pb = legendre_[b][k][B.l - b];
      acc += w_[k] * pa * pb * angular(A.m, B.m, k);
    }
    return acc;
  }

 private:
  double gs_signed(std::size_t k, int q) const { return q >= 0 ? gs_[k][q] : -gs_[k][-q]; }

  // integral over phi of f T_m T_m'
  double angular(int m, int mp, std::size_t k) const {
    if (m == 0 && mp == 0) return gc_[k][0];
    if (m == 0 || mp == 0) {
      const int o = m == 0 ? mp : m;
      return std::sqrt(2.0) * (o > 0 ? gc_[k][o] : gs_[k][-o]);
    }
    const int a = std::abs(m), b = std::abs(mp);
    if (m > 0 && mp > 0) return gc_[k][std::abs(a - b)] + gc_[k][a + b];
    if (m < 0 && mp < 0) return gc_[k][std::abs(a - b)] - gc_[k][a + b];
    // cos(a phi) sin(b phi)
    const int c = m > 0 ? a : b, s = m > 0 ? b : a;
    return gs_[k][c + s] - gs_signed(k, c - s);
  }

  std::vector<spectral::SphereMode> modes_;
  int l_max_{0};
  std::vector<double> w_;
  std::vector<std::vector<double>> gc_, gs_;
  std::vector<std::vector<std::vector<double>>> legendre_;
};

// psi_m = cos(m.x)/pi on X (1/(pi sqrt2) for m = 0); the X-integral of f psi_m psi_m'
// is Re c_{m-m'} + Re c_{m+m'} with c_k the torus Fourier coefficients of f.
class PillowcasePositionEngine : public Engine {
 public:
  PillowcasePositionEngine(const spectral::PillowcaseData& d, const Observable& obs) : modes_(d.modes) {
    int M = 0;
    for (const auto& m : modes_) M = std::max({M, std::abs(m(0)), std::abs(m(1))});
    n_ = 64;
    while (n_ < 4 * M + 65) n_ *= 2;
    const std::size_t total = static_cast<std::size_t>(n_) * n_;
    fftw_complex* buf = fftw_alloc_complex(total);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        buf[static_cast<std::size_t>(a) * n_ + b][0] = obs.f(2 * M_PI * a / n_, 2 * M_PI * b / n_);
        buf[static_cast<std::size_t>(a) * n_ + b][1] = 0.0;
      }
    fftw_plan plan = fftw_plan_dft_2d(n_, n_, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    re_.resize(total);
    for (std::size_t i = 0; i < total; ++i) re_[i] = buf[i][0] / static_cast<double>(total);
    fftw_free(buf);
  }

  double entry(std::size_t i, std::size_t j) const override {
    const Eigen::Vector2i& m = modes_[i];
    const Eigen::Vector2i& mp = modes_[j];
    double v = coefficient(m - mp) + coefficient(m + mp);
    if (m.isZero()) v /= std::sqrt(2.0);
    if (mp.isZero()) v /= std::sqrt(2.0);
    return v;
  }

 private:
  double coefficient(const Eigen::Vector2i& k) const {
    const int a = ((k(0) % n_) + n_) % n_, b = ((k(1) % n_) + n_) % n_;
    return re_[static_cast<std::size_t>(a) * n_ + b];
  }

  std::vector<Eigen::Vector2i> modes_;
  int n_{64};
  std::vector<double> re_;
};

// a(D) cos(m.x) = (a(m) e^{imx} + a(-m) e^{-imx}) / 2; the cosine basis diagonalizes the even part.
class PillowcaseDirectionEngine : public Engine {
 public:
  PillowcaseDirectionEngine(const spectral::PillowcaseData& d, const Observable& obs, double mean)
      : modes_(d.modes), a_(obs.a), mean_(mean) {}

  double entry(std::size_t i, std::size_t j) const override {
    if (i != j) return 0.0;
    const auto& m = modes_[i];
    if (m.isZero()) return mean_;
    const double t = std::atan2(static_cast<double>(m(1)), static_cast<double>(m(0)));
    return 0.5 * (a_(t) + a_(t + M_PI));
  }

 private:
  std::vector<Eigen::Vector2i> modes_;
  std::function<double(double)> a_;
  double mean_;
};

// Even/odd extensions across AB: same parity pairs see f + f o rho, mixed pairs f - f o rho.
class FemEngine : public Engine {
 public:
  FemEngine(const spectral::FemData& d, const Observable& obs) : data_(d) {
    auto at = [f = obs.f](const Eigen::Vector2d& k, double sign) {
      const Eigen::Vector2d w = spectral::klein_to_disk(k);
      const auto z = geom::disk_to_half_plane<double>(w(0), w(1));
      return f(z.x, z.y) + sign * f(-z.x, z.y);
    };
    plus_ = spectral::assemble_mass(*d.space, [&](const Eigen::Vector2d& k) { return at(k, 1.0); });
    minus_ = spectral::assemble_mass(*d.space, [&](const Eigen::Vector2d& k) { return at(k, -1.0); });
  }

  double entry(std::size_t i, std::size_t j) const override {
    const auto& M = data_.parity[i] == data_.parity[j] ? plus_ : minus_;
    const Eigen::VectorXd Mu = M * data_.vectors.col(static_cast<Eigen::Index>(j));
    return data_.vectors.col(static_cast<Eigen::Index>(i)).dot(Mu);
  }

 private:
  const spectral::FemData& data_;
  spectral::SparseMatrix plus_, minus_;
};

std::unique_ptr<Engine> make_engine(const spectral::EigenSystem& eig, const Observable& obs) {
  if (obs.kind == ObservableKind::direction) {
    const auto* p = std::get_if<spectral::PillowcaseData>(&eig.data);
    if (!p)
      throw UnsupportedObservable("direction observable '" + obs.name + "' requires the pillowcase backend");
    return std::make_unique<PillowcaseDirectionEngine>(*p, obs, liouville_average(obs, eig.backend));
  }
  if (!obs.f) throw UnsupportedObservable("observable '" + obs.name + "' has no position function");
  if (const auto* s = std::get_if<spectral::SphereData>(&eig.data)) return std::make_unique<SphereEngine>(*s, obs);
  if (const auto* p = std::get_if<spectral::PillowcaseData>(&eig.data))
    return std::make_unique<PillowcasePositionEngine>(*p, obs);
  return std::make_unique<FemEngine>(std::get<spectral::FemData>(eig.data), obs);
}

}  // namespace

MatrixElementSeries matrix_elements(const spectral::EigenSystem& eig, const Observable& obs) {
  const auto engine = make_engine(eig, obs);
  MatrixElementSeries s;
  s.backend = eig.backend;
  s.observable = obs.name;
  s.omega = liouville_average(obs, eig.backend);
  s.group_tolerance = eig.group_tolerance;
  s.lambdas = eig.eigenvalues;
  s.values.resize(eig.size());
  for (std::size_t j = 0; j < eig.size(); ++j) s.values[j] = engine->entry(j, j);
  return s;
}

MatrixElementSeries operator+(const MatrixElementSeries& a, const MatrixElementSeries& b) {
  if (a.lambdas != b.lambdas) throw DomainError("series are over different spectra");
  MatrixElementSeries s = a;
  s.observable = a.observable + "+" + b.observable;
  s.omega = a.omega + b.omega;
  for (std::size_t j = 0; j < s.values.size(); ++j) s.values[j] = a.values[j] + b.values[j];
  return s;
}

Eigen::MatrixXd matrix_block(const spectral::EigenSystem& eig, const Observable& obs, std::size_t first,
                             std::size_t size) {
  if (first + size > eig.size()) throw DomainError("matrix_block: range exceeds the spectrum");
  const auto engine = make_engine(eig, obs);
  Eigen::MatrixXd B(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j <= i; ++j) B(i, j) = B(j, i) = engine->entry(first + i, first + j);
  return B;
}

DefectReport operator_average_defect(const spectral::EigenSystem& eig, const Observable& obs, double lambda) {
  const auto engine = make_engine(eig, obs);
  const double omega = liouville_average(obs, eig.backend);
  DefectReport r;
  for (const auto& [first, size] : eig.multiplets) {
    if (eig.eigenvalues[first] > lambda) break;
    Eigen::MatrixXd B(size, size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j <= i; ++j) B(i, j) = B(j, i) = engine->entry(first + i, first + j);
    B.diagonal().array() -= omega;
    double norm;
    if (size == 1) {
      norm = std::abs(B(0, 0));
    } else {
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(B, Eigen::EigenvaluesOnly).eigenvalues();
      norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    }
    r.norm = std::max(r.norm, norm);
    r.count += size;
    r.largest_block = std::max(r.largest_block, size);
  }
  r.ratio = r.count ? r.norm / static_cast<double>(r.count) : 0.0;
  return r;
}

}  // namespace oqe::qe
