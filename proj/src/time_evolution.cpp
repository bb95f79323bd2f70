#include "tbdecay/time_evolution.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "tbdecay/bessel.hpp"
#include "tbdecay/quadrature.hpp"
#include "tbdecay/spectral_decomposition.hpp"

namespace tbdecay {
namespace {

// 16-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGl16X = {
    0.0950125098376374401853193, 0.2816035507792589132304605, 0.4580167776572273863424194,
    0.6178762444026437484466718, 0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr std::array<double, 8> kGl16W = {
    0.1894506104550684962853967, 0.1826034150449235888667637, 0.1691565193950025381893121,
    0.1495959888165767320815017, 0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("time grid must not be empty");
  double prev = -1.0;
  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("times must be >= 0");
    if (t < prev) throw std::invalid_argument("time grid must be nondecreasing");
    prev = t;
  }
}

}  // namespace

SpectralRule::SpectralRule(const ChainModel& model, double t_max, const QuadratureBudget& budget)
    : t_max_(t_max) {
  model.require_coupled();
  if (!(t_max >= 0.0) || !std::isfinite(t_max))
    throw std::invalid_argument("SpectralRule: t_max must be finite and >= 0");
  bound_ = bound_states(model);

  // Pre-split: geometric refinement into the resonance peak (width Gamma0,
  // far narrower than the band at weak coupling) and toward both band
  // edges (sqrt singularities), then phase panels h <= pi/t_max.
  std::set<double> cuts = {kBandMin, kBandMax};
  if (model.in_resonance_regime()) {
    const double e = model.eps0 / 2.0 - 1.0;
    const double d2 = model.delta * model.delta;
    const double er = kBandCenter + e * (2.0 - d2) / (1.0 - d2);
    const double g0 = d2 / (1.0 - d2) * std::sqrt(1.0 - d2 - e * e);
    for (int k = 0; k < 16; ++k) {
      const double off = 10.0 * g0 * std::pow(0.5, k);
      for (double c : {er - off, er + off})
        if (c > kBandMin && c < kBandMax) cuts.insert(c);
    }
    if (er > kBandMin && er < kBandMax) cuts.insert(er);
  }
  for (int k = 1; k < 30; ++k) {
    const double off = kBandwidth * std::pow(0.5, k);
    cuts.insert(kBandMin + off);
    cuts.insert(kBandMax - off);
  }
  const double h_max = M_PI / std::max(t_max, 1e-9);
  std::vector<double> edges;
  double prev = kBandMin;
  for (double c : cuts) {
    if (c <= prev) continue;
    const int n = std::max(1, static_cast<int>(std::ceil((c - prev) / h_max)));
    for (int i = 1; i <= n; ++i) edges.push_back(prev + (c - prev) * i / n);
    prev = c;
  }

  // Adaptive verification: each panel must agree with its own bisection at
  // the probe times (t = 0 catches the density, t = t_max the oscillation)
  // to the per-panel budget, else it is split further.
  auto n1 = [&](double eps) { return ldos(model, eps); };
  auto panel_moment = [&](double a, double b, double t) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex acc = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double dx = h * kGl16X[j];
      const double ep = c + dx, em = c - dx;
      acc += kGl16W[j] * (n1(ep) * std::polar(1.0, -ep * t) + n1(em) * std::polar(1.0, -em * t));
    }
    return h * acc;
  };
  const std::array<double, 2> probes = {0.0, t_max};
  struct Panel {
    double a, b;
    int depth;
  };
  std::vector<Panel> stack;
  stack.reserve(edges.size());
  prev = kBandMin;
  for (double e : edges) {
    stack.push_back({prev, e, 0});
    prev = e;
  }
  double worst = 0.0;
  std::vector<std::pair<double, double>> accepted;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    double err = 0.0;
    for (double t : probes) {
      const Complex whole = panel_moment(p.a, p.b, t);
      const Complex halves = panel_moment(p.a, m, t) + panel_moment(m, p.b, t);
      err = std::max(err, std::abs(whole - halves));
    }
    const bool out_of_work = accepted.size() + stack.size() >= budget.max_panels;
    if (err <= budget.panel_abs_tol || p.depth >= budget.max_depth || out_of_work) {
      if (err > budget.panel_abs_tol) worst = std::max(worst, err);
      accepted.push_back({p.a, p.b});
    } else {
      stack.push_back({p.a, m, p.depth + 1});
      stack.push_back({m, p.b, p.depth + 1});
    }
  }
  if (worst > 0.0) {
    std::ostringstream os;
    os << "SpectralRule: quadrature did not reach the per-panel budget "
       << budget.panel_abs_tol << "; worst panel residual " << worst;
    throw RegimeError(os.str());
  }
  std::sort(accepted.begin(), accepted.end());
  nodes_.reserve(accepted.size() * 16);
  weights_.reserve(accepted.size() * 16);
  for (const auto& [a, b] : accepted) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int j = 7; j >= 0; --j) {  // ascending energies
      nodes_.push_back(c - h * kGl16X[j]);
      weights_.push_back(h * kGl16W[j] * n1(c - h * kGl16X[j]));
    }
    for (int j = 0; j < 8; ++j) {
      nodes_.push_back(c + h * kGl16X[j]);
      weights_.push_back(h * kGl16W[j] * n1(c + h * kGl16X[j]));
    }
  }
}

Complex SpectralRule::amplitude(double t) const {
  Complex acc = 0.0;
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) acc += weights_[i] * std::polar(1.0, -nodes_[i] * t);
  for (const auto& b : bound_) acc += b.weight * std::polar(1.0, -b.energy * t);
  return acc;
}

double SpectralRule::probability(double t) const { return std::norm(amplitude(t)); }

std::vector<Complex> SpectralRule::amplitudes_uniform(double t0, double dt, std::size_t n) const {
  const std::size_t m = nodes_.size() + bound_.size();
  std::vector<Complex> phase(m), step(m);
  std::vector<Complex> w(m);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    phase[i] = std::polar(1.0, -nodes_[i] * t0);
    step[i] = std::polar(1.0, -nodes_[i] * dt);
    w[i] = weights_[i];
  }
  for (std::size_t i = 0; i < bound_.size(); ++i) {
    const std::size_t j = nodes_.size() + i;
    phase[j] = std::polar(1.0, -bound_[i].energy * t0);
    step[j] = std::polar(1.0, -bound_[i].energy * dt);
    w[j] = bound_[i].weight;
  }
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      acc += w[i] * phase[i];
      phase[i] *= step[i];
    }
    out[k] = acc;
  }
  return out;
}

SurvivalTrace evolve_spectral(const ChainModel& model, const std::vector<double>& times,
                              const QuadratureBudget& budget) {
  check_times(times);
  const SpectralRule rule(model, times.back(), budget);
  SurvivalTrace trace;
  trace.method = EvolveMethod::spectral;
  trace.times = times;
  trace.amplitude.reserve(times.size());
  trace.probability.reserve(times.size());
  // Uniform grids get the cheap phase-accumulator path.
  bool uniform = times.size() > 2;
  const double dt0 = times.size() > 1 ? times[1] - times[0] : 0.0;
  for (std::size_t i = 2; i < times.size() && uniform; ++i)
    uniform = std::abs((times[i] - times[i - 1]) - dt0) <= 1e-12 * (1.0 + times.back());
  if (uniform) {
    trace.amplitude = rule.amplitudes_uniform(times.front(), dt0, times.size());
  } else {
    for (double t : times) trace.amplitude.push_back(rule.amplitude(t));
  }
  for (const Complex& c : trace.amplitude) trace.probability.push_back(std::norm(c));
  return trace;
}

SurvivalTrace evolve_diagonalization(const ChainModel& model, const std::vector<double>& times,
                                     int n_sites) {
  model.validate();
  check_times(times);
  const int required = static_cast<int>(std::ceil(2.0 * times.back())) + 100;
  if (n_sites < required) {
    std::ostringstream os;
    os << "evolve_diagonalization: n_sites = " << n_sites << " too small; need >= " << required
       << " (2*t_max + 100) so the reflected front cannot reach site 1";
    throw std::invalid_argument(os.str());
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(n_sites, kBandCenter);
  diag[0] = model.eps0;
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(n_sites - 1, kBulkHopping);
  sub[0] = model.delta;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw RegimeError("evolve_diagonalization: eigensolver failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Eigen::VectorXd weights = solver.eigenvectors().row(0).transpose().array().square();

  SurvivalTrace trace;
  trace.method = EvolveMethod::diagonalization;
  trace.times = times;
  trace.amplitude.reserve(times.size());
  trace.probability.reserve(times.size());
  for (double t : times) {
    Complex acc = 0.0;
    for (int k = 0; k < n_sites; ++k) acc += weights[k] * std::polar(1.0, -evals[k] * t);
    trace.amplitude.push_back(acc);
    trace.probability.push_back(std::norm(acc));
  }
  return trace;
}

SurvivalTrace evolve_bessel(const std::vector<double>& times) {
  check_times(times);
  SurvivalTrace trace;
  trace.method = EvolveMethod::bessel;
  trace.times = times;
  trace.amplitude.reserve(times.size());
  trace.probability.reserve(times.size());
  for (double t : times) {
    // c(t) = exp(-2it) J1(2t)/t; the exp(-2it) factor carries the absolute
    // band-center energy so all three methods share the same gauge.
    const Complex c = std::polar(1.0, -2.0 * t) * (2.0 * bessel_j1_over_x(2.0 * t));
    trace.amplitude.push_back(c);
    trace.probability.push_back(std::norm(c));
  }
  return trace;
}

double long_time_modulation(const ChainModel& model, const SurvivalTrace& trace) {
  model.require_coupled();
  if (!bound_states(model).empty())
    throw std::invalid_argument("long_time_modulation: model has bound states (no full decay)");
  // Precondition check uses the cheap closed-form dip-time estimate.
  const double t_r = t_R_estimate(model);
  if (trace.times.empty() || trace.times.back() < 10.0 * t_r) {
    std::ostringstream os;
    os << "long_time_modulation: trace must extend to >= 10*t_R = " << 10.0 * t_r;
    throw std::invalid_argument(os.str());
  }
  const double t_end = trace.times.back();
  const double t_lo = t_end / 10.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < t_lo) continue;
    const double v = trace.probability[i] * t * t * t;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > -std::numeric_limits<double>::infinity()))
    throw std::invalid_argument("long_time_modulation: no samples in the last decade");
  if (hi + lo == 0.0) return 0.0;
  return (hi - lo) / (hi + lo);
}

}  // namespace tbdecay
