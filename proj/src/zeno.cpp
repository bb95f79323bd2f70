#include "tbdecay/zeno.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tbdecay {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rate_from_probability(double p, double tau) {
  if (p <= 0.0) return kInf;  // exact dip zero: explicit infinity marker
  return -std::log(p) / tau;
}

// Scan grid for the anti-Zeno peak search: log-spaced at 200 points per
// decade from 0.01, switching to a fixed linear step once the log spacing
// exceeds it, so the period-pi interference beat stays resolved while the
// grid is still >= 200 points per decade everywhere.
struct PeakGrid {
  std::vector<double> taus;
  std::size_t linear_from;  // first index of the uniform tail
  double h_lin;
};

PeakGrid peak_scan_grid(double end) {
  const double ratio = std::pow(10.0, 1.0 / 200.0);
  PeakGrid g;
  g.h_lin = 0.35;
  g.linear_from = 0;
  double tau = 0.01;
  bool linear = false;
  while (tau < end) {
    g.taus.push_back(tau);
    if (!linear && tau * (ratio - 1.0) > g.h_lin) {
      linear = true;
      g.linear_from = g.taus.size() - 1;
    }
    tau = linear ? tau + g.h_lin : tau * ratio;
  }
  if (!linear) g.linear_from = g.taus.size();
  g.taus.push_back(end);
  return g;
}

}  // namespace

std::string to_string(MeasurementRegime r) {
  switch (r) {
    case MeasurementRegime::zeno:
      return "zeno";
    case MeasurementRegime::anti_zeno:
      return "anti_zeno";
    case MeasurementRegime::neutral:
      return "neutral";
  }
  return "unknown";
}

double gamma_eff(const ChainModel& model, double tau, const QuadratureBudget& budget) {
  model.require_coupled();
  if (!(tau > 0.0)) throw std::invalid_argument("gamma_eff: tau must be > 0");
  const SpectralRule rule(model, tau, budget);
  return rate_from_probability(rule.probability(tau), tau);
}

double gamma_eff(const SpectralRule& rule, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("gamma_eff: tau must be > 0");
  return rate_from_probability(rule.probability(tau), tau);
}

double find_tau_star(const std::function<double(double)>& survival, double gamma0,
                     double scan_step, double scan_end) {
  if (!(scan_step > 0.0) || !(scan_end > scan_step))
    throw std::invalid_argument("find_tau_star: bad scan window");
  auto excess = [&](double tau) { return rate_from_probability(survival(tau), tau) - gamma0; };
  // A crossing must clear this margin so that an identically-exponential
  // input (gamma_eff == gamma0 up to roundoff) reports no root instead of
  // latching onto the sign of the rounding noise.
  const double detect = 1e-9 * std::abs(gamma0);
  double a = scan_step;
  double fa = excess(a);
  // The requested step is kept verbatim below tau = 64; beyond that the
  // crossing structure has period pi and a pi/4 step cannot miss it.
  while (a < scan_end) {
    const double step = a < 64.0 ? scan_step : std::max(scan_step, M_PI / 4.0);
    const double b = std::min(a + step, scan_end);
    const double fb = excess(b);
    if (fa > detect)
      throw RegimeError("find_tau_star: gamma_eff above gamma0 before any crossing was bracketed");
    // fa may sit within +roundoff of zero when a grid point lands on the
    // root itself; that still brackets the crossing.
    if (fa <= detect && fb > detect) {
      double lo = a, hi = b;
      while (hi - lo > 1e-6 * hi) {
        const double m = 0.5 * (lo + hi);
        if (excess(m) < 0.0)
          lo = m;
        else
          hi = m;
      }
      return 0.5 * (lo + hi);
    }
    a = b;
    fa = fb;
  }
  throw RegimeError("find_tau_star: no root of gamma_eff = gamma0 in the scan window");
}

double find_tau_star(const ChainModel& model, const QuadratureBudget& budget) {
  model.require_resonance_regime();
  if (model.delta > 0.5)
    throw std::invalid_argument("find_tau_star: weak coupling (delta <= 0.5) required");
  const double gamma0 = gamma0_probability(model);
  const double step = t_S_numeric(model, budget) / 20.0;
  const double end = 5.0 * t_R_estimate(model);
  const SpectralRule rule(model, end, budget);
  return find_tau_star([&rule](double tau) { return rule.probability(tau); }, gamma0, step, end);
}

AntiZenoPeak find_tau_star_star(const ChainModel& model, const QuadratureBudget& budget,
                                double window_end) {
  model.require_coupled();
  const double gamma0 = reference_decay_rate(model);
  // Scan window: ten dip times when the resonance exists, otherwise a few
  // hundred golden-rule decay times.
  double end = window_end;
  if (end <= 0.0)
    end = model.in_resonance_regime() ? 10.0 * t_R_numeric(model, budget) : 200.0 / gamma0;
  const SpectralRule rule(model, end, budget);
  const PeakGrid pg = peak_scan_grid(end);
  const std::vector<double>& grid = pg.taus;
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < std::min(pg.linear_from, grid.size()); ++i)
    vals[i] = gamma_eff(rule, grid[i]);
  if (pg.linear_from + 1 < grid.size()) {
    // uniform tail (all but the closing endpoint) via phase accumulators
    const std::size_t n_lin = grid.size() - 1 - pg.linear_from;
    const std::vector<Complex> amps = rule.amplitudes_uniform(grid[pg.linear_from], pg.h_lin, n_lin);
    for (std::size_t k = 0; k < n_lin; ++k)
      vals[pg.linear_from + k] =
          rate_from_probability(std::norm(amps[k]), grid[pg.linear_from + k]);
  }
  if (grid.size() >= 1) vals.back() = gamma_eff(rule, grid.back());

  // The anti-Zeno peak is the grid maximum of gamma_eff: the spike at the
  // first deep interference dip towers over both the plateau and the
  // later, shallower dips (gamma_eff = -ln P/tau decays as 1/tau at fixed
  // dip depth). The fine interference ripples riding the plateau are not
  // meaningful peaks: their prominence sweeps through any fixed threshold
  // on the approach to the dip, so "first local maximum above a bar"
  // would select a grid-dependent ripple instead.
  std::size_t imax = 1;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (vals[i] > vals[imax]) imax = i;
  const bool interior = vals[imax] > vals[imax - 1] && vals[imax] > vals[imax + 1];
  std::size_t l = imax;
  while (l > 0 && vals[l - 1] < vals[l]) --l;
  std::size_t r = imax;
  while (r + 1 < grid.size() && vals[r + 1] < vals[r]) ++r;
  const double prominence = vals[imax] - std::max(vals[l], vals[r]);
  if (!interior || !(prominence > 0.05 * gamma0))
    throw RegimeError("find_tau_star_star: gamma_eff has no interior peak in the scan window");

  // Golden-section refinement on the bracketing interval.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = grid[imax - 1], hi = grid[imax + 1];
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = gamma_eff(rule, c), fd = gamma_eff(rule, d);
  while (hi - lo > 1e-7 * lo) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = gamma_eff(rule, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = gamma_eff(rule, d);
    }
  }
  const double tau = fc > fd ? c : d;
  const double value = std::max(fc, fd);
  return {tau, value, value / gamma0, value > gamma0};
}

std::vector<double> measurement_survival(const ChainModel& model, double tau, int n_cycles,
                                         const QuadratureBudget& budget) {
  model.require_coupled();
  if (!(tau > 0.0)) throw std::invalid_argument("measurement_survival: tau must be > 0");
  if (n_cycles < 1) throw std::invalid_argument("measurement_survival: n_cycles must be >= 1");
  const SpectralRule rule(model, tau, budget);
  const double p = rule.probability(tau);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_cycles));
  double acc = 1.0;
  for (int k = 0; k < n_cycles; ++k) {
    acc *= p;  // projective reset: cycles are independent and identical
    out.push_back(acc);
  }
  return out;
}

MeasurementRegime classify_rate(double gamma_eff_value, double gamma0) {
  if (std::isinf(gamma_eff_value)) return MeasurementRegime::anti_zeno;
  if (gamma_eff_value < gamma0 * (1.0 - kClassifyTol)) return MeasurementRegime::zeno;
  if (gamma_eff_value > gamma0 * (1.0 + kClassifyTol)) return MeasurementRegime::anti_zeno;
  return MeasurementRegime::neutral;
}

MeasurementRegime classify(const ChainModel& model, double tau, const QuadratureBudget& budget) {
  return classify_rate(gamma_eff(model, tau, budget), reference_decay_rate(model));
}

ZenoReport zeno_report(const ChainModel& model, const std::vector<double>& tau_grid,
                       const QuadratureBudget& budget) {
  model.require_coupled();
  if (tau_grid.empty()) throw std::invalid_argument("zeno_report: empty tau grid");
  for (double t : tau_grid)
    if (!(t > 0.0)) throw std::invalid_argument("zeno_report: tau grid must be > 0");

  ZenoReport rep;
  rep.tau_grid = tau_grid;
  rep.gamma0 = reference_decay_rate(model);
  if (model.in_resonance_regime()) {
    const ResonancePole pole = find_resonance(model);
    rep.Gamma0 = pole.gamma0_amp;
    rep.eps_r = pole.eps_r;
    rep.Z = pole.Z;
  } else {
    rep.Gamma0 = kNaN;
    rep.eps_r = kNaN;
    rep.Z = kNaN;
  }

  const SpectralRule rule(model, tau_grid.back(), budget);
  rep.gamma_eff.reserve(tau_grid.size());
  rep.classification.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    const double g = gamma_eff(rule, tau);
    rep.gamma_eff.push_back(g);
    rep.classification.push_back(classify_rate(g, rep.gamma0));
  }

  rep.times = CharacteristicTimes{};
  rep.times.t_S_site = t_S_estimate(model, SpectralReading::site);
  rep.times.t_S_bath = t_S_estimate(model, SpectralReading::bath);
  rep.times.t_S_numeric = t_S_numeric(model, budget);
  if (model.in_resonance_regime()) {
    rep.times.t_R_formula = t_R_estimate(model);
    rep.times.t_R_numeric = t_R_numeric(model, budget);
    rep.times.t_R_out_of_regime =
        std::abs(rep.times.t_R_numeric - rep.times.t_R_formula) / rep.times.t_R_formula > 0.5;
  } else {
    rep.times.t_R_formula = kNaN;
    rep.times.t_R_numeric = kNaN;
    rep.times.t_R_out_of_regime = true;
  }

  if (model.in_resonance_regime() && model.delta <= 0.5) {
    try {
      rep.tau_star = find_tau_star(model, budget);
    } catch (const RegimeError&) {
      rep.tau_star = std::nullopt;  // no root: reported as absent, never fabricated
    }
  }
  try {
    const double window =
        std::isfinite(rep.times.t_R_numeric) ? 10.0 * rep.times.t_R_numeric : 0.0;
    const AntiZenoPeak peak = find_tau_star_star(model, budget, window);
    rep.tau_star_star = peak.tau;
    rep.tau_star_star_ratio = peak.ratio;
  } catch (const RegimeError&) {
    rep.tau_star_star = std::nullopt;
    rep.tau_star_star_ratio = std::nullopt;
  }
  return rep;
}

}  // namespace tbdecay
