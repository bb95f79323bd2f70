#include "tbdecay/lattice_green.hpp"

#include <algorithm>
#include <cmath>

#include "tbdecay/quadrature.hpp"

namespace tbdecay {
namespace {

// w(z) = sqrt(x-1) sqrt(x+1), principal branches of each factor. The
// product has its cut exactly on the band and behaves like x at infinity.
// On the real axis a +0.0 imaginary part selects the retarded (i0+) side.
Complex band_root(Complex x) {
  return std::sqrt(x - 1.0) * std::sqrt(x + 1.0);
}

}  // namespace

Complex lead_green(Complex z, Sheet sheet) {
  const Complex x = 0.5 * (z - kBandCenter);
  const Complex w = band_root(x);
  return sheet == Sheet::physical ? x - w : x + w;
}

Complex lead_green_derivative(Complex z, Sheet sheet) {
  const Complex x = 0.5 * (z - kBandCenter);
  const Complex w = band_root(x);
  // d/dz (x -+ w) = (1 -+ x/w)/2
  return sheet == Sheet::physical ? 0.5 * (1.0 - x / w) : 0.5 * (1.0 + x / w);
}

Complex g11(const ChainModel& model, Complex z, Sheet sheet) {
  model.validate();
  const Complex den = z - model.eps0 - model.delta * model.delta * lead_green(z, sheet);
  if (den == Complex(0.0, 0.0)) throw RegimeError("g11: pole hit exactly at the requested energy");
  return 1.0 / den;
}

double ldos(const ChainModel& model, double eps) {
  model.validate();
  if (eps < kBandMin || eps > kBandMax)
    throw std::domain_error("ldos: energy outside the band [0, 4]");
  // Exact i0+ limit: with x = (eps-2)/2 and s = sqrt(1-x^2),
  // g11 = 1/[(eps - eps0 - d^2 x) + i d^2 s], N1 = d^2 s / (pi |den|^2).
  const double x = 0.5 * (eps - kBandCenter);
  const double s = std::sqrt(std::max(1.0 - x * x, 0.0));
  const double d2 = model.delta * model.delta;
  const double re = eps - model.eps0 - d2 * x;
  const double im = d2 * s;
  const double den2 = re * re + im * im;
  if (den2 == 0.0) throw RegimeError("ldos: vanishing denominator (delta = 0 with eps = eps0)");
  return d2 * s / (M_PI * den2);
}

double bath_dos(double eps) {
  const double u = eps - kBandCenter;
  const double arg = kBandwidth - u * u;  // 4 - (eps-2)^2
  return arg > 0.0 ? std::sqrt(arg) / (2.0 * M_PI) : 0.0;
}

std::vector<BoundState> bound_states(const ChainModel& model) {
  model.validate();
  const double d2 = model.delta * model.delta;
  auto pole_fn = [&](double eps) {
    return eps - model.eps0 - d2 * lead_green(Complex(eps, 0.0), Sheet::physical).real();
  };
  std::vector<BoundState> out;
  const double step = 1e-3;
  for (const auto& [lo, hi] : {std::pair{-10.0, kBandMin}, std::pair{kBandMax, 14.0}}) {
    double a = lo, fa = pole_fn(a);
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    for (std::size_t i = 1; i <= n; ++i) {
      const double b = std::min(lo + static_cast<double>(i) * step, hi);
      const double fb = pole_fn(b);
      // fa == 0 can only happen at the exact binding threshold, where the
      // emerging state sits at the band edge with zero weight; skip it.
      if ((fa < 0.0 && fb >= 0.0) || (fa > 0.0 && fb <= 0.0)) {
        double x0 = a, x1 = b, f0 = fa;
        while (x1 - x0 > 1e-12) {
          const double m = 0.5 * (x0 + x1);
          const double fm = pole_fn(m);
          if ((f0 < 0.0) == (fm < 0.0)) {
            x0 = m;
            f0 = fm;
          } else {
            x1 = m;
          }
        }
        const double eb = 0.5 * (x0 + x1);
        const Complex gp = lead_green_derivative(Complex(eb, 0.0), Sheet::physical);
        const double weight = 1.0 / (1.0 - d2 * gp.real());
        out.push_back({eb, weight});
      }
      a = b;
      fa = fb;
    }
  }
  std::sort(out.begin(), out.end(), [](const BoundState& l, const BoundState& r) {
    return l.energy < r.energy;
  });
  return out;
}

SpectralData sample_spectral_data(const ChainModel& model, std::size_t n_points) {
  model.validate();
  if (n_points < 2) throw std::invalid_argument("sample_spectral_data: need at least 2 points");
  SpectralData data;
  data.energies.reserve(n_points);
  data.ldos.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double eps = kBandMin + (kBandMax - kBandMin) * static_cast<double>(i) /
                                      static_cast<double>(n_points - 1);
    data.energies.push_back(eps);
    data.ldos.push_back(ldos(model, eps));
  }
  data.bound_states = bound_states(model);
  return data;
}

double spectral_norm(const ChainModel& model, double abs_tol) {
  model.validate();
  double total = 0.0;
  // Split at the resonance peak so the adaptive pass converges quickly for
  // small delta; the peak sits at eps_r with half-width ~ Gamma0.
  std::vector<double> cuts = {kBandMin, kBandCenter, kBandMax};
  if (model.in_resonance_regime()) {
    const double e = model.eps0 / 2.0 - 1.0;
    const double d2 = model.delta * model.delta;
    const double er = kBandCenter + e * (2.0 - d2) / (1.0 - d2);
    const double g0 = d2 / (1.0 - d2) * std::sqrt(1.0 - d2 - e * e);
    for (double c : {er - 10.0 * g0, er, er + 10.0 * g0})
      if (c > kBandMin && c < kBandMax) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += integrate_adaptive_real([&](double eps) { return ldos(model, eps); }, cuts[i],
                                     cuts[i + 1], abs_tol);
  }
  for (const auto& b : bound_states(model)) total += b.weight;
  return total;
}

}  // namespace tbdecay
