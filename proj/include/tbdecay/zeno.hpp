#ifndef TBDECAY_ZENO_HPP
#define TBDECAY_ZENO_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tbdecay/chain_model.hpp"
#include "tbdecay/spectral_decomposition.hpp"
#include "tbdecay/time_evolution.hpp"

namespace tbdecay {

enum class MeasurementRegime { zeno, anti_zeno, neutral };

std::string to_string(MeasurementRegime r);

/// Relative tolerance around gamma0 separating zeno / neutral / anti-zeno.
inline constexpr double kClassifyTol = 1e-3;

/// Stroboscopic decay rate -ln P(tau)/tau under projective measurements of
/// period tau; survival after n cycles is P(tau)^n = exp(-gamma_eff n tau).
/// Returns +infinity at an exact dip zero (P = 0).
double gamma_eff(const ChainModel& model, double tau, const QuadratureBudget& budget = {});

/// Fast path against a prebuilt rule (tau <= rule.t_max()).
double gamma_eff(const SpectralRule& rule, double tau);

/// Smallest tau > 0 with gamma_eff(tau) = gamma0 (= 2 Gamma0), by sign scan
/// plus bisection to 1e-6 relative. gamma_eff < gamma0 must hold on the
/// whole scanned grid below the root. Throws RegimeError when no root
/// exists up to 5 * t_R.
double find_tau_star(const ChainModel& model, const QuadratureBudget& budget = {});

/// Generic version over an arbitrary survival probability P(tau); used for
/// the degenerate-input checks. scan_step/scan_end control the sign scan.
double find_tau_star(const std::function<double(double)>& survival, double gamma0,
                     double scan_step, double scan_end);

struct AntiZenoPeak {
  double tau;          ///< first prominent local maximum of gamma_eff
  double gamma_eff;    ///< value at the refined peak
  double ratio;        ///< gamma_eff / gamma0
  bool exceeds_gamma0; ///< true anti-Zeno acceleration
};

/// The anti-Zeno peak of gamma_eff: its maximum over [0.01, 10 t_R]
/// (the dip-driven spike), located on a log grid of >= 200 points per
/// decade densified to resolve the period-pi interference beat, then
/// refined by golden section. The peak must be an interior strict local
/// maximum exceeding its neighboring minima by 5% of gamma0, otherwise
/// gamma_eff is reported monotone over the window (RegimeError).
/// window_end overrides the scan end (0 = automatic: 10 * t_R_numeric in
/// the resonance regime, else 200 golden-rule decay times).
AntiZenoPeak find_tau_star_star(const ChainModel& model, const QuadratureBudget& budget = {},
                                double window_end = 0.0);

/// Survival sequence P(tau)^k, k = 1..n_cycles (projective reset makes the
/// cycles independent and identical).
std::vector<double> measurement_survival(const ChainModel& model, double tau, int n_cycles,
                                         const QuadratureBudget& budget = {});

/// Compares gamma_eff(tau) against the reference rate with relative
/// tolerance kClassifyTol.
MeasurementRegime classify(const ChainModel& model, double tau,
                           const QuadratureBudget& budget = {});

MeasurementRegime classify_rate(double gamma_eff_value, double gamma0);

/// Everything the zeno CLI subcommand emits.
struct ZenoReport {
  std::vector<double> tau_grid;
  std::vector<double> gamma_eff;
  std::vector<MeasurementRegime> classification;
  double gamma0;      ///< reference rate (2 Gamma0, or golden rule outside the resonance regime)
  double Gamma0;      ///< amplitude rate (NaN outside the resonance regime)
  double eps_r;       ///< resonance energy (NaN outside)
  double Z;           ///< pole weight |a|^2 (NaN outside)
  std::optional<double> tau_star;
  std::optional<double> tau_star_star;
  std::optional<double> tau_star_star_ratio;
  CharacteristicTimes times;
};

ZenoReport zeno_report(const ChainModel& model, const std::vector<double>& tau_grid,
                       const QuadratureBudget& budget = {});

}  // namespace tbdecay

#endif
