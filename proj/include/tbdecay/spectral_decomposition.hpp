#ifndef TBDECAY_SPECTRAL_DECOMPOSITION_HPP
#define TBDECAY_SPECTRAL_DECOMPOSITION_HPP

#include <complex>
#include <vector>

#include "tbdecay/chain_model.hpp"
#include "tbdecay/time_evolution.hpp"

namespace tbdecay {

// Dip-time estimate constants for the semi-infinite chain,
// t_R = alpha (hbar/Gamma0) ln(beta B / (4 Gamma0)).
inline constexpr double kDipTimeAlpha = 2.5;
inline constexpr double kDipTimeBeta = 1.6;

/// Second-sheet resonance pole z_p = eps_r - i Gamma0 of g11 and its
/// residue a; Z = |a|^2 (amplitude weight of the exponential term).
struct ResonancePole {
  double eps_r;        ///< resonance energy
  double gamma0_amp;   ///< amplitude decay rate Gamma0 > 0
  Complex residue;     ///< a = 1/(1 - delta^2 g'(z_p)), second sheet
  double Z;            ///< |a|^2

  Complex position() const { return {eps_r, -gamma0_amp}; }
  Complex pole_term(double t) const;  ///< a exp(-i eps_r t - Gamma0 t)
};

/// Complex Newton iteration for the root of z - eps0 - delta^2 g_II(z) in
/// the lower half-plane, seeded at eps0 - i delta^2 sqrt(1 - (eps0/2-1)^2).
/// Requires the resonance regime; throws RegimeError after 200 iterations
/// without convergence.
ResonancePole find_resonance(const ChainModel& model);

/// Closed form Gamma0 = delta^2/(1-delta^2) sqrt(1 - delta^2 - (eps0/2-1)^2)
/// (exact for this lattice; the numeric pole must reproduce it).
double gamma0_amp_closed_form(const ChainModel& model);

/// Probability decay rate gamma0 = 2 Gamma0. At eps0 = 2 this equals the
/// band-center closed form 2 delta^2 (1-delta^2)^{-1/2} identically.
double gamma0_probability(const ChainModel& model);

/// Band-center closed form 2 delta^2 (1-delta^2)^{-1/2} (requires delta < 1).
double gamma0_band_center_closed_form(double delta);

/// Reference decay rate used by the Zeno analysis: 2*Gamma0 in the
/// resonance regime; outside it (delta >= 1) the golden-rule rate
/// 2 delta^2 sqrt(1 - (eps0/2-1)^2) = 2 pi delta^2 rho_bath(eps0),
/// which the pole rate reduces to as delta -> 0.
double reference_decay_rate(const ChainModel& model);

/// Survival amplitude split c(t) = pole_term(t) + return_term(t), with
/// c(t) from the spectral method and the pole term from find_resonance.
/// phase_diff = arg(pole) - arg(return), wrapped to (-pi, pi].
struct Decomposition {
  std::vector<double> times;
  std::vector<Complex> pole_term;
  std::vector<Complex> return_term;
  std::vector<double> phase_diff;
};

Decomposition decompose(const ChainModel& model, const std::vector<double>& times,
                        const QuadratureBudget& budget = {});

/// Wraps an angle to (-pi, pi].
double wrap_angle(double phi);

/// Wrap-aware distance of a phase difference from pi.
double phase_distance_from_pi(double phi);

/// Closed-form dip-time estimate alpha/Gamma0 * ln(beta B/(4 Gamma0)).
/// Throws RegimeError when the log argument is <= 1 (outside validity).
double t_R_estimate(const ChainModel& model);

/// Earliest time where |pole_term| = |return_term| subject to the
/// interference gate |phase_diff - pi| < pi/2 (wrap-aware): the first deep
/// dip of P(t) at eps0 = 2. Scans h(t) = |pole| - |return| up to 50/Gamma0
/// and bisects each sign change; throws RegimeError if no gated crossing
/// exists in that window.
double t_R_numeric(const ChainModel& model, const QuadratureBudget& budget = {});

/// Which reading of the quadratic-regime estimate t_S = pi N1(eps0):
/// `site` uses the perturbed site-1 LDOS, `bath` the unperturbed
/// final-states density of the lead.
enum class SpectralReading { site, bath };

double t_S_estimate(const ChainModel& model, SpectralReading reading);

/// Largest t (on a 1e-3 grid, stopping at the first violation) with
/// |P(t) - (1 - delta^2 t^2)| <= 0.1 (1 - P(t)): the end of the quadratic
/// regime. The quadratic coefficient delta^2 is the on-site Hamiltonian
/// variance.
double t_S_numeric(const ChainModel& model, const QuadratureBudget& budget = {});

/// All characteristic times of a model, plus the out-of-regime flag for
/// the dip-time estimate (raised when formula and numeric crossover
/// disagree by more than 50%).
struct CharacteristicTimes {
  double t_R_formula;
  double t_R_numeric;
  double t_S_site;
  double t_S_bath;
  double t_S_numeric;
  bool t_R_out_of_regime;
  double alpha = kDipTimeAlpha;
  double beta = kDipTimeBeta;
};

CharacteristicTimes characteristic_times(const ChainModel& model,
                                         const QuadratureBudget& budget = {});

}  // namespace tbdecay

#endif
