#ifndef TBDECAY_LATTICE_GREEN_HPP
#define TBDECAY_LATTICE_GREEN_HPP

#include <complex>
#include <vector>

#include "tbdecay/chain_model.hpp"

namespace tbdecay {

using Complex = std::complex<double>;

/// Riemann sheet of the lead Green function. The physical sheet carries the
/// branch cut on [0, 4]; the second sheet is the continuation of the
/// retarded function through the cut into the lower half-plane.
enum class Sheet { physical, second };

/// End-site Green function g(z) of the unperturbed semi-infinite chain,
/// g = 1/(z - 2 - g). With x = (z-2)/2 and w = sqrt(x-1)*sqrt(x+1)
/// (principal branches, cut exactly on the band):
///   physical sheet: g = x - w   (g -> 0 at infinity, Im g < 0 for Im z > 0)
///   second sheet:   g = x + w
/// Real in-band energies evaluate to the retarded limit g(eps + i0+).
Complex lead_green(Complex z, Sheet sheet);

/// dg/dz on the requested sheet, dg/dz = (1 -+ x/w)/2. Not defined at the
/// band edges (w = 0).
Complex lead_green_derivative(Complex z, Sheet sheet);

/// Site-1 Green function 1/(z - eps0 - delta^2 g(z)).
/// Throws RegimeError if the denominator is exactly zero at z.
Complex g11(const ChainModel& model, Complex z, Sheet sheet);

/// Local density of states of site 1, -Im g11(eps + i0+)/pi, evaluated by
/// the exact in-band limit (no finite broadening). Requires eps in [0, 4];
/// out-of-band energies are a domain error (bound states are discrete).
double ldos(const ChainModel& model, double eps);

/// Unperturbed end-site density of the lead, sqrt(4 - (eps-2)^2)/(2 pi)
/// inside the band, 0 outside.
double bath_dos(double eps);

struct BoundState {
  double energy;  ///< outside [0, 4]
  double weight;  ///< residue of g11, in (0, 1]
};

/// All discrete poles of g11 on the physical sheet outside the band,
/// located by a 1e-3 sign scan on (-10, 0) and (4, 14) plus bisection to
/// 1e-12. The denominator is monotone on each side, so the scan cannot
/// miss a root there. Empty below the binding threshold
/// (delta_c = sqrt(2) at eps0 = 2).
std::vector<BoundState> bound_states(const ChainModel& model);

/// LDOS sampled on a uniform in-band grid plus the discrete poles.
struct SpectralData {
  std::vector<double> energies;
  std::vector<double> ldos;
  std::vector<BoundState> bound_states;
};

SpectralData sample_spectral_data(const ChainModel& model, std::size_t n_points);

/// Integral of the LDOS over the band plus the bound-state weights,
/// by adaptive quadrature to abs_tol. Equals 1 for any valid model
/// (completeness); exposed so callers can check it.
double spectral_norm(const ChainModel& model, double abs_tol = 1e-10);

}  // namespace tbdecay

#endif
