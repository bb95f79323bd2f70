#ifndef TBDECAY_CHAIN_MODEL_HPP
#define TBDECAY_CHAIN_MODEL_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace tbdecay {

// Fixed units: hbar = 1, bulk hopping V = 1, bulk site energy 2.
// The unperturbed band is [0, 4] with center 2 and bandwidth B = 4.
inline constexpr double kHbar = 1.0;
inline constexpr double kBulkHopping = 1.0;
inline constexpr double kBandMin = 0.0;
inline constexpr double kBandMax = 4.0;
inline constexpr double kBandCenter = 2.0;
inline constexpr double kBandwidth = 4.0;

/// Semi-infinite tight-binding chain with a weakened first hopping.
///
/// Site 1 has energy eps0 and couples to site 2 with normalized amplitude
/// delta; all other sites sit at the band center with unit hopping.
struct ChainModel {
  double eps0 = kBandCenter;  ///< site energy of the first site
  double delta = 0.2;         ///< first hopping / bulk hopping

  /// Throws std::invalid_argument on non-finite or negative parameters.
  /// delta = 0 (decoupled site) is allowed here; analysis operations
  /// that require decay reject it separately.
  void validate() const {
    if (!std::isfinite(eps0)) throw std::invalid_argument("ChainModel: eps0 must be finite");
    if (!std::isfinite(delta) || delta < 0.0)
      throw std::invalid_argument("ChainModel: delta must be finite and >= 0");
  }

  void require_coupled() const {
    validate();
    if (delta <= 0.0) throw std::invalid_argument("ChainModel: delta > 0 required (no decay at delta = 0)");
  }

  /// True when the second-sheet resonance pole exists: 0 < delta < 1 and
  /// 1 - delta^2 - (eps0/2 - 1)^2 > 0.
  bool in_resonance_regime() const {
    const double e = eps0 / 2.0 - 1.0;
    return delta > 0.0 && delta < 1.0 && 1.0 - delta * delta - e * e > 0.0;
  }

  void require_resonance_regime() const {
    require_coupled();
    if (!in_resonance_regime())
      throw std::invalid_argument("ChainModel: resonance regime requires 0 < delta < 1 and eps0 well inside the band");
  }
};

/// Signals an out-of-regime condition or a numerical non-convergence
/// (CLI exit code 2), as opposed to a precondition violation
/// (std::invalid_argument / std::domain_error, CLI exit code 1).
class RegimeError : public std::runtime_error {
 public:
  explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tbdecay

#endif
