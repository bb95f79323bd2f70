#ifndef TBDECAY_BESSEL_HPP
#define TBDECAY_BESSEL_HPP

namespace tbdecay {

// Bessel functions of the first kind, integer order. Small arguments use
// the power series; larger ones Miller's downward recurrence normalized by
// J0 + 2*sum_k J_{2k} = 1.
double bessel_j0(double x);
double bessel_j1(double x);

/// J1(z)/z with the removable singularity filled in (-> 1/2 at z = 0).
double bessel_j1_over_x(double x);

}  // namespace tbdecay

#endif
