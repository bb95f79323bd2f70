#ifndef TBDECAY_QUADRATURE_HPP
#define TBDECAY_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace tbdecay {

// Gauss-Kronrod 7-15 pair on [-1, 1] (positive abscissae; symmetric).
namespace gk15 {
inline constexpr std::array<double, 8> kronrod_x = {
    0.000000000000000000000000000000000e+00, 2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01, 5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01, 8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01, 9.914553711208126392068546975263285e-01};
inline constexpr std::array<double, 8> kronrod_w = {
    2.094821410847278280129991748917143e-01, 2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01, 1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01, 1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02, 2.293532201052922496373200805896959e-02};
// Gauss-7 weights paired with kronrod_x[0], [2], [4], [6].
inline constexpr std::array<double, 4> gauss_w = {
    4.179591836734693877551020408163265e-01, 3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01, 1.294849661688696932706114326790820e-01};
}  // namespace gk15

template <class F>
struct GK15Result {
  std::complex<double> value;
  double error;
};

/// One Gauss-Kronrod 7-15 panel; error is |K15 - G7|.
template <class F>
inline GK15Result<F> gk15_panel(F&& f, double a, double b) {
  using std::complex;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const complex<double> fc = f(c);
  complex<double> kron = gk15::kronrod_w[0] * fc;
  complex<double> gauss = gk15::gauss_w[0] * fc;
  for (int j = 1; j < 8; ++j) {
    const double dx = h * gk15::kronrod_x[j];
    const complex<double> s = f(c - dx) + f(c + dx);
    kron += gk15::kronrod_w[j] * s;
    if ((j & 1) == 0) gauss += gk15::gauss_w[j / 2] * s;
  }
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

struct AdaptiveResult {
  std::complex<double> value{};
  double error = 0.0;        ///< worst unconverged panel residual (0 if all met tol)
  std::size_t panels = 0;
  bool converged = true;
};

/// Adaptive bisection with a GK15 error estimate. abs_tol is per-panel;
/// panels still above tol at max_depth are accepted and reported through
/// `error`/`converged`.
template <class F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
  struct Panel {
    double a, b;
    int depth;
  };
  AdaptiveResult res;
  std::vector<Panel> stack{{a, b, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const auto est = gk15_panel(f, p.a, p.b);
    if (est.error <= abs_tol || p.depth >= max_depth) {
      res.value += est.value;
      ++res.panels;
      if (est.error > abs_tol) {
        res.converged = false;
        if (est.error > res.error) res.error = est.error;
      }
    } else {
      const double m = 0.5 * (p.a + p.b);
      stack.push_back({p.a, m, p.depth + 1});
      stack.push_back({m, p.b, p.depth + 1});
    }
  }
  return res;
}

template <class F>
double integrate_adaptive_real(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
  auto wrap = [&f](double x) { return std::complex<double>(f(x), 0.0); };
  return integrate_adaptive(wrap, a, b, abs_tol, max_depth).value.real();
}

}  // namespace tbdecay

#endif
