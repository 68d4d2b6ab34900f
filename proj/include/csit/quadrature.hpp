#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace csit::quad {

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
};

// Thrown when the evaluation budget runs out before the requested tolerance
// is met; carries the best estimate accumulated so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const char* what, IntegrationResult best)
      : std::runtime_error(what), best_estimate(best) {}
  IntegrationResult best_estimate;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1, 1]: {abscissa, Gauss weight, Kronrod
// weight}. Gauss weight zero marks Kronrod-only nodes.
inline constexpr double kGk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class G>
std::pair<double, double> gk15_panel(G&& g, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f0 = g(mid);
  double gauss = kGk15[0][1] * f0;
  double kronrod = kGk15[0][2] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGk15[i][0];
    const double fi = g(mid + dx) + g(mid - dx);
    gauss += kGk15[i][1] * fi;
    kronrod += kGk15[i][2] * fi;
  }
  gauss *= half;
  kronrod *= half;
  return {kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

// Adaptive integration of f over [0, inf) for integrands with an
// exponentially decaying tail |f(x)| <= C e^{-x/decay_scale}.
//
// The substitution x = -decay_scale * ln(u) maps the ray onto (0, 1] and
// turns the dominant exponential weight into a flat factor, so the
// transformed integrand s*f(x(u))/u is smooth and bounded wherever f
// satisfies the decay precondition. The transformed interval is then split
// by adaptive bisection with a Gauss-Kronrod 7-15 panel rule, halving each
// interval's tolerance share on every split. Fixed node order makes the
// result bit-deterministic for identical inputs.
template <class F>
IntegrationResult integrate_semi_infinite(F&& f, double decay_scale, double abs_tol,
                                          double rel_tol) {
  if (!(decay_scale > 0.0)) throw std::domain_error("integrate_semi_infinite: decay_scale <= 0");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw std::domain_error("integrate_semi_infinite: tolerances must be positive");

  constexpr std::int64_t kMaxEvaluations = 1000000;
  // u below ~1e-300 corresponds to x beyond ~690 decay scales, where the
  // integrand precondition puts the remaining mass under double underflow.
  constexpr double kUMin = 1e-300;

  std::int64_t evaluations = 0;
  auto g = [&](double u) {
    const double x = -decay_scale * std::log(u);
    const double fx = f(x);
    if (!std::isfinite(fx))
      throw std::domain_error("integrate_semi_infinite: integrand returned non-finite value");
    ++evaluations;
    return fx * decay_scale / u;
  };

  struct Interval {
    double lo, hi, tol;
  };

  const auto [whole, whole_err] = detail::gk15_panel(g, kUMin, 1.0);
  const double target = std::max(abs_tol, rel_tol * std::abs(whole));
  if (whole_err <= target) return {whole, whole_err, evaluations};

  const double mid0 = 0.5 * (kUMin + 1.0);
  std::vector<Interval> stack;
  stack.push_back({mid0, 1.0, 0.5 * target});
  stack.push_back({kUMin, mid0, 0.5 * target});
  double value = 0.0;
  double error = 0.0;
  bool budget_hit = false;

  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    const auto [panel, panel_err] = detail::gk15_panel(g, iv.lo, iv.hi);
    const double width = iv.hi - iv.lo;
    if (panel_err <= iv.tol || width <= 1e-15 * iv.hi || evaluations > kMaxEvaluations) {
      value += panel;
      error += panel_err;
      if (panel_err > iv.tol && evaluations > kMaxEvaluations) budget_hit = true;
      continue;
    }
    const double mid = 0.5 * (iv.lo + iv.hi);
    stack.push_back({mid, iv.hi, 0.5 * iv.tol});
    stack.push_back({iv.lo, mid, 0.5 * iv.tol});
  }

  IntegrationResult result{value, error, evaluations};
  if (budget_hit && error > std::max(abs_tol, rel_tol * std::abs(value))) {
    throw ConvergenceError("integrate_semi_infinite: evaluation budget exhausted", result);
  }
  return result;
}

}  // namespace csit::quad
