#include "prlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace prlab {

// PV integral of dt/log t.  The integrand has an integrable endpoint zero at
// t=0+ (1/log t -> 0) and a simple pole at t=1 removed by symmetric excision.
double li(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("li: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x == 1.0)
    throw std::invalid_argument("li: x = 1 is the logarithmic singularity");

  const double rel = 1e-13, abs_tol = 1e-300;
  auto f = [](double t) { return 1.0 / std::log(t); };

  if (x < 1.0) {
    // No principal value needed below the pole; integrate up to x directly.
    // Split at 0.5 to keep panels away from the t->1 blowup when x -> 1.
    QuadResult q = integrate(f, 0.0, x, abs_tol, rel);
    return q.value;
  }

  // e0 chosen so [1-e0, 1+e0] stays inside [0, x].
  const double e0 = std::min(0.5, 0.5 * (x - 1.0));
  // Paired singular part: integral over u in (0, e0] of f(1+u)+f(1-u).
  auto paired = [](double u) {
    if (u < 1e-14) return 1.0;  // limit value; the pair sum -> 1 as u -> 0
    return 1.0 / std::log1p(u) + 1.0 / std::log1p(-u);
  };
  QuadResult left = integrate(f, 0.0, 1.0 - e0, abs_tol, rel);
  QuadResult sing = integrate(paired, 0.0, e0, abs_tol, rel);
  QuadResult right = integrate(f, 1.0 + e0, x, abs_tol, rel);
  return left.value + sing.value + right.value;
}

}  // namespace prlab
