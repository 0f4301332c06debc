#ifndef PRLAB_QUADRATURE_HPP
#define PRLAB_QUADRATURE_HPP

/*
 * Adaptive Gauss-Kronrod (7,15) quadrature.
 *
 * One embedded rule: the 7-point Gauss nodes are a subset of the 15-point
 * Kronrod extension, so each panel costs 15 evaluations and yields both a
 * degree-22-exact value (K15) and an error estimate |K15 - G7|.  Panels
 * whose estimate exceeds their share of the tolerance are bisected, worst
 * panel first, up to a node budget.
 *
 * The node/weight constants below were generated from the exact Stieltjes
 * orthogonality conditions (rational solve for the E8 polynomial, mpmath
 * root polishing, interpolatory weights from the moment system) and
 * validated by polynomial exactness through degree 22; they agree with the
 * QUADPACK dqk15 tables.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace prlab {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;   // accumulated |K15-G7| style estimate
  std::size_t evals = 0;
  bool converged = false;
};

namespace gk15 {
// Nonnegative half of the 15 Kronrod nodes (ascending) and their weights.
inline constexpr double xk[8] = {
    0.0,
    0.20778495500789846760,
    0.40584515137739716691,
    0.58608723546769113029,
    0.74153118559939443986,
    0.86486442335976907279,
    0.94910791234275852453,
    0.99145537112081263921,
};
inline constexpr double wk[8] = {
    0.20948214108472782801,
    0.20443294007529889241,
    0.19035057806478540991,
    0.16900472663926790283,
    0.14065325971552591875,
    0.10479001032225018384,
    0.063092092629978553291,
    0.022935322010529224964,
};
// Gauss-7 weights for the nodes xk[0], xk[2], xk[4], xk[6] (the G7 subset).
inline constexpr double wg[4] = {
    0.41795918367346938776,
    0.38183005050511894495,
    0.27970539148927666790,
    0.12948496616886969327,
};
}  // namespace gk15

// Single-panel (7,15) rule on [a,b]: returns K15 value, sets *err to |K15-G7|.
template <class F>
double gk15_panel(F&& f, double a, double b, double* err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double k15 = gk15::wk[0] * f0;
  double g7 = gk15::wg[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * gk15::xk[i];
    const double s = f(c - dx) + f(c + dx);
    k15 += gk15::wk[i] * s;
    if ((i & 1) == 0) g7 += gk15::wg[i / 2] * s;
  }
  k15 *= h;
  g7 *= h;
  // QUADPACK-style scaled estimate is overkill here; the plain difference is
  // already conservative for the analytic integrands this project feeds in.
  *err = std::abs(k15 - g7);
  return k15;
}

// Adaptive bisection, worst panel first.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                     std::size_t max_panels = 4000) {
  struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  QuadResult r;
  if (!(a < b)) {
    r.converged = true;
    return r;
  }
  std::priority_queue<Panel> q;
  double err0;
  double v0 = gk15_panel(f, a, b, &err0);
  r.evals += 15;
  q.push({a, b, v0, err0});
  double total = v0, total_err = err0;
  std::size_t panels = 1;
  while (panels < max_panels) {
    if (total_err <= abs_tol || total_err <= rel_tol * std::abs(total)) break;
    Panel p = q.top();
    q.pop();
    const double m = 0.5 * (p.a + p.b);
    double e1, e2;
    const double v1 = gk15_panel(f, p.a, m, &e1);
    const double v2 = gk15_panel(f, m, p.b, &e2);
    r.evals += 30;
    total += (v1 + v2) - p.value;
    total_err += (e1 + e2) - p.err;
    q.push({p.a, m, v1, e1});
    q.push({m, p.b, v2, e2});
    ++panels;
  }
  r.value = total;
  r.abs_error = total_err;
  r.converged =
      total_err <= abs_tol || total_err <= rel_tol * std::abs(total);
  return r;
}

// Li(x) := PV integral of dt/log t over [0,x], singular at t=1.
// Symmetric excision: on [1-e0, 1+e0] the pair t = 1 +- u is combined into
// the finite even integrand 1/log(1+u) + 1/log(1-u)  (-> 1 as u -> 0), and
// the remaining pieces are regular.  Relative tolerance 1e-12.
double li(double x);

}  // namespace prlab

#endif  // PRLAB_QUADRATURE_HPP
