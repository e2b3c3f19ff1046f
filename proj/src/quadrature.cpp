#include "conformal/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace conformal {

namespace {

// Kronrod abscissae (descending) and weights; Gauss weights on the even nodes.
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * wgk[7];
  double g = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double s = f(c - dx) + f(c + dx);
    k += wgk[j] * s;
    if (j % 2 == 1) g += wg[j / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    double rel_tol, int max_intervals) {
  QuadratureResult r;
  if (a == b) return r;
  std::priority_queue<Piece> heap;
  Piece first = gk15(f, a, b);
  heap.push(first);
  double value = first.value, error = first.error;
  int count = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && count < max_intervals) {
    Piece p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    Piece l = gk15(f, p.a, m), rr = gk15(f, m, p.b);
    value += l.value + rr.value - p.value;
    error += l.error + rr.error - p.error;
    heap.push(l);
    heap.push(rr);
    ++count;
  }
  // Re-sum to shed accumulated update rounding.
  value = 0;
  error = 0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  r.value = value;
  r.error = error;
  r.intervals = count;
  r.converged = error <= std::max(abs_tol, rel_tol * std::abs(value));
  return r;
}

}  // namespace conformal
