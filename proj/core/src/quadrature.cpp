#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>
#include <vector>

#include "bicons4/profile.hpp"

namespace bicons4 {

namespace {

// Kronrod 15-point nodes/weights with embedded Gauss 7-point weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& fn, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = fn(c);
  double rk = fc * kWgk[7], rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    double f1 = fn(c - x), f2 = fn(c + x);
    rk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  double value = rk * h;
  double err = std::abs((rk - rg) * h);
  if (!std::isfinite(value)) throw Error(ErrorKind::NoConvergence, "integrand is not finite inside the interval", c);
  return {a, b, value, err};
}

}  // namespace

double integrate(const std::function<double(double)>& fn, double a, double b, double tol,
                 bool allow_singular_endpoints) {
  if (a == b) return 0.0;
  if (!(tol > 0)) throw Error(ErrorKind::BadParams, "quadrature tolerance must be positive");
  if (!allow_singular_endpoints) {
    if (!std::isfinite(fn(a))) throw Error(ErrorKind::SingularEndpoint, "integrand is singular at the endpoint", a);
    if (!std::isfinite(fn(b))) throw Error(ErrorKind::SingularEndpoint, "integrand is singular at the endpoint", b);
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<Segment> heap;
  Segment first = gk15(fn, a, b);
  heap.push(first);
  double total = first.value, err = first.error;
  constexpr int kMaxSegments = 5000;
  int segments = 1;
  while (err > tol) {
    if (segments >= kMaxSegments)
      throw Error(ErrorKind::NoConvergence, "adaptive quadrature did not reach the tolerance", heap.top().a);
    Segment worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw Error(ErrorKind::NoConvergence, "interval cannot be subdivided further", mid);
    Segment l = gk15(fn, worst.a, mid), r = gk15(fn, mid, worst.b);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++segments;
    if (!std::isfinite(total)) throw Error(ErrorKind::NoConvergence, "integral diverges", mid);
  }
  // Re-sum from the segments to avoid accumulated update round-off.
  double sum = 0;
  std::vector<Segment> all;
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const Segment& sgm : all) sum += sgm.value;
  return sign * sum;
}

}  // namespace bicons4
