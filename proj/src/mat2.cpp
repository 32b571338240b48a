#include "cojump/mat2.hpp"

#include <algorithm>
#include <cmath>

namespace cojump {

double Sym2::frobenius() const { return std::sqrt(xx * xx + 2.0 * xy * xy + yy * yy); }

Eig2 eigen_sym2(const Sym2& m) {
  Eig2 e;
  const double tr = m.xx + m.yy;
  const double disc = std::hypot(m.xx - m.yy, 2.0 * m.xy);
  e.lambda1 = 0.5 * (tr + disc);
  e.lambda2 = 0.5 * (tr - disc);
  if (m.xy == 0.0) {
    if (m.xx >= m.yy) {
      e.v1x = 1.0;
      e.v1y = 0.0;
    } else {
      e.v1x = 0.0;
      e.v1y = 1.0;
    }
    return e;
  }
  // Pick the numerically larger residual column for the eigenvector.
  const double r1 = e.lambda1 - m.xx;
  const double r2 = e.lambda1 - m.yy;
  double vx, vy;
  if (std::fabs(r2) >= std::fabs(r1)) {
    vx = r2;
    vy = m.xy;
  } else {
    vx = m.xy;
    vy = r1;
  }
  const double norm = std::hypot(vx, vy);
  e.v1x = vx / norm;
  e.v1y = vy / norm;
  return e;
}

namespace {

Sym2 from_eigen(const Eig2& e, double l1, double l2) {
  const double a = e.v1x, b = e.v1y;
  // l1 * v1 v1' + l2 * v2 v2' with v2 = (-b, a).
  return {l1 * a * a + l2 * b * b, (l1 - l2) * a * b, l1 * b * b + l2 * a * a};
}

}  // namespace

Sym2 psd_project(const Sym2& m) {
  const Eig2 e = eigen_sym2(m);
  if (e.lambda2 >= 0.0) return m;
  return from_eigen(e, std::max(e.lambda1, 0.0), 0.0);
}

Sym2 psd_sqrt(const Sym2& m) {
  const Eig2 e = eigen_sym2(m);
  return from_eigen(e, std::sqrt(std::max(e.lambda1, 0.0)), std::sqrt(std::max(e.lambda2, 0.0)));
}

}  // namespace cojump
