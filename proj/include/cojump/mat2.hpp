#pragma once

#include <utility>

namespace cojump {

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;

  static Sym2 zero() { return {}; }
  static Sym2 identity() { return {1.0, 0.0, 1.0}; }
  static Sym2 diag(double a, double b) { return {a, 0.0, b}; }

  Sym2 plus(const Sym2& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
  Sym2 minus(const Sym2& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
  Sym2 scaled(double s) const { return {xx * s, xy * s, yy * s}; }
  std::pair<double, double> apply(double x, double y) const {
    return {xx * x + xy * y, xy * x + yy * y};
  }
  double frobenius() const;
};

/// lambda1 >= lambda2; (v1x, v1y) is the unit eigenvector of lambda1 and
/// (-v1y, v1x) completes the basis.
struct Eig2 {
  double lambda1 = 0.0, lambda2 = 0.0;
  double v1x = 1.0, v1y = 0.0;
};

Eig2 eigen_sym2(const Sym2& m);

/// Projection onto the PSD cone: negative eigenvalues clamped to zero.
Sym2 psd_project(const Sym2& m);

/// Symmetric PSD square root S of the projection, S * S = psd_project(m).
Sym2 psd_sqrt(const Sym2& m);

}  // namespace cojump
