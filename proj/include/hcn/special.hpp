#pragma once

namespace hcn {

/// Gamma function for x > 0 (Lanczos, g=7, 9 coefficients).
/// Relative error below 1e-12 on (0, 50].
double gamma_fn(double x);

/// Gauss hypergeometric 2F1(a,b;c;z) for z <= 0.
/// Direct series for z in (-0.5, 0]; Pfaff transform z -> z/(z-1) otherwise,
/// which maps any negative argument into (0,1) where the series converges.
/// c must not be a non-positive integer; z > 0 is rejected.
double hyp2f1(double a, double b, double c, double z);

}  // namespace hcn
