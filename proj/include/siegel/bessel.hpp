#pragma once

namespace siegel {

// modified Bessel function of the second kind, x > 0, nu >= 0 integer or
// half-integer
double bessel_k(double nu, double x);

}  // namespace siegel
