#pragma once

namespace speclab {

// Bessel function of the first kind for real order in [0, 5] and t >= 0.
double bessel_j(double order, double t);

// d/dt J_order(t), via J'_a = (a/t) J_a - J_{a+1}.
double bessel_j_prime(double order, double t);

}  // namespace speclab
