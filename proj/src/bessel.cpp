#include "speclab/bessel.hpp"

#include <cmath>
#include <numbers>

#include "speclab/types.hpp"

namespace speclab {
namespace {

constexpr double kMaxOrder = 6.0;  // J' needs one order above the public cap

#ifdef __SIZEOF_FLOAT128__
using Wide = __float128;
#else
using Wide = long double;
#endif

// The alternating series loses about log10(e^t) digits to cancellation, so it
// is summed in extended precision.
double series(double order, double t) {
  const Wide half = static_cast<Wide>(0.5L * t);
  const Wide q = -half * half;
  Wide term = static_cast<Wide>(std::pow(0.5L * t, static_cast<long double>(order)) /
                                std::tgamma(static_cast<long double>(order) + 1.0L));
  Wide sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<Wide>(k) * static_cast<Wide>(k + order));
    sum += term;
    const Wide mag = term < 0 ? -term : term;
    if (k > half && mag < static_cast<Wide>(1e-30L)) break;
  }
  return static_cast<double>(sum);
}

// Hankel asymptotic expansion, truncated at the smallest term.
double asymptotic(double order, double t) {
  const double mu = 4.0 * order * order;
  const double z8 = 8.0 * t;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = 1e300;
  for (int k = 1; k < 60; ++k) {
    const double f = (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * z8);
    const double next = term * f;
    if (std::fabs(next) > last) break;
    last = std::fabs(next);
    term = next;
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (std::fabs(term) < 1e-17) break;
  }
  const double chi = t - (0.5 * order + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * t)) * (p * std::cos(chi) - q * std::sin(chi));
}

double eval(double order, double t) {
  if (!(order >= 0.0) || order > kMaxOrder) {
    throw ArgumentError("bessel_j: order outside supported range [0, 5]");
  }
  if (!(t >= 0.0)) throw ArgumentError("bessel_j: argument must be nonnegative");
  if (t == 0.0) return order == 0.0 ? 1.0 : 0.0;
  if (t <= std::max(20.0, 2.0 * order)) return series(order, t);
  return asymptotic(order, t);
}

}  // namespace

double bessel_j(double order, double t) {
  if (order > 5.0) throw ArgumentError("bessel_j: order outside supported range [0, 5]");
  return eval(order, t);
}

double bessel_j_prime(double order, double t) {
  if (order > 5.0 || order < 0.0) {
    throw ArgumentError("bessel_j_prime: order outside supported range [0, 5]");
  }
  if (t == 0.0) {
    if (order == 1.0) return 0.5;
    if (order == 0.0 || order > 1.0) return 0.0;
    return HUGE_VAL;
  }
  return order / t * eval(order, t) - eval(order + 1.0, t);
}

}  // namespace speclab
