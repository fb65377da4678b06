#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace testutil {

using Complex = std::complex<double>;

inline std::vector<Complex> random_ball(std::mt19937_64& rng, int dim, double radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> z(dim);
  double n2 = 0.0;
  for (auto& c : z) {
    c = {g(rng), g(rng)};
    n2 += std::norm(c);
  }
  const double r = radius * std::pow(u(rng), 1.0 / (2.0 * dim)) / std::sqrt(n2);
  for (auto& c : z) c *= r;
  return z;
}

inline std::vector<Complex> random_sphere(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  std::vector<Complex> z(dim);
  double n2 = 0.0;
  for (auto& c : z) {
    c = {g(rng), g(rng)};
    n2 += std::norm(c);
  }
  for (auto& c : z) c /= std::sqrt(n2);
  return z;
}

inline Complex random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  return std::polar(1.0, u(rng));
}

// Herglotz real part Re((a + v) / (a - v)) = (1 - |v|^2) / |a - v|^2.
inline double herglotz_re(Complex a, Complex v) { return (1.0 - std::norm(v)) / std::norm(a - v); }

// Finite Blaschke product evaluated from its zeros, independent of the library.
inline Complex blaschke_eval(Complex gamma, const std::vector<Complex>& zeros, Complex z) {
  Complex v = gamma;
  for (Complex a : zeros) v *= (z - a) / (1.0 - std::conj(a) * z);
  return v;
}

}  // namespace testutil
