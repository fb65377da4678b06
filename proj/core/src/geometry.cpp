#include "clarklab/geometry.hpp"

#include <cmath>
#include <sstream>

#include "clarklab/errors.hpp"

namespace clarklab {

Complex inner(std::span<const Complex> z, std::span<const Complex> w) {
  if (z.size() != w.size()) {
    throw InvalidArgumentError("inner", "dimension mismatch");
  }
  Complex s{};
  for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * std::conj(w[i]);
  return s;
}

double norm_squared(std::span<const Complex> z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return s;
}

BallPoint::BallPoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidArgumentError("BallPoint", "empty coordinate vector");
  const double r = std::sqrt(norm_squared(coords_));
  if (!(r < 1.0 - kBallMargin)) {
    std::ostringstream os;
    os << "norm " << r << " violates the interior margin";
    throw InvalidArgumentError("BallPoint", os.str());
  }
}

SpherePoint::SpherePoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidArgumentError("SpherePoint", "empty coordinate vector");
  const double r = std::sqrt(norm_squared(coords_));
  if (!(std::abs(r - 1.0) <= kSphereTolerance)) {
    std::ostringstream os;
    os << "norm " << r << " is not on the unit sphere";
    throw InvalidArgumentError("SpherePoint", os.str());
  }
}

SpherePoint SpherePoint::normalized(std::vector<Complex> coords) {
  const double r = std::sqrt(norm_squared(coords));
  if (!(r > 0.0)) throw InvalidArgumentError("SpherePoint", "cannot normalize the zero vector");
  for (auto& c : coords) c /= r;
  return SpherePoint(std::move(coords));
}

Complex cauchy_kernel(std::span<const Complex> z, std::span<const Complex> w) {
  const Complex base = 1.0 - inner(z, w);
  if (std::abs(base) < kKernelCutoff) {
    throw DegenerateKernelError("cauchy_kernel", "|1 - <z, w>| below cutoff");
  }
  const int d = static_cast<int>(z.size());
  Complex p = 1.0;
  for (int i = 0; i < d; ++i) p *= base;
  return 1.0 / p;
}

Complex cauchy_kernel(const BallPoint& z, const SpherePoint& zeta) {
  return cauchy_kernel(z.coords(), zeta.coords());
}
Complex cauchy_kernel(const SpherePoint& zeta, const BallPoint& z) {
  return cauchy_kernel(zeta.coords(), z.coords());
}
Complex cauchy_kernel(const BallPoint& z, const BallPoint& w) {
  return cauchy_kernel(z.coords(), w.coords());
}

double poisson_kernel(std::span<const Complex> z, std::span<const Complex> zeta) {
  const Complex base = 1.0 - inner(z, zeta);
  const double a = std::abs(base);
  if (a < kKernelCutoff) {
    throw DegenerateKernelError("poisson_kernel", "|1 - <z, zeta>| below cutoff");
  }
  const double ratio = (1.0 - norm_squared(z)) / (a * a);
  return std::pow(ratio, static_cast<double>(z.size()));
}

double poisson_kernel(const BallPoint& z, const SpherePoint& zeta) {
  return poisson_kernel(z.coords(), zeta.coords());
}

}  // namespace clarklab
