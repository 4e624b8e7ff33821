#include "sau/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sau {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t RngStream::derive_seed(std::uint64_t master, std::uint64_t trial,
                                     StreamPurpose purpose) {
  std::uint64_t tag = (trial << 16) | static_cast<std::uint64_t>(purpose);
  return splitmix64(master ^ splitmix64(tag));
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("uniform: requires lo < hi");
  return lo + (hi - lo) * uniform01();
}

double RngStream::gaussian(double mean, double var) {
  if (var < 0.0) throw std::invalid_argument("gaussian: negative variance");
  if (var == 0.0) return mean;
  // Box-Muller, cosine branch only: one value per call keeps replay simple.
  double u1 = 1.0 - uniform01();  // (0, 1], log is finite
  double u2 = uniform01();
  double z = std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * std::numbers::pi * u2);
  return mean + std::sqrt(var) * z;
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    // boost: Gamma(a) = Gamma(a+1) * U^(1/a), U in (0,1]
    double u = 1.0 - uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = gaussian(0.0, 1.0);
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = 1.0 - uniform01();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("beta: shapes must be > 0");
  double x = gamma(a);
  double y = gamma(b);
  double r = x / (x + y);
  // keep the open-interval contract even when a ratio rounds to an endpoint
  if (r <= 0.0) return std::numeric_limits<double>::min();
  if (r >= 1.0) return std::nextafter(1.0, 0.0);
  return r;
}

double RngStream::student_t_truncated(double df, double cap) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t: df must be > 0");
  if (!(cap > 0.0)) throw std::invalid_argument("student_t: cap must be > 0");
  double z = gaussian(0.0, 1.0);
  double w = 2.0 * gamma(0.5 * df);  // chi-squared with df degrees of freedom
  double t = z / std::sqrt(w / df);
  if (t > cap) return cap;
  if (t < -cap) return -cap;
  return t;
}

int RngStream::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("uniform_int: n must be > 0");
  std::uint64_t un = static_cast<std::uint64_t>(n);
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % un;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

}  // namespace sau
