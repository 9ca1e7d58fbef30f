#include "asl/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace asl {

int Rng::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % un;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<int>(x % un);
}

double Rng::normal(double mean, double sigma) {
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  return mean + sigma * z;
}

}  // namespace asl
