#include "trajsim/noise.hpp"

#include <cmath>

namespace trajsim {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double NoiseModel::eps(int t) const {
  if (kind == NoiseKind::none || eps0 == 0.0) return 0.0;
  return eps0 * std::pow(static_cast<double>(t), -decay_q);
}

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ index);
  return std::mt19937_64(h);
}

Vec2 gaussian_pair(std::uint64_t seed, Stream stream, std::uint64_t index, double sigma) {
  if (sigma == 0.0) return {};
  auto rng = make_rng(seed, stream, index);
  std::normal_distribution<double> normal(0.0, sigma);
  const double a = normal(rng);
  const double b = normal(rng);
  return {a, b};
}

NoisyGradient noisy_gradient(const Vec2& true_grad, const NoiseModel& model, int t) {
  const double e = model.eps(t);
  if (e == 0.0) return {true_grad, 0.0};
  const Vec2 n = gaussian_pair(model.seed, Stream::gradient, static_cast<std::uint64_t>(t),
                               e / std::sqrt(2.0));
  return {true_grad + n, norm_sq(n)};
}

}  // namespace trajsim
