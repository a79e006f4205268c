#pragma once

#include <cstdint>
#include <random>

#include "trajsim/vec2.hpp"

namespace trajsim {

enum class NoiseKind { none, gaussian_decaying };

/// Zero-mean gradient noise with per-slot magnitude eps_t = eps0 * t^(-decay_q).
/// Each coordinate has standard deviation eps_t / sqrt(2), so E|n_t|^2 = eps_t^2.
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double eps0 = 0.0;
  double decay_q = 0.0;
  std::uint64_t seed = 0;

  double eps(int t) const;
  double eps_sq_bound(int t) const { return eps(t) * eps(t); }
};

struct NoisyGradient {
  Vec2 grad;
  double eps_sq_realized = 0.0;
};

// Independent random streams share one seed; the stream id keeps them apart.
enum class Stream : std::uint64_t { gradient = 1, peer = 2, field = 3, adversary = 4, sampler = 5 };

/// Generator seeded from (seed, stream, index) only, so any draw can be replayed.
std::mt19937_64 make_rng(std::uint64_t seed, Stream stream, std::uint64_t index);

/// Two independent N(0, sigma^2) draws keyed by (seed, stream, index). sigma == 0 gives (0, 0).
Vec2 gaussian_pair(std::uint64_t seed, Stream stream, std::uint64_t index, double sigma);

NoisyGradient noisy_gradient(const Vec2& true_grad, const NoiseModel& model, int t);

}  // namespace trajsim
