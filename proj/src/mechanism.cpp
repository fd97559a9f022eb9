#include "privattack/mechanism.hpp"

#include <cmath>
#include <cstdlib>

#include "privattack/errors.hpp"

namespace privattack {

Mechanism mechanism_from_string(const std::string& name) {
  if (name == "geometric") return Mechanism::kGeometric;
  if (name == "laplace") return Mechanism::kLaplace;
  if (name == "none") return Mechanism::kNone;
  throw ConfigError("unknown mechanism '" + name +
                    "' (expected geometric, laplace or none)");
}

const char* mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::kGeometric: return "geometric";
    case Mechanism::kLaplace: return "laplace";
    case Mechanism::kNone: return "none";
  }
  return "?";
}

void PrivacyParams::validate() const {
  if (!(epsilon > 0.0))
    throw ConfigError("privacy: epsilon must be positive");
  if (sensitivity < 1)
    throw ConfigError("privacy: sensitivity must be at least 1");
}

double noise_scale(const PrivacyParams& params) {
  params.validate();
  switch (params.mechanism) {
    case Mechanism::kLaplace:
      return static_cast<double>(params.sensitivity) / params.epsilon;
    case Mechanism::kGeometric:
      return std::exp(-params.epsilon / static_cast<double>(params.sensitivity));
    case Mechanism::kNone:
      return 0.0;
  }
  return 0.0;
}

double geometric_pmf(double alpha, std::int64_t z) {
  if (alpha < 0.0 || alpha >= 1.0)
    throw ConfigError("geometric_pmf: alpha must lie in [0,1)");
  if (alpha == 0.0) return z == 0 ? 1.0 : 0.0;
  return (1.0 - alpha) / (1.0 + alpha) *
         std::pow(alpha, static_cast<double>(std::llabs(z)));
}

std::int64_t sample_geometric(Rng& rng, double alpha) {
  if (alpha < 0.0 || alpha >= 1.0)
    throw ConfigError("sample_geometric: alpha must lie in [0,1)");
  if (alpha == 0.0) return 0;
  const double log_alpha = std::log(alpha);
  // P(G >= k) = alpha^k for G = floor(log(u)/log(alpha)), u uniform in (0,1]
  const auto one_sided = [&]() {
    return static_cast<std::int64_t>(
        std::floor(std::log(rng.uniform01_positive()) / log_alpha));
  };
  const std::int64_t g1 = one_sided();
  const std::int64_t g2 = one_sided();
  return g1 - g2;
}

double sample_laplace(Rng& rng, double scale_b) {
  const double magnitude = -scale_b * std::log(rng.uniform01_positive());
  return rng.coin() ? magnitude : -magnitude;
}

double sample_noise(const PrivacyParams& params, Rng& rng) {
  switch (params.mechanism) {
    case Mechanism::kNone:
      return 0.0;
    case Mechanism::kGeometric:
      return static_cast<double>(sample_geometric(rng, noise_scale(params)));
    case Mechanism::kLaplace:
      return sample_laplace(rng, noise_scale(params));
  }
  return 0.0;
}

CountWorkload release(const CountWorkload& exact, const PrivacyParams& params,
                      Rng& rng) {
  if (!exact.nonnegative)
    throw DataError("release: input counts must be exact nonnegative counts");
  if (params.mechanism == Mechanism::kNone) return exact;
  params.validate();

  CountWorkload out;
  out.domains = exact.domains;
  out.counts.reserve(exact.counts.size());
  out.nonnegative = false;
  for (const auto& block : exact.counts) {
    Eigen::ArrayXXd noisy = block;
    for (Eigen::Index v = 0; v < block.rows(); ++v)
      for (Eigen::Index s = 0; s < block.cols(); ++s)
        noisy(v, s) += sample_noise(params, rng);
    out.counts.push_back(std::move(noisy));
  }
  return out;
}

CountWorkload clip_nonnegative(CountWorkload counts) {
  for (auto& block : counts.counts) block = block.max(0.0);
  counts.nonnegative = true;
  return counts;
}

double verify_dp_ratio(const PrivacyParams& params, int max_shift,
                       std::int64_t z_range) {
  params.validate();
  if (params.mechanism != Mechanism::kGeometric)
    throw ConfigError(
        "verify_dp_ratio: only the geometric mechanism is enumerable; the "
        "Laplace density ratio is the identity exp(epsilon*|d|/sensitivity)");
  if (max_shift < 0 || max_shift > params.sensitivity)
    throw ConfigError("verify_dp_ratio: max_shift must lie in [0, sensitivity]");

  const double alpha = noise_scale(params);
  double worst = 0.0;
  for (int d = -max_shift; d <= max_shift; ++d) {
    for (std::int64_t z = -z_range; z <= z_range; ++z) {
      // pmf(z)/pmf(z-d) = alpha^(|z-d| - |z|); exact in closed form
      const double exponent =
          static_cast<double>(std::llabs(z - d) - std::llabs(z));
      worst = std::max(worst, std::pow(alpha, exponent));
    }
  }
  return worst;
}

}  // namespace privattack
