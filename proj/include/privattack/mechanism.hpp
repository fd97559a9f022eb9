#pragma once

#include <cstdint>
#include <string>

#include "privattack/rng.hpp"
#include "privattack/workload.hpp"

namespace privattack {

enum class Mechanism { kGeometric, kLaplace, kNone };

Mechanism mechanism_from_string(const std::string& name);  // throws ConfigError
const char* mechanism_name(Mechanism m);

struct PrivacyParams {
  double epsilon = 1.0;
  int sensitivity = 1;  // L1 influence of one individual on the answer vector
  Mechanism mechanism = Mechanism::kGeometric;

  void validate() const;  // throws ConfigError
};

// laplace: scale b = sensitivity/epsilon; geometric: alpha = exp(-epsilon/
// sensitivity); none: 0.
double noise_scale(const PrivacyParams& params);

// Two-sided geometric pmf ((1-alpha)/(1+alpha)) * alpha^|z|.
double geometric_pmf(double alpha, std::int64_t z);

// Difference of two one-sided geometrics; matches geometric_pmf exactly.
std::int64_t sample_geometric(Rng& rng, double alpha);

// Sign-and-exponential form of the Laplace draw, density (1/2b) exp(-|x|/b).
double sample_laplace(Rng& rng, double scale_b);

// One noise draw for the configured mechanism. Integer-valued for geometric,
// identically 0 for Mechanism::kNone.
double sample_noise(const PrivacyParams& params, Rng& rng);

// Adds one independent draw to every workload entry, iterating entries in
// deterministic (attribute, value, sa) order. kNone returns the input as is.
CountWorkload release(const CountWorkload& exact, const PrivacyParams& params,
                      Rng& rng);

// Post-processing: entry <- max(0, entry). No rounding.
CountWorkload clip_nonnegative(CountWorkload counts);

// Enumerates the worst pmf ratio pmf(z)/pmf(z-d) over |z| <= z_range and
// |d| <= max_shift for the geometric mechanism; the analytic value is
// alpha^-max_shift. Callers check the bound exp(epsilon) themselves.
double verify_dp_ratio(const PrivacyParams& params, int max_shift,
                       std::int64_t z_range);

}  // namespace privattack
