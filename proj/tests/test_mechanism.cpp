#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "privattack/classifier.hpp"
#include "privattack/errors.hpp"
#include "privattack/mechanism.hpp"

using namespace privattack;

namespace {

// single-attribute workload fixture with given entries
CountWorkload workload_1x1(std::vector<double> entries, bool nonneg = true) {
  auto ds = std::make_shared<DomainSet>();
  ds->qi_names = {"a"};
  std::vector<std::string> vals;
  for (std::size_t i = 0; i < entries.size(); ++i)
    vals.push_back("v" + std::to_string(i));
  ds->qi.push_back(Domain::from_values(vals));
  ds->sa_name = "sa";
  ds->sa = Domain::from_values({"s"});
  CountWorkload w;
  w.domains = ds;
  w.nonnegative = nonneg;
  Eigen::ArrayXXd block(entries.size(), 1);
  for (std::size_t i = 0; i < entries.size(); ++i) block(i, 0) = entries[i];
  w.counts.push_back(block);
  return w;
}

}  // namespace

TEST_CASE("noise_scale closed forms") {
  CHECK(noise_scale({1.0, 1, Mechanism::kGeometric}) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(noise_scale({1.0, 5, Mechanism::kLaplace}) == doctest::Approx(5.0));
  // large epsilon drives both scales to 0
  CHECK(noise_scale({1e6, 3, Mechanism::kGeometric}) < 1e-12);
  CHECK(noise_scale({1e6, 3, Mechanism::kLaplace}) < 1e-5);
  CHECK_THROWS_AS(noise_scale({-1.0, 1, Mechanism::kGeometric}), ConfigError);
  CHECK_THROWS_AS(noise_scale({1.0, 0, Mechanism::kGeometric}), ConfigError);
}

TEST_CASE("geometric_pmf closed forms") {
  CHECK(geometric_pmf(0.0, 0) == 1.0);
  CHECK(geometric_pmf(0.0, 3) == 0.0);
  const double alpha = std::exp(-1.0);
  CHECK(geometric_pmf(alpha, 0) ==
        doctest::Approx((1 - alpha) / (1 + alpha)).epsilon(1e-12));
  CHECK(geometric_pmf(alpha, 0) == doctest::Approx(0.46212).epsilon(1e-4));
}

TEST_CASE("geometric_pmf sums to 1 and is symmetric") {
  double total = 0.0;
  for (std::int64_t z = -50; z <= 50; ++z) total += geometric_pmf(0.5, z);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  for (const double alpha : {0.1, 0.5, 0.9})
    for (std::int64_t z = 0; z <= 30; ++z)
      CHECK(geometric_pmf(alpha, z) == geometric_pmf(alpha, -z));
}

TEST_CASE("geometric_pmf truncated tail bound") {
  // 1 - sum_{|z|<=K} pmf = 2 alpha^(K+1) / (1+alpha)
  for (const double alpha : {0.2, 0.7}) {
    for (const std::int64_t K : {3, 10}) {
      double partial = 0.0;
      for (std::int64_t z = -K; z <= K; ++z) partial += geometric_pmf(alpha, z);
      const double tail = 2.0 * std::pow(alpha, K + 1) / (1.0 + alpha);
      CHECK(1.0 - partial == doctest::Approx(tail).epsilon(1e-10));
    }
  }
}

TEST_CASE("pmf mass at zero shrinks as alpha grows") {
  double previous = 1.1;
  for (const double alpha : {0.0, 0.2, 0.4, 0.6, 0.8, 0.95}) {
    const double p0 = geometric_pmf(alpha, 0);
    CHECK(p0 < previous);
    previous = p0;
  }
}

TEST_CASE("sample_noise: mechanism none is identically zero") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i)
    CHECK(sample_noise({0.5, 3, Mechanism::kNone}, rng) == 0.0);
}

TEST_CASE("geometric sampler matches the pmf at the mode") {
  Rng rng(12345);
  const int n = 1'000'000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) zeros += sample_geometric(rng, 0.5) == 0;
  // (1-alpha)/(1+alpha) = 1/3 at alpha = 0.5
  CHECK(static_cast<double>(zeros) / n == doctest::Approx(1.0 / 3).epsilon(0.015));
}

TEST_CASE("laplace sampler is centered") {
  Rng rng(99);
  const int n = 1'000'000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_laplace(rng, 2.0);
  CHECK(std::abs(sum / n) < 0.02);
}

TEST_CASE("geometric sampler passes a chi-square test against the pmf") {
  for (const double alpha : {0.1, 0.5, 0.9}) {
    Rng rng(derive_seed(2024, "chi2-unit", static_cast<std::uint64_t>(alpha * 10)));
    std::vector<std::int64_t> samples(100'000);
    for (auto& s : samples) s = sample_geometric(rng, alpha);
    const auto gof = oracles::chi_square_gof(samples, &geometric_pmf, alpha, 400);
    INFO("alpha=", alpha, " stat=", gof.statistic, " dof=", gof.dof,
         " p=", gof.p_value);
    CHECK(gof.p_value >= 1e-3);
  }
}

TEST_CASE("release: mechanism none is the identity") {
  const CountWorkload exact = workload_1x1({3, 0, 7});
  Rng rng(5);
  const CountWorkload out = release(exact, {1.0, 1, Mechanism::kNone}, rng);
  CHECK((out.counts[0] == exact.counts[0]).all());
  CHECK(out.nonnegative);
}

TEST_CASE("laplace release is deterministic and real-valued") {
  const CountWorkload exact = workload_1x1({50, 60, 70});
  const PrivacyParams params{0.5, 2, Mechanism::kLaplace};
  Rng rng_a(8), rng_b(8);
  const CountWorkload a = release(exact, params, rng_a);
  const CountWorkload b = release(exact, params, rng_b);
  CHECK((a.counts[0] == b.counts[0]).all());
  CHECK_FALSE(a.nonnegative);
  CHECK_FALSE((a.counts[0] == exact.counts[0]).all());  // noise was added
}

TEST_CASE("release is deterministic given the seed and matches the sampler") {
  const CountWorkload exact = workload_1x1({100});
  const PrivacyParams params{1.0, 1, Mechanism::kGeometric};
  Rng rng_a(42), rng_b(42), rng_oracle(42);
  const CountWorkload a = release(exact, params, rng_a);
  const CountWorkload b = release(exact, params, rng_b);
  CHECK(a.counts[0](0, 0) == b.counts[0](0, 0));
  CHECK_FALSE(a.nonnegative);
  const double z = static_cast<double>(
      sample_geometric(rng_oracle, noise_scale(params)));
  CHECK(a.counts[0](0, 0) == 100.0 + z);
}

TEST_CASE("clip_nonnegative clips and nothing else") {
  CountWorkload w = workload_1x1({-3.0, 7.5, 0.0}, /*nonneg=*/false);
  const CountWorkload c = clip_nonnegative(w);
  CHECK(c.counts[0](0, 0) == 0.0);
  CHECK(c.counts[0](1, 0) == 7.5);  // no rounding
  CHECK(c.counts[0](2, 0) == 0.0);
  CHECK(c.nonnegative);

  const CountWorkload already = workload_1x1({1.0, 2.0});
  CHECK((clip_nonnegative(already).counts[0] == already.counts[0]).all());
}

TEST_CASE("verify_dp_ratio closed forms") {
  CHECK(verify_dp_ratio({1.0, 1, Mechanism::kGeometric}, 1, 40) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(verify_dp_ratio({1.0, 1, Mechanism::kGeometric}, 0, 40) ==
        doctest::Approx(1.0));
  // total shift 5 at sensitivity 5 telescopes to exp(epsilon)
  CHECK(verify_dp_ratio({0.1, 5, Mechanism::kGeometric}, 5, 40) ==
        doctest::Approx(std::exp(0.1)).epsilon(1e-12));
  CHECK_THROWS_AS(verify_dp_ratio({1.0, 1, Mechanism::kLaplace}, 1, 40),
                  ConfigError);
  CHECK_THROWS_AS(verify_dp_ratio({1.0, 1, Mechanism::kGeometric}, 2, 40),
                  ConfigError);
}

TEST_CASE("dp bound holds across a parameter grid") {
  for (const double eps : {0.01, 0.1, 1.0, 10.0}) {
    for (const int s : {1, 3, 5, 10}) {
      const double ratio =
          verify_dp_ratio({eps, s, Mechanism::kGeometric}, s, 40);
      CHECK(ratio <= std::exp(eps) * (1.0 + 1e-9));
    }
  }
}
