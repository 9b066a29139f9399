#include <doctest.h>

#include <cmath>
#include <vector>

#include "brwlab/dist.hpp"
#include "brwlab/errors.hpp"
#include "brwlab/mix.hpp"

using namespace brwlab;

namespace {

std::vector<StepDistribution> sample_laws() {
  return {StepDistribution::gaussian(0, 1), StepDistribution::gaussian(0.7, 2.5),
          StepDistribution::two_point(-1, 1, 0.1), StepDistribution::two_point(-0.3, 2, 0.6),
          StepDistribution::discrete({{-2, 0.2}, {0, 0.5}, {1.5, 0.3}}),
          StepDistribution::gaussian(0, 1).with_shift(-0.4)};
}

}  // namespace

TEST_CASE("log_mgf closed forms and direct evaluation") {
  CHECK(log_mgf(StepDistribution::gaussian(0, 1), 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  for (const auto& d : sample_laws()) CHECK(log_mgf(d, 0.0) == 0.0);
  // 40-digit evaluation of log(0.1 e^{-1} + 0.9 e)
  CHECK(std::abs(log_mgf(StepDistribution::two_point(-1, 1, 0.1), 1.0) - 0.90956479930815078925) < 1e-14);
}

TEST_CASE("log_mgf_derivs examples") {
  const auto g = log_mgf_derivs(StepDistribution::gaussian(0, 1), -1.5);
  CHECK(g.value == doctest::Approx(1.125));
  CHECK(g.first == doctest::Approx(-1.5));
  CHECK(g.second == doctest::Approx(1.0));
  const auto t = log_mgf_derivs(StepDistribution::two_point(-1, 1, 0.1), 0.0);
  CHECK(std::abs(t.value) < 1e-15);
  CHECK(t.first == doctest::Approx(0.8));
  CHECK(t.second == doctest::Approx(0.36));
}

TEST_CASE("derivatives agree with finite differences") {
  for (const auto& d : sample_laws()) {
    for (double lam = -3; lam <= 3; lam += 0.5) {
      const double h = 1e-4;
      const auto v = log_mgf_derivs(d, lam);
      const double fd1 = (log_mgf(d, lam + h) - log_mgf(d, lam - h)) / (2 * h);
      const double fd2 = (log_mgf(d, lam + h) - 2 * log_mgf(d, lam) + log_mgf(d, lam - h)) / (h * h);
      CHECK(v.value == doctest::Approx(log_mgf(d, lam)));
      CHECK(v.first == doctest::Approx(fd1).epsilon(1e-6));
      CHECK(v.second == doctest::Approx(fd2).epsilon(1e-4));
    }
  }
}

TEST_CASE("convexity and positive curvature") {
  for (const auto& d : sample_laws()) {
    for (double l1 = -4; l1 <= 3; l1 += 0.25) {
      const double l2 = l1 + 0.3, l3 = l1 + 0.9;
      const double interp = log_mgf(d, l1) + (log_mgf(d, l3) - log_mgf(d, l1)) * (l2 - l1) / (l3 - l1);
      CHECK(log_mgf(d, l2) <= interp + 1e-12);
      CHECK(log_mgf_derivs(d, l2).second > 0);
    }
  }
}

TEST_CASE("legendre gap matches the direct expression") {
  for (const auto& d : sample_laws()) {
    for (double lam = -3; lam <= 3; lam += 0.75) {
      const auto v = log_mgf_derivs(d, lam);
      CHECK(legendre_gap(d, lam) == doctest::Approx(lam * v.first - v.value).epsilon(1e-10));
    }
  }
}

TEST_CASE("tilt") {
  const auto g = tilt(StepDistribution::gaussian(1.17741, 1), -1.17741);
  CHECK(std::abs(log_mgf_derivs(g, 0).first) < 1e-9);
  for (const auto& d : sample_laws()) {
    const auto same = tilt(d, 0.0);
    for (double lam = -2; lam <= 2; lam += 0.5) CHECK(log_mgf(same, lam) == doctest::Approx(log_mgf(d, lam)));
    for (double a : {-1.2, 0.4}) {
      CHECK(log_mgf_derivs(tilt(d, a), 0).first == doctest::Approx(log_mgf_derivs(d, a).first).epsilon(1e-12));
      for (double b : {-0.5, 0.9}) {
        const auto twice = tilt(tilt(d, a), b);
        const auto once = tilt(d, a + b);
        for (double lam = -2; lam <= 2; lam += 0.25)
          CHECK(std::abs(log_mgf(twice, lam) - log_mgf(once, lam)) < 1e-10);
      }
    }
  }
}

TEST_CASE("center") {
  const auto c = center(StepDistribution::gaussian(0, 1), -1.17741);
  CHECK(log_mgf_derivs(c, 0).first == doctest::Approx(1.17741));
  for (const auto& d : sample_laws()) {
    const auto same = center(d, 0.0);
    CHECK(same.shift() == d.shift());
    const double lam = -0.8;
    const double m = log_mgf_derivs(d, lam).first;
    CHECK(std::abs(log_mgf_derivs(center(d, m), lam).first) < 1e-10);
  }
}

TEST_CASE("sample") {
  const auto tp = StepDistribution::two_point(-1, 1, 0.1);
  CHECK(sample(tp, 0.05) == -1.0);
  CHECK(sample(tp, 0.5) == 1.0);
  CHECK(std::abs(sample(StepDistribution::gaussian(0, 1), 0.5)) < 1e-9);
  CHECK(sample(tp.with_shift(0.25), 0.05) == -0.75);
}

TEST_CASE("empirical mean within 4 standard errors") {
  constexpr int kSamples = 1'000'000;
  for (const auto& d : sample_laws()) {
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < kSamples; ++i) {
      const double x = sample(d, to_unit(mix64(0x5eed0000ULL + i)));
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / kSamples;
    const double se = std::sqrt((sum_sq / kSamples - mean * mean) / kSamples);
    CHECK(std::abs(mean - log_mgf_derivs(d, 0).first) < 4 * se);
  }
}

TEST_CASE("inverse normal cdf against 40-digit quantiles") {
  struct Case {
    double p, q;
  };
  const Case cases[] = {{1e-20, -9.2623400897984075737},  {1e-10, -6.3613409024040562047},
                        {0.001, -3.0902323061678135415},  {0.02425, -1.9729610513118848503},
                        {0.1, -1.2815515655446004670},    {0.3, -0.52440051270804078404},
                        {0.5, 0.0},                       {0.75, 0.67448975019608174320},
                        {0.97575, 1.9729610513118848503}, {0.999, 3.0902323061678135415},
                        {0.9999999, 5.1993375821928169316}};
  for (const auto& c : cases) CHECK(std::abs(inverse_normal_cdf(c.p) - c.q) < 1e-9);
}

TEST_CASE("inverse normal cdf round trip") {
  for (double p = 0.0005; p < 1; p += 0.0005) {
    const double x = inverse_normal_cdf(p);
    CHECK(0.5 * std::erfc(-x / std::sqrt(2.0)) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("parse and format") {
  const auto g = parse_distribution("gaussian:0.5,2");
  CHECK(log_mgf_derivs(g, 0).first == 0.5);
  CHECK(log_mgf_derivs(g, 0).second == 2.0);
  const auto d = parse_distribution("discrete:-1:0.25;2:0.75");
  CHECK(d.atoms().size() == 2);
  CHECK(format_distribution(parse_distribution(format_distribution(d))) == format_distribution(d));
  for (const char* bad : {"gaussian:0,-1", "gaussian:0", "twopoint:-1,1,1.5", "twopoint:1,1,0.5",
                          "discrete:1:0.5;2:0.4", "weibull:1,2", "", "gaussian:a,1"})
    CHECK_THROWS_AS(parse_distribution(bad), ConfigError);
}
