#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hrvwp/errors.hpp"
#include "hrvwp/wavelet.hpp"
#include "test_support.hpp"

using namespace hrvwp;

namespace {

// Full-rate circular correlation, then keep the even outputs.
std::vector<double> correlate_downsample(const std::vector<double>& x, const std::vector<double>& h) {
  const std::size_t n = x.size();
  std::vector<double> full(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < h.size(); ++k) full[m] += h[k] * x[(m + k) % n];
  }
  std::vector<double> out;
  for (std::size_t m = 0; m < n; m += 2) out.push_back(full[m]);
  return out;
}

}  // namespace

TEST_CASE("Haar filters") {
  const auto b = daubechies_filters(1);
  const double r = 1.0 / std::sqrt(2.0);
  REQUIRE(b.length() == 2);
  CHECK(b.dec_lo[0] == doctest::Approx(r).epsilon(1e-15));
  CHECK(b.dec_lo[1] == doctest::Approx(r).epsilon(1e-15));
  CHECK(b.dec_hi[0] == doctest::Approx(r).epsilon(1e-15));
  CHECK(b.dec_hi[1] == doctest::Approx(-r).epsilon(1e-15));
}

TEST_CASE("db2 matches the closed form") {
  // (1 + s3, 3 + s3, 3 - s3, 1 - s3) / (4 sqrt 2), oldest tap last in dec_lo.
  const double s3 = std::sqrt(3.0), d = 4.0 * std::sqrt(2.0);
  const std::vector<double> rec{(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d};
  const auto b = daubechies_filters(2);
  REQUIRE(b.length() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(b.rec_lo[k] == doctest::Approx(rec[k]).epsilon(1e-14));
}

TEST_CASE("filter bank invariants hold for every supported order") {
  for (int order = kMinDaubechiesOrder; order <= kMaxDaubechiesOrder; ++order) {
    CAPTURE(order);
    const auto b = daubechies_filters(order);
    const std::size_t len = b.length();
    REQUIRE(len == static_cast<std::size_t>(2 * order));
    REQUIRE(b.order == order);

    double sum_lo = 0.0, sum_hi = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      sum_lo += b.dec_lo[k];
      sum_hi += b.dec_hi[k];
      norm += b.dec_lo[k] * b.dec_lo[k];
    }
    CHECK(std::abs(sum_lo - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(sum_hi) < 1e-12);
    CHECK(std::abs(norm - 1.0) < 1e-12);

    for (std::size_t k = 0; k < len; ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      CHECK(b.dec_hi[k] == sign * b.dec_lo[len - 1 - k]);
      CHECK(b.rec_lo[k] == b.dec_lo[len - 1 - k]);
      CHECK(b.rec_hi[k] == b.dec_hi[len - 1 - k]);
    }
    // Orthogonal to even shifts, and lo/hi orthogonal at every even shift.
    for (std::size_t shift = 2; shift < len; shift += 2) {
      double lo_lo = 0.0;
      for (std::size_t k = 0; k + shift < len; ++k) lo_lo += b.dec_lo[k] * b.dec_lo[k + shift];
      CHECK(std::abs(lo_lo) < 1e-12);
    }
    for (long shift = -static_cast<long>(len); shift <= static_cast<long>(len); shift += 2) {
      double lo_hi = 0.0;
      for (long k = 0; k < static_cast<long>(len); ++k) {
        const long j = k + shift;
        if (j >= 0 && j < static_cast<long>(len)) lo_hi += b.dec_lo[static_cast<std::size_t>(k)] * b.dec_hi[static_cast<std::size_t>(j)];
      }
      CHECK(std::abs(lo_hi) < 1e-12);
    }
    // `order` vanishing moments: the high-pass filter kills polynomials of degree < order.
    for (int p = 0; p < order; ++p) {
      long double moment = 0.0L, scale = 0.0L;
      for (std::size_t k = 0; k < len; ++k) {
        const long double term = std::pow(static_cast<long double>(k), p) * b.dec_hi[k];
        moment += term;
        scale += std::abs(term);
      }
      CHECK(std::abs(static_cast<double>(moment / scale)) < 1e-11);
    }
  }
}

TEST_CASE("db4 is an 8-tap unit-norm filter") {
  const auto b = daubechies_filters(4);
  CHECK(b.length() == 8);
  CHECK(testing::energy(b.dec_lo) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("daubechies_filters rejects bad orders") {
  CHECK_THROWS_AS(daubechies_filters(0), ValidationError);
  CHECK_THROWS_AS(daubechies_filters(11), ValidationError);
  CHECK_THROWS_AS(daubechies_filters(-3), ValidationError);
}

TEST_CASE("Haar analysis examples") {
  const auto b = daubechies_filters(1);
  const auto flat = analysis_step(std::vector<double>{1, 1, 1, 1}, b);
  CHECK(flat.approx[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(flat.approx[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(testing::max_abs(flat.detail) < 1e-15);

  const auto alt = analysis_step(std::vector<double>{1, -1, 1, -1}, b);
  CHECK(testing::max_abs(alt.approx) < 1e-15);
  CHECK(testing::energy(alt.detail) == doctest::Approx(4.0));

  const auto back = synthesis_step(flat.approx, flat.detail, b);
  for (double v : back) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("analysis_step matches the direct correlation oracle and conserves energy") {
  for (int order : {1, 2, 4, 8, 10}) {
    const auto b = daubechies_filters(order);
    for (std::size_t n : {2u, 4u, 6u, 8u, 64u, 130u}) {
      CAPTURE(order);
      CAPTURE(n);
      const auto x = testing::gaussian_noise(n, 1000 * static_cast<std::uint64_t>(order) + n);
      const auto s = analysis_step(x, b);
      CHECK(testing::max_abs_diff(s.approx, correlate_downsample(x, b.dec_lo)) < 1e-12);
      CHECK(testing::max_abs_diff(s.detail, correlate_downsample(x, b.dec_hi)) < 1e-12);
      const double e = testing::energy(x);
      CHECK(std::abs(testing::energy(s.approx) + testing::energy(s.detail) - e) <= 1e-10 * e);
    }
  }
}

TEST_CASE("synthesis inverts analysis, including signals shorter than the filter") {
  for (int order = 1; order <= 10; ++order) {
    const auto b = daubechies_filters(order);
    for (std::size_t n : {2u, 4u, 10u, 128u}) {
      CAPTURE(order);
      CAPTURE(n);
      const auto x = testing::gaussian_noise(n, 77 + n + static_cast<std::uint64_t>(order));
      const auto s = analysis_step(x, b);
      const auto y = synthesis_step(s.approx, s.detail, b);
      CHECK(testing::max_abs_diff(x, y) < 1e-10 * std::max(1.0, testing::max_abs(x)));
    }
  }
}

TEST_CASE("db4 round trip on length-128 noise") {
  const auto b = daubechies_filters(4);
  const auto x = testing::gaussian_noise(128, 2024);
  const auto s = analysis_step(x, b);
  CHECK(testing::max_abs_diff(x, synthesis_step(s.approx, s.detail, b)) < 1e-10);
}

TEST_CASE("step validation") {
  const auto b = daubechies_filters(4);
  CHECK_THROWS_AS(analysis_step(std::vector<double>{1, 2, 3}, b), ValidationError);
  CHECK_THROWS_AS(analysis_step(std::vector<double>{}, b), ValidationError);
  CHECK_THROWS_AS(synthesis_step(std::vector<double>{1, 2}, std::vector<double>{1}, b), ValidationError);
}
