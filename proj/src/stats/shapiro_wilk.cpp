// Shapiro-Wilk W test, Royston (1995) algorithm AS R94.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "statz/error.hpp"
#include "statz/stats/descriptive.hpp"
#include "statz/stats/distributions.hpp"
#include "statz/stats/tests.hpp"
#include "validate.hpp"

namespace statz::stats {

namespace {

template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
  double result = 0.0;
  for (std::size_t i = N; i-- > 0;) result = result * x + c[i];
  return result;
}

constexpr std::array<double, 6> kC1 = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr std::array<double, 6> kC2 = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr std::array<double, 4> kC3 = {0.544, -0.39978, 0.025054, -6.714e-4};
constexpr std::array<double, 4> kC4 = {1.3822, -0.77857, 0.062767, -0.0020322};
constexpr std::array<double, 4> kC5 = {-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr std::array<double, 3> kC6 = {-0.4803, -0.082676, 0.0030302};
constexpr std::array<double, 2> kG = {-2.273, 0.459};

// Coefficients a_1..a_{n/2} for the upper half of the order statistics.
std::vector<double> coefficients(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(kC1, rsn) - m[0] / ssumm2;

  std::size_t first_scaled;
  double fac;
  if (n > 5) {
    first_scaled = 2;
    const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    first_scaled = 1;
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

double p_value(double w, std::size_t n) {
  const double an = static_cast<double>(n);
  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    constexpr double stqr = std::numbers::pi / 3.0;
    return std::max(0.0, pi6 * (std::asin(std::sqrt(w)) - stqr));
  }
  double w1 = std::log(1.0 - w);
  double m, s;
  if (n <= 11) {
    const double gamma = poly(kG, an);
    if (w1 >= gamma) return 1e-99;
    w1 = -std::log(gamma - w1);
    m = poly(kC3, an);
    s = std::exp(poly(kC4, an));
  } else {
    const double xx = std::log(an);
    m = poly(kC5, xx);
    s = std::exp(poly(kC6, xx));
  }
  return normal_sf((w1 - m) / s);
}

}  // namespace

TestResult shapiro_wilk(std::span<const double> x, double alpha) {
  detail::require_size(x, 3, "Shapiro-Wilk");
  if (x.size() > 5000) {
    throw UnsupportedSize("Shapiro-Wilk supports at most 5000 observations, got " + std::to_string(x.size()));
  }
  detail::require_finite(x, "Shapiro-Wilk");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (!(sorted.back() - sorted.front() > 0.0)) throw DegenerateInput("Shapiro-Wilk: sample has zero range");

  const auto a = coefficients(n);
  const double center = mean(sorted);
  double ss = 0.0;
  for (double v : sorted) ss += (v - center) * (v - center);
  double numerator = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    numerator += a[i] * (sorted[n - 1 - i] - sorted[i]);
    norm += 2.0 * a[i] * a[i];
  }
  double w = numerator * numerator / (norm * ss);
  w = std::min(w, 1.0);
  return make_result("shapiro_wilk", w, std::nullopt, p_value(w, n), alpha);
}

}  // namespace statz::stats
