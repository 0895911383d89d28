#include "taxtopics/special.hpp"

#include <algorithm>
#include <stdexcept>

namespace taxtopics {

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: x must be > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  // coefficients B_2n / 2n
  const double series =
      f * (1.0 / 12 -
           f * (1.0 / 120 -
                f * (1.0 / 252 -
                     f * (1.0 / 240 -
                          f * (1.0 / 132 -
                               f * (691.0 / 32760 - f * (1.0 / 12)))))));
  return acc + std::log(x) - 0.5 / x - series;
}

double logsumexp(const std::vector<double>& v) {
  double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace taxtopics
