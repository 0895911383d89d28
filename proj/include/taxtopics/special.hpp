#pragma once

#include <cmath>
#include <vector>

namespace taxtopics {

// Psi(x) for x > 0, recurrence below 10 then the Bernoulli asymptotic series.
double digamma(double x);

double logsumexp(const std::vector<double>& v);

}  // namespace taxtopics
