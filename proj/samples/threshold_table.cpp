// Prints lower bound, replica prediction, upper bound and mu_d for the
// spherical prior over a few tensor orders.

#include <cstdio>

#include "spiked/report.hpp"

int main() {
  std::printf("%4s %10s %10s %10s %10s\n", "d", "lower", "replica", "upper", "mu_d");
  for (int d = 3; d <= 8; ++d) {
    auto r = spiked::threshold_report(spiked::SpikePrior::spherical(), d, true);
    std::printf("%4d %10.6f %10.6f %10.6f %10.6f\n", d, r.lambda_lower, *r.replica_prediction, r.lambda_upper,
                *r.mu_d);
  }
}
