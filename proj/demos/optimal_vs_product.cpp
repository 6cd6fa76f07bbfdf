// Product-of-gaps weights against the spectral optimum, full and strict support.

#include <sud/sud.hpp>

#include <cstdio>

int main() {
  std::printf("%2s %4s %14s %14s %14s\n", "d", "N", "N^2 product", "N^2 opt full", "N^2 opt strict");
  for (int d = 2; d <= 3; ++d)
    for (int n : {10, 20, 40, 80}) {
      const double n2 = static_cast<double>(n) * n;
      const auto product = sud::product_scheme(d, n);
      const double rp = sud::to_double(sud::exact_risk(product).risk);
      const double full = sud::optimal_scheme(d, n, sud::Support::kFull).optimal_risk();
      const double strict = sud::optimal_scheme(d, n, sud::Support::kStrict).optimal_risk();
      std::printf("%2d %4d %14.6f %14.6f %14.6f\n", d, n, n2 * rp, n2 * full, n2 * strict);
    }
}
