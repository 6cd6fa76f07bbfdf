// Asymptotic constants C(d): exact value, lattice-sum estimate, and the
// intercept of N^2 R(N) for the product scheme.

#include <sud/sud.hpp>

#include <cstdio>
#include <vector>

int main() {
  std::printf("%2s  %-12s %12s %14s %14s\n", "d", "C(d)", "float", "riemann", "sweep fit");
  const std::vector<std::pair<int, int>> riemann_n{{2, 2000}, {3, 400}, {4, 120}, {5, 60}};
  const std::vector<std::pair<int, int>> sweep{{2, 200}, {3, 100}, {4, 40}, {5, 30}};
  for (int k = 0; k < 4; ++k) {
    const int d = k + 2;
    const auto c = sud::exact_constant(d);
    const double r = sud::riemann_constant(d, riemann_n[k].second);
    const int hi = sweep[k].second;
    const auto curve = sud::risk_curve(d, hi / 2, hi, sud::parse_scheme("product"));
    std::printf("%2d  %-12s %12.6f %14.6f %14.6f\n", d, sud::to_fraction_string(c.exact).c_str(), c.value(), r,
                curve.fit ? curve.fit->intercept : 0.0);
  }
}
