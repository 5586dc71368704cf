// Independent oracles: 50-digit evaluation of F_n from its defining formula
// and a fixed-step Simpson rule for the distance integral.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>

#include "doctest.h"
#include "solab/heisenberg.hpp"

using mp = boost::multiprecision::cpp_dec_float_50;
using namespace solab;

namespace {

// 2 (-1)^{n+1} (n+1)!/phi [sum_{k=0}^{n+1} (-phi)^k/k! - e^{-phi}], directly.
mp f_direct(int n, const mp& phi) {
  mp sum = 0, term = 1, fact = 1;
  for (int k = 0; k <= n + 1; ++k) {
    if (k > 0) {
      term *= -phi / k;
      fact *= k;
    }
    sum += term;
  }
  const mp bracket = sum - exp(-phi);
  const mp sign = (n + 1) % 2 == 0 ? 1 : -1;
  return 2 * sign * fact / phi * bracket;
}

double simpson(double (*f)(double), double a, double b, long panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (long i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

}  // namespace

TEST_CASE("F_n against 50-digit arithmetic") {
  CHECK(f_direct(1, 1).convert_to<double>() == doctest::Approx(0.5284822353).epsilon(1e-10));
  for (int n = 1; n <= 5; ++n) {
    for (double phi : {1e-4, 1e-3, 0.05, 0.5, 1.0, 2.5, 3.4, 7.0, 30.0, 300.0}) {
      const double oracle = f_direct(n, mp(phi)).convert_to<double>();
      CHECK(heisenberg::F(n, phi) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("F_n' against 50-digit arithmetic") {
  for (int n = 1; n <= 4; ++n) {
    for (double phi : {1e-3, 0.3, 2.0, 20.0}) {
      // F_n' = (n+1) F_{n-1} - F_n/phi, evaluated in 50 digits.
      const mp p(phi);
      const double oracle = ((n + 1) * f_direct(n - 1, p) - f_direct(n, p) / p).convert_to<double>();
      CHECK(heisenberg::F_prime(n, phi) == doctest::Approx(oracle).epsilon(1e-11));
    }
  }
}

TEST_CASE("phi = 1 frame curvatures against 50-digit closed forms") {
  // Sec(x, y) = -F_1(1)/1 at n = 1.
  const double f1 = f_direct(1, 1).convert_to<double>();
  const auto c = heisenberg::curvatures(heisenberg::HeisenbergSoliton(1), 1.0);
  CHECK(c.sec_xy[0] == doctest::Approx(-f1).epsilon(1e-12));
  CHECK(c.ricci_xy[0] == doctest::Approx(0.5 * (f1 - 2)).epsilon(1e-12));
}

TEST_CASE("distance integral against fixed-step Simpson") {
  // The integrand sqrt(1/F_1) is smooth on [1, 4].
  const double oracle = simpson([](double phi) { return 1 / std::sqrt(heisenberg::F(1, phi)); },
                                1.0, 4.0, 1000000);
  const auto d = heisenberg::distance(heisenberg::HeisenbergSoliton(1), 1.0, 4.0);
  CHECK(d.value == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(oracle > std::sqrt(2.0));
}
