#include "doctest.h"

#include "oracles.hpp"
#include "prismdg/jacobi.hpp"

#include <cmath>

using namespace prismdg;

TEST_SUITE_BEGIN("jacobi");

TEST_CASE("gauss rules integrate polynomials exactly") {
  for (int n = 1; n <= 8; ++n) {
    Vec x, w;
    jacobi_gauss(n, 0.0, 0.0, x, w);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += w[i] * std::pow(x[i], k);
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1.0) : 0.0;
      CHECK(q == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("jacobi(1,0) rule carries the (1-x) weight") {
  Vec x, w;
  jacobi_gauss(4, 1.0, 0.0, x, w);
  CHECK(w.sum() == doctest::Approx(2.0)); // int (1-x) dx over [-1,1]
  double q = 0.0;
  for (int i = 0; i < 4; ++i) q += w[i] * x[i];
  CHECK(q == doctest::Approx(-2.0 / 3.0)); // int (1-x) x dx
}

TEST_CASE("orthonormal jacobi polynomials") {
  Vec x, w;
  jacobi_gauss(12, 0.0, 0.0, x, w);
  for (int m = 0; m <= 5; ++m)
    for (int n = 0; n <= 5; ++n) {
      double q = 0.0;
      for (int i = 0; i < x.size(); ++i)
        q += w[i] * jacobi_p(m, 0.0, 0.0, x[i]) * jacobi_p(n, 0.0, 0.0, x[i]);
      CHECK(q == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("GLL N=2 has the closed-form nodes and weights") {
  Vec x, w;
  gauss_lobatto(3, x, w);
  CHECK(x[0] == doctest::Approx(-1.0));
  CHECK(x[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(x[2] == doctest::Approx(1.0));
  CHECK(w[0] == doctest::Approx(1.0 / 3.0));
  CHECK(w[1] == doctest::Approx(4.0 / 3.0));
  CHECK(w[2] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("GLL N=4 matches the Newton root-finder oracle") {
  Vec x, w, xo, wo;
  gauss_lobatto(5, x, w);
  test::gll_newton(5, xo, wo);
  for (int i = 0; i < 5; ++i) {
    CHECK(x[i] == doctest::Approx(xo[i]).epsilon(1e-13).scale(1.0));
    CHECK(w[i] == doctest::Approx(wo[i]).epsilon(1e-13));
  }
  // quadrature exactness on t^0 .. t^7 (degree 2N-1)
  for (int k = 0; k <= 7; ++k) {
    double q = 0.0;
    for (int i = 0; i < 5; ++i) q += w[i] * std::pow(x[i], k);
    const double exact = (k % 2 == 0) ? 2.0 / (k + 1.0) : 0.0;
    CHECK(q == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("GLL nodes are symmetric, increasing, and include the endpoints") {
  for (int n = 2; n <= 10; ++n) {
    Vec x, w;
    gauss_lobatto(n, x, w);
    CHECK(x[0] == -1.0);
    CHECK(x[n - 1] == 1.0);
    CHECK(w.sum() == doctest::Approx(2.0));
    for (int i = 1; i < n; ++i) CHECK(x[i] > x[i - 1]);
    for (int i = 0; i < n; ++i) {
      CHECK(x[i] == doctest::Approx(-x[n - 1 - i]).epsilon(1e-13).scale(1.0));
      CHECK(w[i] > 0.0);
    }
  }
}

TEST_SUITE_END();
