#include "prismdg/jacobi.hpp"

#include <cmath>

namespace prismdg {

double jacobi_p(int n, double alpha, double beta, double x) {
  // normalized so that int_{-1}^1 P_m P_n (1-x)^a (1+x)^b dx = delta_mn
  const double a = alpha, b = beta;
  const double gamma0 = std::pow(2.0, a + b + 1.0) / (a + b + 1.0) *
                        std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                        std::tgamma(a + b + 1.0);
  double pm1 = 1.0 / std::sqrt(gamma0);
  if (n == 0) return pm1;

  const double gamma1 = (a + 1.0) * (b + 1.0) / (a + b + 3.0) * gamma0;
  double p = ((a + b + 2.0) * x / 2.0 + (a - b) / 2.0) / std::sqrt(gamma1);
  if (n == 1) return p;

  double aold = 2.0 / (2.0 + a + b) * std::sqrt((a + 1.0) * (b + 1.0) / (a + b + 3.0));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + a + b;
    const double anew = 2.0 / (h1 + 2.0) *
                        std::sqrt((i + 1.0) * (i + 1.0 + a + b) * (i + 1.0 + a) *
                                  (i + 1.0 + b) / (h1 + 1.0) / (h1 + 3.0));
    const double bnew = -(a * a - b * b) / (h1 * (h1 + 2.0));
    const double pnew = (-aold * pm1 + (x - bnew) * p) / anew;
    pm1 = p;
    p = pnew;
    aold = anew;
  }
  return p;
}

double grad_jacobi_p(int n, double alpha, double beta, double x) {
  if (n == 0) return 0.0;
  return std::sqrt(n * (n + alpha + beta + 1.0)) * jacobi_p(n - 1, alpha + 1.0, beta + 1.0, x);
}

void jacobi_gauss(int npts, double alpha, double beta, Vec& x, Vec& w) {
  if (npts < 1) throw ConfigError("jacobi_gauss: need at least one point");
  const double a = alpha, b = beta;
  if (npts == 1) {
    x.resize(1);
    w.resize(1);
    x[0] = (b - a) / (a + b + 2.0);
    w[0] = std::pow(2.0, a + b + 1.0) / (a + b + 1.0) * std::tgamma(a + 1.0) *
           std::tgamma(b + 1.0) / std::tgamma(a + b + 1.0);
    return;
  }

  // symmetric tridiagonal Jacobi matrix of the three-term recurrence
  const int n = npts - 1;
  Mat J = Mat::Zero(npts, npts);
  for (int i = 0; i <= n; ++i) {
    const double h1 = 2.0 * i + a + b;
    J(i, i) = -(a * a - b * b) / ((h1 + 2.0) * h1);
  }
  if (a + b < 10.0 * std::numeric_limits<double>::epsilon()) J(0, 0) = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double h1 = 2.0 * (i - 1) + a + b;
    J(i - 1, i) = 2.0 / (h1 + 2.0) *
                  std::sqrt(i * (i + a + b) * (i + a) * (i + b) /
                            ((h1 + 1.0) * (h1 + 3.0)));
    J(i, i - 1) = J(i - 1, i);
  }

  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  x = es.eigenvalues();
  const double mu0 = std::pow(2.0, a + b + 1.0) / (a + b + 1.0) * std::tgamma(a + 1.0) *
                     std::tgamma(b + 1.0) / std::tgamma(a + b + 1.0);
  w.resize(npts);
  for (int i = 0; i < npts; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    w[i] = v0 * v0 * mu0;
  }
}

void gauss_lobatto(int npts, Vec& x, Vec& w) {
  if (npts < 2) throw ConfigError("gauss_lobatto: need at least two points");
  const int N = npts - 1;
  x.resize(npts);
  w.resize(npts);
  x[0] = -1.0;
  x[N] = 1.0;
  if (N >= 2) {
    Vec xi, wi;
    jacobi_gauss(N - 1, 1.0, 1.0, xi, wi); // interior nodes: roots of P'_N
    for (int i = 1; i < N; ++i) x[i] = xi[i - 1];
  }
  // w_j = (2N+1) / (N (N+1) Pt_N(x_j)^2) with Pt the orthonormal Legendre
  for (int j = 0; j <= N; ++j) {
    const double pn = jacobi_p(N, 0.0, 0.0, x[j]);
    w[j] = (2.0 * N + 1.0) / (N * (N + 1.0) * pn * pn);
  }
}

Mat legendre_vandermonde(int degree, const Vec& x) {
  Mat V(x.size(), degree + 1);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (int j = 0; j <= degree; ++j) V(i, j) = jacobi_p(j, 0.0, 0.0, x[i]);
  return V;
}

Mat legendre_grad_vandermonde(int degree, const Vec& x) {
  Mat V(x.size(), degree + 1);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (int j = 0; j <= degree; ++j) V(i, j) = grad_jacobi_p(j, 0.0, 0.0, x[i]);
  return V;
}

} // namespace prismdg
