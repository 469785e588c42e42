#pragma once

#include "prismdg/types.hpp"

namespace prismdg {

/// Orthonormal Jacobi polynomial P_n^{(alpha,beta)} on [-1,1].
double jacobi_p(int n, double alpha, double beta, double x);

/// Derivative of the orthonormal Jacobi polynomial.
double grad_jacobi_p(int n, double alpha, double beta, double x);

/// npts-point Gauss quadrature for the weight (1-x)^alpha (1+x)^beta,
/// computed via the Golub-Welsch eigenvalue method.
void jacobi_gauss(int npts, double alpha, double beta, Vec& x, Vec& w);

/// npts-point Gauss-Legendre-Lobatto rule (npts >= 2): includes both
/// endpoints, exact for polynomials of degree <= 2*npts-3.
void gauss_lobatto(int npts, Vec& x, Vec& w);

/// Vandermonde of orthonormal Legendre polynomials 0..degree at points x.
Mat legendre_vandermonde(int degree, const Vec& x);

/// Same for the derivatives.
Mat legendre_grad_vandermonde(int degree, const Vec& x);

} // namespace prismdg
