#ifndef RICN_NUMERICS_HPP
#define RICN_NUMERICS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "ricn/base.hpp"

namespace ricn {

/// Composite Simpson rule on [a, b] with `nodes` points (forced odd, >= 3).
double simpson(const std::function<double(double)>& f, double a, double b,
               int nodes);

/// Simpson with interval doubling until successive values agree to
/// `rel_tol`; throws NumericError when the integrand is non-finite or the
/// refinement cap is hit without convergence.
double simpson_adaptive(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-10, int max_nodes = (1 << 21) + 1);

/// Symmetric tridiagonal eigenproblem, k smallest eigenpairs.
/// diag has size m, off has size m-1. Eigenvalues by Sturm-sequence
/// bisection, eigenvectors by inverse iteration with a partially pivoted
/// tridiagonal LU, eigenvalues refined with a final Rayleigh quotient.
struct TridiagEigenResult {
  std::vector<double> values;            // ascending
  std::vector<std::vector<double>> vectors; // unit Euclidean norm
  std::vector<double> residuals;         // ||T v - lambda v||_2
  int bisection_steps = 0;
};

TridiagEigenResult tridiag_smallest(const std::vector<double>& diag,
                                    const std::vector<double>& off, int k,
                                    std::uint64_t seed = 1234);

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly less
/// than sigma (Sturm sequence count).
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                double sigma);

/// Smallest eigenvalue and a unit eigenvector of a symmetric n x n matrix,
/// n <= 3, by closed form: the characteristic root formulas for n in {2, 3}
/// (trigonometric form for the cubic), no iteration.
struct SymEigen {
  double value;
  Vec vector;
};
SymEigen sym_min_eigen(const Mat& a);

/// Smallest generalized eigenvalue of det(a - lambda b) = 0 with b symmetric
/// positive definite, plus a b-unit eigenvector. Reduces by Cholesky
/// b = L L^T to an ordinary symmetric problem for L^{-1} a L^{-T}.
SymEigen generalized_min_eigen(const Mat& a, const Mat& b);

} // namespace ricn

#endif
