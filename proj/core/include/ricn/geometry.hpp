#ifndef RICN_GEOMETRY_HPP
#define RICN_GEOMETRY_HPP

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ricn/expr.hpp"

namespace ricn {

/// Open coordinate interval; infinities mark unbounded axes.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Finite-difference settings for scalar fields that are not expression
/// backed. `order` 2 uses the classic central stencils; 4 uses the
/// Richardson-refined five-point stencils. With `scale_step` the step is
/// h * (1 + |coordinate|) per axis.
struct FdConfig {
  double step = 1e-4;
  int order = 2;
  bool scale_step = true;
};

/// A scalar function on a chart: either a parsed Expression (differentiated
/// exactly by forward AD) or an arbitrary pointwise computation
/// (differentiated by central finite differences with a recorded step).
class ScalarField {
public:
  ScalarField() = default;

  static ScalarField from_expression(Expression e);
  static ScalarField from_text(const std::string& text,
                               const std::vector<std::string>& variables);
  static ScalarField from_function(std::function<double(const Vec&)> f,
                                   FdConfig fd = {});
  static ScalarField constant(double value);

  double value(const Vec& p) const;
  Jet2 jet(const Vec& p) const;

  bool is_expression() const { return expr_.has_value(); }
  const Expression& expression() const;
  const FdConfig& fd_config() const { return fd_; }

  /// Margin a surrounding chart must keep to the domain boundary so the
  /// differencing stencil stays inside; zero for expression-backed fields.
  double stencil_reach(double coordinate) const;

private:
  std::optional<Expression> expr_;
  std::function<double(const Vec&)> fn_;
  FdConfig fd_;
};

/// Coordinate chart: dimension (1..3), coordinate names, an open box
/// domain, and a symmetric matrix of metric coefficient fields. Built-in
/// charts may also carry exact Christoffel symbols, used as cross-checks
/// against the generic path.
class Chart {
public:
  using ChristoffelFn =
      std::function<std::vector<Mat>(const Vec&)>; // [k](i,j) -> Gamma^k_ij

  Chart() = default;
  Chart(std::vector<std::string> coordinates, std::vector<Interval> domain,
        std::vector<ScalarField> metric_row_major);

  static Chart euclidean(const std::vector<std::string>& coordinates,
                         std::vector<Interval> domain);

  int dim() const { return dim_; }
  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::vector<Interval>& domain() const { return domain_; }
  const ScalarField& metric_entry(int i, int j) const;

  /// Metric matrix at p; throws NumericError unless symmetric positive
  /// definite (all leading principal minors > 0).
  Mat metric(const Vec& p) const;
  Mat inverse_metric(const Vec& p) const;
  /// Raw coordinate partials of the metric: result[l](i,j) = d_l g_ij.
  std::vector<Mat> metric_partials(const Vec& p) const;

  bool inside(const Vec& p, double margin = 0.0) const;
  void require_inside(const Vec& p, double margin = 0.0) const;

  void set_exact_christoffel(ChristoffelFn fn) { exact_christoffel_ = std::move(fn); }
  const ChristoffelFn& exact_christoffel() const { return exact_christoffel_; }

  void set_periodic(int axis, bool periodic);
  bool periodic(int axis) const;

private:
  int dim_ = 0;
  std::vector<std::string> coords_;
  std::vector<Interval> domain_;
  std::vector<ScalarField> metric_; // row-major dim*dim
  std::vector<bool> periodic_;
  ChristoffelFn exact_christoffel_;
};

/// Symmetric bilinear form attached to a point (components in the chart
/// basis); plain matrix alias with the contract that entries are finite and
/// the matrix symmetric.
using BilinearForm = Mat;

/// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij); exact in (i,j)
/// symmetry. Metric derivatives come from AD for expression-backed entries
/// and central differences otherwise.
std::vector<Mat> christoffel(const Chart& chart, const Vec& p);

/// Covariant Hessian (Hess u)_ij = d_i d_j u - Gamma^k_ij d_k u.
BilinearForm hessian(const Chart& chart, const ScalarField& u, const Vec& p);

/// g-trace of the covariant Hessian.
double laplace_beltrami(const Chart& chart, const ScalarField& u, const Vec& p);

/// Ricci tensor by the coordinate formula
///   Ric_ij = d_k Gamma^k_ij - d_i Gamma^k_kj
///          + Gamma^k_kl Gamma^l_ij - Gamma^k_il Gamma^l_kj,
/// with the Christoffel derivatives taken by central differences of step
/// `christoffel_fd_step`. One-dimensional charts return the zero form.
BilinearForm ricci_tensor(const Chart& chart, const Vec& p);

/// Step for the finite differencing of Christoffel symbols inside
/// ricci_tensor.
inline constexpr double kChristoffelFdStep = 1e-4;

// Pointwise helpers used throughout the weighted and analysis modules.

/// Contravariant gradient components g^{ij} d_j u.
Vec gradient_vector(const Chart& chart, const ScalarField& u, const Vec& p);

/// Riemannian inner product of the gradients of two scalar fields,
/// g^{ij} d_i u d_j v.
double gradient_inner(const Chart& chart, const ScalarField& u,
                      const ScalarField& v, const Vec& p);

/// Squared g-norm of the gradient of u.
double gradient_norm_sq(const Chart& chart, const ScalarField& u, const Vec& p);

/// Hilbert-Schmidt norm squared of a covariant bilinear form with respect
/// to g: g^{ik} g^{jl} T_ij T_kl.
double hilbert_schmidt_sq(const Mat& inverse_metric, const Mat& form);

} // namespace ricn

#endif
