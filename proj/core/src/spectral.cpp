#include "ricn/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "ricn/numerics.hpp"

namespace ricn {

Grid1D Grid1D::make(double L, int M) {
  if (!(L > 0.0) || !std::isfinite(L))
    throw InvalidArgument("grid half-width must be positive and finite");
  if (M < 3) throw InvalidArgument("grid needs at least 3 nodes");
  if (M % 2 == 0)
    throw InvalidArgument("grid node count must be odd so x = 0 is a node");
  Grid1D g;
  g.half_width = L;
  g.node_count = M;
  g.spacing = 2.0 * L / (M - 1);
  g.nodes.resize(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) g.nodes[static_cast<std::size_t>(i)] = -L + i * g.spacing;
  g.nodes[static_cast<std::size_t>((M - 1) / 2)] = 0.0; // exact center
  return g;
}

namespace {

void require_line(const WeightedManifold& wm) {
  if (wm.dim() != 1)
    throw InvalidArgument("spectral discretization requires a 1-D manifold");
  // Unit metric check at a few sample points.
  for (double x : {-1.0, 0.0, 1.0}) {
    Vec p(1);
    p(0) = x;
    if (!wm.chart().inside(p)) continue;
    if (std::abs(wm.chart().metric(p)(0, 0) - 1.0) > 1e-12)
      throw InvalidArgument(
          "spectral discretization requires the Euclidean line metric");
  }
}

} // namespace

DiscreteOperator discretize(const WeightedManifold& wm, double L, int M) {
  require_line(wm);
  DiscreteOperator op;
  op.grid = Grid1D::make(L, M);
  const double h = op.grid.spacing;
  const std::size_t m = static_cast<std::size_t>(M);

  auto weight = [&](double x) {
    Vec p(1);
    p(0) = x;
    const double psi = wm.psi().value(p);
    if (!std::isfinite(psi)) throw NumericError("weight function is non-finite on the grid");
    return std::exp(-psi);
  };

  std::vector<double> flux(m - 1); // w_{i+1/2}
  for (std::size_t i = 0; i + 1 < m; ++i)
    flux[i] = weight(0.5 * (op.grid.nodes[i] + op.grid.nodes[i + 1]));

  op.stiff_diag.assign(m, 0.0);
  op.stiff_off.assign(m - 1, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    op.stiff_off[i] = -flux[i] / h;
    op.stiff_diag[i] += flux[i] / h;
    op.stiff_diag[i + 1] += flux[i] / h;
  }

  op.mass.assign(m, 0.0);
  double total_mass = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double half = (i == 0 || i + 1 == m) ? 0.5 : 1.0;
    op.mass[i] = half * h * weight(op.grid.nodes[i]);
    total_mass += op.mass[i];
  }
  if (!(total_mass > 0.0))
    throw NumericError("weight density underflowed to zero over the whole grid");
  for (double b : op.mass)
    if (!(b > 0.0))
      throw NumericError("mass matrix has a non-positive entry (density underflow)");
  return op;
}

SpectralResult eigen_smallest(const DiscreteOperator& op, int k) {
  const std::size_t m = op.mass.size();
  if (k < 1 || static_cast<std::size_t>(k) > m)
    throw InvalidArgument("eigen_smallest: k out of range");

  // Symmetrize: C = B^{-1/2} A B^{-1/2}, still tridiagonal.
  std::vector<double> scale(m);
  for (std::size_t i = 0; i < m; ++i) scale[i] = 1.0 / std::sqrt(op.mass[i]);
  std::vector<double> diag(m), off(m - 1);
  for (std::size_t i = 0; i < m; ++i) diag[i] = op.stiff_diag[i] * scale[i] * scale[i];
  for (std::size_t i = 0; i + 1 < m; ++i)
    off[i] = op.stiff_off[i] * scale[i] * scale[i + 1];

  TridiagEigenResult tri = tridiag_smallest(diag, off, k);

  SpectralResult result;
  result.grid = op.grid;
  result.bisection_steps = tri.bisection_steps;
  result.eigenvalues = tri.values;
  for (int j = 0; j < k; ++j) {
    std::vector<double>& w = tri.vectors[static_cast<std::size_t>(j)];
    // Map back: v = B^{-1/2} w; then v^T B v = w^T w = 1 (B-normalized).
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = w[i] * scale[i];
    // Residual in the generalized problem, relative to ||B v||.
    double rnum = 0.0, rden = 0.0;
    const double lambda = result.eigenvalues[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < m; ++i) {
      double av = op.stiff_diag[i] * v[i];
      if (i > 0) av += op.stiff_off[i - 1] * v[i - 1];
      if (i + 1 < m) av += op.stiff_off[i] * v[i + 1];
      const double bv = op.mass[i] * v[i];
      const double r = av - lambda * bv;
      rnum += r * r;
      rden += bv * bv;
    }
    const double rel = std::sqrt(rnum) / std::max(std::sqrt(rden), 1e-300);
    if (!(rel <= 1e-8))
      throw NumericError("eigenpair " + std::to_string(j) +
                         " failed the residual tolerance after refinement (" +
                         format_g17(rel) + "); " + std::to_string(j) +
                         " pairs converged");
    result.residuals.push_back(rel);
    result.eigenvectors.push_back(std::move(v));
  }
  return result;
}

Truncation default_truncation(const WeightedManifold& wm, double initial,
                              double cap) {
  require_line(wm);
  auto density = [&](double x) {
    Vec p(1);
    p(0) = x;
    return std::exp(-wm.psi().value(p));
  };
  double L = initial;
  double mass = simpson_adaptive(density, -L, L, 1e-12);
  while (L < cap) {
    const double next_l = 2.0 * L;
    double next_mass;
    try {
      next_mass = simpson_adaptive(density, -next_l, next_l, 1e-12);
    } catch (const Error&) {
      // Density overflowed on the wider window: infinite-volume weight.
      return Truncation{L, false, mass};
    }
    if (!std::isfinite(next_mass) || next_mass > 1e250)
      return Truncation{L, false, mass};
    if (next_mass - mass <= 1e-10 * next_mass)
      return Truncation{next_l, true, next_mass};
    L = next_l;
    mass = next_mass;
  }
  return Truncation{cap, false, mass};
}

FirstEigenResult first_nonzero_eigenvalue(const WeightedManifold& wm, double L,
                                          int M) {
  int coarse_m = (M + 1) / 2;
  if (coarse_m % 2 == 0) ++coarse_m;
  coarse_m = std::max(coarse_m, 3);

  const DiscreteOperator fine_op = discretize(wm, L, M);
  const DiscreteOperator coarse_op = discretize(wm, L, coarse_m);
  SpectralResult fine = eigen_smallest(fine_op, 2);
  const SpectralResult coarse = eigen_smallest(coarse_op, 2);

  FirstEigenResult result;
  result.lambda0 = fine.eigenvalues[0];
  result.lambda1 = fine.eigenvalues[1];
  result.grid = fine.grid;

  // Richardson extrapolation for a second-order scheme, general step ratio.
  const double hf = fine.grid.spacing;
  const double hc = coarse_op.grid.spacing;
  const double lf = fine.eigenvalues[1];
  const double lc = coarse.eigenvalues[1];
  result.richardson_lambda1 = lf + (lf - lc) * hf * hf / (hc * hc - hf * hf);
  fine.richardson_lambda1 = result.richardson_lambda1;

  // Sign normalization: positive at the node with the largest magnitude.
  std::vector<double> u = fine.eigenvectors[1];
  std::size_t arg = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) > std::abs(u[arg])) arg = i;
  if (u[arg] < 0.0)
    for (double& x : u) x = -x;
  result.eigenfunction = std::move(u);

  const ModelLabels& labels = wm.labels();
  if (labels.curvature_k) {
    const double K = *labels.curvature_k;
    const double bound =
        labels.effective_dim ? K * (*labels.effective_dim) / (*labels.effective_dim - 1.0)
                             : K; // N = infinity convention (Gaussian line)
    result.bound = bound;
    result.bound_margin = result.lambda1 - bound;
  }

  // Volume sanity: the finite-volume spectral-gap statement needs
  // m(M) < infinity. Trust an explicit label; otherwise look for mass
  // piling up against the truncation boundary.
  bool finite_volume = true;
  if (labels.finite_volume) {
    finite_volume = *labels.finite_volume;
  } else {
    double interior = 0.0, outer = 0.0;
    for (std::size_t i = 0; i < fine_op.mass.size(); ++i) {
      const double x = fine_op.grid.nodes[i];
      if (std::abs(x) > 0.9 * L)
        outer += fine_op.mass[i];
      else
        interior += fine_op.mass[i];
    }
    finite_volume = outer <= 0.25 * (interior + outer);
  }
  if (!finite_volume) {
    result.gap_claim_valid = false;
    result.gap_claim_note =
        "infinite total volume: no finite-volume spectral-gap claim applies; "
        "reported eigenvalues describe only the truncated operator";
  }
  result.fine = std::move(fine);
  return result;
}

L2Diagnostic l2_membership_diagnostic(const WeightedManifold& wm,
                                      const ScalarField& u,
                                      const std::vector<double>& schedule) {
  require_line(wm);
  if (schedule.size() < 2)
    throw InvalidArgument("l2 diagnostic needs at least two half-widths");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] > schedule[i - 1]))
      throw InvalidArgument("l2 diagnostic schedule must be increasing");

  auto integrand = [&](double x) {
    Vec p(1);
    p(0) = x;
    const double ux = u.value(p);
    return ux * ux * std::exp(-wm.psi().value(p));
  };

  L2Diagnostic diag;
  diag.half_widths = schedule;
  for (double L : schedule) {
    const int nodes = std::max(4001, 2 * (static_cast<int>(40.0 * L) / 2) + 1);
    const double val = simpson(integrand, -L, L, nodes);
    if (!std::isfinite(val)) throw NumericError("l2 quadrature is non-finite");
    diag.partial_norms.push_back(val);
  }
  const std::size_t last = diag.partial_norms.size() - 1;
  diag.last_ratio = diag.partial_norms[last] /
                    std::max(diag.partial_norms[last - 1], 1e-300);
  diag.classification = diag.last_ratio > 1.0 + kDivergenceDelta
                            ? L2Class::Divergent
                            : L2Class::Convergent;
  return diag;
}

} // namespace ricn
