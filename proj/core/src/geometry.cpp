#include "ricn/geometry.hpp"

#include <cmath>

namespace ricn {

ScalarField ScalarField::from_expression(Expression e) {
  ScalarField f;
  f.expr_ = std::move(e);
  return f;
}

ScalarField ScalarField::from_text(const std::string& text,
                                   const std::vector<std::string>& variables) {
  return from_expression(Expression::parse(text, variables));
}

ScalarField ScalarField::from_function(std::function<double(const Vec&)> f,
                                       FdConfig fd) {
  ScalarField s;
  s.fn_ = std::move(f);
  s.fd_ = fd;
  return s;
}

ScalarField ScalarField::constant(double value) {
  ScalarField s;
  s.fn_ = [value](const Vec&) { return value; };
  s.fd_ = FdConfig{};
  return s;
}

const Expression& ScalarField::expression() const {
  if (!expr_) throw InvalidArgument("scalar field is not expression-backed");
  return *expr_;
}

double ScalarField::value(const Vec& p) const {
  if (expr_) return expr_->value(p);
  if (!fn_) throw InvalidArgument("evaluating an empty scalar field");
  const double v = fn_(p);
  if (!std::isfinite(v)) throw NumericError("scalar field value is non-finite");
  return v;
}

double ScalarField::stencil_reach(double coordinate) const {
  if (expr_) return 0.0;
  const double h = fd_.scale_step ? fd_.step * (1.0 + std::abs(coordinate)) : fd_.step;
  return (fd_.order == 4 ? 2.0 : 1.0) * h;
}

namespace {

double fd_step(const FdConfig& fd, double coordinate) {
  return fd.scale_step ? fd.step * (1.0 + std::abs(coordinate)) : fd.step;
}

} // namespace

Jet2 ScalarField::jet(const Vec& p) const {
  if (expr_) return expr_->jet(p);
  if (!fn_) throw InvalidArgument("evaluating an empty scalar field");
  const int n = static_cast<int>(p.size());
  Jet2 j = Jet2::constant(0.0, n);
  const double f0 = fn_(p);
  j.value = f0;

  std::vector<double> h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) h[static_cast<std::size_t>(i)] = fd_step(fd_, p(i));

  auto at = [&](int i, double di, int k = -1, double dk = 0.0) {
    Vec q = p;
    q(i) += di;
    if (k >= 0) q(k) += dk;
    return fn_(q);
  };

  for (int i = 0; i < n; ++i) {
    const double hi = h[static_cast<std::size_t>(i)];
    const double fp = at(i, hi), fm = at(i, -hi);
    if (fd_.order == 4) {
      const double fp2 = at(i, 2 * hi), fm2 = at(i, -2 * hi);
      j.grad(i) = (8.0 * (fp - fm) - (fp2 - fm2)) / (12.0 * hi);
      j.hess(i, i) =
          (-fp2 + 16.0 * fp - 30.0 * f0 + 16.0 * fm - fm2) / (12.0 * hi * hi);
    } else {
      j.grad(i) = (fp - fm) / (2.0 * hi);
      j.hess(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const double hi = h[static_cast<std::size_t>(i)];
      const double hk = h[static_cast<std::size_t>(k)];
      auto cross = [&](double s) {
        return (at(i, s * hi, k, s * hk) - at(i, s * hi, k, -s * hk) -
                at(i, -s * hi, k, s * hk) + at(i, -s * hi, k, -s * hk)) /
               (4.0 * s * s * hi * hk);
      };
      double mixed = cross(1.0);
      if (fd_.order == 4) mixed = (4.0 * mixed - cross(2.0)) / 3.0;
      j.hess(i, k) = mixed;
      j.hess(k, i) = mixed;
    }
  }
  if (!std::isfinite(j.value) || !j.grad.allFinite() || !j.hess.allFinite())
    throw NumericError("finite-difference jet is non-finite");
  return j;
}

Chart::Chart(std::vector<std::string> coordinates, std::vector<Interval> domain,
             std::vector<ScalarField> metric_row_major)
    : dim_(static_cast<int>(coordinates.size())),
      coords_(std::move(coordinates)),
      domain_(std::move(domain)),
      metric_(std::move(metric_row_major)),
      periodic_(static_cast<std::size_t>(dim_), false) {
  if (dim_ < 1 || dim_ > 3)
    throw InvalidArgument("chart dimension must be 1, 2, or 3");
  if (domain_.size() != static_cast<std::size_t>(dim_))
    throw InvalidArgument("chart domain must have one interval per coordinate");
  if (metric_.size() != static_cast<std::size_t>(dim_ * dim_))
    throw InvalidArgument("chart metric must have dim*dim entries");
}

Chart Chart::euclidean(const std::vector<std::string>& coordinates,
                       std::vector<Interval> domain) {
  const int n = static_cast<int>(coordinates.size());
  std::vector<ScalarField> metric;
  metric.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      metric.push_back(ScalarField::from_expression(
          Expression::constant(i == j ? 1.0 : 0.0, coordinates)));
  Chart c(coordinates, std::move(domain), std::move(metric));
  c.set_exact_christoffel([n](const Vec&) {
    return std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n));
  });
  return c;
}

const ScalarField& Chart::metric_entry(int i, int j) const {
  return metric_[static_cast<std::size_t>(i * dim_ + j)];
}

Mat Chart::metric(const Vec& p) const {
  Mat g(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) {
      const double v = metric_entry(i, j).value(p);
      g(i, j) = v;
      g(j, i) = v;
    }
  // Positive definiteness via leading principal minors.
  for (int k = 1; k <= dim_; ++k) {
    if (!(g.topLeftCorner(k, k).determinant() > 0.0))
      throw NumericError("metric is not positive definite at the queried point");
  }
  return g;
}

Mat Chart::inverse_metric(const Vec& p) const {
  const Mat g = metric(p);
  return g.inverse();
}

std::vector<Mat> Chart::metric_partials(const Vec& p) const {
  std::vector<Mat> dg(static_cast<std::size_t>(dim_), Mat::Zero(dim_, dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) {
      const Jet2 jj = metric_entry(i, j).jet(p);
      for (int l = 0; l < dim_; ++l) {
        dg[static_cast<std::size_t>(l)](i, j) = jj.grad(l);
        dg[static_cast<std::size_t>(l)](j, i) = jj.grad(l);
      }
    }
  return dg;
}

bool Chart::inside(const Vec& p, double margin) const {
  if (p.size() != dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    const Interval& iv = domain_[static_cast<std::size_t>(i)];
    if (!(p(i) > iv.lo + margin && p(i) < iv.hi - margin)) return false;
    if (!std::isfinite(p(i))) return false;
  }
  return true;
}

void Chart::require_inside(const Vec& p, double margin) const {
  if (p.size() != dim_)
    throw InvalidArgument("point dimension does not match chart dimension");
  if (!inside(p, margin)) {
    std::string msg = "point (";
    for (int i = 0; i < dim_; ++i) {
      if (i) msg += ", ";
      msg += format_g17(p(i));
    }
    msg += margin > 0.0 ? ") is outside the chart domain (or within the "
                          "differencing margin " +
                              format_g17(margin) + " of its boundary)"
                        : ") is outside the chart domain";
    throw DomainError(msg);
  }
}

void Chart::set_periodic(int axis, bool periodic) {
  periodic_[static_cast<std::size_t>(axis)] = periodic;
}

bool Chart::periodic(int axis) const {
  return periodic_[static_cast<std::size_t>(axis)];
}

namespace {

double chart_metric_margin(const Chart& chart, const Vec& p) {
  double margin = 0.0;
  for (int i = 0; i < chart.dim(); ++i)
    for (int j = i; j < chart.dim(); ++j)
      for (int a = 0; a < chart.dim(); ++a)
        margin = std::max(margin, 2.0 * chart.metric_entry(i, j).stencil_reach(p(a)));
  return margin;
}

} // namespace

std::vector<Mat> christoffel(const Chart& chart, const Vec& p) {
  chart.require_inside(p, chart_metric_margin(chart, p));
  const int n = chart.dim();
  const Mat ginv = chart.inverse_metric(p);
  const std::vector<Mat> dg = chart.metric_partials(p);
  std::vector<Mat> gamma(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          s += ginv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) +
                             dg[static_cast<std::size_t>(j)](i, l) -
                             dg[static_cast<std::size_t>(l)](i, j));
        }
        gamma[static_cast<std::size_t>(k)](i, j) = 0.5 * s;
        gamma[static_cast<std::size_t>(k)](j, i) = 0.5 * s;
      }
    }
  }
  return gamma;
}

BilinearForm hessian(const Chart& chart, const ScalarField& u, const Vec& p) {
  double margin = chart_metric_margin(chart, p);
  for (int a = 0; a < chart.dim(); ++a)
    margin = std::max(margin, 2.0 * u.stencil_reach(p(a)));
  chart.require_inside(p, margin);
  const int n = chart.dim();
  const Jet2 ju = u.jet(p);
  const std::vector<Mat> gamma = christoffel(chart, p);
  Mat h = ju.hess;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        h(i, j) -= gamma[static_cast<std::size_t>(k)](i, j) * ju.grad(k);
  return h;
}

double laplace_beltrami(const Chart& chart, const ScalarField& u, const Vec& p) {
  const Mat ginv = chart.inverse_metric(p);
  const Mat h = hessian(chart, u, p);
  return (ginv * h).trace();
}

BilinearForm ricci_tensor(const Chart& chart, const Vec& p) {
  const int n = chart.dim();
  if (n == 1) return Mat::Zero(1, 1); // curvature vanishes on a line
  const double h = kChristoffelFdStep;
  chart.require_inside(p, 2.0 * h + chart_metric_margin(chart, p));

  const std::vector<Mat> gamma = christoffel(chart, p);
  // dgamma[l][k](i,j) = d_l Gamma^k_ij by central differences.
  std::vector<std::vector<Mat>> dgamma(
      static_cast<std::size_t>(n),
      std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n)));
  for (int l = 0; l < n; ++l) {
    Vec q = p;
    q(l) = p(l) + h;
    const std::vector<Mat> gp = christoffel(chart, q);
    q(l) = p(l) - h;
    const std::vector<Mat> gm = christoffel(chart, q);
    for (int k = 0; k < n; ++k)
      dgamma[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] =
          (gp[static_cast<std::size_t>(k)] - gm[static_cast<std::size_t>(k)]) /
          (2.0 * h);
  }

  Mat ric = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += dgamma[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)](i, j);
        s -= dgamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)](k, j);
        for (int l = 0; l < n; ++l) {
          s += gamma[static_cast<std::size_t>(k)](k, l) *
               gamma[static_cast<std::size_t>(l)](i, j);
          s -= gamma[static_cast<std::size_t>(k)](i, l) *
               gamma[static_cast<std::size_t>(l)](k, j);
        }
      }
      ric(i, j) = s;
    }
  }
  if (!ric.allFinite())
    throw NumericError("Ricci tensor evaluation produced non-finite entries");
  return 0.5 * (ric + ric.transpose().eval());
}

Vec gradient_vector(const Chart& chart, const ScalarField& u, const Vec& p) {
  return chart.inverse_metric(p) * u.jet(p).grad;
}

double gradient_inner(const Chart& chart, const ScalarField& u,
                      const ScalarField& v, const Vec& p) {
  const Mat ginv = chart.inverse_metric(p);
  return u.jet(p).grad.dot(ginv * v.jet(p).grad);
}

double gradient_norm_sq(const Chart& chart, const ScalarField& u, const Vec& p) {
  return gradient_inner(chart, u, u, p);
}

double hilbert_schmidt_sq(const Mat& inverse_metric, const Mat& form) {
  const Mat mixed = inverse_metric * form;
  return (mixed * mixed).trace();
}

} // namespace ricn
