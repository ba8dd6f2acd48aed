#include "ricn/weighted.hpp"

#include <cmath>

#include "ricn/numerics.hpp"

namespace ricn {

EffectiveDim EffectiveDim::finite(double value, int dim) {
  EffectiveDim n(value, false);
  n.require_admissible(dim);
  return n;
}

EffectiveDim EffectiveDim::finite_unchecked(double value) {
  if (!std::isfinite(value))
    throw InvalidArgument("effective dimension must be finite or the infinity marker");
  return EffectiveDim(value, false);
}

EffectiveDim EffectiveDim::infinity() { return EffectiveDim(0.0, true); }

EffectiveDim EffectiveDim::parse(const std::string& text, int dim) {
  if (text == "inf" || text == "infinity" || text == "Inf" || text == "+inf")
    return infinity();
  try {
    return finite(std::stod(text), dim);
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("cannot parse effective dimension '" + text + "'");
  }
}

double EffectiveDim::value() const {
  if (infinite_)
    throw InvalidArgument("value() on the infinite effective dimension");
  return value_;
}

void EffectiveDim::require_admissible(int dim) const {
  if (infinite_) return;
  if (!std::isfinite(value_))
    throw InvalidArgument("effective dimension must be finite or the infinity marker");
  if (value_ >= 0.0 && value_ < static_cast<double>(dim))
    throw InvalidArgument("effective dimension " + format_g17(value_) +
                          " lies in the excluded range [0, " +
                          std::to_string(dim) + ")");
}

std::string EffectiveDim::to_string() const {
  return infinite_ ? "inf" : format_g17(value_);
}

WeightedManifold::WeightedManifold(Chart chart, ScalarField psi, ModelLabels labels)
    : chart_(std::move(chart)), psi_(std::move(psi)), labels_(std::move(labels)) {}

double WeightedManifold::density(const Vec& p) const {
  chart_.require_inside(p);
  const double det = chart_.metric(p).determinant();
  const double d = std::exp(-psi_.value(p)) * std::sqrt(det);
  if (!(d > 0.0) || !std::isfinite(d))
    throw NumericError("measure density is not finite and positive");
  return d;
}

BilinearForm ric_n_form(const WeightedManifold& wm, const Vec& p,
                        const EffectiveDim& n_eff) {
  const int n = wm.dim();
  n_eff.require_admissible(n);
  const Mat ric = ricci_tensor(wm.chart(), p);
  const Mat hess_psi = hessian(wm.chart(), wm.psi(), p);
  if (n_eff.is_infinite()) return ric + hess_psi;
  const double nv = n_eff.value();
  if (nv == static_cast<double>(n))
    throw InvalidArgument(
        "Ric_N at N = dim is directional-only; use ric_n_direction");
  const Vec dpsi = wm.psi().jet(p).grad;
  return ric + hess_psi - (dpsi * dpsi.transpose()) / (nv - n);
}

ExtReal ric_n_direction(const WeightedManifold& wm, const Vec& p, const Vec& v,
                        const EffectiveDim& n_eff) {
  const int n = wm.dim();
  n_eff.require_admissible(n);
  if (v.size() != n)
    throw InvalidArgument("tangent vector dimension mismatch");
  if (!v.allFinite()) throw InvalidArgument("tangent vector must be finite");

  if (!n_eff.is_infinite() && n_eff.value() == static_cast<double>(n)) {
    // Dichotomy branch: finite on the kernel of dpsi, -infinity elsewhere.
    const Mat ginv = wm.chart().inverse_metric(p);
    const Mat g = wm.chart().metric(p);
    const Vec dpsi = wm.psi().jet(p).grad;
    const double pairing = dpsi.dot(v);
    const double grad_norm = std::sqrt(std::max(0.0, dpsi.dot(ginv * dpsi)));
    const double v_norm = std::sqrt(std::max(0.0, v.dot(g * v)));
    if (std::abs(pairing) > kOrthogonalityTol * grad_norm * v_norm)
      return ExtReal::neg_infinity();
    const Mat form = ricci_tensor(wm.chart(), p) + hessian(wm.chart(), wm.psi(), p);
    return ExtReal::finite(v.dot(form * v));
  }
  const Mat form = ric_n_form(wm, p, n_eff);
  return ExtReal::finite(v.dot(form * v));
}

DirectionalMin ric_n_min(const WeightedManifold& wm, const Vec& p,
                         const EffectiveDim& n_eff) {
  const Mat form = ric_n_form(wm, p, n_eff);
  const Mat g = wm.chart().metric(p);
  const SymEigen e = generalized_min_eigen(form, g);
  return DirectionalMin{e.value, e.vector};
}

double weighted_laplacian(const WeightedManifold& wm, const ScalarField& u,
                          const Vec& p) {
  return laplace_beltrami(wm.chart(), u, p) -
         gradient_inner(wm.chart(), u, wm.psi(), p);
}

CurvatureReport curvature_report(const WeightedManifold& wm,
                                 const std::vector<Vec>& points,
                                 const EffectiveDim& n_eff, unsigned jobs) {
  CurvatureReport report;
  report.entries.resize(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    const Vec& p = points[i];
    CurvatureReport::Entry e;
    e.point = p;
    e.form = ric_n_form(wm, p, n_eff);
    const DirectionalMin m = ric_n_min(wm, p, n_eff);
    e.min_value = m.value;
    e.min_direction = m.direction;
    report.entries[i] = std::move(e);
  });
  if (!report.entries.empty()) {
    report.summary_min = report.entries.front().min_value;
    report.summary_max = report.entries.front().min_value;
    for (const auto& e : report.entries) {
      report.summary_min = std::min(report.summary_min, e.min_value);
      report.summary_max = std::max(report.summary_max, e.min_value);
    }
  }
  return report;
}

// --- model spaces -------------------------------------------------------------

namespace models {

namespace {

const std::vector<std::string> kLineCoord = {"x"};

Chart line_chart() {
  return Chart::euclidean(kLineCoord, {Interval{}});
}

void require(bool cond, const char* msg) {
  if (!cond) throw InvalidArgument(msg);
}

} // namespace

WeightedManifold m1(double K, double N) {
  require(K > 0.0, "m1: curvature bound K must be positive");
  require(N < 0.0, "m1: effective dimension N must be negative");
  const double a = std::sqrt(K / (1.0 - N));
  // psi(x) = (1-N) log cosh(a x); parameters baked in as literals.
  const std::string text =
      format_g17(1.0 - N) + "*log(cosh(" + format_g17(a) + "*x))";
  ModelLabels labels;
  labels.family = "m1";
  labels.curvature_k = K;
  labels.effective_dim = N;
  labels.finite_volume = true;
  labels.decay_rate = std::sqrt(K * (1.0 - N));
  return WeightedManifold(line_chart(),
                          ScalarField::from_text(text, kLineCoord), labels);
}

WeightedManifold m2(double K, double N) {
  require(K > 0.0, "m2: curvature bound K must be positive");
  require(N < 0.0, "m2: effective dimension N must be negative");
  const double slope = std::sqrt(K * (1.0 - N));
  const std::string text = format_g17(slope) + "*x";
  ModelLabels labels;
  labels.family = "m2";
  labels.curvature_k = K;
  labels.effective_dim = N;
  labels.finite_volume = false;
  labels.decay_rate = slope;
  return WeightedManifold(line_chart(),
                          ScalarField::from_text(text, kLineCoord), labels);
}

WeightedManifold gauss_line(double K) {
  require(K > 0.0, "gauss_line: K must be positive");
  const std::string text = format_g17(K / 2.0) + "*x^2";
  ModelLabels labels;
  labels.family = "gauss";
  labels.curvature_k = K;
  labels.finite_volume = true;
  return WeightedManifold(line_chart(),
                          ScalarField::from_text(text, kLineCoord), labels);
}

WeightedManifold hyperbolic_example(double N) {
  require(N < 0.0, "hyperbolic_example: N must be negative");
  const std::vector<std::string> coords = {"x", "y"};
  std::vector<Interval> domain = {Interval{}, Interval{0.0, std::numeric_limits<double>::infinity()}};
  std::vector<ScalarField> metric;
  metric.push_back(ScalarField::from_text("1/(y^2)", coords));
  metric.push_back(ScalarField::from_text("0", coords));
  metric.push_back(ScalarField::from_text("0", coords));
  metric.push_back(ScalarField::from_text("1/(y^2)", coords));
  Chart chart(coords, std::move(domain), std::move(metric));
  chart.set_exact_christoffel([](const Vec& p) {
    const double y = p(1);
    std::vector<Mat> gamma(2, Mat::Zero(2, 2));
    gamma[0](0, 1) = gamma[0](1, 0) = -1.0 / y; // Gamma^x_xy
    gamma[1](0, 0) = 1.0 / y;                   // Gamma^y_xx
    gamma[1](1, 1) = -1.0 / y;                  // Gamma^y_yy
    return gamma;
  });
  const std::string psi_text = "-" + format_g17(2.0 - N) + "*log(y)";
  ModelLabels labels;
  labels.family = "hyperbolic-example";
  labels.effective_dim = N;
  labels.curvature_k = 1.0 - N; // Ric_N is the constant 1-N
  labels.finite_volume = false;
  return WeightedManifold(std::move(chart),
                          ScalarField::from_text(psi_text, coords), labels);
}

WeightedManifold sphere(double radius) {
  require(radius > 0.0, "sphere: radius must be positive");
  const std::vector<std::string> coords = {"theta", "phi"};
  std::vector<Interval> domain = {Interval{0.0, M_PI}, Interval{-M_PI, M_PI}};
  const std::string r2 = format_g17(radius * radius);
  std::vector<ScalarField> metric;
  metric.push_back(ScalarField::from_text(r2, coords));
  metric.push_back(ScalarField::from_text("0", coords));
  metric.push_back(ScalarField::from_text("0", coords));
  metric.push_back(ScalarField::from_text(r2 + "*sin(theta)^2", coords));
  Chart chart(coords, std::move(domain), std::move(metric));
  chart.set_exact_christoffel([](const Vec& p) {
    const double th = p(0);
    std::vector<Mat> gamma(2, Mat::Zero(2, 2));
    gamma[0](1, 1) = -std::sin(th) * std::cos(th);        // Gamma^theta_phiphi
    gamma[1](0, 1) = gamma[1](1, 0) = std::cos(th) / std::sin(th);
    return gamma;
  });
  chart.set_periodic(1, true);
  ModelLabels labels;
  labels.family = "sphere";
  labels.radius = radius;
  labels.curvature_k = 1.0 / (radius * radius); // Ric = (n-1)/r^2 * g with n=2
  labels.finite_volume = true;
  return WeightedManifold(std::move(chart),
                          ScalarField::from_text("0", coords), labels);
}

WeightedManifold circle(double radius) {
  require(radius > 0.0, "circle: radius must be positive");
  const std::vector<std::string> coords = {"x"};
  std::vector<Interval> domain = {Interval{-M_PI, M_PI}};
  std::vector<ScalarField> metric;
  metric.push_back(ScalarField::from_text(format_g17(radius * radius), coords));
  Chart chart(coords, std::move(domain), std::move(metric));
  chart.set_exact_christoffel(
      [](const Vec&) { return std::vector<Mat>(1, Mat::Zero(1, 1)); });
  chart.set_periodic(0, true);
  ModelLabels labels;
  labels.family = "circle";
  labels.radius = radius;
  labels.finite_volume = true;
  return WeightedManifold(std::move(chart),
                          ScalarField::from_text("0", coords), labels);
}

WeightedManifold flat_product(int n, double slope) {
  require(n >= 1 && n <= 3, "flat_product: dimension must be 1, 2, or 3");
  std::vector<std::string> coords;
  for (int i = 0; i < n; ++i) coords.push_back("x" + std::to_string(i + 1));
  Chart chart = Chart::euclidean(coords, std::vector<Interval>(static_cast<std::size_t>(n)));
  std::string text;
  for (int i = 0; i < n; ++i) {
    if (i) text += "+";
    text += coords[static_cast<std::size_t>(i)];
  }
  text = format_g17(slope) + "*(" + text + ")";
  ModelLabels labels;
  labels.family = "flat-product";
  labels.slope = slope;
  labels.finite_volume = false;
  return WeightedManifold(std::move(chart),
                          ScalarField::from_text(text, coords), labels);
}

WeightedManifold custom_line(const std::string& weight_text, ModelLabels labels) {
  if (labels.family.empty()) labels.family = "custom-line";
  return WeightedManifold(line_chart(),
                          ScalarField::from_text(weight_text, kLineCoord),
                          std::move(labels));
}

WeightedManifold by_tag(const std::string& tag, const ModelParams& params) {
  auto need = [&](const std::optional<double>& v, const char* what) {
    if (!v)
      throw InvalidArgument("model '" + tag + "' requires parameter " + what);
    return *v;
  };
  if (tag == "m1") return m1(need(params.K, "--K"), need(params.N, "--Neff"));
  if (tag == "m2") return m2(need(params.K, "--K"), need(params.N, "--Neff"));
  if (tag == "gauss") return gauss_line(need(params.K, "--K"));
  if (tag == "hyperbolic-example")
    return hyperbolic_example(need(params.N, "--Neff"));
  if (tag == "sphere") return sphere(params.radius.value_or(1.0));
  if (tag == "circle") return circle(params.radius.value_or(1.0));
  if (tag == "flat-product")
    return flat_product(params.dim.value_or(2), params.slope.value_or(1.0));
  throw InvalidArgument("unknown model tag '" + tag + "'");
}

} // namespace models

// --- warped products ----------------------------------------------------------

WarpedProduct warped_product(const WeightedManifold& sigma, double K, double N) {
  if (sigma.dim() != 1)
    throw InvalidArgument("warped_product: base must be one-dimensional");
  if (!(K > 0.0)) throw InvalidArgument("warped_product: K must be positive");
  if (!(N < -1.0)) throw InvalidArgument("warped_product: N must be below -1");

  const double a = std::sqrt(K / (1.0 - N));
  const std::string base_coord = sigma.chart().coordinates().front();
  const std::vector<std::string> coords = {"t", base_coord};
  std::vector<Interval> domain = {Interval{}, sigma.chart().domain().front()};

  const std::string warp = "cosh(" + format_g17(a) + "*t)";
  std::vector<ScalarField> metric;
  metric.push_back(ScalarField::from_text("1", coords));
  metric.push_back(ScalarField::from_text("0", coords));
  metric.push_back(ScalarField::from_text("0", coords));
  const ScalarField& g_sigma = sigma.chart().metric_entry(0, 0);
  if (g_sigma.is_expression()) {
    metric.push_back(ScalarField::from_text(
        warp + "^2*(" + g_sigma.expression().to_string() + ")", coords));
  } else {
    const ScalarField base_metric = g_sigma;
    metric.push_back(ScalarField::from_function(
        [base_metric, a](const Vec& p) {
          Vec q(1);
          q(0) = p(1);
          const double c = std::cosh(a * p(0));
          return c * c * base_metric.value(q);
        },
        base_metric.fd_config()));
  }
  Chart chart(coords, std::move(domain), std::move(metric));
  if (sigma.chart().periodic(0)) chart.set_periodic(1, true);

  ScalarField psi;
  const std::string warp_weight =
      format_g17(2.0 - N) + "*log(" + warp + ")";
  if (sigma.psi().is_expression()) {
    psi = ScalarField::from_text(
        warp_weight + "+(" + sigma.psi().expression().to_string() + ")", coords);
  } else {
    const ScalarField base_psi = sigma.psi();
    psi = ScalarField::from_function(
        [base_psi, a, N](const Vec& p) {
          Vec q(1);
          q(0) = p(1);
          return (2.0 - N) * std::log(std::cosh(a * p(0))) + base_psi.value(q);
        },
        base_psi.fd_config());
  }

  ModelLabels labels;
  labels.family = "warped";
  labels.curvature_k = K;
  labels.effective_dim = N;
  labels.finite_volume = sigma.labels().finite_volume;

  WarpedProduct result;
  result.manifold = WeightedManifold(std::move(chart), std::move(psi), labels);
  result.base = sigma;
  result.curvature_k = K;
  result.effective_dim = N;
  result.warp_rate = a;
  return result;
}

SigmaCurvatureReport sigma_curvature_check(const WarpedProduct& warped,
                                           const std::vector<double>& points) {
  const double K = warped.curvature_k;
  const double N = warped.effective_dim;
  SigmaCurvatureReport report;
  report.threshold = K * (2.0 - N) / (1.0 - N);
  const EffectiveDim shifted = EffectiveDim::finite(N - 1.0, warped.base.dim());
  bool first = true;
  for (double x : points) {
    Vec p(1);
    p(0) = x;
    const DirectionalMin m = ric_n_min(warped.base, p, shifted);
    const double margin = m.value - report.threshold;
    report.entries.push_back({x, m.value, margin});
    if (first || margin < report.min_margin) report.min_margin = margin;
    first = false;
  }
  return report;
}

} // namespace ricn
