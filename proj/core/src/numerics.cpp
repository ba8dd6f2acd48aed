#include "ricn/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

namespace ricn {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  unsigned n = jobs == 0 ? std::thread::hardware_concurrency() : jobs;
  if (n == 0) n = 1;
  n = static_cast<unsigned>(std::min<std::size_t>(n, count));
  if (n == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int nodes) {
  if (nodes < 3) nodes = 3;
  if (nodes % 2 == 0) ++nodes;
  const int m = nodes - 1; // even number of intervals
  const double h = (b - a) / m;
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < m; i += 2) odd += f(a + i * h);
  for (int i = 2; i < m; i += 2) even += f(a + i * h);
  return (h / 3.0) * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

double simpson_adaptive(const std::function<double(double)>& f, double a,
                        double b, double rel_tol, int max_nodes) {
  int nodes = 129;
  double prev = simpson(f, a, b, nodes);
  while (nodes < max_nodes) {
    nodes = 2 * (nodes - 1) + 1;
    const double cur = simpson(f, a, b, nodes);
    if (!std::isfinite(cur)) throw NumericError("quadrature produced a non-finite value");
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
    if (std::abs(cur - prev) <= rel_tol * scale) return cur;
    prev = cur;
  }
  throw NumericError("quadrature did not converge to the requested tolerance");
}

int sturm_count(const std::vector<double>& diag, const std::vector<double>& off,
                double sigma) {
  const std::size_t m = diag.size();
  int count = 0;
  double q = 1.0;
  const double tiny = 1e-300;
  for (std::size_t i = 0; i < m; ++i) {
    const double e2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
    q = diag[i] - sigma - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

namespace {

// Solve (T - sigma I) x = rhs with partial pivoting; T tridiagonal. The
// factorization tolerates (near-)singular shifts, which is exactly the
// regime inverse iteration exploits.
struct TridiagShiftSolver {
  std::vector<double> dl, d, du, du2;
  std::vector<int> pivot;
  std::size_t m;

  TridiagShiftSolver(const std::vector<double>& diag,
                     const std::vector<double>& off, double sigma) {
    m = diag.size();
    d.resize(m);
    dl.assign(m > 1 ? m - 1 : 0, 0.0);
    du.assign(m > 1 ? m - 1 : 0, 0.0);
    du2.assign(m > 2 ? m - 2 : 0, 0.0);
    pivot.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) d[i] = diag[i] - sigma;
    for (std::size_t i = 0; i + 1 < m; ++i) dl[i] = du[i] = off[i];

    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(d[i]));
    for (double e : du) scale = std::max(scale, std::abs(e));
    const double floor = std::max(scale, 1.0) * 1e-300;

    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        pivot[i] = 0;
        if (d[i] == 0.0) d[i] = floor;
        const double factor = dl[i] / d[i];
        dl[i] = factor; // store multiplier
        d[i + 1] -= factor * du[i];
        if (i + 2 < m) du2[i] = 0.0;
      } else {
        pivot[i] = 1;
        const double factor = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = factor;
        const double tmp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = tmp - factor * d[i + 1];
        if (i + 2 < m) {
          du2[i] = du[i + 1];
          du[i + 1] = -factor * du[i + 1];
        }
      }
    }
    if (d[m - 1] == 0.0) d[m - 1] = floor;
  }

  void solve(std::vector<double>& x) const {
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (pivot[i] == 0) {
        x[i + 1] -= dl[i] * x[i];
      } else {
        std::swap(x[i], x[i + 1]);
        x[i + 1] -= dl[i] * x[i];
      }
    }
    x[m - 1] /= d[m - 1];
    if (m >= 2) {
      x[m - 2] = (x[m - 2] - du[m - 2] * x[m - 1]) / d[m - 2];
    }
    for (std::size_t ii = m; ii >= 3; --ii) {
      const std::size_t i = ii - 3;
      x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void tridiag_apply(const std::vector<double>& diag,
                   const std::vector<double>& off,
                   const std::vector<double>& x, std::vector<double>& y) {
  const std::size_t m = diag.size();
  for (std::size_t i = 0; i < m; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < m) s += off[i] * x[i + 1];
    y[i] = s;
  }
}

} // namespace

TridiagEigenResult tridiag_smallest(const std::vector<double>& diag,
                                    const std::vector<double>& off, int k,
                                    std::uint64_t seed) {
  const std::size_t m = diag.size();
  if (m == 0 || off.size() + 1 != m)
    throw InvalidArgument("tridiag_smallest: inconsistent matrix dimensions");
  if (k < 1 || static_cast<std::size_t>(k) > m)
    throw InvalidArgument("tridiag_smallest: k out of range");

  // Gershgorin enclosure of the full spectrum.
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                     (i + 1 < m ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double span = std::max(hi - lo, 1e-300);

  TridiagEigenResult result;
  int steps = 0;
  for (int j = 1; j <= k; ++j) {
    double a = lo, b = hi;
    // Shrink [a, b] until it brackets exactly the j-th eigenvalue tightly.
    for (int it = 0; it < 220; ++it) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(diag, off, mid) >= j) {
        b = mid;
      } else {
        a = mid;
      }
      ++steps;
      const double width = b - a;
      if (width <= 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)) + 1e-18 * span)
        break;
    }
    result.values.push_back(0.5 * (a + b));
  }
  result.bisection_steps = steps;

  // Eigenvectors by inverse iteration at the bisection estimates, then a
  // Rayleigh-quotient polish of each eigenvalue.
  Rng rng(seed);
  std::vector<double> work(m);
  for (int j = 0; j < k; ++j) {
    const double lambda = result.values[static_cast<std::size_t>(j)];
    TridiagShiftSolver solver(diag, off, lambda);
    std::vector<double> v(m);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    double norm = std::sqrt(dot(v, v));
    for (auto& x : v) x /= norm;
    for (int it = 0; it < 6; ++it) {
      solver.solve(v);
      // Deflate against previously found eigenvectors (only matters for
      // clustered eigenvalues).
      for (int p = 0; p < j; ++p) {
        const double c = dot(v, result.vectors[static_cast<std::size_t>(p)]);
        for (std::size_t i = 0; i < m; ++i)
          v[i] -= c * result.vectors[static_cast<std::size_t>(p)][i];
      }
      norm = std::sqrt(dot(v, v));
      if (!(norm > 0.0) || !std::isfinite(norm))
        throw NumericError("inverse iteration broke down");
      for (auto& x : v) x /= norm;
      tridiag_apply(diag, off, v, work);
      double r = 0.0;
      const double rayleigh = dot(v, work);
      for (std::size_t i = 0; i < m; ++i) {
        const double res = work[i] - rayleigh * v[i];
        r += res * res;
      }
      if (std::sqrt(r) <= 1e-12 * std::max(1.0, std::abs(rayleigh)) && it >= 1)
        break;
    }
    tridiag_apply(diag, off, v, work);
    const double rayleigh = dot(v, work);
    double r = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double res = work[i] - rayleigh * v[i];
      r += res * res;
    }
    result.values[static_cast<std::size_t>(j)] = rayleigh;
    result.vectors.push_back(std::move(v));
    result.residuals.push_back(std::sqrt(r));
  }
  // The Rayleigh polish can reorder nearly equal values; restore ascending
  // order where needed.
  for (int j = 1; j < k; ++j) {
    if (result.values[static_cast<std::size_t>(j)] <
        result.values[static_cast<std::size_t>(j - 1)]) {
      std::swap(result.values[static_cast<std::size_t>(j)],
                result.values[static_cast<std::size_t>(j - 1)]);
      std::swap(result.vectors[static_cast<std::size_t>(j)],
                result.vectors[static_cast<std::size_t>(j - 1)]);
      std::swap(result.residuals[static_cast<std::size_t>(j)],
                result.residuals[static_cast<std::size_t>(j - 1)]);
    }
  }
  return result;
}

namespace {

// Unit eigenvector of the symmetric matrix a for a computed eigenvalue.
// Rank-deficient (A - lambda I) is handled by falling back to the dominant
// remaining row, and an isotropic A - lambda I to the first basis vector.
Vec sym_eigenvector(const Mat& a, double lambda) {
  const int n = static_cast<int>(a.rows());
  Mat s = a - lambda * Mat::Identity(n, n);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * scale;
  if (n == 1) return Vec::Ones(1);
  if (n == 2) {
    // Null vector of a 2x2 rank-1 matrix: orthogonal to its largest row.
    int row = std::abs(s(0, 0)) + std::abs(s(0, 1)) >=
                      std::abs(s(1, 0)) + std::abs(s(1, 1))
                  ? 0
                  : 1;
    Vec v(2);
    v << -s(row, 1), s(row, 0);
    if (v.norm() <= tol) { // s ~ 0: every direction is an eigenvector
      v << 1.0, 0.0;
    }
    return v.normalized();
  }
  // n == 3: cross products of row pairs span the null space complement.
  Vec best = Vec::Zero(3);
  double best_norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Eigen::Vector3d c = Eigen::Vector3d(s.row(i)).cross(Eigen::Vector3d(s.row(j)));
      if (c.norm() > best_norm) {
        best_norm = c.norm();
        best = c;
      }
    }
  }
  if (best_norm > tol * tol) return best.normalized();
  // Rank <= 1: null space is a plane (or everything); any vector orthogonal
  // to the largest row works.
  int row = 0;
  double rn = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (s.row(i).norm() > rn) {
      rn = s.row(i).norm();
      row = i;
    }
  }
  if (rn <= tol) {
    Vec v = Vec::Zero(3);
    v(0) = 1.0;
    return v;
  }
  Eigen::Vector3d r = s.row(row);
  Eigen::Vector3d trial = std::abs(r(0)) < 0.9 * rn ? Eigen::Vector3d(1, 0, 0)
                                                    : Eigen::Vector3d(0, 1, 0);
  Eigen::Vector3d v = trial - trial.dot(r) / r.squaredNorm() * r;
  return Vec(v.normalized());
}

} // namespace

SymEigen sym_min_eigen(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  if (n < 1 || n > 3 || a.cols() != n)
    throw InvalidArgument("sym_min_eigen: matrix must be n x n with n <= 3");
  double lambda;
  if (n == 1) {
    lambda = a(0, 0);
  } else if (n == 2) {
    // Roots of lambda^2 - tr lambda + det = 0, stable form.
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    lambda = tr / 2.0 - disc;
  } else {
    // Trigonometric solution of the characteristic cubic.
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    const double q = a.trace() / 3.0;
    if (p1 == 0.0) {
      lambda = std::min({a(0, 0), a(1, 1), a(2, 2)});
    } else {
      const double p2 = (a(0, 0) - q) * (a(0, 0) - q) +
                        (a(1, 1) - q) * (a(1, 1) - q) +
                        (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
      const double p = std::sqrt(p2 / 6.0);
      Mat b = (a - q * Mat::Identity(3, 3)) / p;
      double r = b.determinant() / 2.0;
      r = std::clamp(r, -1.0, 1.0);
      const double phi = std::acos(r) / 3.0;
      lambda = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    }
  }
  return SymEigen{lambda, sym_eigenvector(a, lambda)};
}

SymEigen generalized_min_eigen(const Mat& a, const Mat& b) {
  const int n = static_cast<int>(a.rows());
  if (b.rows() != n || b.cols() != n || a.cols() != n)
    throw InvalidArgument("generalized_min_eigen: dimension mismatch");
  Eigen::LLT<Mat> llt(b);
  if (llt.info() != Eigen::Success)
    throw NumericError("generalized_min_eigen: right-hand matrix is not positive definite");
  const Mat l = llt.matrixL();
  // C = L^{-1} A L^{-T}, symmetric with the same generalized eigenvalues.
  Mat c = l.triangularView<Eigen::Lower>().solve(a);
  c = l.triangularView<Eigen::Lower>().solve(c.transpose().eval());
  c = 0.5 * (c + c.transpose().eval());
  SymEigen reduced = sym_min_eigen(c);
  Vec v = l.transpose().triangularView<Eigen::Upper>().solve(reduced.vector);
  // w unit in the reduced problem implies v^T B v = 1 already; renormalize
  // against rounding anyway.
  const double bn = std::sqrt(v.dot(b * v));
  if (bn > 0.0) v /= bn;
  return SymEigen{reduced.value, v};
}

} // namespace ricn
