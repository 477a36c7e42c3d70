#include "banditlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace banditlab {

namespace {

void check_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector dimension mismatch");
}

}  // namespace

double dot(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

Vec scaled(const Vec& v, double s) {
  Vec out(v);
  for (double& x : out) x *= s;
  return out;
}

Vec add(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  Vec out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Vec sub(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  Vec out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

Vec basis_vector(std::size_t dim, std::size_t i) {
  if (i >= dim) throw std::invalid_argument("basis index out of range");
  Vec e(dim, 0.0);
  e[i] = 1.0;
  return e;
}

bool all_finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(const Vec& d) {
  SymMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

SymMatrix SymMatrix::from_rows(const std::vector<Vec>& rows) {
  const std::size_t n = rows.size();
  for (const Vec& r : rows)
    if (r.size() != n) throw std::invalid_argument("from_rows: not square");
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      if (std::abs(rows[i][j] - rows[j][i]) > 1e-9)
        throw std::invalid_argument("from_rows: matrix not symmetric");
      m.set(i, j, 0.5 * (rows[i][j] + rows[j][i]));
    }
  return m;
}

void SymMatrix::add_outer(const Vec& v, double scale) {
  if (v.size() != dim_) throw std::invalid_argument("add_outer dimension mismatch");
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) data_[i * dim_ + j] += scale * v[i] * v[j];
}

void SymMatrix::add_scaled_identity(double s) {
  for (std::size_t i = 0; i < dim_; ++i) data_[i * dim_ + i] += s;
}

void SymMatrix::scale(double s) {
  for (double& x : data_) x *= s;
}

Vec SymMatrix::apply(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("apply dimension mismatch");
  Vec out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) acc += data_[i * dim_ + j] * x[j];
    out[i] = acc;
  }
  return out;
}

double SymMatrix::quad_form(const Vec& x) const { return dot(x, apply(x)); }

double SymMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (double x : data_) acc += x * x;
  return std::sqrt(acc);
}

bool SymMatrix::finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

SymMatrix add(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("matrix dimension mismatch");
  SymMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) out.set(i, j, a(i, j) + b(i, j));
  return out;
}

EigenDecomposition eig_sym(const SymMatrix& m) {
  if (!m.finite()) throw std::invalid_argument("eig_sym: non-finite entries");
  const std::size_t d = m.dim();
  if (d == 0) throw std::invalid_argument("eig_sym: empty matrix");

  // Work on dense copies; a is driven to diagonal form, v accumulates rotations.
  std::vector<double> a(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a[i * d + j] = m(i, j);
  std::vector<double> v(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

  const double norm = m.frobenius_norm();
  const double off_target = 1e-12 * norm;
  auto off_norm = [&]() {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) acc += 2.0 * a[i * d + j] * a[i * d + j];
    return std::sqrt(acc);
  };

  if (norm > 0.0) {
    for (int sweep = 0; sweep < 128 && off_norm() > off_target; ++sweep) {
      for (std::size_t p = 0; p + 1 < d; ++p) {
        for (std::size_t q = p + 1; q < d; ++q) {
          const double apq = a[p * d + q];
          if (std::abs(apq) <= 1e-300) continue;
          const double app = a[p * d + p];
          const double aqq = a[q * d + q];
          const double theta = (aqq - app) / (2.0 * apq);
          const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;
          a[p * d + p] = app - t * apq;
          a[q * d + q] = aqq + t * apq;
          a[p * d + q] = 0.0;
          a[q * d + p] = 0.0;
          for (std::size_t k = 0; k < d; ++k) {
            if (k == p || k == q) continue;
            const double akp = a[k * d + p];
            const double akq = a[k * d + q];
            a[k * d + p] = c * akp - s * akq;
            a[p * d + k] = a[k * d + p];
            a[k * d + q] = s * akp + c * akq;
            a[q * d + k] = a[k * d + q];
          }
          for (std::size_t k = 0; k < d; ++k) {
            const double vkp = v[k * d + p];
            const double vkq = v[k * d + q];
            v[k * d + p] = c * vkp - s * vkq;
            v[k * d + q] = s * vkp + c * vkq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  // stable: equal eigenvalues keep the sweep's column order
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i * d + i] > a[j * d + j];
  });

  EigenDecomposition out;
  out.eigenvalues.resize(d);
  out.eigenvectors.assign(d, Vec(d, 0.0));
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t col = order[k];
    out.eigenvalues[k] = a[col * d + col];
    for (std::size_t i = 0; i < d; ++i) out.eigenvectors[k][i] = v[i * d + col];
    for (std::size_t i = 0; i < d; ++i) {
      if (std::abs(out.eigenvectors[k][i]) > 1e-12) {
        if (out.eigenvectors[k][i] < 0.0)
          for (double& x : out.eigenvectors[k]) x = -x;
        break;
      }
    }
  }
  return out;
}

SymMatrix sym_power(const SymMatrix& m, double power) {
  const EigenDecomposition eig = eig_sym(m);
  const bool needs_pd = power < 0.0 || power != std::floor(power);
  SymMatrix out(m.dim());
  for (std::size_t k = 0; k < m.dim(); ++k) {
    const double lam = eig.eigenvalues[k];
    if (needs_pd && lam <= 1e-12)
      throw std::invalid_argument("sym_power: matrix not positive definite");
    out.add_outer(eig.eigenvectors[k], std::pow(lam, power));
  }
  return out;
}

SymMatrix sym_inverse(const SymMatrix& m) { return sym_power(m, -1.0); }

SymMatrix sym_conjugate(const SymMatrix& s, const SymMatrix& t) {
  const std::size_t d = s.dim();
  if (t.dim() != d) throw std::invalid_argument("sym_conjugate dimension mismatch");
  std::vector<Vec> st(d, Vec(d, 0.0));  // s * t
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += s(i, k) * t(k, j);
      st[i][j] = acc;
    }
  SymMatrix out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += t(i, k) * st[k][j];
      out.set(i, j, acc);
    }
  return out;
}

WeylReport weyl_check(const SymMatrix& a, const SymMatrix& h) {
  if (a.dim() != h.dim()) throw std::invalid_argument("weyl_check dimension mismatch");
  const EigenDecomposition ea = eig_sym(a);
  const EigenDecomposition eh = eig_sym(h);
  const EigenDecomposition es = eig_sym(add(a, h));
  const double h_max = eh.eigenvalues.front();
  WeylReport rep;
  rep.slack_per_index.resize(a.dim());
  rep.holds = true;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    rep.slack_per_index[i] = ea.eigenvalues[i] + h_max - es.eigenvalues[i];
    if (rep.slack_per_index[i] < -1e-9) rep.holds = false;
  }
  return rep;
}

DavisKahanReport davis_kahan_check(const SymMatrix& a, const SymMatrix& h) {
  if (a.dim() != h.dim())
    throw std::invalid_argument("davis_kahan_check dimension mismatch");
  const std::size_t d = a.dim();
  const EigenDecomposition ea = eig_sym(a);
  const EigenDecomposition eh = eig_sym(h);
  const EigenDecomposition es = eig_sym(add(a, h));

  const double delta =
      d > 1 ? ea.eigenvalues[0] - es.eigenvalues[1] : ea.eigenvalues[0];
  if (d > 1 && delta <= 0.0)
    throw std::invalid_argument("davis_kahan_check: eigengap delta <= 0");

  const double h_spectral = std::max(std::abs(eh.eigenvalues.front()),
                                     std::abs(eh.eigenvalues.back()));
  DavisKahanReport rep;
  rep.bound = d > 1 ? h_spectral / delta : 0.0;
  double acc = 0.0;
  for (std::size_t k = 1; k < d; ++k) {
    const double ip = dot(ea.eigenvectors[0], es.eigenvectors[k]);
    acc += ip * ip;
  }
  rep.alignment = std::sqrt(acc);
  rep.holds = rep.alignment <= rep.bound + 1e-9;
  return rep;
}

double matrix_azuma_tail(double t, double sigma_sq, int d) {
  if (sigma_sq <= 0.0) throw std::invalid_argument("matrix_azuma_tail: sigma_sq <= 0");
  if (d < 1) throw std::invalid_argument("matrix_azuma_tail: d < 1");
  return static_cast<double>(d) * std::exp(-(t * t) / (8.0 * sigma_sq));
}

TrustRegionResult trust_region_max_norm(const Vec& center, const SymMatrix& shape,
                                        double radius) {
  const std::size_t d = shape.dim();
  if (center.size() != d)
    throw std::invalid_argument("trust_region_max_norm dimension mismatch");
  if (!all_finite(center) || !shape.finite() || !std::isfinite(radius))
    throw std::invalid_argument("trust_region_max_norm: non-finite input");
  if (radius < 0.0) throw std::invalid_argument("trust_region_max_norm: radius < 0");

  const EigenDecomposition eig = eig_sym(shape);
  const double lam_min = eig.eigenvalues.back();
  if (lam_min <= 1e-12)
    throw std::invalid_argument("trust_region_max_norm: shape not positive definite");

  if (radius == 0.0) return {center, norm2(center)};

  // Whitened coordinates: theta = center + U diag(1/sqrt(lam)) z with ||z|| <= radius,
  // so the objective is ||chat + D z|| with chat = U^T center, D = diag(1/sqrt(lam)).
  Vec dscale(d), chat(d);
  for (std::size_t k = 0; k < d; ++k) {
    dscale[k] = 1.0 / std::sqrt(eig.eigenvalues[k]);
    chat[k] = dot(eig.eigenvectors[k], center);
  }
  const double d_max = dscale.back();  // eigenvalues sorted descending
  const double mu_bottom = d_max * d_max;

  // Stationarity: z_i = d_i chat_i / (mu - d_i^2), with the norm constraint fixing mu
  // above mu_bottom. phi decreases from +inf (when chat touches the bottom
  // eigenspace) to 0, so bisection applies whenever the target is reachable.
  auto phi = [&](double mu) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double zk = dscale[k] * chat[k] / (mu - dscale[k] * dscale[k]);
      acc += zk * zk;
    }
    return acc;
  };

  const double r_sq = radius * radius;
  const double lo0 = mu_bottom * (1.0 + 1e-13) + 1e-300;
  Vec z(d, 0.0);
  if (phi(lo0) <= r_sq) {
    // Hard case: the center has (numerically) no weight on the bottom eigenspace.
    // Take mu = mu_bottom for the well-separated coordinates and spend the leftover
    // radius on the first bottom coordinate.
    const double gap_tol = 1e-12 * mu_bottom;
    double spent = 0.0;
    std::size_t first_bottom = d - 1;
    for (std::size_t k = 0; k < d; ++k) {
      const double dk_sq = dscale[k] * dscale[k];
      if (mu_bottom - dk_sq <= gap_tol) {
        first_bottom = std::min(first_bottom, k);
        continue;
      }
      z[k] = dscale[k] * chat[k] / (mu_bottom - dk_sq);
      spent += z[k] * z[k];
    }
    const double leftover = std::max(0.0, r_sq - spent);
    z[first_bottom] += (chat[first_bottom] >= 0.0 ? 1.0 : -1.0) * std::sqrt(leftover);
  } else {
    double lo = lo0;
    double hi = mu_bottom + d_max * norm2(chat) / radius + 1.0;
    for (int it = 0; it < 400 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (phi(mid) > r_sq ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    for (std::size_t k = 0; k < d; ++k)
      z[k] = dscale[k] * chat[k] / (mu - dscale[k] * dscale[k]);
  }

  Vec theta(center);
  for (std::size_t k = 0; k < d; ++k) {
    const double step = dscale[k] * z[k];
    for (std::size_t i = 0; i < d; ++i) theta[i] += step * eig.eigenvectors[k][i];
  }
  return {theta, norm2(theta)};
}

}  // namespace banditlab
