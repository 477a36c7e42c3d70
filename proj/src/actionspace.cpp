#include "banditlab/actionspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace banditlab {

namespace {

constexpr double kMembershipTol = 1e-8;

double pnorm(const Vec& x, double p) {
  double acc = 0.0;
  for (double v : x) acc += std::pow(std::abs(v), p);
  return std::pow(acc, 1.0 / p);
}

double ellipsoid_constraint(const Ellipsoid& e, const Vec& x) {
  return sym_inverse(e.a).quad_form(sub(x, e.center));
}

}  // namespace

ActionSpace::ActionSpace(UnitSphere s) : v_(s), dim_(s.dim) {
  if (s.dim < 1) throw std::invalid_argument("UnitSphere: dim < 1");
}

ActionSpace::ActionSpace(Ellipsoid e) : v_(std::move(e)), dim_(0) {
  Ellipsoid& el = std::get<Ellipsoid>(v_);
  dim_ = el.a.dim();
  if (dim_ < 1) throw std::invalid_argument("Ellipsoid: empty matrix");
  if (el.level <= 0.0) throw std::invalid_argument("Ellipsoid: level <= 0");
  if (el.center.empty()) el.center.assign(dim_, 0.0);
  if (el.center.size() != dim_)
    throw std::invalid_argument("Ellipsoid: center dimension mismatch");
  if (eig_sym(el.a).eigenvalues.back() <= 1e-12)
    throw std::invalid_argument("Ellipsoid: matrix not positive definite");
}

ActionSpace::ActionSpace(PNormBall b) : v_(b), dim_(b.dim) {
  if (b.dim < 1) throw std::invalid_argument("PNormBall: dim < 1");
  if (b.p < 2.0) throw std::invalid_argument("PNormBall: p < 2");
  if (b.radius <= 0.0) throw std::invalid_argument("PNormBall: radius <= 0");
}

ActionSpace::ActionSpace(FiniteSet f) : v_(std::move(f)), dim_(0) {
  const FiniteSet& fs = std::get<FiniteSet>(v_);
  if (fs.points.empty()) throw std::invalid_argument("FiniteSet: no points");
  dim_ = fs.points.front().size();
  for (const Vec& x : fs.points) {
    if (x.size() != dim_) throw std::invalid_argument("FiniteSet: ragged points");
    if (!all_finite(x)) throw std::invalid_argument("FiniteSet: non-finite point");
  }
}

Vec linear_argmax(const ActionSpace& space, const Vec& theta) {
  if (theta.size() != space.dim())
    throw std::invalid_argument("linear_argmax: theta dimension mismatch");
  if (!all_finite(theta)) throw std::invalid_argument("linear_argmax: non-finite theta");

  return std::visit(
      [&](const auto& sp) -> Vec {
        using T = std::decay_t<decltype(sp)>;
        if constexpr (std::is_same_v<T, UnitSphere>) {
          const double n = norm2(theta);
          if (n == 0.0) throw std::invalid_argument("linear_argmax: theta = 0");
          return scaled(theta, 1.0 / n);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          const double n = std::sqrt(sp.a.quad_form(theta));
          if (n == 0.0) throw std::invalid_argument("linear_argmax: theta = 0");
          return add(sp.center, scaled(sp.a.apply(theta), std::sqrt(sp.level) / n));
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          // Hoelder: the maximizer has |x_i| proportional to |theta_i|^{q-1},
          // q the conjugate exponent.
          const double q = sp.p / (sp.p - 1.0);
          double qn = 0.0;
          for (double v : theta) qn += std::pow(std::abs(v), q);
          if (qn == 0.0) throw std::invalid_argument("linear_argmax: theta = 0");
          qn = std::pow(qn, 1.0 / q);
          Vec x(theta.size());
          for (std::size_t i = 0; i < theta.size(); ++i) {
            const double mag = std::pow(std::abs(theta[i]) / qn, q - 1.0);
            x[i] = sp.radius * (theta[i] < 0.0 ? -mag : mag);
          }
          return x;
        } else {
          if (std::all_of(theta.begin(), theta.end(), [](double v) { return v == 0.0; }))
            throw std::invalid_argument("linear_argmax: theta = 0");
          std::size_t best = 0;
          double best_val = dot(sp.points[0], theta);
          for (std::size_t i = 1; i < sp.points.size(); ++i) {
            const double v = dot(sp.points[i], theta);
            if (v > best_val) {
              best_val = v;
              best = i;
            }
          }
          return sp.points[best];
        }
      },
      space.value());
}

double linear_opt_value(const ActionSpace& space, const Vec& theta) {
  return dot(linear_argmax(space, theta), theta);
}

bool eps_optimal_contains(const ActionSpace& space, const Vec& theta, double eps,
                          const Vec& x) {
  if (eps < 0.0) throw std::invalid_argument("eps_optimal_contains: eps < 0");
  if (x.size() != space.dim())
    throw std::invalid_argument("eps_optimal_contains: x dimension mismatch");

  const bool on_space = std::visit(
      [&](const auto& sp) -> bool {
        using T = std::decay_t<decltype(sp)>;
        if constexpr (std::is_same_v<T, UnitSphere>) {
          return std::abs(norm2(x) - 1.0) <= kMembershipTol;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return std::abs(ellipsoid_constraint(sp, x) - sp.level) <= kMembershipTol;
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          return pnorm(x, sp.p) <= sp.radius + kMembershipTol;
        } else {
          for (const Vec& pt : sp.points)
            if (norm2(sub(x, pt)) <= kMembershipTol) return true;
          return false;
        }
      },
      space.value());
  if (!on_space)
    throw std::invalid_argument("eps_optimal_contains: x violates the space constraint");

  const double opt = linear_opt_value(space, theta);
  // small slack so the argmax itself passes with eps = 0
  return dot(x, theta) >= opt - eps - 1e-9 * (1.0 + std::abs(opt));
}

namespace {

// Best theta in the confidence ellipsoid for a fixed action.
Vec theta_step(const Vec& x, const Vec& center, const SymMatrix& shape_inv,
               double radius) {
  const Vec g = shape_inv.apply(x);
  const double dual = std::sqrt(dot(x, g));
  if (dual == 0.0) return center;
  return add(center, scaled(g, radius / dual));
}

Vec ucb_alternating(const ActionSpace& space, const Vec& center,
                    const SymMatrix& shape, double radius) {
  const std::size_t d = space.dim();
  const SymMatrix shape_inv = sym_inverse(shape);

  // Deterministic restarts: +-center direction, e1, one sampled surface point
  // from a fixed stream. Seeds are actions; each run alternates exact best
  // responses until the value stalls.
  std::vector<Vec> x_seeds;
  if (norm2(center) > 0.0) {
    x_seeds.push_back(linear_argmax(space, center));
    x_seeds.push_back(linear_argmax(space, scaled(center, -1.0)));
  }
  x_seeds.push_back(linear_argmax(space, basis_vector(d, 0)));
  Rng seed_rng(0x5eedu);
  x_seeds.push_back(sample_uniform(space, seed_rng));

  Vec best_x;
  double best_val = -std::numeric_limits<double>::infinity();
  for (const Vec& seed : x_seeds) {
    Vec x = seed;
    Vec th = theta_step(x, center, shape_inv, radius);
    double val = dot(th, x);
    for (int it = 0; it < 200; ++it) {
      if (norm2(th) == 0.0) break;
      x = linear_argmax(space, th);
      th = theta_step(x, center, shape_inv, radius);
      const double next = dot(th, x);
      if (next - val <= 1e-8 * (1.0 + std::abs(next))) {
        val = next;
        break;
      }
      val = next;
    }
    if (val > best_val + 1e-12) {
      best_val = val;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace

Vec ucb_argmax(const ActionSpace& space, const Vec& center, const SymMatrix& shape,
               double radius) {
  const std::size_t d = space.dim();
  if (center.size() != d || shape.dim() != d)
    throw std::invalid_argument("ucb_argmax: dimension mismatch");
  if (radius < 0.0) throw std::invalid_argument("ucb_argmax: radius < 0");

  if (const auto* fs = std::get_if<FiniteSet>(&space.value())) {
    const SymMatrix shape_inv = sym_inverse(shape);
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fs->points.size(); ++i) {
      const Vec& x = fs->points[i];
      const double v = dot(x, center) + radius * std::sqrt(shape_inv.quad_form(x));
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    return fs->points[best];
  }

  // Degenerate confidence set at the origin: no preferred direction, take e1.
  const Vec direction_fallback = basis_vector(d, 0);
  if (radius == 0.0) {
    return linear_argmax(space, norm2(center) > 0.0 ? center : direction_fallback);
  }

  if (std::holds_alternative<UnitSphere>(space.value())) {
    const TrustRegionResult tr = trust_region_max_norm(center, shape, radius);
    if (tr.max_norm == 0.0) return direction_fallback;
    return scaled(tr.maximizer, 1.0 / tr.max_norm);
  }

  if (const auto* el = std::get_if<Ellipsoid>(&space.value())) {
    if (norm2(el->center) == 0.0) {
      // Whitening phi = A^{1/2} theta turns sup_x <x,theta> = sqrt(level) ||theta||_A
      // into a plain norm, so the inner-outer maximization is again a trust region
      // problem.
      const SymMatrix a_half = sym_power(el->a, 0.5);
      const SymMatrix a_inv_half = sym_power(el->a, -0.5);
      const SymMatrix white_shape = sym_conjugate(shape, a_inv_half);
      const TrustRegionResult tr =
          trust_region_max_norm(a_half.apply(center), white_shape, radius);
      if (tr.max_norm == 0.0) return linear_argmax(space, direction_fallback);
      return linear_argmax(space, a_inv_half.apply(tr.maximizer));
    }
  }

  return ucb_alternating(space, center, shape, radius);
}

Vec sample_uniform(const ActionSpace& space, Rng& rng) {
  return std::visit(
      [&](const auto& sp) -> Vec {
        using T = std::decay_t<decltype(sp)>;
        if constexpr (std::is_same_v<T, UnitSphere>) {
          for (;;) {
            Vec g = rng.gaussian_vector(sp.dim);
            const double n = norm2(g);
            if (n > 0.0) return scaled(g, 1.0 / n);
          }
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          ActionSpace sphere{UnitSphere{sp.a.dim()}};
          const Vec y = sample_uniform(sphere, rng);
          return add(sp.center,
                     scaled(sym_power(sp.a, 0.5).apply(y), std::sqrt(sp.level)));
        } else if constexpr (std::is_same_v<T, PNormBall>) {
          // generalized-normal coordinates |g| = W^{1/p}, W ~ Gamma(1/p, 1),
          // then rescale onto the p-sphere
          for (;;) {
            Vec g(sp.dim);
            for (double& v : g) {
              const double mag = std::pow(rng.gamma(1.0 / sp.p), 1.0 / sp.p);
              v = rng.uniform01() < 0.5 ? -mag : mag;
            }
            const double n = pnorm(g, sp.p);
            if (n > 0.0) return scaled(g, sp.radius / n);
          }
        } else {
          return sp.points[rng.uniform_index(sp.points.size())];
        }
      },
      space.value());
}

Ellipsoid lch_local_ellipsoid(const Vec& x_star, const Vec& grad,
                              const SymMatrix& quad) {
  const std::size_t d = quad.dim();
  if (x_star.size() != d || grad.size() != d)
    throw std::invalid_argument("lch_local_ellipsoid: dimension mismatch");
  if (norm2(grad) == 0.0)
    throw std::invalid_argument("lch_local_ellipsoid: zero gradient");

  const SymMatrix quad_inv = sym_inverse(quad);
  const double denom = quad_inv.quad_form(grad);
  if (denom <= 0.0)
    throw std::invalid_argument("lch_local_ellipsoid: grad^T quad^{-1} grad <= 0");

  Ellipsoid out;
  out.center = sub(x_star, scaled(quad_inv.apply(grad), 0.5));
  out.a = quad_inv;
  out.a.scale(denom / 4.0);  // M = (denom/4) quad^{-1}, so M^{-1} = 4 quad / denom
  out.level = 1.0;

  SymMatrix m_inv = quad;
  m_inv.scale(4.0 / denom);
  const double residual = std::abs(m_inv.quad_form(sub(x_star, out.center)) - 1.0);
  if (!(residual <= 1e-6))
    throw std::invalid_argument(
        "lch_local_ellipsoid: x_star not on the fitted ellipsoid (inconsistent inputs)");
  return out;
}

double perturbation_alpha_sphere(double eps, double alignment) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("perturbation_alpha_sphere: eps outside (0,1)");
  if (!(alignment >= 0.0 && alignment < 1.0))
    throw std::invalid_argument("perturbation_alpha_sphere: alignment outside [0,1)");
  const double psi = std::acos(1.0 - eps);
  const double delta = std::asin(alignment);
  if (delta + 2.0 * psi >= M_PI / 2.0)
    throw std::invalid_argument("perturbation_alpha_sphere: delta + 2 psi >= pi/2");
  return std::sin(2.0 * psi) / std::cos(delta + 2.0 * psi);
}

bool check_disjoint_eps_sets(const ActionSpace& space, const Vec& theta,
                             const Vec& theta_prime, double eps, int n_samples,
                             Rng& rng) {
  if (eps < 0.0) throw std::invalid_argument("check_disjoint_eps_sets: eps < 0");

  if (std::holds_alternative<UnitSphere>(space.value())) {
    const double n1 = norm2(theta);
    const double n2 = norm2(theta_prime);
    if (n1 == 0.0 || n2 == 0.0) return false;  // cap degenerates to the whole sphere
    const double t1 = 1.0 - eps / n1;
    const double t2 = 1.0 - eps / n2;
    if (t1 <= -1.0 || t2 <= -1.0) return false;
    const double half1 = std::acos(std::clamp(t1, -1.0, 1.0));
    const double half2 = std::acos(std::clamp(t2, -1.0, 1.0));
    const double angle =
        std::acos(std::clamp(dot(theta, theta_prime) / (n1 * n2), -1.0, 1.0));
    return angle > half1 + half2;
  }

  if (n_samples < 1000)
    throw std::invalid_argument("check_disjoint_eps_sets: n_samples < 1000");
  const double opt1 = linear_opt_value(space, theta);
  const double opt2 = linear_opt_value(space, theta_prime);
  for (int i = 0; i < n_samples; ++i) {
    const Vec x = sample_uniform(space, rng);
    const bool in1 = dot(x, theta) >= opt1 - eps - 1e-9 * (1.0 + std::abs(opt1));
    const bool in2 = dot(x, theta_prime) >= opt2 - eps - 1e-9 * (1.0 + std::abs(opt2));
    if (in1 && in2) return false;
  }
  return true;  // no witness found; one-sided
}

}  // namespace banditlab
