#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "banditlab/linalg.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

struct UnitSphere {
  std::size_t dim;
};

// {x : (x - center)^T a^{-1} (x - center) = level}
struct Ellipsoid {
  SymMatrix a;
  double level = 1.0;
  Vec center;
};

// Sub-level set {x : ||x||_p <= radius}, p >= 2. Optimizers land on the surface.
struct PNormBall {
  std::size_t dim;
  double p;
  double radius = 1.0;
};

struct FiniteSet {
  std::vector<Vec> points;
};

class ActionSpace {
 public:
  explicit ActionSpace(UnitSphere s);
  explicit ActionSpace(Ellipsoid e);
  explicit ActionSpace(PNormBall b);
  explicit ActionSpace(FiniteSet f);

  std::size_t dim() const { return dim_; }
  const std::variant<UnitSphere, Ellipsoid, PNormBall, FiniteSet>& value() const {
    return v_;
  }

 private:
  std::variant<UnitSphere, Ellipsoid, PNormBall, FiniteSet> v_;
  std::size_t dim_;
};

// Closed-form best response to a known parameter. theta = 0 has no unique
// optimum and is rejected. FiniteSet ties go to the lowest index.
Vec linear_argmax(const ActionSpace& space, const Vec& theta);
double linear_opt_value(const ActionSpace& space, const Vec& theta);

// Membership in OPT_eps(theta) = {x in space : <x,theta> >= sup - eps}. x must
// satisfy the space constraint to 1e-8.
bool eps_optimal_contains(const ActionSpace& space, const Vec& theta, double eps,
                          const Vec& x);

// Joint maximization of <x, theta> over x in the space and theta in the
// confidence ellipsoid {||theta - center||_shape <= radius}. Exact for
// UnitSphere and origin-centered Ellipsoid via trust_region_max_norm; FiniteSet
// scores each arm; the rest run alternating maximization from deterministic
// restarts to 1e-8 stationarity.
Vec ucb_argmax(const ActionSpace& space, const Vec& center, const SymMatrix& shape,
               double radius);

// UnitSphere/Ellipsoid/PNormBall draw surface points (the ellipsoid pushforward
// is not uniform in surface measure); FiniteSet draws a uniform index.
Vec sample_uniform(const ActionSpace& space, Rng& rng);

// Local ellipsoid around a curved boundary point x*, from the gradient and the
// quadratic coefficient quad = (1/2) Hessian of the boundary defining function.
// Completing the square in f(x*) + <g, x-x*> + (x-x*)^T quad (x-x*) = f(x*) gives
//   center a = x* - (1/2) quad^{-1} g,
//   M^{-1}   = 4 quad / (g^T quad^{-1} g),
// and {(x-a)^T M^{-1} (x-a) = 1} passes through x* by construction; a residual
// above 1e-6 means the inputs were inconsistent and is an error.
Ellipsoid lch_local_ellipsoid(const Vec& x_star, const Vec& grad, const SymMatrix& quad);

// Perturbation size alpha = sin(2 psi) / cos(delta + 2 psi) with
// psi = arccos(1 - eps) and delta = arcsin(alignment): moving a unit parameter
// by alpha along a direction at most `alignment`-aligned with it rotates the
// optimum by at least 2 psi, separating the eps-caps. Requires
// delta + 2 psi < pi/2.
double perturbation_alpha_sphere(double eps, double alignment);

// Disjointness of OPT_eps(theta) and OPT_eps(theta'). Exact angular test on the
// sphere; Monte Carlo witness search elsewhere (returns false on any witness in
// both sets, so "true" is one-sided). n_samples >= 1000 for the sampled path.
bool check_disjoint_eps_sets(const ActionSpace& space, const Vec& theta,
                             const Vec& theta_prime, double eps, int n_samples,
                             Rng& rng);

}  // namespace banditlab
