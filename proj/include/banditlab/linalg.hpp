#pragma once

#include <cstddef>
#include <vector>

namespace banditlab {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
Vec scaled(const Vec& v, double s);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec basis_vector(std::size_t dim, std::size_t i);
bool all_finite(const Vec& v);

// Dense symmetric matrix, full row-major storage. set() writes both mirror
// entries so the invariant cannot drift; everything downstream (eigensolver,
// quadratic forms, rank-one updates) assumes exact symmetry.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(const Vec& d);
  // Validates symmetry of the given dense rows to 1e-9 and symmetrizes.
  static SymMatrix from_rows(const std::vector<Vec>& rows);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * dim_ + j] = v;
    data_[j * dim_ + i] = v;
  }

  void add_outer(const Vec& v, double scale = 1.0);  // += scale * v v^T
  void add_scaled_identity(double s);
  void scale(double s);
  Vec apply(const Vec& x) const;
  double quad_form(const Vec& x) const;  // x^T M x
  double frobenius_norm() const;
  bool finite() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

SymMatrix add(const SymMatrix& a, const SymMatrix& b);

// eigenvalues descending; eigenvectors[k] pairs with eigenvalues[k] and has its
// first component of magnitude > 1e-12 made positive, so decompositions are
// reproducible across runs.
struct EigenDecomposition {
  Vec eigenvalues;
  std::vector<Vec> eigenvectors;
};

// Cyclic Jacobi, intended for the small dimensions used here (d <= ~50).
// Sweeps until the off-diagonal Frobenius mass falls below 1e-12 * ||M||_F.
EigenDecomposition eig_sym(const SymMatrix& m);

// M^p through the eigendecomposition; negative or fractional p require M
// positive definite.
SymMatrix sym_power(const SymMatrix& m, double power);
SymMatrix sym_inverse(const SymMatrix& m);
SymMatrix sym_conjugate(const SymMatrix& s, const SymMatrix& t);  // t s t

struct WeylReport {
  bool holds;
  Vec slack_per_index;  // lambda_i(A) + lambda_max(H) - lambda_i(A+H)
};
WeylReport weyl_check(const SymMatrix& a, const SymMatrix& h);

// Checks the sin-theta bound for the top eigenvector u1(A) against the trailing
// eigenvectors of A+H: alignment = ||u1(A)^T [u2..ud](A+H)||_2 <= ||H||_2 / delta,
// with delta = lambda_1(A) - lambda_2(A+H). delta <= 0 is an error.
struct DavisKahanReport {
  double bound;
  double alignment;
  bool holds;
};
DavisKahanReport davis_kahan_check(const SymMatrix& a, const SymMatrix& h);

// d * exp(-t^2 / (8 sigma_sq)): deviation tail for a martingale of matrices
// with per-step spectral norm bounded by sigma (Azuma with absolute constant 8).
double matrix_azuma_tail(double t, double sigma_sq, int d);

// Maximizes ||theta||_2 over the ellipsoid {theta : (theta-center)^T shape
// (theta-center) <= radius^2}. Reduction to the eigenbasis of shape plus a
// secular-equation bisection; the hard case (center orthogonal to the bottom
// eigenspace) puts the leftover budget on the first bottom coordinate.
struct TrustRegionResult {
  Vec maximizer;
  double max_norm;
};
TrustRegionResult trust_region_max_norm(const Vec& center, const SymMatrix& shape,
                                        double radius);

}  // namespace banditlab
