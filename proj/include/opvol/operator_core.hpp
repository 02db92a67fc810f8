#pragma once

// Truncated Hilbert space H = R^d and the Hilbert-Schmidt space L_HS(H),
// represented against a fixed orthonormal basis (e_j). Operators are dense
// d x d matrices with entry(j,k) = (T e_k, e_j).

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace opvol {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest asymmetry max|T(j,k) - T(k,j)| still certified as self-adjoint.
inline constexpr double kSelfAdjointTolerance = 1e-12;

class HilbertVector {
 public:
  /// Throws ConfigError on an empty or non-finite coefficient vector.
  explicit HilbertVector(Vector coeffs);

  static HilbertVector zero(int d);
  /// Basis vector e_j, 1-based.
  static HilbertVector basis(int d, int j);

  int dim() const noexcept { return static_cast<int>(coeffs_.size()); }
  const Vector& coeffs() const noexcept { return coeffs_; }
  double operator[](int j) const { return coeffs_[j]; }

  double norm() const { return coeffs_.norm(); }
  double squared_norm() const { return coeffs_.squaredNorm(); }
  double dot(const HilbertVector& other) const;

  friend HilbertVector operator+(const HilbertVector& a, const HilbertVector& b);
  friend HilbertVector operator-(const HilbertVector& a, const HilbertVector& b);
  friend HilbertVector operator*(double s, const HilbertVector& a);
  friend bool operator==(const HilbertVector& a, const HilbertVector& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  Vector coeffs_;
};

class HSOperator {
 public:
  /// Throws ConfigError on a non-square, empty or non-finite matrix.
  explicit HSOperator(Matrix entries);

  static HSOperator zero(int d);
  static HSOperator identity(int d);
  static HSOperator diagonal(std::span<const double> diag);
  static HSOperator diagonal(const Vector& diag);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const noexcept { return entries_; }
  /// entry(j,k) = (T e_k, e_j) with 1-based indices.
  double entry(int j, int k) const { return entries_(j - 1, k - 1); }

  bool is_self_adjoint() const noexcept { return self_adjoint_; }
  HSOperator adjoint() const;

  HilbertVector apply(const HilbertVector& h) const;
  /// <S, T>_HS = sum_k (S e_k, T e_k).
  double inner(const HSOperator& other) const;

  friend HSOperator operator+(const HSOperator& a, const HSOperator& b);
  friend HSOperator operator-(const HSOperator& a, const HSOperator& b);
  friend HSOperator operator*(double s, const HSOperator& a);
  /// Operator composition.
  friend HSOperator operator*(const HSOperator& a, const HSOperator& b);
  friend bool operator==(const HSOperator& a, const HSOperator& b) {
    return a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
  bool self_adjoint_ = false;
};

enum class NormMode { hs, op, trace };

/// Index set J of tensor-basis pairs (j,k), 1-based, with orthogonal
/// projection Pi onto span{e_j (x) e_k : (j,k) in J}.
class ProjectionSpec {
 public:
  /// J_n = {(j,k) : j + k <= n}.
  static ProjectionSpec level(int d, int n);
  /// J = {(j,k) : j <= n and k <= n}.
  static ProjectionSpec square(int d, int n);
  static ProjectionSpec full(int d);
  static ProjectionSpec from_pairs(int d, std::span<const std::pair<int, int>> pairs);

  int dim() const noexcept { return static_cast<int>(mask_.rows()); }
  bool contains(int j, int k) const { return mask_(j - 1, k - 1) != 0.0; }
  bool is_full() const;
  bool is_subset_of(const ProjectionSpec& other) const;
  std::size_t size() const;
  /// 0/1 mask, entry (j-1,k-1) is 1 iff (j,k) is in J.
  const Matrix& mask() const noexcept { return mask_; }

 private:
  explicit ProjectionSpec(Matrix mask) : mask_(std::move(mask)) {}
  Matrix mask_;
};

/// f (x) g, the rank-one operator h -> (g,h) f.
HSOperator tensor_product(const HilbertVector& f, const HilbertVector& g);

/// Singular values in decreasing order.
Vector singular_values(const HSOperator& t);
double norm(const HSOperator& t, NormMode mode);

/// Clamp threshold for eigenvalues of a PSD operator: 1e-9 (1 + ||T||_op).
double psd_tolerance(const HSOperator& t);

/// Unique PSD square root. Eigenvalues in [-tol, 0) are clamped to zero;
/// throws NotPositiveSemidefinite below that and ConfigError when T is not
/// self-adjoint.
HSOperator psd_sqrt(const HSOperator& t);

/// |T| = (T* T)^{1/2}.
HSOperator operator_modulus(const HSOperator& t);

/// exp(tA) for a square matrix, by scaling and squaring of the Taylor series.
Matrix expm(const Matrix& a, double t = 1.0);
HSOperator matrix_exp(const HSOperator& t_op, double t);

HSOperator project_operator(const HSOperator& t, const ProjectionSpec& p);
/// Zeroes coefficients beyond index n (1 <= n <= d).
HilbertVector project_vector(const HilbertVector& f, int n);

/// Smallest eigenvalue of a self-adjoint operator.
double min_eigenvalue(const HSOperator& t);

}  // namespace opvol
