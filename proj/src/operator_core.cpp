#include "opvol/operator_core.hpp"

#include "opvol/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opvol {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ConfigError(os.str());
  }
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

// ---------------------------------------------------------------------------
// HilbertVector

HilbertVector::HilbertVector(Vector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) throw ConfigError("HilbertVector: dimension must be >= 1");
  if (!coeffs_.allFinite()) throw ConfigError("HilbertVector: non-finite coefficient");
}

HilbertVector HilbertVector::zero(int d) { return HilbertVector(Vector::Zero(d)); }

HilbertVector HilbertVector::basis(int d, int j) {
  if (j < 1 || j > d) throw ConfigError("HilbertVector::basis: index out of range");
  Vector v = Vector::Zero(d);
  v[j - 1] = 1.0;
  return HilbertVector(std::move(v));
}

double HilbertVector::dot(const HilbertVector& other) const {
  require_same_dim(dim(), other.dim(), "HilbertVector::dot");
  return coeffs_.dot(other.coeffs_);
}

HilbertVector operator+(const HilbertVector& a, const HilbertVector& b) {
  require_same_dim(a.dim(), b.dim(), "HilbertVector +");
  return HilbertVector(a.coeffs_ + b.coeffs_);
}

HilbertVector operator-(const HilbertVector& a, const HilbertVector& b) {
  require_same_dim(a.dim(), b.dim(), "HilbertVector -");
  return HilbertVector(a.coeffs_ - b.coeffs_);
}

HilbertVector operator*(double s, const HilbertVector& a) { return HilbertVector(s * a.coeffs_); }

// ---------------------------------------------------------------------------
// HSOperator

HSOperator::HSOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw ConfigError("HSOperator: matrix must be square and non-empty");
  if (!entries_.allFinite()) throw ConfigError("HSOperator: non-finite entry");
  self_adjoint_ = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff() <= kSelfAdjointTolerance;
}

HSOperator HSOperator::zero(int d) { return HSOperator(Matrix::Zero(d, d)); }
HSOperator HSOperator::identity(int d) { return HSOperator(Matrix::Identity(d, d)); }

HSOperator HSOperator::diagonal(std::span<const double> diag) {
  Vector v(static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) v[static_cast<Eigen::Index>(i)] = diag[i];
  return diagonal(v);
}

HSOperator HSOperator::diagonal(const Vector& diag) { return HSOperator(Matrix(diag.asDiagonal())); }

HSOperator HSOperator::adjoint() const { return HSOperator(entries_.transpose()); }

HilbertVector HSOperator::apply(const HilbertVector& h) const {
  require_same_dim(dim(), h.dim(), "HSOperator::apply");
  return HilbertVector(entries_ * h.coeffs());
}

double HSOperator::inner(const HSOperator& other) const {
  require_same_dim(dim(), other.dim(), "HSOperator::inner");
  return entries_.cwiseProduct(other.entries_).sum();
}

HSOperator operator+(const HSOperator& a, const HSOperator& b) {
  require_same_dim(a.dim(), b.dim(), "HSOperator +");
  return HSOperator(a.entries_ + b.entries_);
}

HSOperator operator-(const HSOperator& a, const HSOperator& b) {
  require_same_dim(a.dim(), b.dim(), "HSOperator -");
  return HSOperator(a.entries_ - b.entries_);
}

HSOperator operator*(double s, const HSOperator& a) { return HSOperator(s * a.entries_); }

HSOperator operator*(const HSOperator& a, const HSOperator& b) {
  require_same_dim(a.dim(), b.dim(), "HSOperator *");
  return HSOperator(a.entries_ * b.entries_);
}

// ---------------------------------------------------------------------------
// ProjectionSpec

ProjectionSpec ProjectionSpec::level(int d, int n) {
  if (d < 1) throw ConfigError("ProjectionSpec::level: dimension must be >= 1");
  if (n < 0) throw ConfigError("ProjectionSpec::level: level must be >= 0");
  Matrix mask = Matrix::Zero(d, d);
  for (int j = 1; j <= d; ++j)
    for (int k = 1; k <= d; ++k)
      if (j + k <= n) mask(j - 1, k - 1) = 1.0;
  return ProjectionSpec(std::move(mask));
}

ProjectionSpec ProjectionSpec::square(int d, int n) {
  if (d < 1) throw ConfigError("ProjectionSpec::square: dimension must be >= 1");
  if (n < 0) throw ConfigError("ProjectionSpec::square: level must be >= 0");
  Matrix mask = Matrix::Zero(d, d);
  const int m = std::min(n, d);
  mask.topLeftCorner(m, m).setOnes();
  return ProjectionSpec(std::move(mask));
}

ProjectionSpec ProjectionSpec::full(int d) {
  if (d < 1) throw ConfigError("ProjectionSpec::full: dimension must be >= 1");
  return ProjectionSpec(Matrix::Ones(d, d));
}

ProjectionSpec ProjectionSpec::from_pairs(int d, std::span<const std::pair<int, int>> pairs) {
  if (d < 1) throw ConfigError("ProjectionSpec::from_pairs: dimension must be >= 1");
  Matrix mask = Matrix::Zero(d, d);
  for (const auto& [j, k] : pairs) {
    if (j < 1 || j > d || k < 1 || k > d)
      throw ConfigError("ProjectionSpec::from_pairs: index pair outside {1..d}^2");
    mask(j - 1, k - 1) = 1.0;
  }
  return ProjectionSpec(std::move(mask));
}

bool ProjectionSpec::is_full() const { return (mask_.array() != 0.0).all(); }

bool ProjectionSpec::is_subset_of(const ProjectionSpec& other) const {
  if (dim() != other.dim()) return false;
  return ((mask_.array() == 0.0) || (other.mask_.array() != 0.0)).all();
}

std::size_t ProjectionSpec::size() const {
  return static_cast<std::size_t>((mask_.array() != 0.0).count());
}

// ---------------------------------------------------------------------------
// Operations

HSOperator tensor_product(const HilbertVector& f, const HilbertVector& g) {
  require_same_dim(f.dim(), g.dim(), "tensor_product");
  return HSOperator(f.coeffs() * g.coeffs().transpose());
}

Vector singular_values(const HSOperator& t) {
  Vector s;
  if (t.is_self_adjoint()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(t.matrix()), Eigen::EigenvaluesOnly);
    s = es.eigenvalues().cwiseAbs();
  } else {
    Eigen::JacobiSVD<Matrix> svd(t.matrix());
    s = svd.singularValues();
  }
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

double norm(const HSOperator& t, NormMode mode) {
  switch (mode) {
    case NormMode::hs:
      return t.matrix().norm();
    case NormMode::op:
      return singular_values(t)[0];
    case NormMode::trace:
      return singular_values(t).sum();
  }
  throw InternalError("norm: unknown mode");
}

double psd_tolerance(const HSOperator& t) { return 1e-9 * (1.0 + norm(t, NormMode::op)); }

double min_eigenvalue(const HSOperator& t) {
  if (!t.is_self_adjoint()) throw ConfigError("min_eigenvalue: operator is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(t.matrix()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

HSOperator psd_sqrt(const HSOperator& t) {
  if (!t.is_self_adjoint()) throw ConfigError("psd_sqrt: operator is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(t.matrix()));
  const Vector& ev = es.eigenvalues();
  const double tol = 1e-9 * (1.0 + ev.cwiseAbs().maxCoeff());
  if (ev[0] < -tol) throw NotPositiveSemidefinite(ev[0], tol);
  const Vector root = ev.cwiseMax(0.0).cwiseSqrt();
  const Matrix& u = es.eigenvectors();
  return HSOperator(symmetrized(u * root.asDiagonal() * u.transpose()));
}

HSOperator operator_modulus(const HSOperator& t) {
  if (t.is_self_adjoint()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(t.matrix()));
    const Matrix& u = es.eigenvectors();
    return HSOperator(symmetrized(u * es.eigenvalues().cwiseAbs().asDiagonal() * u.transpose()));
  }
  Eigen::JacobiSVD<Matrix> svd(t.matrix(), Eigen::ComputeFullV);
  const Matrix& v = svd.matrixV();
  return HSOperator(symmetrized(v * svd.singularValues().asDiagonal() * v.transpose()));
}

Matrix expm(const Matrix& a, double t) {
  if (a.rows() != a.cols()) throw ConfigError("expm: matrix must be square");
  const Eigen::Index n = a.rows();
  if (t == 0.0) return Matrix::Identity(n, n);

  // Diagonal input: exponentiate entrywise.
  if ((a - Matrix(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0) {
    return Matrix((t * a.diagonal()).array().exp().matrix().asDiagonal());
  }

  Matrix scaled = t * a;
  const double nrm = scaled.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  scaled /= std::ldexp(1.0, squarings);

  // ||scaled||_1 <= 1/2, so the tail after term m is below 2 * 0.5^m / m!.
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

HSOperator matrix_exp(const HSOperator& t_op, double t) { return HSOperator(expm(t_op.matrix(), t)); }

HSOperator project_operator(const HSOperator& t, const ProjectionSpec& p) {
  require_same_dim(t.dim(), p.dim(), "project_operator");
  return HSOperator(t.matrix().cwiseProduct(p.mask()));
}

HilbertVector project_vector(const HilbertVector& f, int n) {
  if (n < 1 || n > f.dim()) {
    std::ostringstream os;
    os << "project_vector: level " << n << " outside [1, " << f.dim() << "]";
    throw ConfigError(os.str());
  }
  Vector c = f.coeffs();
  c.tail(f.dim() - n).setZero();
  return HilbertVector(std::move(c));
}

}  // namespace opvol
