#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "oscalg/errors.hpp"

namespace oscalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Largest operator dimension a tensor product may produce by default.
inline constexpr int kMaxOperatorDim = 4096;

// Dense complex square matrix with an optional record of the mode
// dimensions whose tensor product spans its basis. An empty layout
// means "raw matrix, no mode structure".
class Operator {
 public:
  Operator() = default;

  explicit Operator(Matrix entries, std::vector<int> layout = {})
      : mat_(std::move(entries)), layout_(std::move(layout)) {
    if (mat_.rows() < 1 || mat_.rows() != mat_.cols())
      throw ShapeError("Operator entries must be a nonempty square matrix");
    if (!layout_.empty()) {
      long prod = 1;
      for (int d : layout_) {
        if (d < 1) throw ShapeError("layout dimensions must be positive");
        prod *= d;
      }
      if (prod != mat_.rows())
        throw ShapeError("product of layout dimensions must equal dim");
    }
  }

  static Operator identity(int dim, std::vector<int> layout = {}) {
    return Operator(Matrix::Identity(dim, dim), std::move(layout));
  }
  static Operator zero(int dim, std::vector<int> layout = {}) {
    return Operator(Matrix::Zero(dim, dim), std::move(layout));
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }
  const std::vector<int>& layout() const { return layout_; }

  Complex operator()(int i, int j) const { return mat_(i, j); }

  Operator adjoint() const { return Operator(mat_.adjoint(), layout_); }
  Operator with_layout(std::vector<int> layout) const {
    return Operator(mat_, std::move(layout));
  }

  double max_norm() const { return mat_.cwiseAbs().maxCoeff(); }

  // max-norm of A - A^dagger relative to max-norm of A
  bool is_hermitian(double rel_tol = 1e-10) const {
    const double scale = std::max(max_norm(), 1e-300);
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
  }

  friend Operator operator*(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "operator product");
    return Operator(a.mat_ * b.mat_, a.layout_);
  }
  friend Operator operator+(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "operator sum");
    return Operator(a.mat_ + b.mat_, a.layout_);
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "operator difference");
    return Operator(a.mat_ - b.mat_, a.layout_);
  }
  friend Operator operator*(Complex scale, const Operator& a) {
    return Operator(scale * a.mat_, a.layout_);
  }
  friend Operator operator*(double scale, const Operator& a) {
    return Operator(scale * a.mat_, a.layout_);
  }

 private:
  static void require_same_dim(const Operator& a, const Operator& b,
                               const char* where) {
    if (a.dim() != b.dim())
      throw ShapeError(std::string(where) + ": dimension mismatch");
  }

  Matrix mat_;
  std::vector<int> layout_;
};

// Hermitian eigendecomposition with deterministic ordering: eigenvalues
// ascending, each eigenvector's first nonzero component made real-positive.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;  // orthonormal columns, k-th column pairs with eigenvalues[k]
};

enum class BracketKind { kCommutator, kAnticommutator };

// Kronecker product; layout is the concatenation of the input layouts
// (inputs with empty layout contribute their bare dimension).
Operator tensor_product(const Operator& a, const Operator& b,
                        int max_dim = kMaxOperatorDim);

// AB - BA or AB + BA
Operator bracket(const Operator& a, const Operator& b, BracketKind kind);

EigenSystem hermitian_eigensystem(const Operator& a);

// Sum of f(lambda_k) P_k over the eigenprojectors of a Hermitian operator.
// Eigenvalues within 1e-12 of zero are treated as exact zeros; where f(0)
// is not finite the kernel_value is substituted instead (pseudoinverse
// convention, needed for negative powers of singular number operators).
// A non-finite f value anywhere else is a domain error.
Operator spectral_function(const Operator& a,
                           const std::function<double(double)>& f,
                           double kernel_value = 0.0);

// Tr exp(-beta H) for Hermitian H, via the eigenvalues.
double trace_exp(const Operator& h, double beta);

// Compresses an operator to the range of a Hermitian idempotent projector:
// B^dag A B with the columns of B an orthonormal basis of range(P).
// Diagonal 0/1 projectors take an exact fast path (basis columns are
// selected, not solved for).
Operator restrict_to_range(const Operator& a, const Operator& projector);

}  // namespace oscalg
