#include "oscalg/opcore.hpp"

#include <cmath>

namespace oscalg {

namespace {

// Eigenvalues this close to zero are treated as members of the kernel.
constexpr double kKernelTol = 1e-12;

void require_hermitian(const Operator& a, const char* where) {
  if (!a.is_hermitian())
    throw DomainError(std::string(where) + ": operator is not Hermitian");
}

}  // namespace

Operator tensor_product(const Operator& a, const Operator& b, int max_dim) {
  const long dim = static_cast<long>(a.dim()) * b.dim();
  if (dim > max_dim)
    throw SizeError("tensor_product: result dimension " + std::to_string(dim) +
                    " exceeds maximum " + std::to_string(max_dim));

  const int da = a.dim(), db = b.dim();
  Matrix out(dim, dim);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a(i, j) * b.matrix();

  std::vector<int> layout = a.layout().empty() ? std::vector<int>{da} : a.layout();
  if (b.layout().empty())
    layout.push_back(db);
  else
    layout.insert(layout.end(), b.layout().begin(), b.layout().end());
  return Operator(std::move(out), std::move(layout));
}

Operator bracket(const Operator& a, const Operator& b, BracketKind kind) {
  if (a.dim() != b.dim()) throw ShapeError("bracket: dimension mismatch");
  const Matrix ab = a.matrix() * b.matrix();
  const Matrix ba = b.matrix() * a.matrix();
  return Operator(kind == BracketKind::kCommutator ? Matrix(ab - ba)
                                                   : Matrix(ab + ba),
                  a.layout());
}

EigenSystem hermitian_eigensystem(const Operator& a) {
  require_hermitian(a, "hermitian_eigensystem");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success)
    throw DomainError("hermitian_eigensystem: eigensolver failed to converge");

  EigenSystem sys{solver.eigenvalues(), solver.eigenvectors()};

  // Phase fixing: rotate each column so its first nonzero component is
  // real-positive. Keeps repeated runs and golden files byte-identical.
  const int n = a.dim();
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const Complex v = sys.eigenvectors(i, k);
      if (std::abs(v) > 1e-12) {
        sys.eigenvectors.col(k) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }
  return sys;
}

Operator spectral_function(const Operator& a,
                           const std::function<double(double)>& f,
                           double kernel_value) {
  const EigenSystem sys = hermitian_eigensystem(a);
  const int n = a.dim();

  Eigen::VectorXd mapped(n);
  for (int k = 0; k < n; ++k) {
    const double lambda = sys.eigenvalues[k];
    if (std::abs(lambda) <= kKernelTol) {
      const double at_zero = f(0.0);
      mapped[k] = std::isfinite(at_zero) ? at_zero : kernel_value;
    } else {
      const double value = f(lambda);
      if (!std::isfinite(value))
        throw DomainError("spectral_function: f is not finite at eigenvalue " +
                          std::to_string(lambda));
      mapped[k] = value;
    }
  }

  Matrix out = sys.eigenvectors * mapped.asDiagonal() *
               sys.eigenvectors.adjoint();
  return Operator(std::move(out), a.layout());
}

double trace_exp(const Operator& h, double beta) {
  if (beta < 0.0) throw DomainError("trace_exp: beta must be nonnegative");
  require_hermitian(h, "trace_exp");

  const EigenSystem sys = hermitian_eigensystem(h);
  double sum = 0.0;
  for (int k = 0; k < h.dim(); ++k) sum += std::exp(-beta * sys.eigenvalues[k]);
  return sum;
}

namespace {

// Detects a projector that is exactly diagonal with 0/1 entries and
// returns the selected basis indices.
bool diagonal_selection(const Operator& p, std::vector<int>& kept) {
  kept.clear();
  const Matrix& m = p.matrix();
  for (int i = 0; i < p.dim(); ++i) {
    for (int j = 0; j < p.dim(); ++j) {
      const Complex v = m(i, j);
      if (i == j) {
        if (v == Complex(1.0, 0.0)) {
          kept.push_back(i);
        } else if (v != Complex(0.0, 0.0)) {
          return false;
        }
      } else if (v != Complex(0.0, 0.0)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

Operator restrict_to_range(const Operator& a, const Operator& projector) {
  if (a.dim() != projector.dim())
    throw ShapeError("restrict_to_range: dimension mismatch");
  if (!projector.is_hermitian())
    throw DomainError("restrict_to_range: projector is not Hermitian");
  if ((projector * projector - projector).max_norm() > 1e-12)
    throw DomainError("restrict_to_range: projector is not idempotent");

  std::vector<int> kept;
  if (diagonal_selection(projector, kept)) {
    if (kept.empty())
      throw DomainError("restrict_to_range: projector has empty range");
    const int k = static_cast<int>(kept.size());
    Matrix out(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) out(i, j) = a(kept[i], kept[j]);
    return Operator(std::move(out));
  }

  const EigenSystem sys = hermitian_eigensystem(projector);
  int rank = 0;
  for (int i = 0; i < projector.dim(); ++i)
    if (sys.eigenvalues[i] > 0.5) ++rank;
  if (rank == 0)
    throw DomainError("restrict_to_range: projector has empty range");

  Matrix basis(projector.dim(), rank);
  int col = 0;
  for (int i = 0; i < projector.dim(); ++i)
    if (sys.eigenvalues[i] > 0.5) basis.col(col++) = sys.eigenvectors.col(i);
  return Operator(basis.adjoint() * a.matrix() * basis);
}

}  // namespace oscalg
