#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oscalg/fock.hpp"
#include "oscalg/opcore.hpp"

using namespace oscalg;

namespace {

// random matrices over a dyadic grid so products and sums stay exact
Matrix random_dyadic(int dim, std::mt19937& rng) {
  std::uniform_int_distribution<int> grid(-8, 8);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      m(i, j) = Complex(grid(rng) / 4.0, grid(rng) / 4.0);
  return m;
}

Operator random_hermitian(int dim, std::mt19937& rng) {
  const Matrix m = random_dyadic(dim, rng);
  return Operator(0.5 * (m + m.adjoint()));
}

}  // namespace

TEST_CASE("tensor product of identities", "[opcore]") {
  const Operator result =
      tensor_product(Operator::identity(2), Operator::identity(3));
  CHECK(result.dim() == 6);
  CHECK((result.matrix() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(result.layout() == std::vector<int>{2, 3});
}

TEST_CASE("tensor product dimension and layout arithmetic", "[opcore]") {
  std::mt19937 rng(7);
  const Operator a(random_dyadic(2, rng));
  const Operator b(random_dyadic(3, rng));
  const Operator ab = tensor_product(a, b);
  CHECK(ab.dim() == 6);
  CHECK(ab.layout() == std::vector<int>{2, 3});
  // entry ((i*dimB+k),(j*dimB+l)) = A(i,j) * B(k,l)
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          CHECK(ab(i * 3 + k, j * 3 + l) == a(i, j) * b(k, l));
}

TEST_CASE("tensor product of a truncated lowering operator with identity",
          "[opcore]") {
  const Operator a = boson_mode(2, 1.0).lower;
  const Operator lifted = tensor_product(a, Operator::identity(2));
  CHECK(lifted.dim() == 4);
  // nonzero entries only at (0,2) and (1,3), both equal 1
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Complex expected =
          ((i == 0 && j == 2) || (i == 1 && j == 3)) ? 1.0 : 0.0;
      CHECK(lifted(i, j) == expected);
    }
}

TEST_CASE("tensor product is associative with exact entries", "[opcore]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a(random_dyadic(2, rng));
    const Operator b(random_dyadic(3, rng));
    const Operator c(random_dyadic(2, rng));
    const Operator left = tensor_product(tensor_product(a, b), c);
    const Operator right = tensor_product(a, tensor_product(b, c));
    CHECK((left.matrix() - right.matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("tensor product enforces the dimension budget", "[opcore]") {
  const Operator big = Operator::identity(70);
  CHECK_THROWS_AS(tensor_product(big, big), SizeError);
  CHECK_NOTHROW(tensor_product(big, big, 4900));
}

TEST_CASE("bracket of an operator with itself vanishes", "[opcore]") {
  std::mt19937 rng(3);
  const Operator a(random_dyadic(4, rng));
  CHECK(bracket(a, a, BracketKind::kCommutator).max_norm() == 0.0);
}

TEST_CASE("fermionic pair anticommutes to the identity", "[opcore]") {
  const ModeOperators f = fermion_mode(1.0);
  const Operator anti = bracket(f.lower, f.raise, BracketKind::kAnticommutator);
  CHECK((anti.matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncated ladder commutator shows the edge defect", "[opcore]") {
  const ModeOperators mode = boson_mode(4, 1.0);
  const Operator comm = bracket(mode.lower, mode.raise, BracketKind::kCommutator);
  // diag(1, 1, 1, -3): canonical on the safe levels, -(D-1) at the edge
  Matrix expected = Matrix::Identity(4, 4);
  expected(3, 3) = -3.0;
  CHECK((comm.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("bracket symmetry properties", "[opcore]") {
  std::mt19937 rng(5);
  const Operator a(random_dyadic(4, rng));
  const Operator b(random_dyadic(4, rng));
  const Operator comm_ab = bracket(a, b, BracketKind::kCommutator);
  const Operator comm_ba = bracket(b, a, BracketKind::kCommutator);
  CHECK((comm_ab.matrix() + comm_ba.matrix()).cwiseAbs().maxCoeff() == 0.0);
  const Operator anti_ab = bracket(a, b, BracketKind::kAnticommutator);
  const Operator anti_ba = bracket(b, a, BracketKind::kAnticommutator);
  CHECK((anti_ab.matrix() - anti_ba.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bracket rejects mismatched dimensions", "[opcore]") {
  CHECK_THROWS_AS(bracket(Operator::identity(2), Operator::identity(3),
                          BracketKind::kCommutator),
                  ShapeError);
}

TEST_CASE("eigensystem of a permuted diagonal matrix", "[opcore]") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  const EigenSystem sys = hermitian_eigensystem(Operator(m));
  CHECK(sys.eigenvalues[0] == Catch::Approx(1.0).margin(1e-14));
  CHECK(sys.eigenvalues[1] == Catch::Approx(2.0).margin(1e-14));
  CHECK(sys.eigenvalues[2] == Catch::Approx(3.0).margin(1e-14));
}

TEST_CASE("fermion number operator has spectrum {0,1}", "[opcore]") {
  const EigenSystem sys = hermitian_eigensystem(fermion_mode(1.0).number);
  CHECK(sys.eigenvalues[0] == Catch::Approx(0.0).margin(1e-14));
  CHECK(sys.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("sigma1 spectrum is {-1,+1}", "[opcore]") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const EigenSystem sys = hermitian_eigensystem(Operator(m));
  CHECK(sys.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-12));
  CHECK(sys.eigenvalues[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("eigensystem invariants on random Hermitian matrices", "[opcore]") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Operator a = random_hermitian(6, rng);
    const EigenSystem sys = hermitian_eigensystem(a);
    const double scale = std::max(a.max_norm(), 1.0);

    // residual, unitarity, reconstruction
    for (int k = 0; k < 6; ++k) {
      const Vector v = sys.eigenvectors.col(k);
      const double residual =
          (a.matrix() * v - sys.eigenvalues[k] * v).cwiseAbs().maxCoeff();
      CHECK(residual <= 1e-10 * scale);
    }
    const double unitary = (sys.eigenvectors.adjoint() * sys.eigenvectors -
                            Matrix::Identity(6, 6))
                               .cwiseAbs()
                               .maxCoeff();
    CHECK(unitary <= 1e-10);
    const Matrix rebuilt = sys.eigenvectors *
                           sys.eigenvalues.cast<Complex>().asDiagonal() *
                           sys.eigenvectors.adjoint();
    CHECK((rebuilt - a.matrix()).cwiseAbs().maxCoeff() <= 1e-10 * scale);

    // ascending order and fixed phases
    for (int k = 1; k < 6; ++k) CHECK(sys.eigenvalues[k] >= sys.eigenvalues[k - 1]);
    for (int k = 0; k < 6; ++k) {
      for (int i = 0; i < 6; ++i) {
        const Complex v = sys.eigenvectors(i, k);
        if (std::abs(v) > 1e-12) {
          CHECK(std::abs(v.imag()) <= 1e-12 * std::abs(v));
          CHECK(v.real() > 0.0);
          break;
        }
      }
    }
  }
}

TEST_CASE("eigensystem rejects non-Hermitian input", "[opcore]") {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(hermitian_eigensystem(Operator(m)), DomainError);
}

TEST_CASE("spectral function with the identity map reproduces the operator",
          "[opcore]") {
  const Operator n = boson_mode(5, 1.0).number;
  const Operator same = spectral_function(n, [](double x) { return x; });
  CHECK((same.matrix() - n.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("inverse square root uses the kernel convention", "[opcore]") {
  const Operator n = boson_mode(3, 1.0).number;
  const Operator inv_sqrt =
      spectral_function(n, [](double x) { return 1.0 / std::sqrt(x); }, 0.0);
  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 1) = 1.0;
  expected(2, 2) = 1.0 / std::sqrt(2.0);
  CHECK((inv_sqrt.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("regular functions evaluate through zero eigenvalues", "[opcore]") {
  const Operator n = boson_mode(3, 1.0).number;
  const Operator shifted_inverse =
      spectral_function(n, [](double x) { return 1.0 / (1.0 + x); }, 0.0);
  Matrix expected = Matrix::Zero(3, 3);
  expected(0, 0) = 1.0;
  expected(1, 1) = 0.5;
  expected(2, 2) = 1.0 / 3.0;
  CHECK((shifted_inverse.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("spectral composition equals sequential application", "[opcore]") {
  std::mt19937 rng(23);
  const auto f = [](double x) { return x * x + 1.0; };
  const auto g = [](double x) { return 0.5 * x - 2.0; };
  for (int trial = 0; trial < 10; ++trial) {
    const Operator a = random_hermitian(5, rng);
    const Operator composed =
        spectral_function(a, [&](double x) { return f(g(x)); });
    const Operator sequential = spectral_function(spectral_function(a, g), f);
    const double scale = std::max(composed.max_norm(), 1.0);
    CHECK((composed.matrix() - sequential.matrix()).cwiseAbs().maxCoeff() <=
          1e-10 * scale);
  }
}

TEST_CASE("non-finite values off the kernel are rejected", "[opcore]") {
  const Operator n = boson_mode(3, 1.0).number;
  CHECK_THROWS_AS(
      spectral_function(n, [](double x) { return 1.0 / (x - 1.0); }, 0.0),
      DomainError);
}

TEST_CASE("trace of the identity exponential counts states", "[opcore]") {
  std::mt19937 rng(29);
  const Operator h = random_hermitian(2, rng);
  CHECK(trace_exp(h, 0.0) == Catch::Approx(2.0).margin(1e-13));
}

TEST_CASE("two-level trace matches the hyperbolic closed form", "[opcore]") {
  const Operator h = hamiltonian(ModeSpace::fermion(1.0));
  CHECK(trace_exp(h, 1.0) == Catch::Approx(2.0 * std::cosh(0.5)).epsilon(1e-13));
}

TEST_CASE("deep truncated ladder trace matches the geometric series", "[opcore]") {
  const Operator h = hamiltonian(ModeSpace::boson(60, 1.0));
  const double closed = std::exp(-0.5) / (1.0 - std::exp(-1.0));
  CHECK(trace_exp(h, 1.0) == Catch::Approx(closed).epsilon(1e-12));
  CHECK(trace_exp(h, 1.0) == Catch::Approx(0.95945).epsilon(1e-4));
}

TEST_CASE("trace of the exponential agrees with the eigenvalue sum", "[opcore]") {
  std::mt19937 rng(31);
  const Operator h = random_hermitian(7, rng);
  const EigenSystem sys = hermitian_eigensystem(h);
  double direct = 0.0;
  for (int k = 0; k < 7; ++k) direct += std::exp(-0.7 * sys.eigenvalues[k]);
  CHECK(trace_exp(h, 0.7) == Catch::Approx(direct).epsilon(1e-12));
}

TEST_CASE("trace_exp rejects negative beta", "[opcore]") {
  CHECK_THROWS_AS(trace_exp(Operator::identity(2), -1.0), DomainError);
}

TEST_CASE("operator construction validates layout", "[opcore]") {
  CHECK_THROWS_AS(Operator(Matrix::Identity(4, 4), {3, 2}), ShapeError);
  CHECK_NOTHROW(Operator(Matrix::Identity(4, 4), {2, 2}));
  CHECK_THROWS_AS(Operator(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("restriction to a diagonal projector selects the block", "[opcore]") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 5.0;
  m(1, 1) = 7.0;
  m(2, 2) = 9.0;
  m(0, 2) = Complex(0.0, 1.0);
  m(2, 0) = Complex(0.0, -1.0);
  Matrix p = Matrix::Identity(3, 3);
  p(1, 1) = 0.0;
  const Operator restricted = restrict_to_range(Operator(m), Operator(p));
  REQUIRE(restricted.dim() == 2);
  CHECK(restricted(0, 0) == Complex(5.0, 0.0));
  CHECK(restricted(1, 1) == Complex(9.0, 0.0));
  CHECK(restricted(0, 1) == Complex(0.0, 1.0));
}
