#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <random>
#include <vector>

#include "oscalg/grassmann.hpp"

using namespace oscalg;

namespace {

const std::vector<std::string> kPair{"theta1", "theta2"};

GrassmannElement monomial(const std::vector<std::string>& gens,
                          GrassmannElement::Mask mask, Complex c = {1.0, 0.0}) {
  GrassmannElement e(gens);
  e.add_term(mask, c);
  return e;
}

std::vector<std::string> names(int count) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back("g" + std::to_string(i));
  return out;
}

GrassmannElement random_element(const std::vector<std::string>& gens,
                                std::mt19937& rng) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> pick(0, 3);
  GrassmannElement e(gens);
  const auto max_mask = GrassmannElement::Mask{1} << gens.size();
  for (GrassmannElement::Mask m = 0; m < max_mask; ++m)
    if (pick(rng) == 0)
      e.add_term(m, Complex(coeff(rng) / 2.0, coeff(rng) / 2.0));
  return e;
}

int degree(GrassmannElement::Mask m) { return std::popcount(m); }

}  // namespace

TEST_CASE("generators square to zero", "[grassmann]") {
  const auto theta = GrassmannElement::generator(kPair, "theta1");
  CHECK(g_multiply(theta, theta).is_zero());
}

TEST_CASE("generators anticommute", "[grassmann]") {
  const auto t1 = GrassmannElement::generator(kPair, "theta1");
  const auto t2 = GrassmannElement::generator(kPair, "theta2");
  const auto plus = g_multiply(t1, t2);
  const auto minus = g_multiply(t2, t1) * Complex(-1.0, 0.0);
  CHECK(plus == minus);
}

TEST_CASE("bilinear expansion of a product of affine factors", "[grassmann]") {
  const auto one = GrassmannElement::scalar(kPair, {1.0, 0.0});
  const auto t1 = GrassmannElement::generator(kPair, "theta1");
  const auto t2 = GrassmannElement::generator(kPair, "theta2");
  const auto product = g_multiply(one + t1, one + t2);

  GrassmannElement expected(kPair);
  expected.add_term(0b00, {1.0, 0.0});
  expected.add_term(0b01, {1.0, 0.0});
  expected.add_term(0b10, {1.0, 0.0});
  expected.add_term(0b11, {1.0, 0.0});
  CHECK(product == expected);
}

TEST_CASE("products across universes are rejected", "[grassmann]") {
  const auto a = GrassmannElement::generator({"a"}, "a");
  const auto b = GrassmannElement::generator({"b"}, "b");
  CHECK_THROWS_AS(g_multiply(a, b), DomainError);
  CHECK_THROWS_AS(g_derivative(a, "zz", DerivativeSide::kLeft), DomainError);
}

TEST_CASE("derivative of a single generator is one", "[grassmann]") {
  const auto theta = GrassmannElement::generator(kPair, "theta1");
  const auto one = GrassmannElement::scalar(kPair, {1.0, 0.0});
  CHECK(g_derivative(theta, "theta1", DerivativeSide::kLeft) == one);
  CHECK(g_derivative(theta, "theta1", DerivativeSide::kRight) == one);
}

TEST_CASE("left derivative picks up the transposition sign", "[grassmann]") {
  // d/dtheta1 acting from the left on theta2*theta1 = -theta2
  const auto t2t1 = monomial(kPair, 0b11, {-1.0, 0.0});  // theta2*theta1 canonical
  const auto minus_t2 =
      GrassmannElement::generator(kPair, "theta2") * Complex(-1.0, 0.0);
  CHECK(g_derivative(t2t1, "theta1", DerivativeSide::kLeft) == minus_t2);
}

TEST_CASE("kinetic-term derivatives by side", "[grassmann]") {
  // (i*hbar/2) qbar*qdot: the left derivative in qdot gives -(i*hbar/2)*qbar,
  // the right derivative the opposite sign
  const std::vector<std::string> gens{"q", "qbar", "qdot", "qbardot"};
  GrassmannElement term(gens);
  term.add_term(0b0110, Complex(0.0, 0.5));  // qbar*qdot
  const auto qbar = GrassmannElement::generator(gens, "qbar");
  CHECK(g_derivative(term, "qdot", DerivativeSide::kLeft) ==
        qbar * Complex(0.0, -0.5));
  CHECK(g_derivative(term, "qdot", DerivativeSide::kRight) ==
        qbar * Complex(0.0, 0.5));
}

TEST_CASE("side conventions differ by degree parity", "[grassmann]") {
  // left = (-1)^(deg-1) * right on every monomial containing the generator
  const auto gens = names(5);
  for (GrassmannElement::Mask m = 1; m < 32; ++m) {
    const auto element = monomial(gens, m, {1.0, 0.0});
    for (int g = 0; g < 5; ++g) {
      if (!(m & (GrassmannElement::Mask{1} << g))) continue;
      const auto left = g_derivative(element, gens[g], DerivativeSide::kLeft);
      const double sign = degree(m) % 2 == 1 ? 1.0 : -1.0;
      const auto right = g_derivative(element, gens[g], DerivativeSide::kRight) *
                         Complex(sign, 0.0);
      CHECK(left == right);
    }
  }
}

TEST_CASE("graded Leibniz rule for the left derivative", "[grassmann]") {
  // d(x*y) = dx*y + (-1)^deg(x) x*dy, exhaustively over monomial pairs
  const auto gens = names(5);
  for (GrassmannElement::Mask mx = 0; mx < 32; ++mx) {
    for (GrassmannElement::Mask my = 0; my < 32; ++my) {
      const auto x = monomial(gens, mx, {1.0, 0.0});
      const auto y = monomial(gens, my, {1.0, 0.0});
      const auto xy = g_multiply(x, y);
      for (int g = 0; g < 5; ++g) {
        const auto lhs = g_derivative(xy, gens[g], DerivativeSide::kLeft);
        const double sign = degree(mx) % 2 == 0 ? 1.0 : -1.0;
        const auto rhs =
            g_multiply(g_derivative(x, gens[g], DerivativeSide::kLeft), y) +
            g_multiply(x, g_derivative(y, gens[g], DerivativeSide::kLeft)) *
                Complex(sign, 0.0);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("product is associative on random elements", "[grassmann]") {
  const auto gens = names(6);
  std::mt19937 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_element(gens, rng);
    const auto b = random_element(gens, rng);
    const auto c = random_element(gens, rng);
    CHECK(g_multiply(g_multiply(a, b), c) == g_multiply(a, g_multiply(b, c)));
  }
}

TEST_CASE("products stay in canonical form", "[grassmann]") {
  const auto gens = names(6);
  std::mt19937 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto product = g_multiply(random_element(gens, rng),
                                    random_element(gens, rng));
    // no stored zero coefficients, and rebuilding term by term changes nothing
    GrassmannElement rebuilt(gens);
    for (const auto& [mask, coeff] : product.terms()) {
      CHECK(coeff != Complex(0.0, 0.0));
      rebuilt.add_term(mask, coeff);
    }
    CHECK(rebuilt == product);
  }
}

TEST_CASE("oscillator derivation reproduces the closed forms exactly",
          "[grassmann]") {
  for (const auto& [omega, hbar] :
       std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.5, 1.0}, {1.0, 0.5},
                                              {3.0, 2.0}}) {
    const OscillatorDerivation d = derive_oscillator_hamiltonian(omega, hbar);
    CHECK(d.momenta_match);
    CHECK(d.hamiltonian_matches);
    // exact zero residual, no tolerance
    CHECK((d.hamiltonian - d.expected_hamiltonian).is_zero());
    CHECK((d.momentum_q - d.expected_momentum_q).is_zero());
    CHECK((d.momentum_qbar - d.expected_momentum_qbar).is_zero());
    // equations of motion: qdot = -i*omega*q, qbardot = +i*omega*qbar
    CHECK(d.eom_qdot_coefficient == Complex(0.0, -omega));
    CHECK(d.eom_qbardot_coefficient == Complex(0.0, omega));
  }
}

TEST_CASE("zero frequency leaves a vanishing transform", "[grassmann]") {
  const OscillatorDerivation d = derive_oscillator_hamiltonian(0.0, 1.0);
  CHECK(d.hamiltonian.is_zero());
  CHECK(d.hamiltonian_matches);
}

TEST_CASE("the Lagrangian form does not depend on the generator names",
          "[grassmann]") {
  const auto standard = oscillator_lagrangian(
      {"psi", "psibar", "psidot", "psibardot"}, 1.75, 1.0);
  const auto renamed = oscillator_lagrangian(
      {"theta", "thetabar", "thetadot", "thetabardot"}, 1.75, 1.0);
  CHECK(standard.terms() == renamed.terms());

  const OscillatorDerivation renamed_run = derive_oscillator_hamiltonian(
      1.75, 1.0, {"theta", "thetabar", "thetadot", "thetabardot"});
  CHECK(renamed_run.momenta_match);
  CHECK(renamed_run.hamiltonian_matches);
}

TEST_CASE("two-dimensional representation on (1, theta)", "[grassmann]") {
  const ThetaRepresentationReport report = check_theta_representation();
  CHECK(report.anticommutator_is_identity);
  CHECK(report.multiply_squares_to_zero);
  CHECK(report.multiply_equals_fermion_raise);

  // multiplication: column of 1 maps to theta; derivative: theta maps to 1
  CHECK(report.multiply_matrix(1, 0) == Complex(1.0, 0.0));
  CHECK(report.multiply_matrix(0, 0) == Complex(0.0, 0.0));
  CHECK(report.derivative_matrix(0, 1) == Complex(1.0, 0.0));
  CHECK((report.anticommutator.matrix() - Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("expression parsing round trip", "[grassmann]") {
  const std::vector<std::string> gens{"a", "b", "c"};
  const auto parsed =
      parse_grassmann_expression("(0,1)*a*b + b*c + (2.5,0)", gens);

  GrassmannElement expected(gens);
  expected.add_term(0b000, {2.5, 0.0});
  expected.add_term(0b011, {0.0, 1.0});
  expected.add_term(0b110, {1.0, 0.0});
  CHECK(parsed == expected);

  // nilpotency through the parser
  CHECK(parse_grassmann_expression("a*a", gens).is_zero());
}

TEST_CASE("expression errors carry positions", "[grassmann]") {
  const std::vector<std::string> gens{"a", "b"};
  CHECK_THROWS_AS(parse_grassmann_expression("a*z", gens), ParseError);
  CHECK_THROWS_AS(parse_grassmann_expression("a +", gens), ParseError);
  CHECK_THROWS_AS(parse_grassmann_expression("(1,2", gens), ParseError);
  CHECK_THROWS_AS(parse_grassmann_expression("a b", gens), ParseError);
}
