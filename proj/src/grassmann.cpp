#include "oscalg/grassmann.hpp"

#include <bit>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "oscalg/fock.hpp"

namespace oscalg {

namespace {

int transposition_parity_sign(int count) { return count % 2 == 0 ? 1 : -1; }

}  // namespace

GrassmannElement::GrassmannElement(std::vector<std::string> generators)
    : generators_(std::move(generators)) {
  if (generators_.size() > 32)
    throw DomainError("GrassmannElement supports at most 32 generators");
  for (std::size_t i = 0; i < generators_.size(); ++i)
    for (std::size_t j = i + 1; j < generators_.size(); ++j)
      if (generators_[i] == generators_[j])
        throw DomainError("duplicate generator name: " + generators_[i]);
}

GrassmannElement GrassmannElement::zero(std::vector<std::string> generators) {
  return GrassmannElement(std::move(generators));
}

GrassmannElement GrassmannElement::scalar(std::vector<std::string> generators,
                                          Complex value) {
  GrassmannElement e(std::move(generators));
  e.add_term(0, value);
  return e;
}

GrassmannElement GrassmannElement::generator(std::vector<std::string> generators,
                                             const std::string& name) {
  GrassmannElement e(std::move(generators));
  e.add_term(Mask{1} << e.generator_index(name), Complex(1.0, 0.0));
  return e;
}

int GrassmannElement::generator_index(const std::string& name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i] == name) return static_cast<int>(i);
  throw DomainError("unknown generator: " + name);
}

void GrassmannElement::add_term(Mask monomial, Complex coefficient) {
  auto it = terms_.find(monomial);
  if (it == terms_.end()) {
    if (coefficient != Complex(0.0, 0.0)) terms_.emplace(monomial, coefficient);
    return;
  }
  it->second += coefficient;
  if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
}

Complex GrassmannElement::coefficient(Mask monomial) const {
  auto it = terms_.find(monomial);
  return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
}

void GrassmannElement::require_same_universe(const GrassmannElement& other) const {
  if (generators_ != other.generators_)
    throw DomainError("Grassmann elements live over different generator lists");
}

bool GrassmannElement::operator==(const GrassmannElement& other) const {
  return generators_ == other.generators_ && terms_ == other.terms_;
}

GrassmannElement GrassmannElement::operator+(const GrassmannElement& other) const {
  require_same_universe(other);
  GrassmannElement out = *this;
  for (const auto& [mask, coeff] : other.terms_) out.add_term(mask, coeff);
  return out;
}

GrassmannElement GrassmannElement::operator-(const GrassmannElement& other) const {
  require_same_universe(other);
  GrassmannElement out = *this;
  for (const auto& [mask, coeff] : other.terms_) out.add_term(mask, -coeff);
  return out;
}

GrassmannElement GrassmannElement::operator*(Complex scale) const {
  GrassmannElement out(generators_);
  if (scale == Complex(0.0, 0.0)) return out;
  for (const auto& [mask, coeff] : terms_) out.add_term(mask, scale * coeff);
  return out;
}

std::string GrassmannElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mask, coeff] : terms_) {
    if (!first) os << " + ";
    first = false;
    // +0.0 folds negative zeros out of the rendering
    os << "(" << coeff.real() + 0.0 << "," << coeff.imag() + 0.0 << ")";
    for (std::size_t g = 0; g < generators_.size(); ++g)
      if (mask & (Mask{1} << g)) os << "*" << generators_[g];
  }
  return os.str();
}

GrassmannElement g_multiply(const GrassmannElement& x, const GrassmannElement& y) {
  x.require_same_universe(y);
  GrassmannElement out(x.generators());

  for (const auto& [mx, cx] : x.terms()) {
    for (const auto& [my, cy] : y.terms()) {
      if (mx & my) continue;  // repeated generator squares to zero

      // Merge the two increasing monomials: each generator of y hops over
      // every generator of x above it.
      int transpositions = 0;
      GrassmannElement::Mask rest = my;
      while (rest) {
        const int g = std::countr_zero(rest);
        rest &= rest - 1;
        transpositions += std::popcount(mx >> (g + 1));
      }
      out.add_term(mx | my,
                   double(transposition_parity_sign(transpositions)) * cx * cy);
    }
  }
  return out;
}

GrassmannElement g_derivative(const GrassmannElement& x, const std::string& gen,
                              DerivativeSide side) {
  const int g = x.generator_index(gen);
  const GrassmannElement::Mask bit = GrassmannElement::Mask{1} << g;

  GrassmannElement out(x.generators());
  for (const auto& [mask, coeff] : x.terms()) {
    if (!(mask & bit)) continue;
    const int hops = side == DerivativeSide::kLeft
                         ? std::popcount(mask & (bit - 1))  // generators below g
                         : std::popcount(mask >> (g + 1));  // generators above g
    out.add_term(mask & ~bit, double(transposition_parity_sign(hops)) * coeff);
  }
  return out;
}

GrassmannElement oscillator_lagrangian(const std::array<std::string, 4>& names,
                                       double omega, double hbar) {
  const std::vector<std::string> gens(names.begin(), names.end());
  const auto q = GrassmannElement::generator(gens, names[0]);
  const auto qbar = GrassmannElement::generator(gens, names[1]);
  const auto qdot = GrassmannElement::generator(gens, names[2]);
  const auto qbardot = GrassmannElement::generator(gens, names[3]);

  const Complex kinetic(0.0, hbar / 2.0);  // i*hbar/2
  const GrassmannElement kinetic_part =
      (g_multiply(qbar, qdot) - g_multiply(qbardot, q)) * kinetic;
  const GrassmannElement mass_part =
      (g_multiply(qbar, q) - g_multiply(q, qbar)) * Complex(hbar * omega / 2.0, 0.0);
  return kinetic_part - mass_part;
}

namespace {

// Replaces each coordinate generator with its velocity in a degree-one
// element: the formal d/dt of a momentum.
GrassmannElement substitute_velocity(const GrassmannElement& e,
                                     const std::array<std::string, 4>& names) {
  GrassmannElement out(e.generators());
  const int q = e.generator_index(names[0]);
  const int qbar = e.generator_index(names[1]);
  const int qdot = e.generator_index(names[2]);
  const int qbardot = e.generator_index(names[3]);
  using Mask = GrassmannElement::Mask;
  for (const auto& [mask, coeff] : e.terms()) {
    Mask shifted = mask;
    if (mask == (Mask{1} << q)) shifted = Mask{1} << qdot;
    if (mask == (Mask{1} << qbar)) shifted = Mask{1} << qbardot;
    out.add_term(shifted, coeff);
  }
  return out;
}

// Solves alpha*vel + beta*coord = 0 for vel = c*coord.
Complex solve_linear_eom(const GrassmannElement& equation, int vel_index,
                         int coord_index) {
  using Mask = GrassmannElement::Mask;
  const Complex alpha = equation.coefficient(Mask{1} << vel_index);
  const Complex beta = equation.coefficient(Mask{1} << coord_index);
  return -beta / alpha;
}

}  // namespace

OscillatorDerivation derive_oscillator_hamiltonian(
    double omega, double hbar, const std::array<std::string, 4>& names) {
  if (omega < 0.0) throw DomainError("omega must be nonnegative");
  const std::vector<std::string> gens(names.begin(), names.end());

  const auto q = GrassmannElement::generator(gens, names[0]);
  const auto qbar = GrassmannElement::generator(gens, names[1]);
  const auto qdot = GrassmannElement::generator(gens, names[2]);
  const auto qbardot = GrassmannElement::generator(gens, names[3]);

  const GrassmannElement lagrangian = oscillator_lagrangian(names, omega, hbar);

  // Momenta from the left derivative: this is the convention that yields
  // -(i*hbar/2)*qbar for the +(i*hbar/2)*qbar*qdot kinetic term.
  const GrassmannElement pi_q =
      g_derivative(lagrangian, names[2], DerivativeSide::kLeft);
  const GrassmannElement pi_qbar =
      g_derivative(lagrangian, names[3], DerivativeSide::kLeft);

  const Complex minus_half_i_hbar(0.0, -hbar / 2.0);
  const GrassmannElement expected_pi_q = qbar * minus_half_i_hbar;
  const GrassmannElement expected_pi_qbar = q * minus_half_i_hbar;

  // Legendre transform with velocities on the left of both momenta; the
  // kinetic terms cancel exactly in this ordering.
  const GrassmannElement hamiltonian = g_multiply(qdot, pi_q) +
                                       g_multiply(qbardot, pi_qbar) -
                                       lagrangian;
  const GrassmannElement expected_hamiltonian =
      g_multiply(qbar, q) * Complex(hbar * omega, 0.0);

  // Euler-Lagrange: d/dt(dL/dvel) - dL/dcoord = 0, reduced to vel = c*coord.
  // Varying qbar yields the equation for qdot and vice versa. Generator k
  // of `names` sits at index k of the universe.
  const GrassmannElement eom_in_qdot =
      substitute_velocity(pi_qbar, names) -
      g_derivative(lagrangian, names[1], DerivativeSide::kLeft);
  const GrassmannElement eom_in_qbardot =
      substitute_velocity(pi_q, names) -
      g_derivative(lagrangian, names[0], DerivativeSide::kLeft);

  return OscillatorDerivation{
      lagrangian,
      pi_q,
      pi_qbar,
      hamiltonian,
      expected_pi_q,
      expected_pi_qbar,
      expected_hamiltonian,
      pi_q == expected_pi_q && pi_qbar == expected_pi_qbar,
      hamiltonian == expected_hamiltonian,
      solve_linear_eom(eom_in_qdot, 2, 0),
      solve_linear_eom(eom_in_qbardot, 3, 1)};
}

ThetaRepresentationReport check_theta_representation() {
  const std::vector<std::string> gens{"theta"};
  const auto one = GrassmannElement::scalar(gens, Complex(1.0, 0.0));
  const auto theta = GrassmannElement::generator(gens, "theta");

  // Column k holds the image of basis element k under the map, with the
  // basis ordered (1, theta).
  const auto matrix_of = [&](auto&& map) {
    Matrix m = Matrix::Zero(2, 2);
    const std::array<GrassmannElement, 2> basis{one, theta};
    for (int k = 0; k < 2; ++k) {
      const GrassmannElement image = map(basis[k]);
      m(0, k) = image.coefficient(0);
      m(1, k) = image.coefficient(1);
    }
    return Operator(m, {2});
  };

  const Operator mult = matrix_of(
      [&](const GrassmannElement& e) { return g_multiply(theta, e); });
  const Operator deriv = matrix_of([&](const GrassmannElement& e) {
    return g_derivative(e, "theta", DerivativeSide::kLeft);
  });

  const Operator anti = bracket(mult, deriv, BracketKind::kAnticommutator);
  const Operator square = mult * mult;

  const Operator fermion_raise = fermion_mode(1.0).raise;

  ThetaRepresentationReport report{
      mult,
      deriv,
      anti,
      (anti.matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0,
      square.max_norm() == 0.0,
      (mult.matrix() - fermion_raise.matrix()).cwiseAbs().maxCoeff() == 0.0};
  return report;
}

namespace {

struct ExpressionParser {
  const std::string& text;
  std::size_t pos = 0;
  const std::vector<std::string>& generators;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("expression error at position " + std::to_string(pos) +
                     ": " + message);
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  double parse_number() {
    skip_ws();
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos += static_cast<std::size_t>(end - begin);
    return value;
  }

  GrassmannElement parse_atom() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression");
    if (text[pos] == '(') {
      ++pos;
      const double re = parse_number();
      if (!consume(',')) fail("expected ',' in complex literal");
      const double im = parse_number();
      if (!consume(')')) fail("expected ')' closing complex literal");
      return GrassmannElement::scalar(generators, Complex(re, im));
    }
    if (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_') {
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) ||
              text[pos] == '_'))
        ++pos;
      const std::string name = text.substr(start, pos - start);
      try {
        return GrassmannElement::generator(generators, name);
      } catch (const DomainError& e) {
        fail(e.what());
      }
    }
    fail(std::string("unexpected character '") + text[pos] + "'");
  }

  GrassmannElement parse_product() {
    GrassmannElement out = parse_atom();
    while (consume('*')) out = g_multiply(out, parse_atom());
    return out;
  }

  GrassmannElement parse_sum() {
    GrassmannElement out = parse_product();
    while (consume('+')) out = out + parse_product();
    return out;
  }
};

}  // namespace

GrassmannElement parse_grassmann_expression(const std::string& text,
                                            std::vector<std::string> generators) {
  ExpressionParser parser{text, 0, generators};
  GrassmannElement out = parser.parse_sum();
  parser.skip_ws();
  if (parser.pos != text.size()) parser.fail("trailing input");
  return out;
}

}  // namespace oscalg
