#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oscalg/opcore.hpp"

namespace oscalg {

// Element of the exterior algebra over an ordered list of anticommuting
// generators. Canonical form: every monomial is a strictly increasing
// generator subset (stored as a bitmask over generator indices) and zero
// coefficients are never kept. Coefficients stay exact as long as the
// inputs are dyadic rationals times numeric hbar/omega factors, so
// identity checks compare coefficients for plain equality.
class GrassmannElement {
 public:
  using Mask = std::uint32_t;

  explicit GrassmannElement(std::vector<std::string> generators);

  static GrassmannElement zero(std::vector<std::string> generators);
  static GrassmannElement scalar(std::vector<std::string> generators, Complex value);
  static GrassmannElement generator(std::vector<std::string> generators,
                                    const std::string& name);

  const std::vector<std::string>& generators() const { return generators_; }
  const std::map<Mask, Complex>& terms() const { return terms_; }

  int generator_index(const std::string& name) const;  // DomainError if unknown
  bool is_zero() const { return terms_.empty(); }

  // Accumulates c onto monomial m, dropping the term if it cancels to zero.
  void add_term(Mask monomial, Complex coefficient);
  Complex coefficient(Mask monomial) const;

  bool operator==(const GrassmannElement& other) const;
  bool operator!=(const GrassmannElement& other) const { return !(*this == other); }

  GrassmannElement operator+(const GrassmannElement& other) const;
  GrassmannElement operator-(const GrassmannElement& other) const;
  GrassmannElement operator*(Complex scale) const;

  // Renders terms in canonical order, e.g. "(0,0.5)*psibar*psidot".
  std::string to_string() const;

 private:
  void require_same_universe(const GrassmannElement& other) const;

  std::vector<std::string> generators_;
  std::map<Mask, Complex> terms_;

  friend GrassmannElement g_multiply(const GrassmannElement&, const GrassmannElement&);
};

enum class DerivativeSide { kLeft, kRight };

// Bilinear product; merging two monomials picks up (-1) per transposition
// and a repeated generator kills the term.
GrassmannElement g_multiply(const GrassmannElement& x, const GrassmannElement& y);

// Monomials lacking `gen` vanish; otherwise `gen` is anticommuted to the
// chosen side and removed. For a monomial of degree d with gen at position
// p (0-based): left sign (-1)^p, right sign (-1)^(d-1-p), so
// left = (-1)^(d-1) * right on monomials containing gen.
GrassmannElement g_derivative(const GrassmannElement& x, const std::string& gen,
                              DerivativeSide side);

// First-order oscillator Lagrangian
//   L = (i*hbar/2)*(qbar*qdot - qbardot*q) - (hbar*omega/2)*(qbar*q - q*qbar)
// over independent generators (q, qbar, qdot, qbardot).
GrassmannElement oscillator_lagrangian(const std::array<std::string, 4>& names,
                                       double omega, double hbar = 1.0);

// Canonical derivation from the first-order Lagrangian: momenta, Legendre
// transform, and the Euler-Lagrange equations of motion.
struct OscillatorDerivation {
  GrassmannElement lagrangian;
  GrassmannElement momentum_q;     // conjugate to q, from d L / d qdot
  GrassmannElement momentum_qbar;  // conjugate to qbar, from d L / d qbardot
  GrassmannElement hamiltonian;    // qdot*Pi_q + qbardot*Pi_qbar - L

  GrassmannElement expected_momentum_q;     // -(i*hbar/2)*qbar
  GrassmannElement expected_momentum_qbar;  // -(i*hbar/2)*q
  GrassmannElement expected_hamiltonian;    // hbar*omega*qbar*q

  bool momenta_match;        // exact coefficient equality
  bool hamiltonian_matches;  // exact coefficient equality

  // Equations of motion written as qdot = c*q and qbardot = c*qbar.
  Complex eom_qdot_coefficient;     // -i*omega
  Complex eom_qbardot_coefficient;  // +i*omega
};

OscillatorDerivation derive_oscillator_hamiltonian(
    double omega, double hbar = 1.0,
    const std::array<std::string, 4>& names = {"psi", "psibar", "psidot",
                                               "psibardot"});

// Two-dimensional representation of the fermionic pair on the basis (1, theta):
// annihilation as left multiplication by theta, creation as the left theta
// derivative. The matrices are obtained by acting on the basis, not assumed.
struct ThetaRepresentationReport {
  Operator multiply_matrix;    // theta * .
  Operator derivative_matrix;  // d/dtheta
  Operator anticommutator;     // {theta*., d/dtheta}
  bool anticommutator_is_identity;      // exact
  bool multiply_squares_to_zero;        // exact
  bool multiply_equals_fermion_raise;   // matches fermion_mode raise under 1 <-> |0>, theta <-> |1>
};

ThetaRepresentationReport check_theta_representation();

// Plain-text expression syntax: generators are identifiers, `*` product,
// `+` sum, complex literals as `(re,im)`. Unknown identifiers and syntax
// errors raise ParseError with a character position.
GrassmannElement parse_grassmann_expression(const std::string& text,
                                            std::vector<std::string> generators);

}  // namespace oscalg
