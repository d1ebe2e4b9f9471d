#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscalg/fock.hpp"
#include "oscalg/opcore.hpp"

namespace oscalg {

// The four two-mode angular-momentum constructions:
//   kBosonBoson          J+ = hbar a1^dag a2 on layout [D, D]
//   kFermionFermion      J+ = hbar f1^dag f2 on layout [2, 2]
//   kBosonFermionNaive   J+ = hbar a^dag f   on layout [D, 2]
//   kBosonFermionCorrected
//       J+ = hbar a^dag (1+N)^(-1/2) f, with Jz in one of two forms
enum class SchwingerKind {
  kBosonBoson,
  kFermionFermion,
  kBosonFermionNaive,
  kBosonFermionCorrected
};

// Jz variants for the corrected boson-fermion map. Their J+/J- coincide;
// only the vacuum diagonal of Jz differs.
//   kProjector:  (hbar/2)(a^dag (1+N)^(-1) a (1-Nf) - Nf), zero on |0,0>
//   kOccupation: (hbar/2)(1 - 2 Nf), +hbar/2 on |0,0>
enum class JzForm { kProjector, kOccupation };

struct SchwingerGenerators {
  SchwingerKind kind;
  std::optional<JzForm> jz_form;  // set for kBosonFermionCorrected only
  Operator jplus;
  Operator jminus;  // adjoint of jplus, exactly
  Operator jz;
  double hbar;
};

// |j, m> label with half-integer entries stored doubled so that the
// integrality constraints are structural.
struct JMLabel {
  int twice_j;
  int twice_m;

  JMLabel(int twice_j, int twice_m);

  double j() const { return twice_j / 2.0; }
  double m() const { return twice_m / 2.0; }
  int n1() const { return (twice_j + twice_m) / 2; }  // j + m
  int n2() const { return (twice_j - twice_m) / 2; }  // j - m
};

// Assembles the generator triple from lifted mode operators. `cutoff`
// applies to every boson mode and is ignored for the fermion-fermion kind.
// Passing a jz_form for a non-corrected kind is a domain error.
SchwingerGenerators build_generators(SchwingerKind kind, int cutoff = 16,
                                     std::optional<JzForm> jz_form = std::nullopt,
                                     double hbar = 1.0);

// Default projector onto the subspace where truncated-ladder identities
// hold: n1 + n2 <= cutoff - 2 for the boson pair, the full space for the
// fermion pair, boson occupation <= cutoff - 2 for the mixed kinds.
Operator default_safe_projector(SchwingerKind kind, int cutoff);

// Same with the two-mode vacuum |0,0> removed; the natural domain for the
// corrected-map Casimir statements.
Operator safe_projector_excluding_vacuum(SchwingerKind kind, int cutoff);

// Residual max-norms of the su(2) relations, conjugated by a projector.
struct AlgebraReport {
  double res_jz_jplus;   // [Jz,J+] - hbar J+
  double res_jz_jminus;  // [Jz,J-] + hbar J-
  double res_jpjm;       // [J+,J-] - 2 hbar Jz
  double tolerance;      // 1e-10 * hbar

  double max_residual() const;
  bool passed() const { return max_residual() <= tolerance; }
};

AlgebraReport algebra_report(const SchwingerGenerators& g,
                             const Operator& safe_projector);

// J^2 = Jz^2 + (1/2){J+, J-}
Operator casimir(const SchwingerGenerators& g);

struct CasimirCluster {
  double eigenvalue;
  int multiplicity;
  std::optional<double> j;  // solves hbar^2 j(j+1) = eigenvalue, half-integer only
};

// Eigenvalues of the Casimir restricted to the range of the projector,
// clustered with tolerance 1e-8*hbar^2.
std::vector<CasimirCluster> casimir_spectrum(const SchwingerGenerators& g,
                                             const Operator& safe_projector);

// (a1^dag)^(j+m) (a2^dag)^(j-m) / sqrt((j+m)!(j-m)!) applied to |0,0> on
// the two-boson space, built by actual operator application.
Vector schwinger_state(const JMLabel& label, int cutoff);

// j = (n1+n2)/2, m = (n1-n2)/2
JMLabel jm_map(int n1, int n2);

// Residuals of a N^r = (1+N)^r a and N^r a^dag = a^dag (1+N)^r on the
// safe single-mode subspace, with the pseudoinverse kernel convention.
struct ShiftTheoremReport {
  double exponent;
  double res_lower;  // a N^r - (1+N)^r a
  double res_raise;  // N^r a^dag - a^dag (1+N)^r
};

ShiftTheoremReport shift_theorem_check(double r, int cutoff);

std::string to_string(SchwingerKind kind);
std::string to_string(JzForm form);

}  // namespace oscalg
