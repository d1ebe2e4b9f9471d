#pragma once

#include <vector>

#include "oscalg/opcore.hpp"

namespace oscalg {

enum class ModeKind { kBoson, kFermion };

// One oscillator mode: a truncated boson ladder with `cutoff` levels
// 0..cutoff-1, or a two-state fermion. Natural units (hbar = 1) unless an
// explicit hbar scale is passed to the energy-valued constructions.
struct ModeSpace {
  ModeKind kind;
  int cutoff;    // fermion: always 2
  double omega;  // angular frequency, > 0

  static ModeSpace boson(int cutoff, double omega);
  static ModeSpace fermion(double omega);
};

// Ladder triple for a single mode. Invariants (exact in entries):
//   raise  = adjoint(lower)
//   number = raise * lower
//   fermion only: lower^2 = 0 and number^2 = number
struct ModeOperators {
  Operator lower;
  Operator raise;
  Operator number;
};

// lower|n> = sqrt(n)|n-1>, raise truncated so raise|cutoff-1> = 0,
// number = diag(0..cutoff-1)
ModeOperators boson_mode(int cutoff, double omega);
ModeOperators boson_mode(const ModeSpace& mode);

// Basis ordered (|0>,|1>) with f|0> = 0, f^dag|0> = |1>, f|1> = |0>,
// f^dag|1> = 0; number = diag(0,1)
ModeOperators fermion_mode(double omega);
ModeOperators fermion_mode(const ModeSpace& mode);

// I (x) ... (x) op (x) ... (x) I with op at `position` in `layout`.
Operator lift(const Operator& op, int position, const std::vector<int>& layout);

// boson: hbar*omega*(N + 1/2);  fermion: hbar*omega*(N - 1/2)
Operator hamiltonian(const ModeSpace& mode, double hbar = 1.0);

// Projector onto levels 0..cutoff-2, where truncated ladder identities
// hold exactly.
Operator safe_level_projector(int cutoff);

}  // namespace oscalg
