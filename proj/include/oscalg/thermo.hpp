#pragma once

#include <string>
#include <vector>

#include "oscalg/fock.hpp"
#include "oscalg/opcore.hpp"

namespace oscalg {

// A collection of independent modes in a thermal bath at inverse
// temperature beta (units 1/energy, Boltzmann constant folded in).
struct EnsembleSpec {
  std::vector<ModeSpace> modes;
  double beta;

  EnsembleSpec(std::vector<ModeSpace> modes, double beta);
};

// Closed-form single-mode partition function:
//   fermion: 2 cosh(beta hbar omega / 2)
//   boson:   exp(-beta hbar omega / 2) / (1 - exp(-beta hbar omega))
double closed_partition(const ModeSpace& mode, double beta, double hbar = 1.0);

// Tr exp(-beta H): the trace oracle every closed form is checked against.
// The symmetric two-level spectrum makes the sign of beta*H immaterial
// there; the decaying convention is used uniformly.
double trace_partition(const Operator& h, double beta);

// Sum over modes of ln closed_partition.
double ensemble_log_partition(const EnsembleSpec& spec, double hbar = 1.0);

// Closed-form mean energy, summed over modes:
//   fermion: -hbar omega (1/2 - 1/(1 + exp(beta hbar omega)))
//   boson:   +hbar omega (1/2 + 1/(exp(beta hbar omega) - 1))
double mean_energy(const EnsembleSpec& spec, double hbar = 1.0);

// Finite-difference oracle for <E> = -d ln Z / d beta, with ln Z obtained
// from trace_partition on the assembled mode Hamiltonians.
double mean_energy_fd(const EnsembleSpec& spec, double delta, double hbar = 1.0);

// Closed-form and oracle values side by side, with their gaps.
struct ThermalReport {
  double beta;
  double logZ_closed;
  double logZ_trace;
  double energy_closed;
  double energy_fd;
  double residual_logZ;    // |logZ_closed - logZ_trace|
  double residual_energy;  // |energy_closed - energy_fd|
};

ThermalReport thermal_report(const EnsembleSpec& spec, double fd_delta = 1e-4,
                             double hbar = 1.0);

// Continuum-limit mean energy of a large fermionic collection, as the
// integral of (1/(1+e^x) - 1/2) over [eps_min, eps_m] in units of kT.
//   closed:          kT [ (eps_m - eps_min)/2 + ln((1+e^eps_min)/(1+e^eps_m)) ]
//   quadrature:      adaptive Gauss-Kronrod evaluation of the integral
//   closed_alt_sign: the same closed form with the linear term negated, a
//                    variant that circulates in print; the quadrature
//                    arbitrates between the two.
struct ContinuumEnergy {
  double closed;
  double quadrature;
  double closed_alt_sign;
  double alt_sign_deviation;  // |closed_alt_sign - quadrature|
};

ContinuumEnergy continuum_energy(double eps_m, double temperature,
                                 double boltzmann_k = 1.0, double eps_min = 1.0);

// Moment of inertia and rotation frequency of the rotor whose level
// matches the ground-state energy of n identical oscillator modes.
struct RotorEquivalence {
  double inertia;
  double rotor_omega;
  double j_used;
  std::string convention_note;
};

// n_oscillators = 2: hbar^2 j(j+1)/(2I) = 2 * hbar omega / 2
// n_oscillators = 3: hbar^2 j(j+1)/(2I) + hbar omega / 2 = 3 * hbar omega / 2
// j must be a positive half-integer.
RotorEquivalence rotor_equivalence(double omega, double j, int n_oscillators,
                                   double hbar = 1.0);

// Matches the thermal energy of a fermionic pair to a rotor level
// hbar^2 j(j+1)/(2I). The pair energy is negative for every beta > 0, so
// this raises a DomainError explaining why no positive inertia exists.
RotorEquivalence fermion_pair_inertia(double omega1, double omega2, double beta,
                                      double j, double hbar = 1.0);

// Sum over integer j = 0..j_max of (2j+1) exp(-beta hbar^2 j(j+1)/(2I)).
double rotational_partition(double inertia, double beta, double j_max,
                            double hbar = 1.0);

// One Heisenberg-picture oscillation frequency |E_i - E_j|/hbar of an
// observable under a Hamiltonian, with total transition weight.
struct SpectralLine {
  double frequency;
  double weight;  // sum of |<i|O|j>|^2 over the contributing pairs
};

// Lines sorted by frequency; matrix elements below 1e-10 are dropped and
// equal frequencies are merged.
std::vector<SpectralLine> spectral_frequencies(const Operator& h,
                                               const Operator& observable,
                                               double hbar = 1.0);

}  // namespace oscalg
