#include "oscalg/thermo.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace oscalg {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0))
    throw DomainError(std::string(name) + " must be positive");
}

// j must be a positive half-integer.
double validated_half_integer_j(double j) {
  if (!(j > 0.0)) throw DomainError("j must be positive");
  const double twice = 2.0 * j;
  if (std::abs(twice - std::round(twice)) > 1e-9)
    throw DomainError("j must be a half-integer");
  return std::round(twice) / 2.0;
}

// antiderivative of 1/(1+e^x) - 1/2, evaluated stably: x/2 - ln(1+e^x)
double fermi_antiderivative(double x) {
  return x >= 0.0 ? -0.5 * x - std::log1p(std::exp(-x))
                  : 0.5 * x - std::log1p(std::exp(x));
}

}  // namespace

EnsembleSpec::EnsembleSpec(std::vector<ModeSpace> modes_in, double beta_in)
    : modes(std::move(modes_in)), beta(beta_in) {
  if (modes.empty()) throw DomainError("ensemble needs at least one mode");
  require_positive(beta, "beta");
}

double closed_partition(const ModeSpace& mode, double beta, double hbar) {
  require_positive(beta, "beta");
  const double x = beta * hbar * mode.omega;
  if (mode.kind == ModeKind::kFermion) return 2.0 * std::cosh(0.5 * x);
  return std::exp(-0.5 * x) / (1.0 - std::exp(-x));
}

double trace_partition(const Operator& h, double beta) {
  require_positive(beta, "beta");
  return trace_exp(h, beta);
}

double ensemble_log_partition(const EnsembleSpec& spec, double hbar) {
  double sum = 0.0;
  for (const ModeSpace& mode : spec.modes)
    sum += std::log(closed_partition(mode, spec.beta, hbar));
  return sum;
}

double mean_energy(const EnsembleSpec& spec, double hbar) {
  double sum = 0.0;
  for (const ModeSpace& mode : spec.modes) {
    const double e = hbar * mode.omega;
    const double x = spec.beta * e;
    if (mode.kind == ModeKind::kFermion)
      sum += -e * (0.5 - 1.0 / (1.0 + std::exp(x)));
    else
      sum += e * (0.5 + 1.0 / std::expm1(x));
  }
  return sum;
}

double mean_energy_fd(const EnsembleSpec& spec, double delta, double hbar) {
  require_positive(delta, "delta");
  if (!(spec.beta - delta > 0.0))
    throw DomainError("beta - delta must stay positive");

  const auto log_z_trace = [&](double beta) {
    double sum = 0.0;
    for (const ModeSpace& mode : spec.modes)
      sum += std::log(trace_partition(hamiltonian(mode, hbar), beta));
    return sum;
  };
  return -(log_z_trace(spec.beta + delta) - log_z_trace(spec.beta - delta)) /
         (2.0 * delta);
}

ThermalReport thermal_report(const EnsembleSpec& spec, double fd_delta,
                             double hbar) {
  double log_z_trace = 0.0;
  for (const ModeSpace& mode : spec.modes)
    log_z_trace += std::log(trace_partition(hamiltonian(mode, hbar), spec.beta));

  ThermalReport report{spec.beta,
                       ensemble_log_partition(spec, hbar),
                       log_z_trace,
                       mean_energy(spec, hbar),
                       mean_energy_fd(spec, fd_delta, hbar),
                       0.0,
                       0.0};
  report.residual_logZ = std::abs(report.logZ_closed - report.logZ_trace);
  report.residual_energy = std::abs(report.energy_closed - report.energy_fd);
  return report;
}

ContinuumEnergy continuum_energy(double eps_m, double temperature,
                                 double boltzmann_k, double eps_min) {
  if (eps_m < eps_min)
    throw DomainError("upper limit must not lie below the lower limit");
  require_positive(temperature, "temperature");
  require_positive(boltzmann_k, "boltzmann_k");

  const double kt = boltzmann_k * temperature;
  const auto integrand = [](double x) { return 1.0 / (1.0 + std::exp(x)) - 0.5; };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          integrand, eps_min, eps_m, 12, 1e-12);

  const double closed =
      kt * (fermi_antiderivative(eps_m) - fermi_antiderivative(eps_min));
  const double quadrature = kt * integral;
  const double alt = closed - kt * (eps_m - eps_min);

  return ContinuumEnergy{closed, quadrature, alt, std::abs(alt - quadrature)};
}

RotorEquivalence rotor_equivalence(double omega, double j, int n_oscillators,
                                   double hbar) {
  require_positive(omega, "omega");
  require_positive(hbar, "hbar");
  const double jj = validated_half_integer_j(j);
  if (n_oscillators != 2 && n_oscillators != 3)
    throw DomainError("rotor_equivalence supports 2 or 3 oscillators");

  // Ground-state vibrational energy, hbar*omega/2 per mode. For n = 3 one
  // mode is left out of the rotor and its zero-point energy is subtracted
  // back out; both countings leave hbar*omega on the rotor side.
  const double rotor_energy = n_oscillators == 2
                                  ? 2.0 * (hbar * omega / 2.0)
                                  : 3.0 * (hbar * omega / 2.0) - hbar * omega / 2.0;

  const double casimir_value = jj * (jj + 1.0);
  const double inertia = hbar * hbar * casimir_value / (2.0 * rotor_energy);
  const double rotor_omega = hbar * std::sqrt(casimir_value) / inertia;

  std::ostringstream note;
  note << "ground-state energy counted as hbar*omega/2 per mode; ";
  if (n_oscillators == 2) {
    note << "rotor level hbar^2*j(j+1)/(2I) matched to the full pair energy";
  } else {
    note << "rotor plus one leftover mode matched to three modes; counting "
            "3/2*hbar*omega per mode instead would give inertia "
         << inertia / 4.0 << " and rotor frequency " << 4.0 * rotor_omega;
  }
  return RotorEquivalence{inertia, rotor_omega, jj, note.str()};
}

RotorEquivalence fermion_pair_inertia(double omega1, double omega2, double beta,
                                      double j, double hbar) {
  const double jj = validated_half_integer_j(j);
  const EnsembleSpec pair(
      {ModeSpace::fermion(omega1), ModeSpace::fermion(omega2)}, beta);
  const double energy = mean_energy(pair, hbar);
  if (energy <= 0.0) {
    std::ostringstream why;
    why << "fermionic pair thermal energy " << energy
        << " is non-positive at beta " << beta
        << "; the rotor level hbar^2*j(j+1)/(2I) is positive for every "
           "positive inertia, so no inertia solves the match";
    throw DomainError(why.str());
  }
  const double inertia = hbar * hbar * jj * (jj + 1.0) / (2.0 * energy);
  return RotorEquivalence{inertia, hbar * std::sqrt(jj * (jj + 1.0)) / inertia,
                          jj, "matched to the thermal energy of the pair"};
}

double rotational_partition(double inertia, double beta, double j_max,
                            double hbar) {
  require_positive(inertia, "inertia");
  require_positive(beta, "beta");
  if (j_max < 0.0) throw DomainError("j_max must be nonnegative");

  double sum = 0.0;
  for (int j = 0; j <= static_cast<int>(std::floor(j_max)); ++j) {
    const double level = hbar * hbar * j * (j + 1.0) / (2.0 * inertia);
    sum += (2.0 * j + 1.0) * std::exp(-beta * level);
  }
  return sum;
}

std::vector<SpectralLine> spectral_frequencies(const Operator& h,
                                               const Operator& observable,
                                               double hbar) {
  require_positive(hbar, "hbar");
  if (h.dim() != observable.dim())
    throw ShapeError("spectral_frequencies: dimension mismatch");

  const EigenSystem sys = hermitian_eigensystem(h);
  const Matrix elements =
      sys.eigenvectors.adjoint() * observable.matrix() * sys.eigenvectors;

  struct RawLine {
    double frequency;
    double weight;
  };
  std::vector<RawLine> raw;
  double max_freq = 0.0;
  for (int i = 0; i < h.dim(); ++i) {
    for (int j = 0; j < h.dim(); ++j) {
      const double amplitude = std::abs(elements(i, j));
      if (amplitude <= 1e-10) continue;
      const double freq = std::abs(sys.eigenvalues[i] - sys.eigenvalues[j]) / hbar;
      raw.push_back(RawLine{freq, amplitude * amplitude});
      max_freq = std::max(max_freq, freq);
    }
  }
  std::sort(raw.begin(), raw.end(), [](const RawLine& a, const RawLine& b) {
    return a.frequency < b.frequency;
  });

  const double merge_tol = std::max(1e-12, 1e-9 * max_freq);
  std::vector<SpectralLine> lines;
  for (const RawLine& line : raw) {
    if (!lines.empty() && line.frequency - lines.back().frequency <= merge_tol) {
      lines.back().weight += line.weight;
      continue;
    }
    lines.push_back(SpectralLine{line.frequency, line.weight});
  }
  return lines;
}

}  // namespace oscalg
