#include "oscalg/schwinger.hpp"

#include <algorithm>
#include <cmath>

namespace oscalg {

namespace {

struct LiftedPair {
  Operator lower1, raise1, number1;
  Operator lower2, raise2, number2;
  std::vector<int> layout;
};

LiftedPair lifted_modes(SchwingerKind kind, int cutoff) {
  std::vector<int> layout;
  ModeOperators m1{Operator{}, Operator{}, Operator{}};
  ModeOperators m2 = m1;
  switch (kind) {
    case SchwingerKind::kBosonBoson:
      layout = {cutoff, cutoff};
      m1 = boson_mode(cutoff, 1.0);
      m2 = m1;
      break;
    case SchwingerKind::kFermionFermion:
      layout = {2, 2};
      m1 = fermion_mode(1.0);
      m2 = m1;
      break;
    case SchwingerKind::kBosonFermionNaive:
    case SchwingerKind::kBosonFermionCorrected:
      layout = {cutoff, 2};
      m1 = boson_mode(cutoff, 1.0);
      m2 = fermion_mode(1.0);
      break;
  }
  return LiftedPair{lift(m1.lower, 0, layout),  lift(m1.raise, 0, layout),
                    lift(m1.number, 0, layout), lift(m2.lower, 1, layout),
                    lift(m2.raise, 1, layout),  lift(m2.number, 1, layout),
                    layout};
}

}  // namespace

JMLabel::JMLabel(int twice_j, int twice_m) : twice_j(twice_j), twice_m(twice_m) {
  if (twice_j < 0) throw DomainError("j must be nonnegative");
  if (std::abs(twice_m) > twice_j) throw DomainError("|m| must not exceed j");
  if ((twice_j + twice_m) % 2 != 0)
    throw DomainError("j + m and j - m must be integers");
}

SchwingerGenerators build_generators(SchwingerKind kind, int cutoff,
                                     std::optional<JzForm> jz_form, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  if (jz_form.has_value() && kind != SchwingerKind::kBosonFermionCorrected)
    throw DomainError("jz_form applies only to the corrected boson-fermion kind");
  if (kind != SchwingerKind::kFermionFermion && cutoff < 2)
    throw DomainError("boson cutoff must be at least 2");

  const LiftedPair m = lifted_modes(kind, cutoff);
  Operator jplus = Operator::zero(m.number1.dim(), m.layout);
  Operator jz = jplus;

  switch (kind) {
    case SchwingerKind::kBosonBoson:
    case SchwingerKind::kFermionFermion:
    case SchwingerKind::kBosonFermionNaive: {
      jplus = hbar * (m.raise1 * m.lower2);
      jz = (hbar / 2.0) * (m.number1 - m.number2);
      break;
    }
    case SchwingerKind::kBosonFermionCorrected: {
      // (1+N)^(-1/2) has no kernel; the inverse square root is regular.
      const Operator inv_sqrt = spectral_function(
          m.number1, [](double n) { return 1.0 / std::sqrt(1.0 + n); }, 0.0);
      jplus = hbar * (m.raise1 * inv_sqrt * m.lower2);

      const JzForm form = jz_form.value_or(JzForm::kProjector);
      const Operator identity = Operator::identity(m.number1.dim(), m.layout);
      if (form == JzForm::kProjector) {
        // a^dag (1+N)^(-1) a is the projector onto boson occupation >= 1,
        // so this Jz vanishes on the two-mode vacuum.
        const Operator inv = spectral_function(
            m.number1, [](double n) { return 1.0 / (1.0 + n); }, 0.0);
        jz = (hbar / 2.0) *
             (m.raise1 * inv * m.lower1 * (identity - m.number2) - m.number2);
      } else {
        jz = (hbar / 2.0) * (identity - 2.0 * m.number2);
      }
      break;
    }
  }

  std::optional<JzForm> recorded_form;
  if (kind == SchwingerKind::kBosonFermionCorrected)
    recorded_form = jz_form.value_or(JzForm::kProjector);
  return SchwingerGenerators{kind, recorded_form, jplus, jplus.adjoint(), jz, hbar};
}

Operator default_safe_projector(SchwingerKind kind, int cutoff) {
  switch (kind) {
    case SchwingerKind::kFermionFermion:
      return Operator::identity(4, {2, 2});
    case SchwingerKind::kBosonBoson: {
      Matrix p = Matrix::Zero(cutoff * cutoff, cutoff * cutoff);
      for (int n1 = 0; n1 < cutoff; ++n1)
        for (int n2 = 0; n2 < cutoff; ++n2)
          if (n1 + n2 <= cutoff - 2) p(n1 * cutoff + n2, n1 * cutoff + n2) = 1.0;
      return Operator(p, {cutoff, cutoff});
    }
    case SchwingerKind::kBosonFermionNaive:
    case SchwingerKind::kBosonFermionCorrected:
      return tensor_product(safe_level_projector(cutoff),
                            Operator::identity(2, {2}));
  }
  throw DomainError("unknown Schwinger kind");
}

Operator safe_projector_excluding_vacuum(SchwingerKind kind, int cutoff) {
  Operator p = default_safe_projector(kind, cutoff);
  Matrix m = p.matrix();
  m(0, 0) = 0.0;  // basis index 0 is |0,0> in every layout used here
  return Operator(std::move(m), p.layout());
}

double AlgebraReport::max_residual() const {
  return std::max({res_jz_jplus, res_jz_jminus, res_jpjm});
}

AlgebraReport algebra_report(const SchwingerGenerators& g,
                             const Operator& safe_projector) {
  const Operator& p = safe_projector;
  if (!p.is_hermitian())
    throw DomainError("algebra_report: projector is not Hermitian");
  if ((p * p - p).max_norm() > 1e-12)
    throw DomainError("algebra_report: projector is not idempotent");

  const auto projected_norm = [&](const Operator& op) {
    return (p * op * p).max_norm();
  };

  const Operator comm_plus = bracket(g.jz, g.jplus, BracketKind::kCommutator);
  const Operator comm_minus = bracket(g.jz, g.jminus, BracketKind::kCommutator);
  const Operator comm_pm = bracket(g.jplus, g.jminus, BracketKind::kCommutator);

  return AlgebraReport{projected_norm(comm_plus - g.hbar * g.jplus),
                       projected_norm(comm_minus + g.hbar * g.jminus),
                       projected_norm(comm_pm - 2.0 * g.hbar * g.jz),
                       1e-10 * g.hbar};
}

Operator casimir(const SchwingerGenerators& g) {
  return g.jz * g.jz +
         0.5 * bracket(g.jplus, g.jminus, BracketKind::kAnticommutator);
}

namespace {

std::optional<double> infer_half_integer_j(double eigenvalue, double hbar) {
  const double ratio = eigenvalue / (hbar * hbar);
  if (ratio < -1e-9) return std::nullopt;
  // j(j+1) = ratio
  const double j = 0.5 * (-1.0 + std::sqrt(std::max(0.0, 1.0 + 4.0 * ratio)));
  const double nearest = std::round(2.0 * j) / 2.0;
  if (nearest < 0.0 || std::abs(j - nearest) > 1e-6) return std::nullopt;
  return nearest;
}

}  // namespace

std::vector<CasimirCluster> casimir_spectrum(const SchwingerGenerators& g,
                                             const Operator& safe_projector) {
  const Operator restricted = restrict_to_range(casimir(g), safe_projector);
  const EigenSystem sys = hermitian_eigensystem(restricted);

  const double cluster_tol = 1e-8 * g.hbar * g.hbar;
  std::vector<CasimirCluster> clusters;
  for (int k = 0; k < restricted.dim(); ++k) {
    const double value = sys.eigenvalues[k];
    if (!clusters.empty() &&
        std::abs(value - clusters.back().eigenvalue) <= cluster_tol) {
      ++clusters.back().multiplicity;
      continue;
    }
    clusters.push_back(CasimirCluster{value, 1, infer_half_integer_j(value, g.hbar)});
  }
  return clusters;
}

Vector schwinger_state(const JMLabel& label, int cutoff) {
  const int n1 = label.n1(), n2 = label.n2();
  if (n1 > cutoff - 1 || n2 > cutoff - 1)
    throw DomainError("cutoff too small for requested |j,m> state");

  const std::vector<int> layout{cutoff, cutoff};
  const ModeOperators mode = boson_mode(cutoff, 1.0);
  const Operator raise1 = lift(mode.raise, 0, layout);
  const Operator raise2 = lift(mode.raise, 1, layout);

  Vector state = Vector::Zero(cutoff * cutoff);
  state[0] = 1.0;  // |0,0>
  for (int k = 0; k < n1; ++k) state = raise1.matrix() * state;
  for (int k = 0; k < n2; ++k) state = raise2.matrix() * state;

  double norm_factor = 1.0;
  for (int k = 2; k <= n1; ++k) norm_factor *= double(k);
  for (int k = 2; k <= n2; ++k) norm_factor *= double(k);
  return state / std::sqrt(norm_factor);
}

JMLabel jm_map(int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw DomainError("occupations must be nonnegative");
  return JMLabel(n1 + n2, n1 - n2);
}

ShiftTheoremReport shift_theorem_check(double r, int cutoff) {
  if (cutoff < 3) throw DomainError("shift_theorem_check needs cutoff >= 3");

  const ModeOperators mode = boson_mode(cutoff, 1.0);
  const auto power = [r](double x) { return std::pow(x, r); };
  const Operator n_pow = spectral_function(mode.number, power, 0.0);
  const Operator shifted_pow = spectral_function(
      mode.number, [r](double x) { return std::pow(1.0 + x, r); }, 0.0);

  const Operator p = safe_level_projector(cutoff);
  const auto safe_norm = [&](const Operator& op) { return (p * op * p).max_norm(); };

  return ShiftTheoremReport{
      r, safe_norm(mode.lower * n_pow - shifted_pow * mode.lower),
      safe_norm(n_pow * mode.raise - mode.raise * shifted_pow)};
}

std::string to_string(SchwingerKind kind) {
  switch (kind) {
    case SchwingerKind::kBosonBoson: return "bb";
    case SchwingerKind::kFermionFermion: return "ff";
    case SchwingerKind::kBosonFermionNaive: return "bf_naive";
    case SchwingerKind::kBosonFermionCorrected: return "bf_corrected";
  }
  return "unknown";
}

std::string to_string(JzForm form) {
  return form == JzForm::kProjector ? "projector" : "occupation";
}

}  // namespace oscalg
