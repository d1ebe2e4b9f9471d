#include "oscalg/fock.hpp"

#include <cmath>
#include <string>

namespace oscalg {

namespace {

void require_positive_omega(double omega) {
  if (!(omega > 0.0)) throw DomainError("mode frequency must be positive");
}

}  // namespace

ModeSpace ModeSpace::boson(int cutoff, double omega) {
  if (cutoff < 2)
    throw DomainError("boson cutoff must be at least 2, got " +
                      std::to_string(cutoff));
  require_positive_omega(omega);
  return ModeSpace{ModeKind::kBoson, cutoff, omega};
}

ModeSpace ModeSpace::fermion(double omega) {
  require_positive_omega(omega);
  return ModeSpace{ModeKind::kFermion, 2, omega};
}

ModeOperators boson_mode(int cutoff, double omega) {
  const ModeSpace mode = ModeSpace::boson(cutoff, omega);
  Matrix lower = Matrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) lower(n - 1, n) = std::sqrt(double(n));
  Operator a(lower, {cutoff});
  return ModeOperators{a, a.adjoint(), a.adjoint() * a};
}

ModeOperators boson_mode(const ModeSpace& mode) {
  return boson_mode(mode.cutoff, mode.omega);
}

ModeOperators fermion_mode(double omega) {
  require_positive_omega(omega);
  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = 1.0;  // f|1> = |0>
  Operator f(lower, {2});
  return ModeOperators{f, f.adjoint(), f.adjoint() * f};
}

ModeOperators fermion_mode(const ModeSpace& mode) {
  return fermion_mode(mode.omega);
}

Operator lift(const Operator& op, int position, const std::vector<int>& layout) {
  if (position < 0 || position >= static_cast<int>(layout.size()))
    throw ShapeError("lift: position " + std::to_string(position) +
                     " outside layout of " + std::to_string(layout.size()) +
                     " modes");
  if (op.dim() != layout[position])
    throw ShapeError("lift: operator dim " + std::to_string(op.dim()) +
                     " does not match layout slot " +
                     std::to_string(layout[position]));

  Operator out = position == 0 ? op.with_layout({layout[0]})
                               : Operator::identity(layout[0], {layout[0]});
  for (int k = 1; k < static_cast<int>(layout.size()); ++k) {
    const Operator factor = k == position
                                ? op.with_layout({layout[k]})
                                : Operator::identity(layout[k], {layout[k]});
    out = tensor_product(out, factor);
  }
  return out;
}

Operator hamiltonian(const ModeSpace& mode, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const bool boson = mode.kind == ModeKind::kBoson;
  const ModeOperators ops = boson ? boson_mode(mode) : fermion_mode(mode);
  const double shift = boson ? 0.5 : -0.5;
  return hbar * mode.omega *
         (ops.number + shift * Operator::identity(ops.number.dim(),
                                                  ops.number.layout()));
}

Operator safe_level_projector(int cutoff) {
  Matrix p = Matrix::Identity(cutoff, cutoff);
  p(cutoff - 1, cutoff - 1) = 0.0;
  return Operator(p, {cutoff});
}

}  // namespace oscalg
