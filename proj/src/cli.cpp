#include "oscalg/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "oscalg/grassmann.hpp"
#include "oscalg/schwinger.hpp"

namespace oscalg::cli {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json grassmann_to_json(const GrassmannElement& e) {
  Json terms = Json::array();
  for (const auto& [mask, coeff] : e.terms()) {
    std::string monomial;
    for (std::size_t g = 0; g < e.generators().size(); ++g) {
      if (!(mask & (GrassmannElement::Mask{1} << g))) continue;
      if (!monomial.empty()) monomial += "*";
      monomial += e.generators()[g];
    }
    if (monomial.empty()) monomial = "1";
    terms.push_back(Json{{"monomial", monomial}, {"coefficient", complex_to_json(coeff)}});
  }
  return Json{{"text", e.to_string()}, {"terms", terms}};
}

Json clusters_to_json(const std::vector<CasimirCluster>& clusters) {
  Json out = Json::array();
  for (const CasimirCluster& c : clusters) {
    Json entry = Json::object();
    entry["eigenvalue"] = c.eigenvalue;
    entry["multiplicity"] = c.multiplicity;
    if (c.j.has_value())
      entry["j"] = *c.j;
    else
      entry["j"] = nullptr;
    out.push_back(entry);
  }
  return out;
}

// ---------------------------------------------------------------------
// deterministic JSON rendering
// ---------------------------------------------------------------------

void dump_json(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        dump_json(it.value(), out);
      }
      out += '}';
      return;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        dump_json(item, out);
      }
      out += ']';
      return;
    }
    case Json::value_t::string:
      out += nlohmann::json(j.get<std::string>()).dump();
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += "null";
      return;
  }
}

Json report_to_json(const RunReport& r) {
  Json checks = Json::array();
  for (const Check& c : r.checks)
    checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"max_error", c.max_error}});

  Json j = Json::object();
  j["command"] = r.command;
  j["params"] = r.params;
  j["results"] = r.results;
  j["checks"] = checks;
  j["exit_code"] = r.exit_code;
  return j;
}

std::string csv_cell(const Json& value) {
  if (value.is_number_float()) return format_number(value.get<double>());
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_string()) return value.get<std::string>();
  if (value.is_null()) return "";
  return value.dump();
}

std::string render_csv(const RunReport& r) {
  std::string out;
  const auto emit_rows = [&](const Json& rows, const std::vector<std::string>& columns) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += csv_cell(row.contains(columns[c]) ? row.at(columns[c]) : Json());
      }
      out += '\n';
    }
  };

  if (r.results.contains("sweep")) {
    emit_rows(r.results.at("sweep"),
              {"beta", "logZ_closed", "logZ_trace", "energy_closed", "energy_fd"});
    return out;
  }
  if (r.results.contains("clusters")) {
    emit_rows(r.results.at("clusters"), {"eigenvalue", "multiplicity", "j"});
    return out;
  }
  if (r.results.contains("lines")) {
    emit_rows(r.results.at("lines"), {"frequency", "weight"});
    return out;
  }
  throw DomainError("csv output is only defined for sweep and spectrum reports");
}

// ---------------------------------------------------------------------
// shared option state
// ---------------------------------------------------------------------

struct GlobalOptions {
  double hbar = 1.0;
  double boltzmann_k = 1.0;
  int cutoff = 16;
  double tol = 0.0;  // <= 0: per-check defaults
  std::string output = "json";
  std::string out_path;

  double pick(double default_tol) const { return tol > 0.0 ? tol : default_tol; }
};

SchwingerKind parse_kind(const std::string& kind) {
  if (kind == "bb") return SchwingerKind::kBosonBoson;
  if (kind == "ff") return SchwingerKind::kFermionFermion;
  if (kind == "bf_naive") return SchwingerKind::kBosonFermionNaive;
  if (kind == "bf_corrected") return SchwingerKind::kBosonFermionCorrected;
  throw ParseError("unknown kind: " + kind);
}

std::optional<JzForm> parse_jz_form(const std::string& form) {
  if (form.empty()) return std::nullopt;
  if (form == "projector") return JzForm::kProjector;
  if (form == "occupation") return JzForm::kOccupation;
  throw ParseError("unknown jz form: " + form);
}

// ---------------------------------------------------------------------
// schwinger helpers shared by verify/casimir
// ---------------------------------------------------------------------

Operator lifted_total_number(SchwingerKind kind, int cutoff) {
  std::vector<int> layout;
  Operator n1, n2;
  switch (kind) {
    case SchwingerKind::kBosonBoson:
      layout = {cutoff, cutoff};
      n1 = lift(boson_mode(cutoff, 1.0).number, 0, layout);
      n2 = lift(boson_mode(cutoff, 1.0).number, 1, layout);
      break;
    case SchwingerKind::kFermionFermion:
      layout = {2, 2};
      n1 = lift(fermion_mode(1.0).number, 0, layout);
      n2 = lift(fermion_mode(1.0).number, 1, layout);
      break;
    default:
      layout = {cutoff, 2};
      n1 = lift(boson_mode(cutoff, 1.0).number, 0, layout);
      n2 = lift(fermion_mode(1.0).number, 1, layout);
      break;
  }
  return n1 + n2;
}

void add_algebra_checks(RunReport& report, const AlgebraReport& algebra,
                        const std::string& prefix, double tol) {
  report.add_check(prefix + "su2_jz_jplus", algebra.res_jz_jplus <= tol,
                   algebra.res_jz_jplus);
  report.add_check(prefix + "su2_jz_jminus", algebra.res_jz_jminus <= tol,
                   algebra.res_jz_jminus);
  report.add_check(prefix + "su2_jplus_jminus", algebra.res_jpjm <= tol,
                   algebra.res_jpjm);
}

Json eigenvalues_to_json(const Operator& restricted) {
  const EigenSystem sys = hermitian_eigensystem(restricted);
  Json values = Json::array();
  for (int k = 0; k < restricted.dim(); ++k) values.push_back(sys.eigenvalues[k]);
  return values;
}

// ---------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------

void run_verify_fermion(RunReport& report, const GlobalOptions& g, double omega) {
  const ModeOperators f = fermion_mode(omega);
  const Operator identity = Operator::identity(2, {2});
  const double tol = g.pick(1e-12);

  report.add_check("lower_squares_to_zero", (f.lower * f.lower).max_norm() <= tol,
                   (f.lower * f.lower).max_norm());
  const double anti = (bracket(f.lower, f.raise, BracketKind::kAnticommutator) -
                       identity).max_norm();
  report.add_check("anticommutator_lower_raise_is_identity", anti <= tol, anti);
  const double idem = (f.number * f.number - f.number).max_norm();
  report.add_check("number_is_idempotent", idem <= tol, idem);

  // bracket table with the number operator: the commutators give -f, +f^dag
  // while both anticommutators come out positive.
  const double comm_lower =
      (bracket(f.number, f.lower, BracketKind::kCommutator) + f.lower).max_norm();
  report.add_check("commutator_number_lower_is_minus_lower", comm_lower <= tol,
                   comm_lower);
  const double comm_raise =
      (bracket(f.number, f.raise, BracketKind::kCommutator) - f.raise).max_norm();
  report.add_check("commutator_number_raise_is_plus_raise", comm_raise <= tol,
                   comm_raise);
  const double anti_lower =
      (bracket(f.number, f.lower, BracketKind::kAnticommutator) - f.lower).max_norm();
  report.add_check("anticommutator_number_lower_is_plus_lower", anti_lower <= tol,
                   anti_lower);
  const double anti_raise =
      (bracket(f.number, f.raise, BracketKind::kAnticommutator) - f.raise).max_norm();
  report.add_check("anticommutator_number_raise_is_plus_raise", anti_raise <= tol,
                   anti_raise);

  // Pauli decomposition: in this basis lower = (sigma1 + i sigma2)/2; the
  // commonly printed (sigma1 - i sigma2)/2 matches after swapping the basis
  // labels, i.e. conjugating with sigma1.
  Matrix sigma1(2, 2), sigma2(2, 2);
  sigma1 << 0, 1, 1, 0;
  sigma2 << 0, Complex(0, -1), Complex(0, 1), 0;
  const Matrix lower_plus = 0.5 * (sigma1 + Complex(0, 1) * sigma2);
  const Matrix lower_minus = 0.5 * (sigma1 - Complex(0, 1) * sigma2);
  const double pauli_direct = (f.lower.matrix() - lower_plus).cwiseAbs().maxCoeff();
  report.add_check("pauli_form_in_this_basis", pauli_direct <= tol, pauli_direct);
  const double pauli_swapped =
      (sigma1 * f.lower.matrix() * sigma1 - lower_minus).cwiseAbs().maxCoeff();
  report.add_check("pauli_form_after_label_swap", pauli_swapped <= tol, pauli_swapped);

  const Operator h = hamiltonian(ModeSpace::fermion(omega), g.hbar);
  const double h_form =
      (h - 0.5 * g.hbar * omega * (f.raise * f.lower - f.lower * f.raise)).max_norm();
  report.add_check("hamiltonian_is_half_number_commutator_form", h_form <= tol, h_form);

  report.results["h_diagonal"] = Json::array({h(0, 0).real(), h(1, 1).real()});
  report.results["note"] =
      "bracket values (-lower, +raise) with the number operator are commutator "
      "values; read as anticommutators both signs are positive. The Hamiltonian "
      "diagonal here is (-1/2, +1/2)*hbar*omega on (|0>,|1>); the opposite "
      "assignment corresponds to swapped basis labels.";
}

void run_verify_schwinger(RunReport& report, const GlobalOptions& g,
                          SchwingerKind kind, const std::string& jz_form_text) {
  const double hbar = g.hbar;
  const double su2_tol = g.pick(1e-10 * hbar);
  const int cutoff = g.cutoff;

  if (kind == SchwingerKind::kBosonFermionCorrected) {
    const auto requested = parse_jz_form(jz_form_text);
    std::vector<JzForm> forms;
    if (requested.has_value())
      forms.push_back(*requested);
    else
      forms = {JzForm::kProjector, JzForm::kOccupation};

    for (const JzForm form : forms) {
      const std::string prefix = to_string(form) + "_";
      const SchwingerGenerators gen = build_generators(kind, cutoff, form, hbar);
      // The occupation-form Jz breaks [J+,J-] = 2 hbar Jz on the two-mode
      // vacuum, so its algebra is checked on the vacuum-free subspace and
      // the vacuum residual is reported alongside.
      const Operator safe = form == JzForm::kProjector
                                ? default_safe_projector(kind, cutoff)
                                : safe_projector_excluding_vacuum(kind, cutoff);
      add_algebra_checks(report, algebra_report(gen, safe), prefix, su2_tol);

      const Operator j2 = casimir(gen);
      const Operator no_vacuum = safe_projector_excluding_vacuum(kind, cutoff);
      const Operator expected =
          0.75 * hbar * hbar * Operator::identity(j2.dim(), j2.layout());
      const double const_res =
          (no_vacuum * (j2 - expected) * no_vacuum).max_norm();
      const double const_tol = g.pick(1e-10 * hbar * hbar);
      report.add_check(prefix + "casimir_constant_off_vacuum",
                       const_res <= const_tol, const_res);

      const double vacuum_value = j2(0, 0).real();
      const double vacuum_expected =
          form == JzForm::kProjector ? 0.0 : 0.25 * hbar * hbar;
      const double vacuum_err = std::abs(vacuum_value - vacuum_expected);
      report.add_check(prefix + "vacuum_casimir_stable",
                       vacuum_err <= g.pick(1e-12), vacuum_err);
      report.results[to_string(form)] =
          Json{{"vacuum_casimir", vacuum_value},
               {"safe_projector", form == JzForm::kProjector
                                      ? "boson occupation <= cutoff-2"
                                      : "boson occupation <= cutoff-2, vacuum excluded"}};
    }

    // Raising out of an occupied fermion state lands in the empty one: the
    // matrix action is J+|n,1> = hbar|n+1,0>, not a fermion-label-preserving
    // shift.
    const SchwingerGenerators gen =
        build_generators(kind, cutoff, JzForm::kProjector, hbar);
    const Vector column = gen.jplus.matrix().col(1);  // source |0,1>
    int target = 0;
    for (int i = 1; i < column.size(); ++i)
      if (std::abs(column[i]) > std::abs(column[target])) target = i;
    std::ostringstream action;
    action << "jplus maps |0,1> to " << format_number(column[target].real())
           << "*|" << target / 2 << "," << target % 2 << ">";
    report.results["jplus_action"] = action.str();
    return;
  }

  const SchwingerGenerators gen = build_generators(kind, cutoff, std::nullopt, hbar);
  const Operator safe = default_safe_projector(kind, cutoff);
  add_algebra_checks(report, algebra_report(gen, safe), "", su2_tol);

  const Operator j2 = casimir(gen);
  const Operator n_total = lifted_total_number(kind, cutoff);
  const Operator identity = Operator::identity(j2.dim(), j2.layout());
  const double h2 = hbar * hbar;

  switch (kind) {
    case SchwingerKind::kBosonBoson: {
      // J^2 = hbar^2 (N/2)(N/2 + 1), N the total number operator
      const Operator closed = 0.25 * h2 * (n_total * (n_total + 2.0 * identity));
      const double res = (safe * (j2 - closed) * safe).max_norm();
      const double tol = g.pick(1e-10 * h2);
      report.add_check("casimir_total_number_form", res <= tol, res);
      const double quarter_res = (safe * (j2 - 0.25 * closed) * safe).max_norm();
      report.results["quarter_prefactor_residual"] = quarter_res;
      report.results["note"] =
          "a quarter-prefactor variant of the closed form misses the computed "
          "Casimir by the reported residual; the unscaled form matches";

      const auto clusters = casimir_spectrum(gen, safe);
      double j_err = 0.0, mult_err = 0.0;
      for (const CasimirCluster& c : clusters) {
        if (!c.j.has_value()) {
          j_err = std::max(j_err, 1.0);
          continue;
        }
        j_err = std::max(j_err, std::abs(c.eigenvalue - h2 * (*c.j) * (*c.j + 1.0)));
        mult_err = std::max(mult_err,
                            std::abs(double(c.multiplicity) - (2.0 * (*c.j) + 1.0)));
      }
      report.add_check("casimir_j_values", j_err <= g.pick(1e-10 * h2), j_err);
      report.add_check("casimir_multiplicities", mult_err == 0.0, mult_err);
      report.results["clusters"] = clusters_to_json(clusters);
      break;
    }
    case SchwingerKind::kFermionFermion: {
      const std::vector<int> layout{2, 2};
      const Operator nf1 = lift(fermion_mode(1.0).number, 0, layout);
      const Operator nf2 = lift(fermion_mode(1.0).number, 1, layout);
      // J^2 = hbar^2 (N/2)(N/2+1) - 2 hbar^2 N1 N2
      const Operator closed = 0.25 * h2 * (n_total * (n_total + 2.0 * identity)) -
                              2.0 * h2 * (nf1 * nf2);
      const double res = (j2 - closed).max_norm();
      report.add_check("casimir_occupation_form", res <= g.pick(1e-12), res);

      const EigenSystem sys = hermitian_eigensystem(j2);
      double spectrum_err = 0.0;
      const double expected[4] = {0.0, 0.0, 0.75 * h2, 0.75 * h2};
      for (int k = 0; k < 4; ++k)
        spectrum_err = std::max(spectrum_err, std::abs(sys.eigenvalues[k] - expected[k]));
      report.add_check("casimir_eigenvalues", spectrum_err <= g.pick(1e-12),
                       spectrum_err);
      break;
    }
    case SchwingerKind::kBosonFermionNaive: {
      const std::vector<int> layout{cutoff, 2};
      const Operator nb = lift(boson_mode(cutoff, 1.0).number, 0, layout);
      const Operator nf = lift(fermion_mode(1.0).number, 1, layout);
      // J^2 = (hbar^2/4) (Nf(Nf+2) + Nb(Nb+2) - {Nb,Nf})
      const Operator closed =
          0.25 * h2 *
          (nf * (nf + 2.0 * identity) + nb * (nb + 2.0 * identity) -
           bracket(nb, nf, BracketKind::kAnticommutator));
      const double res = (safe * (j2 - closed) * safe).max_norm();
      report.add_check("casimir_mixed_form", res <= g.pick(1e-12), res);

      // per-state laws: (hbar^2/4) n(n+2) on |n,0>, (hbar^2/4)(n^2+3) on |n,1>
      double law_empty = 0.0, law_occupied = 0.0;
      for (int n = 0; n <= cutoff - 2; ++n) {
        law_empty = std::max(law_empty, std::abs(j2(2 * n, 2 * n).real() -
                                                 0.25 * h2 * n * (n + 2.0)));
        law_occupied =
            std::max(law_occupied, std::abs(j2(2 * n + 1, 2 * n + 1).real() -
                                            0.25 * h2 * (double(n) * n + 3.0)));
      }
      report.add_check("eigenlaw_fermion_empty", law_empty <= g.pick(1e-10),
                       law_empty);
      report.add_check("eigenlaw_fermion_occupied", law_occupied <= g.pick(1e-10),
                       law_occupied);

      // The commutator [J+,J-] equals 2 hbar Jz minus 2 hbar^2 Nb*Nf, so the
      // su(2) closure fails on every doubly excited state; it survives only
      // on the total-occupation <= 1 sector.
      Matrix low = Matrix::Zero(j2.dim(), j2.dim());
      low(0, 0) = low(1, 1) = low(2, 2) = 1.0;
      const AlgebraReport sector =
          algebra_report(gen, Operator(low, {cutoff, 2}));
      report.results["su2_low_occupation_residual"] = sector.max_residual();
      const Operator defect = bracket(gen.jplus, gen.jminus, BracketKind::kCommutator) -
                              2.0 * hbar * gen.jz + 2.0 * h2 * (nb * nf);
      report.results["jpjm_defect_residual"] = (safe * defect * safe).max_norm();
      report.results["note"] =
          "[J+,J-] - 2*hbar*Jz equals -2*hbar^2*Nb*Nf on this construction; the "
          "su(2) relations close only on states with total occupation <= 1";
      break;
    }
    default:
      break;
  }
}

void run_casimir(RunReport& report, const GlobalOptions& g,
                 const std::string& kind_text, const std::string& jz_form_text) {
  const SchwingerKind kind = parse_kind(kind_text);
  const auto jz_form = parse_jz_form(jz_form_text);
  if (jz_form.has_value() && kind != SchwingerKind::kBosonFermionCorrected)
    throw ParseError("--jz-form applies only to kind bf_corrected");

  const SchwingerGenerators gen = build_generators(kind, g.cutoff, jz_form, g.hbar);
  const Operator safe = kind == SchwingerKind::kBosonFermionCorrected
                            ? safe_projector_excluding_vacuum(kind, g.cutoff)
                            : default_safe_projector(kind, g.cutoff);

  const Operator restricted = restrict_to_range(casimir(gen), safe);
  report.results["eigenvalues"] = eigenvalues_to_json(restricted);
  report.results["clusters"] = clusters_to_json(casimir_spectrum(gen, safe));
  if (kind == SchwingerKind::kBosonFermionCorrected) {
    report.results["vacuum_casimir"] = casimir(gen)(0, 0).real();
    report.results["safe_projector"] =
        "boson occupation <= cutoff-2, vacuum excluded";
  }
}

void run_state(RunReport& report, const GlobalOptions& g, const std::string& j_text,
               const std::string& m_text) {
  const double j = parse_half_integer(j_text);
  const double m = parse_half_integer(m_text);
  const JMLabel label(int(std::lround(2 * j)), int(std::lround(2 * m)));

  const Vector state = schwinger_state(label, g.cutoff);
  const SchwingerGenerators gen =
      build_generators(SchwingerKind::kBosonBoson, g.cutoff, std::nullopt, g.hbar);

  const double norm_err = std::abs(state.norm() - 1.0);
  report.add_check("unit_norm", norm_err <= g.pick(1e-12), norm_err);

  const double jz_res =
      (gen.jz.matrix() * state - g.hbar * m * state).cwiseAbs().maxCoeff();
  report.add_check("jz_eigenvector", jz_res <= g.pick(1e-10), jz_res);
  const double j2_res = (casimir(gen).matrix() * state -
                         g.hbar * g.hbar * j * (j + 1.0) * state)
                            .cwiseAbs()
                            .maxCoeff();
  report.add_check("casimir_eigenvector", j2_res <= g.pick(1e-10), j2_res);

  Json components = Json::array();
  for (int idx = 0; idx < state.size(); ++idx) {
    if (std::abs(state[idx]) <= 1e-14) continue;
    components.push_back(Json{{"n1", idx / g.cutoff},
                              {"n2", idx % g.cutoff},
                              {"amplitude", complex_to_json(state[idx])}});
  }
  report.results["n1"] = label.n1();
  report.results["n2"] = label.n2();
  report.results["components"] = components;
}

void run_sweep(RunReport& report, const GlobalOptions& g, const std::string& path,
               std::vector<double> betas, double delta, bool check_energy) {
  if (betas.empty()) betas = {1.0};

  double omega_sum = 0.0;
  Json sweep = Json::array();
  double worst_logz = 0.0, worst_energy = 0.0;
  for (const double beta : betas) {
    const EnsembleSpec spec = parse_ensemble_file(path, beta);
    if (omega_sum == 0.0)
      for (const ModeSpace& mode : spec.modes) omega_sum += mode.omega;
    const ThermalReport row = thermal_report(spec, delta, g.hbar);
    worst_logz = std::max(worst_logz, row.residual_logZ);
    worst_energy = std::max(worst_energy, row.residual_energy);
    sweep.push_back(Json{{"beta", row.beta},
                         {"logZ_closed", row.logZ_closed},
                         {"logZ_trace", row.logZ_trace},
                         {"energy_closed", row.energy_closed},
                         {"energy_fd", row.energy_fd}});
  }
  report.results["sweep"] = sweep;

  if (check_energy)
    report.add_check("energy_closed_vs_fd",
                     worst_energy <= g.pick(1e-6 * g.hbar * omega_sum), worst_energy);
  else
    report.add_check("logZ_closed_vs_trace", worst_logz <= g.pick(1e-9), worst_logz);
}

void run_rotor(RunReport& report, const GlobalOptions& g, double omega,
               const std::string& j_text, int n_oscillators, double beta,
               const std::string& jmax_text, bool fermion_pair, double omega2) {
  const double j = parse_half_integer(j_text);

  if (fermion_pair) {
    if (!(beta > 0.0)) throw ParseError("--pair needs --beta > 0");
    const RotorEquivalence rotor = fermion_pair_inertia(
        omega, omega2 > 0.0 ? omega2 : omega, beta, j, g.hbar);
    report.results["inertia"] = rotor.inertia;
    report.results["rotor_omega"] = rotor.rotor_omega;
    report.results["j"] = rotor.j_used;
    report.results["note"] = rotor.convention_note;
    return;
  }

  const RotorEquivalence rotor = rotor_equivalence(omega, j, n_oscillators, g.hbar);
  report.results["inertia"] = rotor.inertia;
  report.results["rotor_omega"] = rotor.rotor_omega;
  report.results["j"] = rotor.j_used;
  report.results["note"] = rotor.convention_note;

  if (beta > 0.0) {
    const double jmax = jmax_text.empty() ? j : parse_half_integer(jmax_text);
    report.results["rotational_partition"] =
        rotational_partition(rotor.inertia, beta, jmax, g.hbar);
  }
}

void run_grassmann_derive(RunReport& report, const GlobalOptions& g, double omega) {
  const OscillatorDerivation derivation =
      derive_oscillator_hamiltonian(omega, g.hbar);

  report.add_check("momenta_match_closed_form", derivation.momenta_match,
                   derivation.momenta_match ? 0.0 : 1.0);
  report.add_check("hamiltonian_matches_closed_form", derivation.hamiltonian_matches,
                   derivation.hamiltonian_matches ? 0.0 : 1.0);

  const ThetaRepresentationReport theta = check_theta_representation();
  report.add_check("theta_anticommutator_is_identity",
                   theta.anticommutator_is_identity,
                   theta.anticommutator_is_identity ? 0.0 : 1.0);
  report.add_check("theta_multiplication_squares_to_zero",
                   theta.multiply_squares_to_zero,
                   theta.multiply_squares_to_zero ? 0.0 : 1.0);
  report.add_check("theta_multiplication_is_fermion_raise",
                   theta.multiply_equals_fermion_raise,
                   theta.multiply_equals_fermion_raise ? 0.0 : 1.0);

  report.results["lagrangian"] = grassmann_to_json(derivation.lagrangian);
  report.results["momentum_psi"] = grassmann_to_json(derivation.momentum_q);
  report.results["momentum_psibar"] = grassmann_to_json(derivation.momentum_qbar);
  report.results["hamiltonian"] = grassmann_to_json(derivation.hamiltonian);
  report.results["eom"] =
      Json{{"qdot_coefficient", complex_to_json(derivation.eom_qdot_coefficient)},
           {"qbardot_coefficient",
            complex_to_json(derivation.eom_qbardot_coefficient)},
           {"note",
            "solutions oscillate at angular frequency omega; parameterizing "
            "them as exp(-2*i*w*t) makes the parameter w equal omega/2"}};
  report.results["conventions"] =
      "momenta from the left derivative; hamiltonian assembled as "
      "qdot*pi_q + qbardot*pi_qbar - lagrangian (velocities left of momenta)";
}

void run_grassmann_eval(RunReport& report, const std::string& generators_csv,
                        const std::string& expression) {
  std::vector<std::string> generators;
  std::stringstream stream(generators_csv);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) generators.push_back(token);
  }
  if (generators.empty()) throw ParseError("--generators needs at least one name");

  const GrassmannElement value = parse_grassmann_expression(expression, generators);
  report.results["value"] = grassmann_to_json(value);
}

void run_shift_check(RunReport& report, const GlobalOptions& g,
                     std::vector<double> exponents) {
  if (exponents.empty()) exponents = {-0.5, 0.0, 0.5, 1.0, 2.0};

  Json rows = Json::array();
  for (const double r : exponents) {
    const ShiftTheoremReport check = shift_theorem_check(r, g.cutoff);
    const double worst = std::max(check.res_lower, check.res_raise);
    report.add_check("shift_r=" + format_number(r), worst <= g.pick(1e-12), worst);
    rows.push_back(Json{{"r", r},
                        {"res_lower", check.res_lower},
                        {"res_raise", check.res_raise}});
  }
  report.results["rows"] = rows;
}

void run_frequencies(RunReport& report, const GlobalOptions& g,
                     const std::string& kind, double omega) {
  ModeSpace mode = kind == "fermion" ? ModeSpace::fermion(omega)
                                     : ModeSpace::boson(g.cutoff, omega);
  if (kind != "fermion" && kind != "boson")
    throw ParseError("frequencies --kind must be fermion or boson");

  const ModeOperators ops =
      mode.kind == ModeKind::kFermion ? fermion_mode(mode) : boson_mode(mode);
  const Operator h = hamiltonian(mode, g.hbar);
  const auto lines = spectral_frequencies(h, ops.lower, g.hbar);

  Json rows = Json::array();
  for (const SpectralLine& line : lines)
    rows.push_back(Json{{"frequency", line.frequency}, {"weight", line.weight}});
  report.results["lines"] = rows;

  double gap_err = 1.0;
  if (lines.size() == 1) gap_err = std::abs(lines[0].frequency - omega);
  report.add_check("gap_equals_omega", gap_err <= g.pick(1e-12), gap_err);
  report.results["note"] =
      "computed Heisenberg gap frequency: " +
      format_number(lines.empty() ? 0.0 : lines[0].frequency) +
      "; the half-rate parameterization exp(-2*i*w*t) would quote w = " +
      format_number((lines.empty() ? 0.0 : lines[0].frequency) / 2.0) +
      " for the same motion (surfaced for comparison, not asserted)";
}

}  // namespace

void RunReport::add_check(const std::string& name, bool passed, double max_error) {
  checks.push_back(Check{name, passed, max_error});
}

void RunReport::settle_exit_code() {
  if (exit_code == 2) return;
  exit_code = 0;
  for (const Check& c : checks)
    if (!c.passed) exit_code = 1;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  if (value == 0.0) return "0";  // folds negative zero
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

double parse_half_integer(const std::string& text) {
  if (text.empty()) throw ParseError("empty half-integer");
  double value = 0.0;
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(text.substr(0, slash));
      const double den = std::stod(text.substr(slash + 1));
      if (den == 0.0) throw ParseError("zero denominator in " + text);
      value = num / den;
    } else {
      value = std::stod(text);
    }
  } catch (const std::invalid_argument&) {
    throw ParseError("not a number: " + text);
  } catch (const std::out_of_range&) {
    throw ParseError("out of range: " + text);
  }
  const double twice = 2.0 * value;
  if (std::abs(twice - std::round(twice)) > 1e-9)
    throw ParseError(text + " is not a half-integer");
  return std::round(twice) / 2.0;
}

EnsembleSpec parse_ensemble_file(const std::string& path, double beta) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open ensemble file " + path);

  std::vector<ModeSpace> modes;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);

    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind)) continue;  // blank or comment-only line

    const auto fail = [&](const std::string& why) {
      throw ParseError(path + ":" + std::to_string(line_number) + ": " + why);
    };

    double omega = 0.0;
    if (!(fields >> omega)) fail("expected a frequency after '" + kind + "'");

    if (kind == "fermion") {
      std::string extra;
      if (fields >> extra) fail("unexpected token '" + extra + "'");
      if (!(omega > 0.0)) fail("frequency must be positive");
      modes.push_back(ModeSpace::fermion(omega));
    } else if (kind == "boson") {
      int cutoff = 0;
      if (!(fields >> cutoff)) fail("boson lines need a cutoff");
      std::string extra;
      if (fields >> extra) fail("unexpected token '" + extra + "'");
      if (!(omega > 0.0)) fail("frequency must be positive");
      if (cutoff < 2) fail("boson cutoff must be at least 2");
      modes.push_back(ModeSpace::boson(cutoff, omega));
    } else {
      fail("unknown mode kind '" + kind + "'");
    }
  }
  if (modes.empty()) throw ParseError(path + ": no modes defined");
  return EnsembleSpec(std::move(modes), beta);
}

std::string render_report(const RunReport& report, OutputFormat format) {
  if (format == OutputFormat::kCsv) return render_csv(report);
  std::string out;
  dump_json(report_to_json(report), out);
  out += '\n';
  return out;
}

int emit_report(RunReport& report, std::ostream& out, std::ostream& diag) {
  if (!report.emit_payload) {
    if (!report.diagnostic.empty())
      (report.exit_code == 0 ? out : diag) << report.diagnostic << "\n";
    return report.exit_code;
  }

  std::string payload;
  try {
    payload = render_report(report, report.format);
  } catch (const DomainError& e) {
    diag << e.what() << "\n";
    report.exit_code = 2;
    return report.exit_code;
  }

  if (report.out_path.empty()) {
    out << payload;
    return report.exit_code;
  }

  std::ofstream file(report.out_path, std::ios::binary);
  if (file) file << payload;
  if (!file) {
    report.add_check("io", false, 1.0);
    report.exit_code = 1;
    diag << "cannot write " << report.out_path << "\n";
    out << render_report(report, report.format);
    return report.exit_code;
  }
  return report.exit_code;
}

RunReport run(const std::vector<std::string>& argv) {
  RunReport report;
  GlobalOptions global;

  CLI::App app{"finite-dimensional oscillator-algebra workbench"};
  app.name("oscalg");
  app.require_subcommand(1);
  app.add_option("--hbar", global.hbar, "action scale (default 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--kB", global.boltzmann_k, "Boltzmann constant (default 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--cutoff", global.cutoff, "boson truncation levels (default 16)")
      ->check(CLI::Range(2, 4096));
  app.add_option("--tol", global.tol, "override per-check tolerances");
  app.add_option("--output", global.output, "payload format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", global.out_path, "write payload to a file");

  std::string kind = "bb", jz_form, j_text = "1", m_text = "0", jmax_text;
  std::string ensemble_path, generators_csv, expression, freq_kind = "fermion";
  std::vector<double> betas, exponents;
  double omega = 1.0, omega2 = 0.0, delta = 1e-4, rotor_beta = 0.0;
  int n_oscillators = 2;

  CLI::App* verify = app.add_subcommand("verify", "run an algebra suite");
  verify->add_option("--kind", kind, "bb|ff|bf_naive|bf_corrected|fermion")
      ->required();
  verify->add_option("--jz-form", jz_form, "projector|occupation (bf_corrected)");
  verify->add_option("--omega", omega, "mode frequency (fermion suite)");

  CLI::App* casimir_cmd = app.add_subcommand("casimir", "Casimir spectrum");
  casimir_cmd->add_option("--kind", kind, "bb|ff|bf_naive|bf_corrected")->required();
  casimir_cmd->add_option("--jz-form", jz_form, "projector|occupation");

  CLI::App* state = app.add_subcommand("state", "two-boson |j,m> construction");
  state->add_option("--j", j_text, "total angular momentum (half-integer)")
      ->required();
  state->add_option("--m", m_text, "projection (half-integer)")->required();

  CLI::App* partition = app.add_subcommand("partition", "log-partition sweep");
  partition->add_option("--ensemble", ensemble_path, "mode list file")->required();
  partition->add_option("--beta", betas, "inverse temperatures");
  partition->add_option("--delta", delta, "finite-difference step");

  CLI::App* energy = app.add_subcommand("energy", "mean-energy sweep");
  energy->add_option("--ensemble", ensemble_path, "mode list file")->required();
  energy->add_option("--beta", betas, "inverse temperatures");
  energy->add_option("--delta", delta, "finite-difference step");

  CLI::App* rotor = app.add_subcommand("rotor", "equivalent-rotor quantities");
  rotor->add_option("--omega", omega, "oscillator frequency")->required();
  rotor->add_option("--j", j_text, "rotor level (half-integer)")->required();
  rotor->add_option("--n", n_oscillators, "number of oscillators (2 or 3)");
  rotor->add_option("--beta", rotor_beta, "also evaluate the rotational partition");
  rotor->add_option("--jmax", jmax_text, "partition cutoff (default --j)");
  rotor->add_flag("--pair", "match a thermal fermionic pair instead");
  rotor->add_option("--omega2", omega2, "second pair frequency (default --omega)");

  CLI::App* derive = app.add_subcommand("grassmann-derive",
                                        "Lagrangian-to-Hamiltonian derivation");
  derive->add_option("--omega", omega, "oscillator frequency");

  CLI::App* eval = app.add_subcommand("grassmann-eval", "evaluate an expression");
  eval->add_option("--generators", generators_csv, "comma-separated names")
      ->required();
  eval->add_option("--expr", expression, "expression text")->required();

  CLI::App* shift = app.add_subcommand("shift-check", "ladder shift identities");
  shift->add_option("--r", exponents, "exponents (default -0.5 0 0.5 1 2)");

  CLI::App* frequencies_cmd =
      app.add_subcommand("frequencies", "Heisenberg-picture frequencies");
  frequencies_cmd->add_option("--kind", freq_kind, "fermion|boson");
  frequencies_cmd->add_option("--omega", omega, "mode frequency");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> cargs;
  cargs.push_back("oscalg");
  for (const std::string& arg : argv) cargs.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp&) {
    report.exit_code = 0;
    report.diagnostic = app.help();
    report.emit_payload = false;
    return report;
  } catch (const CLI::ParseError& e) {
    report.exit_code = 2;
    report.diagnostic = std::string(e.what()) + "\n\n" + app.help();
    report.emit_payload = false;
    return report;
  }

  report.format = global.output == "csv" ? OutputFormat::kCsv : OutputFormat::kJson;
  report.out_path = global.out_path;

  try {
    if (app.got_subcommand(verify)) {
      report.command = "verify";
      report.params["kind"] = kind;
      report.params["hbar"] = global.hbar;
      if (kind == "fermion") {
        report.params["omega"] = omega;
        run_verify_fermion(report, global, omega);
      } else {
        const SchwingerKind k = parse_kind(kind);
        if (k != SchwingerKind::kFermionFermion)
          report.params["cutoff"] = global.cutoff;
        if (!jz_form.empty()) report.params["jz_form"] = jz_form;
        run_verify_schwinger(report, global, k, jz_form);
      }
    } else if (app.got_subcommand(casimir_cmd)) {
      report.command = "casimir";
      report.params["kind"] = kind;
      report.params["hbar"] = global.hbar;
      if (parse_kind(kind) != SchwingerKind::kFermionFermion)
        report.params["cutoff"] = global.cutoff;
      if (!jz_form.empty()) report.params["jz_form"] = jz_form;
      run_casimir(report, global, kind, jz_form);
    } else if (app.got_subcommand(state)) {
      report.command = "state";
      report.params["j"] = j_text;
      report.params["m"] = m_text;
      report.params["cutoff"] = global.cutoff;
      report.params["hbar"] = global.hbar;
      run_state(report, global, j_text, m_text);
    } else if (app.got_subcommand(partition) || app.got_subcommand(energy)) {
      const bool is_energy = app.got_subcommand(energy);
      report.command = is_energy ? "energy" : "partition";
      report.params["ensemble"] = ensemble_path;
      report.params["hbar"] = global.hbar;
      report.params["delta"] = delta;
      run_sweep(report, global, ensemble_path, betas, delta, is_energy);
    } else if (app.got_subcommand(rotor)) {
      report.command = "rotor";
      report.params["omega"] = omega;
      report.params["j"] = j_text;
      report.params["n"] = n_oscillators;
      report.params["hbar"] = global.hbar;
      run_rotor(report, global, omega, j_text, n_oscillators, rotor_beta,
                jmax_text, rotor->count("--pair") > 0, omega2);
    } else if (app.got_subcommand(derive)) {
      report.command = "grassmann-derive";
      report.params["omega"] = omega;
      report.params["hbar"] = global.hbar;
      run_grassmann_derive(report, global, omega);
    } else if (app.got_subcommand(eval)) {
      report.command = "grassmann-eval";
      report.params["generators"] = generators_csv;
      report.params["expr"] = expression;
      run_grassmann_eval(report, generators_csv, expression);
    } else if (app.got_subcommand(shift)) {
      report.command = "shift-check";
      report.params["cutoff"] = global.cutoff;
      run_shift_check(report, global, exponents);
    } else if (app.got_subcommand(frequencies_cmd)) {
      report.command = "frequencies";
      report.params["kind"] = freq_kind;
      report.params["omega"] = omega;
      report.params["hbar"] = global.hbar;
      if (freq_kind == "boson") report.params["cutoff"] = global.cutoff;
      run_frequencies(report, global, freq_kind, omega);
    }
  } catch (const ParseError& e) {
    report.exit_code = 2;
    report.diagnostic = std::string(e.what()) + "\n\n" + app.help();
    report.emit_payload = false;
    return report;
  } catch (const std::exception& e) {
    report.results["error"] = e.what();
    report.add_check("domain", false, 1.0);
  }

  report.settle_exit_code();
  return report;
}

}  // namespace oscalg::cli
