#include "frobenius/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frobenius/conditional.hpp"
#include "frobenius/errors.hpp"

namespace frobenius {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double omega, const char* name) {
  if (!(omega > 0.0)) throw ArgumentError(std::string(name) + " must be positive");
}

void require_index(int n_r) {
  if (n_r < 0) throw ArgumentError("n_r must be non-negative");
}

}  // namespace

std::string model_id(const Model& model) {
  return std::visit(overloaded{[](const KgOscillatorModel&) { return std::string("kg_oscillator"); },
                               [](const PseudoConfinedModel&) { return std::string("pseudo_confined"); },
                               [](const ConfinedPdmModel&) { return std::string("confined_pdm"); }},
                    model);
}

int radial_quantum_number(const Model& model) {
  return std::visit([](const auto& m) { return m.n_r; }, model);
}

CanonicalForm to_canonical(const Model& model) {
  return std::visit(
      overloaded{[](const KgOscillatorModel& m) {
                   require_positive(m.omega, "omega");
                   return CanonicalForm{{m.gamma_t, 0.0, 0.0}, m.omega};
                 },
                 [](const PseudoConfinedModel& m) {
                   require_positive(m.omega, "omega");
                   const double root = std::sqrt(m.omega);
                   return CanonicalForm{{m.beta_t, m.b_t / root, m.eta * m.a_t / (m.omega * root)}, m.omega};
                 },
                 [](const ConfinedPdmModel& m) {
                   require_positive(m.omega1, "omega1");
                   const double root = std::sqrt(m.omega1);
                   return CanonicalForm{{m.gamma1, 2.0 * m.B / root, 2.0 * m.m * m.A / (m.omega1 * root)}, m.omega1};
                 }},
      model);
}

RadialOperator unscaled_operator(const Model& model) {
  return std::visit(
      overloaded{[](const KgOscillatorModel& m) { return RadialOperator{m.gamma_t, m.omega * m.omega, 0.0, 0.0}; },
                 [](const PseudoConfinedModel& m) {
                   return RadialOperator{m.beta_t, m.omega * m.omega, m.b_t, m.eta * m.a_t};
                 },
                 [](const ConfinedPdmModel& m) {
                   return RadialOperator{m.gamma1, m.omega1 * m.omega1, 2.0 * m.B, 2.0 * m.m * m.A};
                 }},
      model);
}

double mustafa_energy(const Model& model) {
  return std::visit(
      overloaded{[](const KgOscillatorModel& m) {
                   require_index(m.n_r);
                   return 2.0 * m.omega * (2.0 * m.n_r + std::abs(m.gamma_t) + 1.0);
                 },
                 [](const PseudoConfinedModel& m) {
                   require_index(m.n_r);
                   return 2.0 * m.omega * (2.0 * m.n_r + std::abs(m.beta_t) + 1.0) -
                          m.a_t * m.a_t * m.eta * m.eta / (4.0 * m.omega * m.omega);
                 },
                 [](const ConfinedPdmModel& m) {
                   require_index(m.n_r);
                   return 2.0 * m.omega1 * (2.0 * m.n_r + std::abs(m.gamma1) + 1.0) -
                          m.m * m.m * m.A * m.A / (m.omega1 * m.omega1);
                 }},
      model);
}

std::map<std::string, double> mustafa_hft_partials(const Model& model) {
  return std::visit(
      overloaded{[](const KgOscillatorModel&) { return std::map<std::string, double>{}; },
                 [](const PseudoConfinedModel& m) {
                   return std::map<std::string, double>{
                       {"b_t", 0.0}, {"eta", -m.a_t * m.a_t * m.eta / (2.0 * m.omega * m.omega)}};
                 },
                 [](const ConfinedPdmModel& m) {
                   return std::map<std::string, double>{
                       {"B", 0.0}, {"A", -2.0 * m.m * m.m * m.A / (m.omega1 * m.omega1)}};
                 }},
      model);
}

RefutationReport refute(const Model& model, const OracleConfig& config) {
  if (std::holds_alternative<KgOscillatorModel>(model)) {
    throw ArgumentError("kg_oscillator is exactly solvable; nothing to refute");
  }
  const auto canonical = to_canonical(model);
  const int n_r = radial_quantum_number(model);
  require_index(n_r);

  RefutationReport r;
  r.model = model_id(model);
  r.problem = canonical.problem;
  r.scale = canonical.scale;
  r.n_r = n_r;
  r.mustafa_value = mustafa_energy(model);
  r.claimed_W = r.mustafa_value / r.scale;
  r.mustafa_partials = mustafa_hft_partials(model);

  OracleConfig cfg = config;
  cfg.num_states = std::max(cfg.num_states, n_r + 1);
  const auto spectrum = solve_spectrum(r.problem, cfg);
  r.expect_inv_rho = expectation(spectrum.states[n_r], Weight::inv_rho);
  r.expect_rho = expectation(spectrum.states[n_r], Weight::rho);

  // <1/r> = omega^(1/2) <1/rho>, <r> = omega^(-1/2) <rho>
  const double root = std::sqrt(r.scale);
  const double inv_r = root * r.expect_inv_rho;
  const double mean_r = r.expect_rho / root;
  if (const auto* m = std::get_if<PseudoConfinedModel>(&model)) {
    r.oracle_partials = {{"b_t", inv_r}, {"eta", m->a_t * mean_r}};
  } else if (const auto* m3 = std::get_if<ConfinedPdmModel>(&model)) {
    r.oracle_partials = {{"B", 2.0 * inv_r}, {"A", 2.0 * m3->m * mean_r}};
  }
  const std::string coulomb = std::holds_alternative<PseudoConfinedModel>(model) ? "b_t" : "B";
  for (const auto& [name, oracle_value] : r.oracle_partials) {
    const double claimed = r.mustafa_partials.at(name);
    const double deviation = std::abs(claimed - oracle_value) / std::max(std::abs(oracle_value), 1e-300);
    r.max_partial_rel_deviation = std::max(r.max_partial_rel_deviation, deviation);
  }

  const auto check = spectrum_vs_formula(r.problem, r.claimed_W, cfg);
  r.oracle_nearest_eigenvalue = check.nearest_eigenvalue;
  r.nearest_index = check.nearest_index;
  r.gap = check.gap;
  r.gap_threshold = check.threshold;

  r.termination_degree = 2 * n_r;
  const int n = r.termination_degree;
  const auto c = three_term_coefficients(r.problem.exponent(), r.problem.a, r.problem.b,
                                         termination_energy(n, r.problem.gamma, r.problem.b), n + 2);
  double size = 0.0;
  for (int j = 0; j <= n; ++j) size = std::max(size, std::abs(c[j]));
  r.second_condition = std::abs(c[n + 1]) / size;

  r.verdicts["coulomb_partial_ignored"] = r.mustafa_partials.at(coulomb) == 0.0 && r.oracle_partials.at(coulomb) > 0.0;
  r.verdicts["hft_violated"] = r.max_partial_rel_deviation > r.hft_tolerance;
  r.verdicts["in_spectrum"] = r.gap <= r.gap_threshold;
  r.verdicts["second_condition_satisfied"] = r.second_condition <= r.second_condition_tolerance;

  std::ostringstream note;
  note.precision(17);
  note << "claimed W equals the termination energy W^(n) with n = 2 n_r = " << n
       << "; a polynomial solution also needs c_{n+1}(a, b) = 0";
  if (r.nearest_index != n_r) note << "; nearest oracle level has index " << r.nearest_index << ", not n_r = " << n_r;
  r.note = note.str();
  return r;
}

RefutationReport refute(const Model& model) {
  const auto canonical = to_canonical(model);
  return refute(model, default_oracle_config(canonical.problem, radial_quantum_number(model) + 1));
}

void to_json(nlohmann::json& j, const Model& model) {
  std::visit(overloaded{[&](const KgOscillatorModel& m) {
                          j = {{"model", "kg_oscillator"}, {"omega", m.omega}, {"gamma_t", m.gamma_t}, {"n_r", m.n_r}};
                        },
                        [&](const PseudoConfinedModel& m) {
                          j = {{"model", "pseudo_confined"}, {"omega", m.omega}, {"beta_t", m.beta_t},
                               {"eta", m.eta},           {"a_t", m.a_t},     {"b_t", m.b_t},
                               {"n_r", m.n_r}};
                        },
                        [&](const ConfinedPdmModel& m) {
                          j = {{"model", "confined_pdm"}, {"omega1", m.omega1}, {"gamma1", m.gamma1}, {"m", m.m},
                               {"A", m.A},                {"B", m.B},           {"n_r", m.n_r}};
                        }},
             model);
}

void from_json(const nlohmann::json& j, Model& model) {
  try {
    const auto id = j.at("model").get<std::string>();
    if (id == "kg_oscillator") {
      KgOscillatorModel m;
      j.at("omega").get_to(m.omega);
      j.at("gamma_t").get_to(m.gamma_t);
      j.at("n_r").get_to(m.n_r);
      require_positive(m.omega, "omega");
      model = m;
    } else if (id == "pseudo_confined") {
      PseudoConfinedModel m;
      j.at("omega").get_to(m.omega);
      j.at("beta_t").get_to(m.beta_t);
      j.at("eta").get_to(m.eta);
      j.at("a_t").get_to(m.a_t);
      j.at("b_t").get_to(m.b_t);
      j.at("n_r").get_to(m.n_r);
      require_positive(m.omega, "omega");
      model = m;
    } else if (id == "confined_pdm") {
      ConfinedPdmModel m;
      j.at("omega1").get_to(m.omega1);
      j.at("gamma1").get_to(m.gamma1);
      j.at("m").get_to(m.m);
      j.at("A").get_to(m.A);
      j.at("B").get_to(m.B);
      j.at("n_r").get_to(m.n_r);
      require_positive(m.omega1, "omega1");
      model = m;
    } else {
      throw ArgumentError("unknown model '" + id + "'");
    }
    require_index(radial_quantum_number(model));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("invalid model record: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const RefutationReport& r) {
  j = {{"model", r.model},
       {"mustafa_value", r.mustafa_value},
       {"mustafa_partials", r.mustafa_partials},
       {"oracle_partials", r.oracle_partials},
       {"oracle_nearest_eigenvalue", r.oracle_nearest_eigenvalue},
       {"gap", r.gap},
       {"verdicts", r.verdicts},
       {"canonical", {{"gamma", r.problem.gamma}, {"a", r.problem.a}, {"b", r.problem.b}, {"scale", r.scale}}},
       {"n_r", r.n_r},
       {"claimed_W", r.claimed_W},
       {"nearest_index", r.nearest_index},
       {"gap_threshold", r.gap_threshold},
       {"expect_inv_rho", r.expect_inv_rho},
       {"expect_rho", r.expect_rho},
       {"hft_tolerance", r.hft_tolerance},
       {"max_partial_rel_deviation", r.max_partial_rel_deviation},
       {"termination_degree", r.termination_degree},
       {"second_condition", r.second_condition},
       {"second_condition_tolerance", r.second_condition_tolerance},
       {"note", r.note}};
}

}  // namespace frobenius
