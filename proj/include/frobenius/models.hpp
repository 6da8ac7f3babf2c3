#pragma once

// Three radial equations from Klein-Gordon oscillator models and the closed
// forms that were claimed for their spectra. Each reduces to the canonical
// problem through rho = omega^(1/2) r and W = energy / omega.
//
//   kg_oscillator:    U'' + [lambda + (1/4 - gamma_t^2)/r^2 - omega^2 r^2] U = 0
//                     claimed lambda = 2 omega (2 n_r + |gamma_t| + 1)
//   pseudo_confined:  U'' + [E + (1/4 - beta_t^2)/r^2 - omega^2 r^2 - eta a_t r - b_t/r] U = 0
//                     claimed E = 2 omega (2 n_r + |beta_t| + 1) - a_t^2 eta^2 / (4 omega^2)
//   confined_pdm:     U'' + [lambda1 + (1/4 - gamma1^2)/r^2 - omega1^2 r^2 - 2 m A r - 2 B/r] U = 0
//                     claimed lambda1 = 2 omega1 (2 n_r + |gamma1| + 1) - m^2 A^2 / omega1^2
//
// The claims for the last two models ignore the Coulomb coupling entirely,
// which the Hellmann-Feynman theorem rules out.

#include <map>
#include <string>
#include <variant>

#include <json.hpp>

#include "frobenius/core.hpp"
#include "frobenius/oracle.hpp"

namespace frobenius {

struct KgOscillatorModel {
  double omega = 1.0;
  double gamma_t = 0.0;
  int n_r = 0;
};

struct PseudoConfinedModel {
  double omega = 1.0;
  double beta_t = 0.0;
  double eta = 0.0;
  double a_t = 0.0;
  double b_t = 0.0;
  int n_r = 0;
};

struct ConfinedPdmModel {
  double omega1 = 1.0;
  double gamma1 = 0.0;
  double m = 0.0;
  double A = 0.0;
  double B = 0.0;
  int n_r = 0;
};

using Model = std::variant<KgOscillatorModel, PseudoConfinedModel, ConfinedPdmModel>;

/// "kg_oscillator", "pseudo_confined" or "confined_pdm".
std::string model_id(const Model& model);
int radial_quantum_number(const Model& model);

struct CanonicalForm {
  RadialProblem problem;
  double scale = 1.0;  // energy = scale * W, rho = sqrt(scale) r
};

CanonicalForm to_canonical(const Model& model);

/// The radial equation in r before rescaling.
RadialOperator unscaled_operator(const Model& model);

/// The claimed closed-form energy, evaluated as published.
double mustafa_energy(const Model& model);

/// Partial derivatives of the claimed energy with respect to the couplings:
/// {"b_t", "eta"} for pseudo_confined, {"B", "A"} for confined_pdm, none for
/// kg_oscillator.
std::map<std::string, double> mustafa_hft_partials(const Model& model);

struct RefutationReport {
  std::string model;
  double mustafa_value = 0.0;
  std::map<std::string, double> mustafa_partials;
  std::map<std::string, double> oracle_partials;  // Hellmann-Feynman expectations in model units
  double oracle_nearest_eigenvalue = 0.0;         // canonical units
  double gap = 0.0;                               // |mustafa_value / scale - nearest|
  std::map<std::string, bool> verdicts;

  // Supporting numbers; every verdict can be recomputed from these.
  RadialProblem problem;
  double scale = 1.0;
  int n_r = 0;
  double claimed_W = 0.0;
  int nearest_index = -1;
  double gap_threshold = 0.0;
  double expect_inv_rho = 0.0;
  double expect_rho = 0.0;
  double hft_tolerance = 1e-3;
  double max_partial_rel_deviation = 0.0;
  int termination_degree = 0;        // the claim equals W^(n) with n = 2 n_r
  double second_condition = 0.0;     // c_{n+1}(a, b) relative to max |c_j|
  double second_condition_tolerance = 1e-9;
  std::string note;
};

RefutationReport refute(const Model& model, const OracleConfig& config);
RefutationReport refute(const Model& model);

void to_json(nlohmann::json& j, const Model& model);
void from_json(const nlohmann::json& j, Model& model);
void to_json(nlohmann::json& j, const RefutationReport& report);

}  // namespace frobenius
