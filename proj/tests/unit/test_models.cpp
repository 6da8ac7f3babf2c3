#include <doctest.h>

#include <cmath>

#include "frobenius/conditional.hpp"
#include "frobenius/errors.hpp"
#include "frobenius/exact.hpp"
#include "frobenius/models.hpp"
#include "oracles/test_oracles.hpp"

using namespace frobenius;

TEST_CASE("to_canonical") {
  SUBCASE("kg_oscillator") {
    const auto c = to_canonical(KgOscillatorModel{4.0, 0.5, 0});
    CHECK(c.problem.gamma == 0.5);
    CHECK(c.problem.a == 0.0);
    CHECK(c.problem.b == 0.0);
    CHECK(c.scale == 4.0);
  }
  SUBCASE("pseudo_confined") {
    const auto c = to_canonical(PseudoConfinedModel{1.0, 0.5, 1.0, 1.0, 1.0, 0});
    CHECK(c.problem.gamma == 0.5);
    CHECK(c.problem.a == 1.0);
    CHECK(c.problem.b == 1.0);
    CHECK(c.scale == 1.0);
    const auto d = to_canonical(PseudoConfinedModel{4.0, 0.5, 2.0, 3.0, 6.0, 0});
    CHECK(d.problem.a == 3.0);          // 6 / 2
    CHECK(d.problem.b == 6.0 / 8.0);    // 2 * 3 / 4^(3/2)
  }
  SUBCASE("confined_pdm") {
    const auto c = to_canonical(ConfinedPdmModel{1.0, 0.0, 1.0, 0.5, 0.5, 0});
    CHECK(c.problem.gamma == 0.0);
    CHECK(c.problem.a == 1.0);
    CHECK(c.problem.b == 1.0);
    CHECK(c.scale == 1.0);
  }
  CHECK_THROWS_AS(to_canonical(KgOscillatorModel{0.0, 0.5, 0}), ArgumentError);
  CHECK_THROWS_AS(to_canonical(PseudoConfinedModel{-1.0, 0.5, 1, 1, 1, 0}), ArgumentError);
  CHECK_THROWS_AS(to_canonical(ConfinedPdmModel{0.0, 0, 1, 1, 1, 0}), ArgumentError);
}

TEST_CASE("mustafa_energy") {
  CHECK(mustafa_energy(KgOscillatorModel{1.0, 0.5, 0}) == 3.0);
  CHECK(mustafa_energy(PseudoConfinedModel{1.0, 0.5, 1.0, 1.0, 0.3, 0}) == 2.75);
  CHECK(mustafa_energy(ConfinedPdmModel{1.0, 0.0, 1.0, 1.0, 0.7, 1}) == 5.0);
  CHECK_THROWS_AS(mustafa_energy(KgOscillatorModel{1.0, 0.5, -1}), ArgumentError);
}

TEST_CASE("the claimed kg_oscillator spectrum is the exact one") {
  for (double omega : {0.5, 1.0, 3.0}) {
    for (double g : {0.0, 0.5, -1.5}) {
      for (int n_r = 0; n_r <= 4; ++n_r) {
        const Model m = KgOscillatorModel{omega, g, n_r};
        CHECK(mustafa_energy(m) / to_canonical(m).scale == exact_eigenvalue(n_r, g));
      }
    }
  }
}

TEST_CASE("mustafa_hft_partials") {
  const auto p2 = mustafa_hft_partials(PseudoConfinedModel{1.0, 0.5, 2.0, 1.0, 1.0, 0});
  CHECK(p2.at("b_t") == 0.0);
  CHECK(p2.at("eta") == -1.0);
  const auto p3 = mustafa_hft_partials(ConfinedPdmModel{1.0, 0.0, 1.0, 1.0, 0.5, 0});
  CHECK(p3.at("B") == 0.0);
  CHECK(p3.at("A") == -2.0);
  CHECK(mustafa_hft_partials(KgOscillatorModel{1.0, 0.5, 0}).empty());
}

TEST_CASE("claimed partials match a finite difference of the claimed energy") {
  PseudoConfinedModel m{1.3, 0.5, 0.8, 1.1, 0.6, 1};
  const auto p = mustafa_hft_partials(m);
  auto energy_eta = [&](double eta) {
    auto c = m;
    c.eta = eta;
    return mustafa_energy(c);
  };
  CHECK(p.at("eta") == doctest::Approx(testing::fd_first(energy_eta, m.eta, 1e-3)).epsilon(1e-9));
}

TEST_CASE("refute pseudo_confined") {
  const auto r = refute(PseudoConfinedModel{1.0, 0.5, 1.0, 1.0, 1.0, 0});
  CHECK(r.model == "pseudo_confined");
  CHECK(r.verdicts.at("hft_violated"));
  CHECK(r.verdicts.at("coulomb_partial_ignored"));
  CHECK_FALSE(r.verdicts.at("in_spectrum"));
  CHECK_FALSE(r.verdicts.at("second_condition_satisfied"));
  CHECK(r.mustafa_partials.at("b_t") == 0.0);
  CHECK(r.oracle_partials.at("b_t") > 0.3);
  // regression values from the oracle spectrum of (1/2, 1, 1)
  CHECK(r.oracle_nearest_eigenvalue == doctest::Approx(5.24303425202261).epsilon(1e-10));
  CHECK(r.gap == doctest::Approx(2.49303425202261).epsilon(1e-10));
  CHECK(r.termination_degree == 0);
}

TEST_CASE("refute confined_pdm") {
  const auto r = refute(ConfinedPdmModel{1.0, 0.0, 1.0, 1.0, 0.5, 0});
  CHECK(r.verdicts.at("hft_violated"));
  CHECK_FALSE(r.verdicts.at("in_spectrum"));
  CHECK(r.mustafa_partials.at("B") == 0.0);
  CHECK(r.oracle_partials.at("B") == doctest::Approx(2.0 * r.expect_inv_rho).epsilon(1e-14));
  CHECK(r.gap == doctest::Approx(4.462911614453786).epsilon(1e-9));
}

TEST_CASE("refute confined_pdm tuned onto a polynomial solution") {
  // With B = 0 (a = 0) and n_r = 1 the claim equals W^(2). It is a level only
  // if a = 0 is one of the admissible a^(2,i)(b); find such a b != 0.
  const double g = 0.5;
  const double b = testing::bisect([&](double x) { return second_condition_value(2, g, 0.0, x); }, 1.0, 4.0);
  CHECK(b == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));
  const auto roots = admissible_a(2, g, b);
  std::size_t index = 0;
  while (index < roots.size() && std::abs(roots[index]) > 1e-9) ++index;
  REQUIRE(index < roots.size());

  const ConfinedPdmModel model{1.0, g, 1.0, b / 2.0, 0.0, 1};  // b = 2 m A / omega1^(3/2)
  const auto r = refute(model);
  CHECK(r.verdicts.at("in_spectrum"));
  CHECK(r.verdicts.at("second_condition_satisfied"));
  CHECK(r.nearest_index == static_cast<int>(index));
  CHECK(r.verdicts.at("hft_violated"));  // the formula still ignores B
}

TEST_CASE("refute rejects the exactly solvable model") {
  CHECK_THROWS_WITH_AS(refute(KgOscillatorModel{1.0, 0.5, 0}), doctest::Contains("exactly solvable"), ArgumentError);
}

TEST_CASE("scaling to canonical form preserves the spectrum") {
  const Model m = PseudoConfinedModel{4.0, 0.5, 1.5, 2.0, 1.2, 0};
  const auto c = to_canonical(m);
  const auto canonical = solve_spectrum(c.problem, default_oracle_config(c.problem, 3));
  const double root = std::sqrt(c.scale);
  const auto physical =
      solve_operator_spectrum(unscaled_operator(m), OracleConfig{default_oracle_config(c.problem).rho_max / root, 4000, 3});
  for (int k = 0; k < 3; ++k) CHECK(std::abs(physical.eigenvalues[k] - c.scale * canonical.eigenvalues[k]) <= 1e-6);
}

TEST_CASE("model JSON") {
  const std::vector<Model> models{KgOscillatorModel{2.0, -0.5, 3}, PseudoConfinedModel{1.0, 0.5, 1.0, 1.0, 1.0, 0},
                                  ConfinedPdmModel{1.5, 0.25, 1.0, 0.75, 0.5, 2}};
  for (const auto& m : models) {
    const nlohmann::json j = m;
    const Model back = j.get<Model>();
    CHECK(nlohmann::json(back) == j);
    CHECK(j.at("model") == model_id(m));
  }
  const nlohmann::json pdm = ConfinedPdmModel{1.5, 0.25, 1.0, 0.75, 0.5, 2};
  for (const char* field : {"omega1", "gamma1", "m", "A", "B", "n_r"}) CHECK(pdm.contains(field));

  CHECK_THROWS_AS(nlohmann::json({{"model", "unknown"}}).get<Model>(), ArgumentError);
  CHECK_THROWS_AS(nlohmann::json({{"model", "kg_oscillator"}, {"omega", 1.0}}).get<Model>(), ArgumentError);
  CHECK_THROWS_AS(
      nlohmann::json({{"model", "kg_oscillator"}, {"omega", -1.0}, {"gamma_t", 0.5}, {"n_r", 0}}).get<Model>(),
      ArgumentError);
}
