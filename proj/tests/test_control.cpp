#include <cmath>

#include "doctest.h"

#include "aif/control.hpp"
#include "aif/envs.hpp"
#include "aif/maths.hpp"
#include "support/models.hpp"
#include "support/oracles.hpp"

using namespace aif;

namespace {

Policy step(std::size_t u) { return Policy{{{u}}}; }

// One timestep, one factor or modality.
std::vector<Belief> states1(Vector v) { return {Belief{std::move(v)}}; }
std::vector<ObsPrediction> obs1(Vector v) { return {ObsPrediction{std::move(v)}}; }
std::vector<std::vector<Vector>> prefs1(Vector v) { return {std::vector<Vector>{std::move(v)}}; }

std::vector<Policy> random_policies(oracle::Gen& g, const GenerativeModel& model) {
  return construct_policies(model.num_states(), model.num_controls(), static_cast<int>(g.between(1, 2)));
}

}  // namespace

TEST_SUITE("control") {

TEST_CASE("expected states examples") {
  const auto model = fixtures::listing2_model();
  CHECK(get_expected_states({{1, 0, 0}}, model.B, step(1))[0][0] == Vector{0, 0, 1});
  CHECK(get_expected_states({{0, 0, 1}}, model.B, step(0))[0][0] == Vector{0.5, 0.5, 0});
  const std::vector<Tensor> still{Tensor({2, 2, 3}, Vector{1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1})};
  const auto roll = get_expected_states({{0.3, 0.7}}, still, Policy{{{0}, {2}, {1}}});
  REQUIRE(roll.size() == 3);
  for (const auto& b : roll) CHECK(b[0] == Vector{0.3, 0.7});
  CHECK_THROWS_AS(get_expected_states({{1, 0, 0}}, model.B, step(2)), IndexError);
}

TEST_CASE("expected observations examples") {
  const std::vector<Tensor> eye{Tensor::from_rows({{1, 0}, {0, 1}})};
  CHECK(get_expected_obs(states1({0.2, 0.8}), eye)[0][0] == Vector{0.2, 0.8});
  const auto model = fixtures::listing2_model();
  const auto qo = get_expected_obs(states1({0, 0, 1}), model.A)[0][0];
  CHECK(qo[0] == doctest::Approx(0.2741).epsilon(1e-4));
  CHECK(qo[2] == doctest::Approx(0.4519).epsilon(1e-4));
  const std::vector<Tensor> flat{Tensor({3, 2}, 1.0 / 3.0)};
  const auto uniform = get_expected_obs(states1({0.9, 0.1}), flat);
  for (double x : uniform[0][0]) CHECK(x == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("expected utility examples") {
  const auto qo = obs1({1.0, 0.0});
  CHECK(expected_utility(qo, prefs1({0.0, 0.0})) == 0.0);
  CHECK(expected_utility(qo, prefs1({2.0, 0.0})) == 2.0);
  const std::vector<ObsPrediction> two{{{0.3, 0.7}, {0.5, 0.5}}, {{0.1, 0.9}, {0.2, 0.8}}};
  const std::vector<std::vector<Vector>> C{{{1.0, -1.0}, {0.5, 2.0}}, {{1.0, -1.0}, {0.5, 2.0}}};
  std::vector<std::vector<Vector>> shifted = C;
  for (auto& row : shifted) {
    for (auto& c : row) {
      for (auto& x : c) x += 1.7;
    }
  }
  CHECK(expected_utility(two, shifted) == doctest::Approx(expected_utility(two, C) + 1.7 * 2 * 2));
  CHECK_THROWS_AS(expected_utility(qo, prefs1({1.0, 2.0, 3.0})), ShapeError);
}

TEST_CASE("state information gain examples") {
  CHECK(states_info_gain({Tensor({2, 2}, 0.5)}, states1({0.3, 0.7})) == doctest::Approx(0.0).epsilon(1e-15));
  const std::vector<Tensor> eye{Tensor::from_rows({{1, 0}, {0, 1}})};
  CHECK(states_info_gain(eye, states1({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(states_info_gain(eye, states1({1.0, 0.0}))) < 1e-12);
}

TEST_CASE("state information gain bounds") {
  oracle::Gen g(41);
  for (int trial = 0; trial < 300; ++trial) {
    const auto shape = oracle::random_shape(g, 2, 3, 2, 3, 1);
    const auto model = oracle::random_model(g, shape, true);
    const Belief qs = oracle::random_belief(g, shape.num_states, true);
    const double mi = states_info_gain(model.A, {qs});
    double h_states = 0.0;
    for (const auto& q : qs) h_states += entropy(q);
    double h_obs = 0.0;
    for (const auto& a : model.A) h_obs += entropy(oracle::predictive(a, qs));
    CHECK(mi >= -1e-10);
    CHECK(mi <= std::min(h_obs, h_states) + 1e-9);
    CHECK(std::abs(mi - oracle::kl_epistemic(model.A, qs)) <= 1e-10);
  }
}

TEST_CASE("pA novelty") {
  const std::vector<Tensor> ones{Tensor({2, 2}, 1.0)};
  // w = 1/1 - 1/2 at the indexed cell.
  CHECK(pA_info_gain(ones, obs1({1.0, 0.0}), states1({0.0, 1.0})) == doctest::Approx(0.5));

  oracle::Gen g(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto shape = oracle::random_shape(g, 2, 3, 2, 3, 1);
    const auto model = oracle::random_model(g, shape);
    std::vector<Tensor> pA;
    for (const auto& a : model.A) pA.push_back(g.counts(a.dims()));
    const Belief qs = oracle::random_belief(g, shape.num_states);
    const auto qo = get_expected_obs({qs}, model.A);
    const double base = pA_info_gain(pA, qo, {qs});
    CHECK(base >= -1e-10);
    CHECK(std::abs(base - oracle::pA_novelty(pA, model.A, qs)) <= 1e-10);

    auto doubled = pA;
    for (auto& t : doubled) {
      for (auto& x : t.values()) x *= 2.0;
    }
    const double halved = pA_info_gain(doubled, qo, {qs});
    CHECK(std::abs(halved - base / 2.0) <= 1e-12);
    if (base > 0.0) CHECK(halved < base);
    const double k = g.uniform(1.0, 20.0);
    auto scaled = pA;
    for (auto& t : scaled) {
      for (auto& x : t.values()) x *= k;
    }
    CHECK(pA_info_gain(scaled, qo, {qs}) <= base + 1e-12);
    auto huge = pA;
    for (auto& t : huge) {
      for (auto& x : t.values()) x *= 1e6;
    }
    CHECK(pA_info_gain(huge, qo, {qs}) < 1e-5);
  }
  CHECK_THROWS_AS(pA_info_gain({Tensor({2, 2}, 0.0)}, obs1({1.0, 0.0}), states1({0.0, 1.0})), NumericalError);
}

TEST_CASE("pB novelty") {
  const std::vector<Tensor> ones{Tensor({2, 2, 1}, 1.0)};
  CHECK(pB_info_gain(ones, states1({0.0, 1.0}), Belief{{1.0, 0.0}}, step(0)) == doctest::Approx(0.5));

  oracle::Gen g(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto shape = oracle::random_shape(g, 2, 3, 1, 2, 3);
    const auto model = oracle::random_model(g, shape);
    std::vector<Tensor> pB;
    for (const auto& b : model.B) pB.push_back(g.counts(b.dims()));
    const Belief qs = oracle::random_belief(g, shape.num_states);
    const auto policies = construct_policies(model.num_states(), model.num_controls(), 2);
    const Policy& pi = policies[g.index(policies.size())];
    const auto roll = get_expected_states(qs, model.B, pi);
    const double total = pB_info_gain(pB, roll, qs, pi);
    CHECK(total >= -1e-10);
    const double first = pB_info_gain(pB, {roll[0]}, qs, Policy{{pi[0]}});
    const double second = pB_info_gain(pB, {roll[1]}, roll[0], Policy{{pi[1]}});
    CHECK(std::abs(total - (first + second)) <= 1e-12);
    CHECK(std::abs(first - oracle::pB_novelty(pB, qs, roll[0], pi[0])) <= 1e-10);
    auto huge = pB;
    for (auto& t : huge) {
      for (auto& x : t.values()) x *= 1e6;
    }
    CHECK(pB_info_gain(huge, roll, qs, pi) < 1e-5);
  }
}

TEST_CASE("policy posterior examples") {
  auto model = fixtures::listing2_model();
  SUBCASE("identical rollouts are tied") {
    const auto post = update_posterior_policies({{0.2, 0.3, 0.5}}, model, {step(0), step(0)});
    CHECK(post.q_pi == Vector{0.5, 0.5});
  }
  SUBCASE("reference model against the oracle") {
    const Belief qs{{1, 0, 0}};
    const std::vector<Policy> policies{step(0), step(1)};
    const auto post = update_posterior_policies(qs, model, policies);
    Vector G;
    for (const auto& pi : policies) G.push_back(oracle::efe(model, qs, pi, true, true, false).G);
    const Vector expected = oracle::policy_posterior(G, 16.0, {0.5, 0.5});
    CHECK(post.q_pi[0] > post.q_pi[1]);
    CHECK(post.breakdown[0].state_info_gain > post.breakdown[1].state_info_gain);
    for (std::size_t p = 0; p < 2; ++p) {
      CHECK(std::abs(post.G[p] - G[p]) <= 1e-12);
      CHECK(std::abs(post.q_pi[p] - expected[p]) <= 1e-12);
    }
  }
  SUBCASE("gamma = 0 leaves only the habit") {
    model.E = Vector{0.2, 0.8};
    const auto post = update_posterior_policies({{1, 0, 0}}, model, {step(0), step(1)}, {}, 0.0);
    CHECK(post.q_pi[0] == doctest::Approx(0.2).epsilon(1e-12));
    const auto with_F = update_posterior_policies({{1, 0, 0}}, model, {step(0), step(1)}, {}, 0.0, Vector{0.0, 1.0});
    const double z = 0.2 + 0.8 * std::exp(-1.0);
    CHECK(with_F.q_pi[0] == doctest::Approx(0.2 / z).epsilon(1e-12));
  }
  SUBCASE("all components disabled") {
    const auto post = update_posterior_policies({{1, 0, 0}}, model, {step(0), step(1)}, {false, false, false});
    CHECK(post.G == Vector{0.0, 0.0});
    CHECK(post.q_pi == Vector{0.5, 0.5});
  }
  SUBCASE("single policy") {
    model.E = Vector{1.0};
    const auto post = update_posterior_policies({{0, 1, 0}}, model, {step(1)}, {}, 16.0, Vector{42.0});
    CHECK(post.q_pi == Vector{1.0});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(update_posterior_policies({{1, 0, 0}}, model, {}), Error);
    model.E = Vector{1.0};
    CHECK_THROWS_AS(update_posterior_policies({{1, 0, 0}}, model, {step(0), step(1)}), ShapeError);
  }
}

TEST_CASE("breakdown totals and oracle agreement on random models") {
  oracle::Gen g(44);
  for (int trial = 0; trial < 150; ++trial) {
    const auto shape = oracle::random_shape(g, 2, 3, 2, 3, 3);
    auto model = oracle::random_model(g, shape, g.coin(0.3));
    if (g.coin()) {
      model.pA = std::vector<Tensor>{};
      for (const auto& a : model.A) model.pA->push_back(g.counts(a.dims()));
    }
    if (g.coin()) {
      model.pB = std::vector<Tensor>{};
      for (const auto& b : model.B) model.pB->push_back(g.counts(b.dims()));
    }
    const EfeFlags flags{g.coin(0.8), g.coin(0.8), g.coin()};
    const Belief qs = oracle::random_belief(g, shape.num_states);
    const auto policies = random_policies(g, model);
    const auto post = update_posterior_policies(qs, model, policies, flags);
    for (std::size_t p = 0; p < policies.size(); ++p) {
      const auto& b = post.breakdown[p];
      CHECK(b.state_info_gain >= -1e-10);
      CHECK(b.pA_info_gain >= -1e-10);
      CHECK(b.pB_info_gain >= -1e-10);
      const double sum = b.utility + b.state_info_gain + b.pA_info_gain + b.pB_info_gain;
      CHECK(std::abs(b.total_G + sum) <= 1e-12);
      const auto ref = oracle::efe(model, qs, policies[p], flags.use_utility, flags.use_states_info_gain,
                                   flags.use_param_info_gain);
      CHECK(std::abs(b.total_G - ref.G) <= 1e-8);
    }
  }
}

TEST_CASE("time-indexed preferences") {
  auto model = fixtures::listing2_model();
  model.C = {Tensor({2, 3}, Vector{0.0, 0.0, 0.0, 0.0, 0.0, 4.0})};
  const auto policies = construct_policies(model.num_states(), model.num_controls(), 2);
  const auto post = update_posterior_policies({{1, 0, 0}}, model, policies, {true, false, false});
  for (std::size_t p = 0; p < policies.size(); ++p) {
    const auto ref = oracle::efe(model, {{1, 0, 0}}, policies[p], true, false, false);
    CHECK(post.G[p] == doctest::Approx(ref.G).epsilon(1e-12));
  }
  // Only the second step's outcome 2 is rewarded.
  CHECK(post.G[1] < post.G[0]);
  CHECK(post.G[3] == post.G[1]);
}

TEST_CASE("constant shift of C leaves q_pi unchanged") {
  oracle::Gen g(45);
  for (int trial = 0; trial < 100; ++trial) {
    const auto shape = oracle::random_shape(g, 2, 3, 2, 3, 3);
    auto model = oracle::random_model(g, shape);
    const Belief qs = oracle::random_belief(g, shape.num_states);
    const auto policies = random_policies(g, model);
    const auto base = update_posterior_policies(qs, model, policies);
    const double c = g.uniform(-10.0, 10.0);
    for (auto& t : model.C) {
      for (auto& x : t.values()) x += c;
    }
    const auto shifted = update_posterior_policies(qs, model, policies);
    for (std::size_t p = 0; p < policies.size(); ++p) CHECK(std::abs(base.q_pi[p] - shifted.q_pi[p]) <= 1e-10);
  }
}

TEST_CASE("epistemic chamber favours visiting the informative site") {
  const auto model = EpistemicChamberEnv::matching_model();
  const auto policies = construct_policies(model.num_states(), model.num_controls(), 1);
  REQUIRE(policies.size() == 2);
  const auto post = update_posterior_policies(model.D, model, policies);
  CHECK(post.q_pi[1] > post.q_pi[0]);
  CHECK(post.breakdown[1].state_info_gain == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(post.breakdown[0].state_info_gain) < 1e-12);
}

TEST_CASE("deterministic action selection") {
  std::mt19937_64 rng(0);
  const std::vector<Policy> policies{step(0), step(1)};
  CHECK(sample_action({0.9, 0.1}, policies, {2}, ActionSelection::Deterministic, 16.0, rng) == Action{0});
  CHECK(sample_action({0.5, 0.5}, policies, {2}, ActionSelection::Deterministic, 16.0, rng) == Action{0});
  const std::vector<Policy> same{step(1), step(1)};
  CHECK(sample_action({0.5, 0.5}, same, {2}, ActionSelection::Deterministic, 16.0, rng) == Action{1});
  for (int i = 0; i < 20; ++i) {
    CHECK(sample_action({0.5, 0.5}, same, {2}, ActionSelection::Stochastic, 16.0, rng) == Action{1});
  }
  CHECK_THROWS_AS(sample_action({0.5, 0.5}, policies, {2}, ActionSelection::Stochastic, 0.0, rng), Error);
  CHECK_THROWS_AS(sample_action({1.0}, policies, {2}, ActionSelection::Deterministic, 16.0, rng), ShapeError);
}

TEST_CASE("argmax is invariant to rescaling q_pi") {
  oracle::Gen g(46);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<std::size_t> controls{g.between(1, 4), g.between(1, 3)};
    const auto policies = construct_policies({2, 2}, controls, static_cast<int>(g.between(1, 2)));
    const Vector q = g.categorical(policies.size());
    Vector scaled = q;
    const double k = g.uniform(0.1, 10.0);
    for (auto& x : scaled) x *= k;
    CHECK(sample_action(q, policies, controls, ActionSelection::Deterministic, 16.0, rng) ==
          sample_action(scaled, policies, controls, ActionSelection::Deterministic, 16.0, rng));
  }
}

TEST_CASE("action marginals sum first-step probabilities") {
  const auto policies = construct_policies({3, 2}, {3, 2}, 1);
  Vector q(policies.size());
  for (std::size_t p = 0; p < q.size(); ++p) q[p] = static_cast<double>(p + 1) / 21.0;
  const auto marg = action_marginals(q, policies, {3, 2});
  CHECK(marg[0][0] == doctest::Approx(3.0 / 21.0));
  CHECK(marg[1][1] == doctest::Approx((2.0 + 4.0 + 6.0) / 21.0));
}

TEST_CASE("stochastic selection follows the Boltzmann law") {
  const std::vector<Policy> policies{step(0), step(1)};
  for (double alpha : {1.0, 16.0}) {
    const double p0 = std::pow(0.8, alpha) / (std::pow(0.8, alpha) + std::pow(0.2, alpha));
    std::mt19937_64 rng(2024);
    const int n = 100000;
    int zeros = 0;
    for (int i = 0; i < n; ++i) {
      zeros += sample_action({0.8, 0.2}, policies, {2}, ActionSelection::Stochastic, alpha, rng)[0] == 0;
    }
    const double sigma = std::sqrt(n * p0 * (1.0 - p0));
    CHECK(std::abs(zeros - n * p0) <= 3.0 * sigma + 1.0);
  }
}

TEST_CASE("uniform01 and categorical sampling") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(sample_categorical({0.0, 0.0, 1.0}, rng) == 2);
  CHECK_THROWS_AS(sample_categorical({0.0, 0.0}, rng), NumericalError);
}

}
