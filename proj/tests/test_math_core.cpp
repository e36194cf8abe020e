#include <cmath>
#include <numeric>

#include "doctest.h"

#include "aif/errors.hpp"
#include "aif/maths.hpp"
#include "support/oracles.hpp"

using namespace aif;

namespace {

double sum(const Vector& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Tensor listing2_A() {
  return Tensor::from_rows({{1.0, 0.0, 0.27406861906119695},
                            {0.0, 1.0, 0.27406861906119695},
                            {0.0, 0.0, 0.45186276187760605}});
}

}  // namespace

TEST_SUITE("math_core") {

TEST_CASE("tensor indexing and columns") {
  Tensor t({2, 3, 2});
  for (std::size_t i = 0; i < t.size(); ++i) t.values()[i] = static_cast<double>(i);
  CHECK(t.num_columns() == 6);
  CHECK(t.cond_dims() == std::vector<std::size_t>{3, 2});
  CHECK(t({1, 2, 1}) == 11.0);
  CHECK(t.cell(1, 5) == 11.0);
  CHECK(t.column(5) == Vector{5.0, 11.0});
  CHECK(dims_to_string(t.dims()) == "2x3x2");
  CHECK_THROWS_AS(Tensor({2, 2}, Vector{1.0, 2.0, 3.0}), ShapeError);
  CHECK_THROWS_AS(t({2, 0, 0}), IndexError);
}

TEST_CASE("softmax examples") {
  CHECK(softmax(Vector{0.0, 0.0}) == Vector{0.5, 0.5});
  const Vector p = softmax(Vector{0.0, 0.0, 0.5});
  CHECK(p[0] == doctest::Approx(std::exp(0.0) / (2.0 + std::exp(0.5))).epsilon(1e-14));
  CHECK(p[2] == doctest::Approx(0.4519).epsilon(1e-4));
  CHECK(p[0] == doctest::Approx(0.2741).epsilon(1e-4));
  CHECK_THROWS_WITH_AS(softmax(Vector{0.0, NAN}), "non-finite logits", NumericalError);
  CHECK_THROWS_WITH_AS(softmax(Vector{INFINITY, 0.0}), "non-finite logits", NumericalError);
}

TEST_CASE("softmax is a categorical and shift invariant") {
  oracle::Gen g(11);
  for (int trial = 0; trial < 500; ++trial) {
    Vector v(g.between(1, 8));
    for (auto& x : v) x = g.uniform(-40.0, 40.0);
    const double c = g.uniform(-50.0, 50.0);
    Vector w = v;
    for (auto& x : w) x += c;
    const Vector p = softmax(v);
    const Vector q = softmax(w);
    CHECK(is_categorical(p));
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - q[i]) <= 1e-12);
  }
}

TEST_CASE("log_stable examples") {
  CHECK(log_stable(1.0) == 0.0);
  CHECK(log_stable(0.0) == doctest::Approx(std::log(1e-16)));
  CHECK(log_stable(0.0) == doctest::Approx(-36.84).epsilon(1e-3));
  CHECK(log_stable(0.5) == doctest::Approx(-0.6931).epsilon(1e-4));
  CHECK_THROWS_WITH_AS(log_stable(-0.1), "negative probability", NumericalError);
}

TEST_CASE("expected_likelihood examples") {
  CHECK(expected_likelihood(Tensor::from_rows({{1, 0}, {0, 1}}), {{0.3, 0.7}}) == Vector{0.3, 0.7});
  const Tensor flat({3, 2, 2}, 1.0 / 3.0);
  const Vector qo = expected_likelihood(flat, {{0.2, 0.8}, {0.6, 0.4}});
  for (double x : qo) CHECK(x == doctest::Approx(1.0 / 3.0));
  const Vector col = expected_likelihood(listing2_A(), {{0.0, 0.0, 1.0}});
  CHECK(col[0] == doctest::Approx(0.2741).epsilon(1e-4));
  CHECK(col[2] == doctest::Approx(0.4519).epsilon(1e-4));
  CHECK_THROWS_AS(expected_likelihood(flat, {{0.5, 0.5}}), ShapeError);
}

TEST_CASE("expected_likelihood preserves normalisation") {
  oracle::Gen g(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto shape = oracle::random_shape(g, 3, 4, 1, 5, 1);
    const auto model = oracle::random_model(g, shape, true);
    const Belief qs = oracle::random_belief(g, shape.num_states, true);
    const Vector qo = expected_likelihood(model.A[0], qs);
    CHECK(std::abs(sum(qo) - 1.0) <= 1e-10);
    const Vector ref = oracle::predictive(model.A[0], qs);
    for (std::size_t o = 0; o < qo.size(); ++o) CHECK(qo[o] == doctest::Approx(ref[o]).epsilon(1e-12));
  }
}

TEST_CASE("likelihood_message examples") {
  const Tensor eye = Tensor::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const Vector m = likelihood_message(eye, 1, {{0.2, 0.3, 0.5}}, 0);
  CHECK(m[1] == 0.0);
  CHECK(m[0] == doctest::Approx(std::log(1e-16)));
  CHECK(m[2] == doctest::Approx(std::log(1e-16)));

  const Tensor flat({2, 2, 3}, 0.5);
  const Vector c = likelihood_message(flat, 1, {{0.1, 0.9}, {0.2, 0.3, 0.5}}, 1);
  for (double x : c) CHECK(x == doctest::Approx(std::log(0.5)));

  // Two binary factors, explicit double loop over the partner factor.
  Tensor A({2, 2, 2});
  const double p[2][2] = {{0.9, 0.3}, {0.6, 0.15}};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      A({0, i, j}) = p[i][j];
      A({1, i, j}) = 1.0 - p[i][j];
    }
  }
  const Belief qs{{0.4, 0.6}, {0.7, 0.3}};
  const Vector msg = likelihood_message(A, 1, qs, 0);
  for (std::size_t i = 0; i < 2; ++i) {
    double expected = 0.0;
    for (std::size_t j = 0; j < 2; ++j) expected += qs[1][j] * std::log(1.0 - p[i][j]);
    CHECK(msg[i] == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK_THROWS_AS(likelihood_message(A, 2, qs, 0), IndexError);
  CHECK_THROWS_AS(likelihood_message(A, 0, qs, 2), IndexError);
}

TEST_CASE("likelihood_message matches brute-force enumeration") {
  oracle::Gen g(13);
  for (int trial = 0; trial < 300; ++trial) {
    const auto shape = oracle::random_shape(g, 3, 4, 1, 4, 1);
    const auto model = oracle::random_model(g, shape, true);
    const Belief qs = oracle::random_belief(g, shape.num_states, true);
    const std::size_t obs = g.index(shape.num_obs[0]);
    const std::size_t f = g.index(shape.num_states.size());
    const Vector msg = likelihood_message(model.A[0], obs, qs, f);

    Vector expected(shape.num_states[f], 0.0);
    for (std::size_t j = 0; j < oracle::joint_count(shape.num_states); ++j) {
      const auto idx = oracle::decode(j, shape.num_states);
      double w = 1.0;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i != f) w *= qs[i][idx[i]];
      }
      expected[idx[f]] += w * oracle::flog(oracle::lik(model.A[0], obs, j));
    }
    REQUIRE(msg.size() == expected.size());
    for (std::size_t s = 0; s < msg.size(); ++s) CHECK(std::abs(msg[s] - expected[s]) <= 1e-10);
  }
}

TEST_CASE("outer examples") {
  const Tensor a = outer({{1.0, 0.0}, {0.5, 0.5}});
  CHECK(a.dims() == std::vector<std::size_t>{2, 2});
  CHECK(a == Tensor({2, 2}, Vector{0.5, 0.5, 0.0, 0.0}));
  CHECK(outer({{0.1, 0.2, 0.7}}) == Tensor({3}, Vector{0.1, 0.2, 0.7}));
  const Vector u{1.0, 2.0}, v{0.5, 1.5, 2.5}, w{3.0, -1.0};
  const Tensor t = outer({u, v, w});
  CHECK(t.dims() == std::vector<std::size_t>{2, 3, 2});
  CHECK(t.sum() == doctest::Approx(sum(u) * sum(v) * sum(w)));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 2; ++k) CHECK(t({i, j, k}) == doctest::Approx(u[i] * v[j] * w[k]));
    }
  }
  CHECK_THROWS_AS(outer({}), ShapeError);
}

TEST_CASE("outer is multilinear") {
  oracle::Gen g(14);
  for (int trial = 0; trial < 100; ++trial) {
    Vector u(g.between(1, 4)), v(g.between(1, 4));
    for (auto& x : u) x = g.uniform(-2.0, 2.0);
    for (auto& x : v) x = g.uniform(-2.0, 2.0);
    const double alpha = g.uniform(-3.0, 3.0);
    Vector au = u;
    for (auto& x : au) x *= alpha;
    const Tensor lhs = outer({au, v});
    const Tensor rhs = outer({u, v});
    for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs.values()[i] == doctest::Approx(alpha * rhs.values()[i]));
  }
}

TEST_CASE("entropy examples and bounds") {
  CHECK(entropy(Vector{1.0, 0.0}) == 0.0);
  CHECK(entropy(Vector{0.5, 0.5}) == doctest::Approx(std::log(2.0)));
  for (std::size_t n = 1; n <= 10; ++n) CHECK(entropy(Vector(n, 1.0 / n)) == doctest::Approx(std::log(n)));
  oracle::Gen g(15);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = g.between(1, 9);
    const double h = entropy(g.categorical(n, true));
    CHECK(h >= 0.0);
    CHECK(h <= std::log(static_cast<double>(n)) + 1e-12);
  }
}

TEST_CASE("mutual information matches the KL form") {
  oracle::Gen g(16);
  for (int trial = 0; trial < 200; ++trial) {
    const auto shape = oracle::random_shape(g, 2, 3, 2, 3, 1);
    const auto model = oracle::random_model(g, shape, true);
    const Belief qs = oracle::random_belief(g, shape.num_states, true);
    CHECK(std::abs(mutual_information(model.A, qs) - oracle::kl_epistemic(model.A, qs)) <= 1e-10);
  }
}

}
