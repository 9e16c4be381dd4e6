#include <doctest.h>

#include <cmath>

#include "ddac/assignment.hpp"
#include "support.hpp"

using namespace ddac;

namespace {

double row_entropy(const Matrix& m, std::size_t i) {
  double h = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (m(i, j) > 0) h -= m(i, j) * std::log(m(i, j));
  return h;
}

// rows are cyclic shifts of random stochastic base rows, so every column of Q
// has the same sum
Matrix equal_frequency_q(std::size_t groups, std::size_t k, RngStream& rng) {
  Matrix q(groups * k, k);
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<double> base(k);
    double total = 0.0;
    for (auto& v : base) {
      v = rng.uniform(0.05, 1.0);
      total += v;
    }
    for (auto& v : base) v /= total;
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t j = 0; j < k; ++j)
        q(g * k + s, j) = base[(j + s) % k];
  }
  return q;
}

}  // namespace

TEST_SUITE_BEGIN("assignment");

TEST_CASE("equidistant point gets a uniform row") {
  const Matrix z({{0.0, 0.0}});
  const Matrix mu({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}});
  const Matrix q = soft_assign(z, mu);
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(q(0, j) == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("1-d worked value: kernels (1, 1/2) normalize to (2/3, 1/3)") {
  const Matrix q = soft_assign(Matrix({{0.0}}), Matrix({{0.0}, {1.0}}));
  CHECK(q(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(q(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("soft assign rows sum to one") {
  RngStream rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix z = testsupport::random_matrix(12, 4, -3, 3, rng);
    const Matrix mu = testsupport::random_matrix(5, 4, -3, 3, rng);
    const Matrix q = soft_assign(z, mu);
    for (std::size_t i = 0; i < q.rows(); ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < q.cols(); ++j) total += q(i, j);
      CHECK(std::abs(total - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("target distribution worked value") {
  const Matrix q({{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}});
  const Matrix p = target_distribution(q);
  CHECK(p(0, 0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(p(0, 1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(p(1, 0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(p(1, 1) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("uniform Q is a fixed point of sharpening") {
  const Matrix q = Matrix::full(4, 3, 1.0 / 3);
  const Matrix p = target_distribution(q);
  for (double v : p.values()) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("target rows sum to one for random Q") {
  RngStream rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix z = testsupport::random_matrix(9, 3, -2, 2, rng);
    const Matrix mu = testsupport::random_matrix(4, 3, -2, 2, rng);
    const Matrix p = target_distribution(soft_assign(z, mu));
    for (std::size_t i = 0; i < p.rows(); ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < p.cols(); ++j) total += p(i, j);
      CHECK(std::abs(total - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("zero column is a degenerate cluster") {
  Matrix q({{1.0, 0.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(target_distribution(q), DomainError);
}

TEST_CASE("confidence mask uses a strict threshold") {
  CHECK(confidence_mask(Matrix({{0.8, 0.2}}), 0.5)[0] == 1);
  CHECK(confidence_mask(Matrix({{0.5, 0.5}}), 0.5)[0] == 0);
}

TEST_CASE("delta below 1/k confides every sample") {
  RngStream rng(14);
  const Matrix z = testsupport::random_matrix(15, 3, -2, 2, rng);
  const Matrix mu = testsupport::random_matrix(4, 3, -2, 2, rng);
  const Matrix p = target_distribution(soft_assign(z, mu));
  for (auto t : confidence_mask(p, 0.2)) CHECK(t == 1);  // 0.2 < 1/4
}

TEST_CASE("sharpening under equal cluster frequencies") {
  RngStream rng(22);
  const Matrix q = equal_frequency_q(6, 4, rng);
  const Matrix p = target_distribution(q);
  for (std::size_t i = 0; i < q.rows(); ++i) {
    CHECK(row_entropy(p, i) <= row_entropy(q, i) + 1e-12);
    // argmax preserved row by row
    std::size_t aq = 0, ap = 0;
    for (std::size_t j = 1; j < 4; ++j) {
      if (q(i, j) > q(i, aq)) aq = j;
      if (p(i, j) > p(i, ap)) ap = j;
    }
    CHECK(aq == ap);
  }
}

TEST_CASE("mask count is non-increasing in delta") {
  RngStream rng(23);
  const Matrix z = testsupport::random_matrix(40, 3, -2, 2, rng);
  const Matrix mu = testsupport::random_matrix(3, 3, -2, 2, rng);
  const Matrix p = target_distribution(soft_assign(z, mu));
  std::size_t prev = p.rows() + 1;
  for (double delta : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) {
    const auto t = confidence_mask(p, delta);
    std::size_t count = 0;
    for (auto ti : t) count += ti;
    CHECK(count <= prev);
    prev = count;
  }
}

TEST_CASE("make_assignment fills omega with the support of t") {
  RngStream rng(25);
  const Matrix z = testsupport::random_matrix(10, 2, -2, 2, rng);
  const Matrix mu = testsupport::random_matrix(2, 2, -2, 2, rng);
  const AssignmentState state = make_assignment(z, mu, 0.55);
  std::size_t count = 0;
  for (std::size_t i = 0; i < state.t.size(); ++i) {
    if (state.t[i]) {
      REQUIRE(count < state.omega.size());
      CHECK(state.omega[count] == i);
      ++count;
    }
  }
  CHECK(count == state.omega.size());
  CHECK(state.delta == 0.55);
}

TEST_CASE("argmax labels break ties toward the lowest index") {
  const Matrix scores({{0.4, 0.4, 0.2}, {0.1, 0.2, 0.7}});
  const auto labels = argmax_labels(scores);
  CHECK(labels[0] == 0);
  CHECK(labels[1] == 2);
}

TEST_SUITE_END();
