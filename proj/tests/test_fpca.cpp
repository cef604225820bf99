#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sweetspot/error.hpp"
#include "sweetspot/fpca.hpp"

#include "oracles.hpp"

using namespace sweetspot;
using namespace oracles;

namespace {

Eigen::MatrixXd random_block(std::mt19937_64& rng, Eigen::Index N, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd b(N, n);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index t = 0; t < n; ++t) b(i, t) = g(rng);
  return b;
}

void check_invariants(const FpcaModel& m) {
  const auto k = static_cast<Eigen::Index>(m.k_max());
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      // Eigenfunctions with zero eigenvalue still come from an orthonormal basis.
      const double ip = quadrature_inner(m.weights, m.eigenfunctions.row(i).transpose(), m.eigenfunctions.row(j).transpose());
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-8);
    }
    CHECK(m.eigenvalues(i) >= 0.0);
    if (i > 0) CHECK(m.eigenvalues(i) <= m.eigenvalues(i - 1));
    CHECK(std::abs(m.scores.col(i).mean()) <= 1e-8);
  }
}

double weighted_sse(const FpcaModel& m, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const Eigen::VectorXd d = (a.row(i) - b.row(i)).transpose();
    s += quadrature_inner(m.weights, d, d);
  }
  return s;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::Io;
}

}  // namespace

TEST_CASE("trapezoid weights integrate constants and linear functions exactly") {
  const Eigen::VectorXd w = trapezoid_weights(9);
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(9, 0.0, 1.0);
  CHECK(w.dot(t) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("random 5x8 block agrees with a Jacobi eigen-decomposition") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXd block = random_block(rng, 5, 8);
    const FpcaModel m = fit_fpca(block);
    const Oracle o = oracle_fpca(block);
    REQUIRE(m.k_max() == 4);
    check_invariants(m);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(m.eigenvalues(static_cast<Eigen::Index>(k)) - o.eigenvalues[k]) <= 1e-8);
      for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::abs(m.scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) - o.scores[i][k]) <= 1e-8);
      }
    }
  }
}

TEST_CASE("identical rows have zero variance") {
  Eigen::MatrixXd block(4, 6);
  for (Eigen::Index i = 0; i < 4; ++i) block.row(i) << 1, 2, 3, 2, 1, 0;
  const FpcaModel m = fit_fpca(block);
  CHECK(m.eigenvalues.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(m.scores.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((m.mean_curve.transpose() - block.row(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rank-one constant curves") {
  Eigen::MatrixXd block(3, 7);
  block.row(0).setConstant(-1.0);
  block.row(1).setConstant(0.0);
  block.row(2).setConstant(1.0);
  const FpcaModel m = fit_fpca(block);
  check_invariants(m);
  CHECK(m.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(m.eigenvalues(1) <= 1e-12);
  CHECK((m.eigenfunctions.row(0).array() - 1.0).abs().maxCoeff() <= 1e-8);
  CHECK(m.scores(0, 0) == doctest::Approx(-1.0));
  CHECK(std::abs(m.scores(1, 0)) <= 1e-12);
  CHECK(m.scores(2, 0) == doctest::Approx(1.0));
  CHECK((reconstruct(m, 1) - block).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("reconstruction error drops by (N-1) times each eigenvalue") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd block = random_block(rng, 12, 20);
  const FpcaModel m = fit_fpca(block);
  check_invariants(m);
  CHECK((reconstruct(m, m.k_max()) - block).cwiseAbs().maxCoeff() <= 1e-6);
  double prev = 0.0;
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    const Eigen::VectorXd d = block.row(i).transpose() - m.mean_curve;
    prev += quadrature_inner(m.weights, d, d);
  }
  for (std::size_t k = 1; k <= m.k_max(); ++k) {
    const double err = weighted_sse(m, block, reconstruct(m, k));
    CHECK(err <= prev + 1e-12);
    CHECK(std::abs((prev - err) - 11.0 * m.eigenvalues(static_cast<Eigen::Index>(k - 1))) <= 1e-8);
    prev = err;
  }
}

TEST_CASE("total variance identity") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Eigen::MatrixXd block = random_block(rng, 6 + rep, 15);
    const FpcaModel m = fit_fpca(block);
    double total = 0.0;
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
      const Eigen::VectorXd d = block.row(i).transpose() - m.mean_curve;
      total += quadrature_inner(m.weights, d, d);
    }
    total /= static_cast<double>(block.rows() - 1);
    CHECK(std::abs(m.eigenvalues.sum() - total) <= 1e-8);
  }
}

TEST_CASE("shift and permutation invariance") {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd block = random_block(rng, 8, 10);
  const FpcaModel base = fit_fpca(block);

  const FpcaModel shifted = fit_fpca(block.array() + 42.0);
  CHECK((shifted.eigenvalues - base.eigenvalues).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((shifted.scores - base.scores).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((shifted.mean_curve.array() - base.mean_curve.array() - 42.0).abs().maxCoeff() <= 1e-10);

  std::vector<int> perm{3, 0, 7, 5, 1, 6, 2, 4};
  Eigen::MatrixXd permuted(8, 10);
  for (int i = 0; i < 8; ++i) permuted.row(i) = block.row(perm[static_cast<std::size_t>(i)]);
  const FpcaModel p = fit_fpca(permuted);
  CHECK((p.eigenvalues - base.eigenvalues).cwiseAbs().maxCoeff() <= 1e-8);
  for (int i = 0; i < 8; ++i) {
    CHECK((p.scores.row(i) - base.scores.row(perm[static_cast<std::size_t>(i)])).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("score columns and errors") {
  std::mt19937_64 rng(1);
  FpcaModel m = fit_fpca(random_block(rng, 15, 30));
  m.property = "GR";
  m.formation = "WolfcampA";
  const auto ten = fpca_scores(m, 10);
  CHECK(ten.scores.cols() == 10);
  CHECK(ten.names.front() == "GR_WolfcampA_fpc1");
  CHECK(ten.names.back() == "GR_WolfcampA_fpc10");
  CHECK(fpca_scores(m, m.k_max()).scores == m.scores);
  CHECK(code_of([&] { fpca_scores(m, 0); }) == Errc::KOutOfRange);
  CHECK(code_of([&] { fpca_scores(m, m.k_max() + 1); }) == Errc::KOutOfRange);
  CHECK(code_of([&] { reconstruct(m, 0); }) == Errc::KOutOfRange);
  CHECK(code_of([] { fit_fpca(Eigen::MatrixXd::Zero(2, 5)); }) == Errc::TooFewWells);
  CHECK(code_of([] { fit_fpca(Eigen::MatrixXd::Zero(5, 1)); }) == Errc::DegenerateGrid);
}
