#include <random>

#include <doctest.h>

#include "opschwarz/errors.hpp"
#include "opschwarz/opinf.hpp"

using namespace opschwarz;

namespace {

Matrix random_matrix(int rows, int cols, std::mt19937& gen, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = dist(gen);
  return m;
}

/// States, inputs and exact derivatives consistent with xdot = K x + B y.
TrainingData consistent_data(const Matrix& k, const Matrix& b, int j, std::mt19937& gen) {
  TrainingData d;
  d.states = random_matrix(k.rows(), j, gen);
  d.inputs = random_matrix(b.cols(), j, gen);
  d.derivatives = k * d.states.rightCols(j - 1) + b * d.inputs.rightCols(j - 1);
  return d;
}

}  // namespace

TEST_CASE("backward differences") {
  Matrix lin(2, 5), cst = Matrix::Constant(3, 4, 1.7), sq(1, 4);
  for (int p = 0; p < 5; ++p) lin.col(p) << 2.0 * 0.1 * p, -0.5 * 0.1 * p;
  const Matrix d = estimate_derivatives(lin, 0.1);
  REQUIRE(d.cols() == 4);
  CHECK((d.row(0).array() - 2.0).abs().maxCoeff() <= 1e-12);
  CHECK((d.row(1).array() + 0.5).abs().maxCoeff() <= 1e-12);
  CHECK(estimate_derivatives(cst, 0.3).cwiseAbs().maxCoeff() == 0.0);
  for (int p = 0; p < 4; ++p) sq(0, p) = (0.1 * p) * (0.1 * p);
  CHECK(estimate_derivatives(sq, 0.1)(0, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_derivatives(Matrix::Ones(2, 1), 0.1), NumericalError);
}

TEST_CASE("exact recovery without regularization") {
  std::mt19937 gen(11);
  const Matrix k = random_matrix(3, 3, gen), b = random_matrix(3, 2, gen);
  const TrainingData d = consistent_data(k, b, 12, gen);
  const ReducedOperators ops = infer_operators(d, 0.0);
  CHECK((ops.K - k).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((ops.B - b).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("rank-deficient data needs regularization") {
  std::mt19937 gen(5);
  TrainingData d = consistent_data(Matrix::Identity(3, 3), Matrix::Ones(3, 2), 4, gen);
  // 3 regression columns for 5 unknowns per row
  CHECK_THROWS_AS(infer_operators(d, 0.0), NumericalError);
  CHECK_NOTHROW(infer_operators(d, 1e-2));
}

TEST_CASE("heavy regularization shrinks the operators") {
  std::mt19937 gen(2);
  const TrainingData d = consistent_data(random_matrix(3, 3, gen), random_matrix(3, 2, gen), 10, gen);
  const ReducedOperators ops = infer_operators(d, 1e6);
  CHECK(ops.K.norm() <= 1e-4);
  CHECK(ops.B.norm() <= 1e-4);
}

TEST_CASE("zero data gives zero operators") {
  TrainingData d;
  d.states = Matrix::Zero(3, 6);
  d.inputs = Matrix::Zero(2, 6);
  d.derivatives = Matrix::Zero(3, 5);
  const ReducedOperators ops = infer_operators(d, 0.5);
  CHECK(ops.K.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ops.B.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("regularized solution is a minimizer") {
  std::mt19937 gen(21);
  TrainingData d = consistent_data(random_matrix(4, 4, gen), random_matrix(4, 3, gen), 9, gen);
  d.derivatives += random_matrix(4, 8, gen, 0.1);
  const double lambda = 0.3;
  const ReducedOperators best = infer_operators(d, lambda);
  const double f0 = regression_objective(d, best, lambda);
  for (int trial = 0; trial < 12; ++trial) {
    Matrix dk = random_matrix(4, 4, gen), db = random_matrix(4, 3, gen);
    const double scale = 1e-3 / std::sqrt(dk.squaredNorm() + db.squaredNorm());
    const ReducedOperators moved{best.K + scale * dk, best.B + scale * db};
    CHECK(regression_objective(d, moved, lambda) >= f0);
  }
}

TEST_CASE("operator norms shrink with lambda") {
  std::mt19937 gen(8);
  TrainingData d = consistent_data(random_matrix(3, 3, gen), random_matrix(3, 2, gen), 7, gen);
  d.derivatives += random_matrix(3, 6, gen, 0.2);
  double last = INFINITY;
  for (double lambda : {0.0, 1e-3, 1e-2, 0.1, 0.5, 1.0, 5.0, 50.0}) {
    const ReducedOperators ops = infer_operators(d, lambda);
    const double n = std::sqrt(ops.K.squaredNorm() + ops.B.squaredNorm());
    CHECK(n <= last * (1 + 1e-12));
    last = n;
  }
}

TEST_CASE("reduced step") {
  ReducedModel m;
  m.basis.modes = Matrix::Identity(1, 1);
  m.basis.mean = Vector::Zero(1);
  m.K = Matrix::Constant(1, 1, -1.0);
  m.B = Matrix::Zero(1, 1);
  const Vector one = Vector::Ones(1);
  CHECK(rom_step(m, one, Vector::Zero(1), 0.01)[0] == doctest::Approx(1.0 / 1.01).epsilon(1e-15));

  m.K = Matrix::Zero(2, 2);
  m.B = Matrix::Identity(2, 2);
  m.basis.modes = Matrix::Identity(2, 2);
  m.basis.mean = Vector::Zero(2);
  Vector x(2), y(2);
  x << 0.3, -1;
  y << 2, 4;
  CHECK((rom_step(m, x, y, 0.1) - (x + 0.1 * y)).cwiseAbs().maxCoeff() <= 1e-15);
  m.B = Matrix::Zero(2, 2);
  CHECK((rom_step(m, x, y, 0.1) - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("singular reduced system") {
  ReducedModel m;
  m.basis.modes = Matrix::Identity(1, 1);
  m.basis.mean = Vector::Zero(1);
  m.K = Matrix::Constant(1, 1, 100.0);
  m.B = Matrix::Zero(1, 1);
  CHECK_THROWS_AS(ReducedStepper(m, 0.01), NumericalError);
}

TEST_CASE("reconstruction and projection") {
  std::mt19937 gen(4);
  const Matrix q = random_matrix(12, 3, gen).householderQr().householderQ() * Matrix::Identity(12, 3);
  ReducedModel m;
  m.basis.modes = q;
  m.basis.mean = random_matrix(12, 1, gen).col(0);
  CHECK((m.reconstruct(Vector::Zero(3)) - m.basis.mean).cwiseAbs().maxCoeff() == 0.0);
  const Vector xhat = random_matrix(3, 1, gen).col(0);
  const Vector x = m.reconstruct(xhat);
  CHECK((m.project(x) - xhat).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((m.reconstruct(m.project(x)) - x).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("training data alignment") {
  PodBasis b;
  b.modes = Matrix::Identity(2, 2);
  b.mean = Vector::Zero(2);
  Matrix states(2, 5), inputs(1, 5);
  for (int p = 0; p < 5; ++p) {
    states.col(p) << p, p * p;
    inputs(0, p) = 10 + p;
  }
  const TrainingData d = make_training_data(b, states, inputs, 4, 0.5);
  CHECK(d.num_samples() == 4);
  CHECK(d.derivatives.cols() == 3);
  CHECK(d.derivatives(1, 2) == doctest::Approx((9.0 - 4.0) / 0.5));
  CHECK(d.inputs(0, 3) == 13);
}
