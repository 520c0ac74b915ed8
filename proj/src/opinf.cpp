#include "opschwarz/opinf.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "opschwarz/errors.hpp"

namespace opschwarz {

Matrix estimate_derivatives(const Matrix& xhat, double dt) {
  if (xhat.cols() < 2)
    throw NumericalError("derivative estimation needs at least two samples, got " +
                         std::to_string(xhat.cols()));
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const Eigen::Index j = xhat.cols();
  return (xhat.rightCols(j - 1) - xhat.leftCols(j - 1)) / dt;
}

TrainingData make_training_data(const PodBasis& basis, const Matrix& states,
                                const Matrix& inputs, int j, double dt) {
  if (j < 2 || j > states.cols() || j > inputs.cols())
    throw NumericalError("training needs 2 <= j <= available samples, got j = " +
                         std::to_string(j));
  if (states.rows() != basis.size())
    throw ConfigError("training states do not match the basis size");
  TrainingData data;
  data.states = basis.modes.transpose() * (states.leftCols(j).colwise() - basis.mean);
  data.derivatives = estimate_derivatives(data.states, dt);
  data.inputs = inputs.leftCols(j);
  return data;
}

namespace {

// D = [Xhat; Y] restricted to samples 2..j
Matrix regression_matrix(const TrainingData& data) {
  const Eigen::Index n = data.num_samples() - 1;
  const Eigen::Index r = data.states.rows();
  const Eigen::Index m = data.inputs.rows();
  Matrix d(r + m, n);
  d.topRows(r) = data.states.rightCols(n);
  d.bottomRows(m) = data.inputs.rightCols(n);
  return d;
}

}  // namespace

ReducedOperators infer_operators(const TrainingData& data, double lambda) {
  if (data.num_samples() < 2) throw NumericalError("operator inference needs j >= 2 samples");
  if (!(lambda >= 0.0)) throw ConfigError("regularization weight must be non-negative");
  const Eigen::Index r = data.states.rows();
  const Eigen::Index m = data.inputs.rows();
  const Eigen::Index n = data.num_samples() - 1;
  if (data.derivatives.rows() != r || data.derivatives.cols() != n ||
      data.inputs.cols() != data.num_samples())
    throw ConfigError("inconsistent training data dimensions");

  const Matrix d = regression_matrix(data);
  const Eigen::Index unknowns = r + m;

  Matrix lhs(n + unknowns, unknowns);
  lhs.topRows(n) = d.transpose();
  lhs.bottomRows(unknowns) = lambda * Matrix::Identity(unknowns, unknowns);
  Matrix rhs = Matrix::Zero(n + unknowns, r);
  rhs.topRows(n) = data.derivatives.transpose();

  Eigen::ColPivHouseholderQR<Matrix> qr(lhs);
  if (lambda == 0.0 && qr.rank() < unknowns)
    throw NumericalError("data matrix [Xhat; Y] has rank " + std::to_string(qr.rank()) +
                         " < " + std::to_string(unknowns) +
                         "; use a positive regularization weight");
  const Matrix solution = qr.solve(rhs);  // (r + m) x r, i.e. [K B]^T

  ReducedOperators ops;
  ops.K = solution.topRows(r).transpose();
  ops.B = solution.bottomRows(m).transpose();
  if (!ops.K.allFinite() || !ops.B.allFinite())
    throw NumericalError("operator inference produced non-finite entries");
  return ops;
}

double regression_objective(const TrainingData& data, const ReducedOperators& ops,
                            double lambda) {
  const Eigen::Index n = data.num_samples() - 1;
  const Matrix residual = data.derivatives - ops.K * data.states.rightCols(n) -
                          ops.B * data.inputs.rightCols(n);
  return residual.squaredNorm() +
         lambda * lambda * (ops.K.squaredNorm() + ops.B.squaredNorm());
}

Vector ReducedModel::reconstruct(const Vector& xhat) const {
  return basis.modes * xhat + basis.mean;
}

Vector ReducedModel::project(const Vector& x) const {
  return basis.modes.transpose() * (x - basis.mean);
}

ReducedStepper::ReducedStepper(const ReducedModel& model, double dt) : dt_b_(dt * model.B) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const Eigen::Index r = model.K.rows();
  const Matrix system = Matrix::Identity(r, r) - dt * model.K;
  Eigen::FullPivLU<Matrix> check(system);
  if (!check.isInvertible()) {
    const Eigen::VectorXcd eig = model.K.eigenvalues();
    double closest = 0.0;
    double gap = INFINITY;
    for (Eigen::Index k = 0; k < eig.size(); ++k) {
      const double g = std::abs(eig[k] - 1.0 / dt);
      if (g < gap) {
        gap = g;
        closest = eig[k].real();
      }
    }
    std::ostringstream msg;
    msg << "I - dt K is singular for dt = " << dt << " (eigenvalue of K near 1/dt: " << closest
        << ")";
    throw NumericalError(msg.str());
  }
  lu_.compute(system);
}

Vector ReducedStepper::step(const Vector& xhat_n, const Vector& y_next) const {
  if (xhat_n.size() != lu_.rows() || y_next.size() != dt_b_.cols())
    throw ConfigError("reduced state or boundary vector has the wrong length");
  return lu_.solve(xhat_n + dt_b_ * y_next);
}

Vector rom_step(const ReducedModel& model, const Vector& xhat_n, const Vector& y_next,
                double dt) {
  return ReducedStepper(model, dt).step(xhat_n, y_next);
}

}  // namespace opschwarz
