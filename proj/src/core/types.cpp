#include "core/types.hpp"

#include "core/errors.hpp"

#include <cmath>

namespace pf2es {

Bounds::Bounds(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw ContractError("bounds: lower and upper must be non-empty and of equal length");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i]))
      throw ContractError("bounds: coordinate " + std::to_string(i) + " is empty or non-finite");
  }
}

bool Bounds::contains(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != lower.size()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

Vector Bounds::clip(const Eigen::Ref<const Vector>& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

Vector ProblemSpec::evaluate(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != bounds.dim()) throw ContractError(name + ": input has wrong dimension");
  Vector y = evaluator(x);
  if (y.size() != num_outputs())
    throw ContractError(name + ": evaluator returned " + std::to_string(y.size()) + " values, expected " +
                        std::to_string(num_outputs()));
  if (!y.allFinite()) throw ContractError(name + ": evaluator returned a non-finite value");
  return y;
}

void Dataset::append(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  if (inputs.rows() == 0) {
    inputs.resize(0, x.size());
    outputs.resize(0, y.size());
  }
  if (x.size() != inputs.cols() || y.size() != outputs.cols()) throw ContractError("dataset: row width mismatch");
  inputs.conservativeResize(inputs.rows() + 1, Eigen::NoChange);
  outputs.conservativeResize(outputs.rows() + 1, Eigen::NoChange);
  inputs.row(inputs.rows() - 1) = x.transpose();
  outputs.row(outputs.rows() - 1) = y.transpose();
}

void Dataset::validate(const Bounds& bounds, int num_outputs) const {
  if (inputs.rows() != outputs.rows()) throw ContractError("dataset: inputs and outputs differ in row count");
  if (inputs.cols() != bounds.dim()) throw ContractError("dataset: input width does not match bounds");
  if (outputs.cols() != num_outputs) throw ContractError("dataset: output width mismatch");
  for (Eigen::Index r = 0; r < inputs.rows(); ++r) {
    if (!bounds.contains(inputs.row(r).transpose()))
      throw ContractError("dataset: input row " + std::to_string(r) + " lies outside the bounds");
  }
}

bool is_feasible(const Eigen::Ref<const Vector>& constraints) { return (constraints.array() >= 0.0).all(); }

bool OutputVector::feasible() const { return is_feasible(constraints); }

OutputVector split_output(const Eigen::Ref<const Vector>& row, int num_objectives) {
  if (num_objectives < 1 || num_objectives > row.size()) throw ContractError("split_output: bad objective count");
  return OutputVector(row.head(num_objectives), row.tail(row.size() - num_objectives));
}

}  // namespace pf2es
