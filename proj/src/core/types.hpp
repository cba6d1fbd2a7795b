#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace pf2es {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Axis-aligned design box. lower[i] < upper[i] for every coordinate.
struct Bounds {
  Vector lower;
  Vector upper;

  Bounds() = default;
  Bounds(Vector lo, Vector hi);

  Eigen::Index dim() const { return lower.size(); }
  bool contains(const Eigen::Ref<const Vector>& x) const;
  Vector clip(const Eigen::Ref<const Vector>& x) const;
  Vector range() const { return upper - lower; }
};

/// Maps a point in the box to M objective values followed by C constraint values.
using Evaluator = std::function<Vector(const Eigen::Ref<const Vector>&)>;

/// Black-box problem: maximize M objectives subject to C constraints >= 0.
struct ProblemSpec {
  std::string name;
  Bounds bounds;
  int num_objectives = 0;
  int num_constraints = 0;
  Evaluator evaluator;

  int dim() const { return static_cast<int>(bounds.dim()); }
  int num_outputs() const { return num_objectives + num_constraints; }

  /// Evaluates and checks the M+C finite-values contract.
  Vector evaluate(const Eigen::Ref<const Vector>& x) const;
};

/// Observed inputs (one row per point) and outputs (M+C columns).
struct Dataset {
  Matrix inputs;
  Matrix outputs;

  Eigen::Index size() const { return inputs.rows(); }
  void append(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);
  void validate(const Bounds& bounds, int num_outputs) const;
};

/// One output vector split into objectives and constraints.
struct OutputVector {
  Vector objectives;
  Vector constraints;

  OutputVector() = default;
  OutputVector(Vector objs, Vector cons = Vector()) : objectives(std::move(objs)), constraints(std::move(cons)) {}

  /// Feasible iff every constraint value is >= 0 (no slack).
  bool feasible() const;
};

/// Splits a stacked (M+C) row into an OutputVector.
OutputVector split_output(const Eigen::Ref<const Vector>& row, int num_objectives);

/// True iff every value is >= 0.
bool is_feasible(const Eigen::Ref<const Vector>& constraints);

}  // namespace pf2es
