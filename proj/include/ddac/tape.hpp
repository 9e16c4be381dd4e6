#pragma once

#include <deque>
#include <functional>
#include <vector>

#include "ddac/matrix.hpp"

namespace ddac {

class Tape;

/// Handle to a node on a Tape. Cheap to copy; valid as long as the tape lives.
class Var {
public:
  Var() = default;

  const Matrix& value() const;
  const Matrix& grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool tracked() const;
  bool valid() const { return tape_ != nullptr; }
  Tape* tape() const { return tape_; }

private:
  friend class Tape;
  Var(Tape* tape, std::size_t node) : tape_(tape), node_(node) {}

  Tape* tape_ = nullptr;
  std::size_t node_ = 0;
};

/// Recorded computation graph for one forward pass (define-by-run). Nodes are
/// appended in evaluation order, so reverse index order is a valid topological
/// order for the backward sweep. One backward pass per tape.
class Tape {
public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that does not receive a gradient.
  Var constant(Matrix value);

  /// Leaf that accumulates a gradient during backward().
  Var parameter(Matrix value);

  /// Scalar constant convenience.
  Var scalar(double value) { return constant(Matrix(1, 1, {value})); }

  /// Reverse sweep from a 1x1 loss node. Seeds d(loss)/d(loss) = 1 and
  /// populates grad() of every tracked node that feeds the loss.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

  // -- used by the primitive implementations ---------------------------------
  using PullFn = std::function<void(Tape&, std::size_t)>;

  Var emplace(Matrix value, std::vector<std::size_t> parents, PullFn pull,
              const char* op_name);
  const Matrix& value_of(std::size_t node) const { return nodes_[node].value; }
  Matrix& grad_of(std::size_t node) { return nodes_[node].grad; }
  bool tracked_node(std::size_t node) const { return nodes_[node].tracked; }
  std::size_t index_of(Var v, const char* op_name) const;

private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::vector<std::size_t> parents;
    PullFn pull;
    bool tracked = false;
  };

  // deque keeps references stable while the tape grows
  std::deque<Node> nodes_;
  bool backward_done_ = false;
};

// --- primitive operation set -------------------------------------------------
// Each primitive validates shapes, computes the forward value, and records the
// exact analytic adjoint.

Var matmul(Var a, Var b);
Var transpose(Var a);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
Var square(Var a);
Var reciprocal(Var a);
Var relu(Var a);
Var softmax_rows(Var a);
Var row_sum(Var a);  // n x m -> n x 1
Var col_sum(Var a);  // n x m -> 1 x m
Var sum(Var a);      // -> 1 x 1
Var mean(Var a);     // -> 1 x 1
Var sqfrob(Var a);   // squared Frobenius norm -> 1 x 1
Var log(Var a);      // natural log; throws DomainError on non-positive entries
Var pairwise_sqdist(Var a, Var b);  // n x d, k x d -> n x k of ||a_i - b_j||^2
Var broadcast_row(Var row, std::size_t rows);  // 1 x m -> rows x m
Var broadcast_col(Var col, std::size_t cols);  // n x 1 -> n x cols

/// Max relative error between the tape gradient of f and central finite
/// differences at `point`, entrywise |analytic - fd| / max(1, |analytic|).
double grad_check(const std::function<Var(Tape&, Var)>& f, const Matrix& point,
                  double step);

}  // namespace ddac
