#pragma once

#include <vector>

#include "grace/matrix.hpp"

namespace grace {

/// Handle into a Tape. Cheap to copy; only meaningful with the tape that
/// produced it.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

/// Reverse-mode differentiation over matrix-level primitives.
///
/// Each builder method computes the forward value immediately and records the
/// node; nodes are therefore stored in topological order and backward() walks
/// them exactly once in reverse. Leaves created with input() receive
/// gradients, constant() leaves do not, and subtrees that depend on no input
/// are skipped during the backward pass.
class Tape {
 public:
  Var input(Matrix value);
  Var constant(Matrix value);

  Var matmul(Var a, Var b);     // A * B
  Var matmul_nt(Var a, Var b);  // A * B^T
  Var add(Var a, Var b);
  Var hadamard(Var a, Var b);
  Var scale(Var a, double s);
  Var add_row_broadcast(Var a, Var row);  // every row of A + row vector

  Var relu(Var a);
  Var threshold_keep(Var a, double cutoff);  // entries > cutoff kept, else 0
  Var rsqrt(Var a);                          // elementwise x^(-1/2)
  Var log_floored(Var a, double floor_value);
  Var abs(Var a);

  Var sum_all(Var a);            // -> 1x1
  Var sum_rows(Var a);           // m x n -> m x 1
  Var softmax_row(Var a);        // 1 x k -> simplex

  /// Seeds d(out)/d(out) = 1 on a 1x1 node and accumulates adjoints.
  void backward(Var scalar_output);

  const Matrix& value(Var v) const;
  const Matrix& grad(Var v) const;  // only after backward, only for inputs

  int size() const { return static_cast<int>(nodes_.size()); }

  /// Re-runs every non-leaf forward computation from stored parent values and
  /// compares bitwise. Exists for the replay invariant tests.
  bool replay_matches() const;

 private:
  enum class Op {
    leaf,
    matmul,
    matmul_nt,
    add,
    hadamard,
    scale,
    add_row_broadcast,
    relu,
    threshold_keep,
    rsqrt,
    log_floored,
    abs,
    sum_all,
    sum_rows,
    softmax_row,
  };

  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    double param = 0.0;
    bool needs_grad = false;
    Matrix value;
    Matrix grad;
  };

  Var push(Op op, int a, int b, double param, Matrix value, bool needs_grad);
  const Node& node(Var v) const;
  static Matrix forward_value(Op op, const Matrix* a, const Matrix* b,
                              double param);

  std::vector<Node> nodes_;
  bool ran_backward_ = false;
};

}  // namespace grace
