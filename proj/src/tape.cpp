#include "grace/tape.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "grace/kernels.hpp"

namespace grace {

namespace {

[[noreturn]] void tape_shape_error(const char* op, const Matrix& a,
                                   const Matrix& b) {
  throw std::invalid_argument(std::string("tape ") + op +
                              ": incompatible shapes " + a.shape_str() +
                              " and " + b.shape_str());
}

}  // namespace

Var Tape::push(Op op, int a, int b, double param, Matrix value,
               bool needs_grad) {
  Node n;
  n.op = op;
  n.a = a;
  n.b = b;
  n.param = param;
  n.needs_grad = needs_grad;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || v.id >= static_cast<int>(nodes_.size()))
    throw std::logic_error("tape: invalid var handle");
  return nodes_[v.id];
}

Var Tape::input(Matrix value) {
  return push(Op::leaf, -1, -1, 0.0, std::move(value), true);
}

Var Tape::constant(Matrix value) {
  return push(Op::leaf, -1, -1, 0.0, std::move(value), false);
}

Matrix Tape::forward_value(Op op, const Matrix* a, const Matrix* b,
                           double param) {
  switch (op) {
    case Op::leaf:
      throw std::logic_error("tape: leaf has no forward op");
    case Op::matmul:
      return grace::matmul(*a, *b);
    case Op::matmul_nt:
      return grace::matmul_nt(*a, *b);
    case Op::add:
      return grace::add(*a, *b);
    case Op::hadamard:
      return grace::hadamard(*a, *b);
    case Op::scale:
      return grace::scale(*a, param);
    case Op::add_row_broadcast: {
      Matrix out(a->rows(), a->cols());
      for (int i = 0; i < a->rows(); ++i)
        kernels::add(out.row(i), a->row(i), b->row(0),
                     static_cast<std::size_t>(a->cols()));
      return out;
    }
    case Op::relu:
      return grace::relu(*a);
    case Op::threshold_keep: {
      Matrix out(a->rows(), a->cols());
      kernels::threshold_keep(out.data(), a->data(), param, a->size());
      return out;
    }
    case Op::rsqrt: {
      Matrix out(a->rows(), a->cols());
      for (std::size_t i = 0; i < a->size(); ++i)
        out.data()[i] = 1.0 / std::sqrt(a->data()[i]);
      return out;
    }
    case Op::log_floored: {
      Matrix out(a->rows(), a->cols());
      for (std::size_t i = 0; i < a->size(); ++i) {
        double x = a->data()[i];
        out.data()[i] = std::log(x > param ? x : param);
      }
      return out;
    }
    case Op::abs: {
      Matrix out(a->rows(), a->cols());
      for (std::size_t i = 0; i < a->size(); ++i)
        out.data()[i] = std::fabs(a->data()[i]);
      return out;
    }
    case Op::sum_all: {
      Matrix out(1, 1);
      out(0, 0) = grace::sum(*a);
      return out;
    }
    case Op::sum_rows: {
      Matrix out(a->rows(), 1);
      for (int i = 0; i < a->rows(); ++i)
        out(i, 0) =
            kernels::sum(a->row(i), static_cast<std::size_t>(a->cols()));
      return out;
    }
    case Op::softmax_row: {
      Matrix out(1, a->cols());
      double mx = a->data()[0];
      for (int j = 1; j < a->cols(); ++j)
        if ((*a)(0, j) > mx) mx = (*a)(0, j);
      double z = 0.0;
      for (int j = 0; j < a->cols(); ++j) {
        out(0, j) = std::exp((*a)(0, j) - mx);
        z += out(0, j);
      }
      for (int j = 0; j < a->cols(); ++j) out(0, j) /= z;
      return out;
    }
  }
  throw std::logic_error("tape: unknown op");
}

Var Tape::matmul(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  Matrix v = forward_value(Op::matmul, &na.value, &nb.value, 0.0);
  return push(Op::matmul, a.id, b.id, 0.0, std::move(v),
              na.needs_grad || nb.needs_grad);
}

Var Tape::matmul_nt(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  Matrix v = forward_value(Op::matmul_nt, &na.value, &nb.value, 0.0);
  return push(Op::matmul_nt, a.id, b.id, 0.0, std::move(v),
              na.needs_grad || nb.needs_grad);
}

Var Tape::add(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  Matrix v = forward_value(Op::add, &na.value, &nb.value, 0.0);
  return push(Op::add, a.id, b.id, 0.0, std::move(v),
              na.needs_grad || nb.needs_grad);
}

Var Tape::hadamard(Var a, Var b) {
  const Node& na = node(a);
  const Node& nb = node(b);
  Matrix v = forward_value(Op::hadamard, &na.value, &nb.value, 0.0);
  return push(Op::hadamard, a.id, b.id, 0.0, std::move(v),
              na.needs_grad || nb.needs_grad);
}

Var Tape::scale(Var a, double s) {
  const Node& na = node(a);
  Matrix v = forward_value(Op::scale, &na.value, nullptr, s);
  return push(Op::scale, a.id, -1, s, std::move(v), na.needs_grad);
}

Var Tape::add_row_broadcast(Var a, Var row) {
  const Node& na = node(a);
  const Node& nr = node(row);
  if (nr.value.rows() != 1 || nr.value.cols() != na.value.cols())
    tape_shape_error("add_row_broadcast", na.value, nr.value);
  Matrix v = forward_value(Op::add_row_broadcast, &na.value, &nr.value, 0.0);
  return push(Op::add_row_broadcast, a.id, row.id, 0.0, std::move(v),
              na.needs_grad || nr.needs_grad);
}

Var Tape::relu(Var a) {
  const Node& na = node(a);
  Matrix v = forward_value(Op::relu, &na.value, nullptr, 0.0);
  return push(Op::relu, a.id, -1, 0.0, std::move(v), na.needs_grad);
}

Var Tape::threshold_keep(Var a, double cutoff) {
  const Node& na = node(a);
  Matrix v = forward_value(Op::threshold_keep, &na.value, nullptr, cutoff);
  return push(Op::threshold_keep, a.id, -1, cutoff, std::move(v),
              na.needs_grad);
}

Var Tape::rsqrt(Var a) {
  const Node& na = node(a);
  Matrix v = forward_value(Op::rsqrt, &na.value, nullptr, 0.0);
  return push(Op::rsqrt, a.id, -1, 0.0, std::move(v), na.needs_grad);
}

Var Tape::log_floored(Var a, double floor_value) {
  const Node& na = node(a);
  Matrix v = forward_value(Op::log_floored, &na.value, nullptr, floor_value);
  return push(Op::log_floored, a.id, -1, floor_value, std::move(v),
              na.needs_grad);
}

Var Tape::abs(Var a) {
  const Node& na = node(a);
  Matrix v = forward_value(Op::abs, &na.value, nullptr, 0.0);
  return push(Op::abs, a.id, -1, 0.0, std::move(v), na.needs_grad);
}

Var Tape::sum_all(Var a) {
  const Node& na = node(a);
  Matrix v = forward_value(Op::sum_all, &na.value, nullptr, 0.0);
  return push(Op::sum_all, a.id, -1, 0.0, std::move(v), na.needs_grad);
}

Var Tape::sum_rows(Var a) {
  const Node& na = node(a);
  Matrix v = forward_value(Op::sum_rows, &na.value, nullptr, 0.0);
  return push(Op::sum_rows, a.id, -1, 0.0, std::move(v), na.needs_grad);
}

Var Tape::softmax_row(Var a) {
  const Node& na = node(a);
  if (na.value.rows() != 1)
    throw std::invalid_argument("tape softmax_row: expected a row vector, got " +
                                na.value.shape_str());
  Matrix v = forward_value(Op::softmax_row, &na.value, nullptr, 0.0);
  return push(Op::softmax_row, a.id, -1, 0.0, std::move(v), na.needs_grad);
}

void Tape::backward(Var scalar_output) {
  if (ran_backward_) throw std::logic_error("tape: backward already ran");
  const Node& out = node(scalar_output);
  if (out.value.rows() != 1 || out.value.cols() != 1)
    throw std::invalid_argument("tape backward: output must be 1x1, got " +
                                out.value.shape_str());
  ran_backward_ = true;

  for (Node& n : nodes_)
    if (n.needs_grad) n.grad = Matrix(n.value.rows(), n.value.cols());
  if (!out.needs_grad) return;  // constant function of constants
  nodes_[scalar_output.id].grad(0, 0) = 1.0;

  for (int id = scalar_output.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || n.op == Op::leaf) continue;
    const Matrix& g = n.grad;
    Node* pa = n.a >= 0 ? &nodes_[n.a] : nullptr;
    Node* pb = n.b >= 0 ? &nodes_[n.b] : nullptr;

    switch (n.op) {
      case Op::leaf:
        break;
      case Op::matmul:
        if (pa->needs_grad) matmul_nt_accum(pa->grad, g, pb->value);
        if (pb->needs_grad) matmul_tn_accum(pb->grad, pa->value, g);
        break;
      case Op::matmul_nt:
        if (pa->needs_grad) matmul_accum(pa->grad, g, pb->value);
        if (pb->needs_grad) matmul_tn_accum(pb->grad, g, pa->value);
        break;
      case Op::add:
        if (pa->needs_grad) add_inplace(pa->grad, g);
        if (pb->needs_grad) add_inplace(pb->grad, g);
        break;
      case Op::hadamard:
        if (pa->needs_grad)
          kernels::mul_accum(pa->grad.data(), g.data(), pb->value.data(),
                             g.size());
        if (pb->needs_grad)
          kernels::mul_accum(pb->grad.data(), g.data(), pa->value.data(),
                             g.size());
        break;
      case Op::scale:
        if (pa->needs_grad)
          kernels::axpy(pa->grad.data(), n.param, g.data(), g.size());
        break;
      case Op::add_row_broadcast:
        if (pa->needs_grad) add_inplace(pa->grad, g);
        if (pb->needs_grad)
          for (int i = 0; i < g.rows(); ++i)
            kernels::axpy(pb->grad.row(0), 1.0, g.row(i),
                          static_cast<std::size_t>(g.cols()));
        break;
      case Op::relu:
        if (pa->needs_grad)
          kernels::relu_grad_accum(pa->grad.data(), g.data(),
                                   pa->value.data(), g.size());
        break;
      case Op::threshold_keep:
        if (pa->needs_grad)
          kernels::threshold_grad_accum(pa->grad.data(), g.data(),
                                        pa->value.data(), n.param, g.size());
        break;
      case Op::rsqrt:
        if (pa->needs_grad)
          for (std::size_t i = 0; i < g.size(); ++i) {
            double y = n.value.data()[i];
            pa->grad.data()[i] += g.data()[i] * (-0.5 * y * y * y);
          }
        break;
      case Op::log_floored:
        if (pa->needs_grad)
          for (std::size_t i = 0; i < g.size(); ++i) {
            double x = pa->value.data()[i];
            if (x > n.param) pa->grad.data()[i] += g.data()[i] / x;
          }
        break;
      case Op::abs:
        if (pa->needs_grad)
          for (std::size_t i = 0; i < g.size(); ++i) {
            double x = pa->value.data()[i];
            // subgradient at 0 taken as 0
            if (x > 0.0)
              pa->grad.data()[i] += g.data()[i];
            else if (x < 0.0)
              pa->grad.data()[i] -= g.data()[i];
          }
        break;
      case Op::sum_all:
        if (pa->needs_grad) {
          double gv = g(0, 0);
          for (std::size_t i = 0; i < pa->grad.size(); ++i)
            pa->grad.data()[i] += gv;
        }
        break;
      case Op::sum_rows:
        if (pa->needs_grad)
          for (int i = 0; i < pa->grad.rows(); ++i) {
            double gv = g(i, 0);
            double* r = pa->grad.row(i);
            for (int j = 0; j < pa->grad.cols(); ++j) r[j] += gv;
          }
        break;
      case Op::softmax_row:
        if (pa->needs_grad) {
          const Matrix& p = n.value;
          double dotgp = kernels::dot(g.data(), p.data(), p.size());
          for (int j = 0; j < p.cols(); ++j)
            pa->grad(0, j) += p(0, j) * (g(0, j) - dotgp);
        }
        break;
    }
  }
}

const Matrix& Tape::value(Var v) const { return node(v).value; }

const Matrix& Tape::grad(Var v) const {
  const Node& n = node(v);
  if (!ran_backward_) throw std::logic_error("tape: grad before backward");
  if (!n.needs_grad)
    throw std::logic_error("tape: no gradient tracked for this node");
  return n.grad;
}

bool Tape::replay_matches() const {
  for (const Node& n : nodes_) {
    if (n.op == Op::leaf) continue;
    const Matrix* a = n.a >= 0 ? &nodes_[n.a].value : nullptr;
    const Matrix* b = n.b >= 0 ? &nodes_[n.b].value : nullptr;
    Matrix again = forward_value(n.op, a, b, n.param);
    if (!(again == n.value)) return false;
  }
  return true;
}

}  // namespace grace
