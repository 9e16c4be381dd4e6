#include "ddac/tape.hpp"

#include <cmath>
#include <utility>

namespace ddac {

namespace {

void check_finite(const Matrix& m, const char* op_name) {
  if (!m.all_finite())
    throw DomainError(std::string(op_name) + ": non-finite result");
}

void require_same_tape(Var a, Var b, const char* op_name) {
  if (a.tape() != b.tape())
    throw Error(std::string(op_name) + ": operands live on different tapes");
}

}  // namespace

const Matrix& Var::value() const { return tape_->value_of(node_); }
const Matrix& Var::grad() const {
  return const_cast<Tape*>(tape_)->grad_of(node_);
}
bool Var::tracked() const { return tape_->tracked_node(node_); }

std::size_t Tape::index_of(Var v, const char* op_name) const {
  if (v.tape_ != this)
    throw Error(std::string(op_name) + ": operand from a different tape");
  return v.node_;
}

Var Tape::constant(Matrix value) {
  check_finite(value, "constant");
  nodes_.push_back(Node{std::move(value), Matrix(), {}, nullptr, false});
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(Matrix value) {
  check_finite(value, "parameter");
  Node node{std::move(value), Matrix(), {}, nullptr, true};
  node.grad = Matrix(node.value.rows(), node.value.cols());
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::emplace(Matrix value, std::vector<std::size_t> parents, PullFn pull,
                  const char* op_name) {
  check_finite(value, op_name);
  bool tracked = false;
  for (std::size_t p : parents)
    if (nodes_[p].tracked) tracked = true;
  Node node{std::move(value), Matrix(), std::move(parents),
            tracked ? std::move(pull) : PullFn(), tracked};
  if (tracked) node.grad = Matrix(node.value.rows(), node.value.cols());
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

void Tape::backward(Var loss) {
  const std::size_t root = index_of(loss, "backward");
  const Matrix& v = nodes_[root].value;
  if (v.rows() != 1 || v.cols() != 1)
    throw ShapeError("backward: loss must be 1x1, got " + v.shape_str());
  if (backward_done_) throw Error("backward: tape already differentiated");
  backward_done_ = true;
  if (!nodes_[root].tracked) return;  // loss independent of all parameters
  nodes_[root].grad(0, 0) = 1.0;
  for (std::size_t i = root + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.tracked && node.pull) node.pull(*this, i);
  }
}

// --- primitives ---------------------------------------------------------------

namespace {

// Binary elementwise helper: forward entries f(a,b); adjoints da += g*dfa, etc.
template <typename Fwd, typename Pull>
Var elementwise2(Var a, Var b, const char* name, Fwd fwd, Pull pull) {
  require_same_tape(a, b, name);
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  require_same_shape(av, bv, name);
  Matrix out(av.rows(), av.cols());
  for (std::size_t i = 0; i < av.size(); ++i)
    out.values()[i] = fwd(av.values()[i], bv.values()[i]);
  const std::size_t ia = tape.index_of(a, name);
  const std::size_t ib = tape.index_of(b, name);
  return tape.emplace(std::move(out), {ia, ib},
                      [ia, ib, pull](Tape& t, std::size_t self) {
                        pull(t, self, ia, ib);
                      },
                      name);
}

}  // namespace

Var matmul(Var a, Var b) {
  require_same_tape(a, b, "matmul");
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.rows())
    throw ShapeError("matmul: inner dimensions differ, " + av.shape_str() + " * " +
                     bv.shape_str());
  Matrix out(av.rows(), bv.cols());
  mm_nn_acc(av, bv, out);
  const std::size_t ia = tape.index_of(a, "matmul");
  const std::size_t ib = tape.index_of(b, "matmul");
  return tape.emplace(
      std::move(out), {ia, ib},
      [ia, ib](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        if (t.tracked_node(ia)) mm_nt_acc(g, t.value_of(ib), t.grad_of(ia));
        if (t.tracked_node(ib)) mm_tn_acc(t.value_of(ia), g, t.grad_of(ib));
      },
      "matmul");
}

Var transpose(Var a) {
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  Matrix out(av.cols(), av.rows());
  for (std::size_t i = 0; i < av.rows(); ++i)
    for (std::size_t j = 0; j < av.cols(); ++j) out(j, i) = av(i, j);
  const std::size_t ia = tape.index_of(a, "transpose");
  return tape.emplace(
      std::move(out), {ia},
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        Matrix& ga = t.grad_of(ia);
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < g.cols(); ++j) ga(j, i) += g(i, j);
      },
      "transpose");
}

Var add(Var a, Var b) {
  return elementwise2(
      a, b, "add", [](double x, double y) { return x + y; },
      [](Tape& t, std::size_t self, std::size_t ia, std::size_t ib) {
        const Matrix& g = t.grad_of(self);
        if (t.tracked_node(ia)) {
          Matrix& ga = t.grad_of(ia);
          for (std::size_t i = 0; i < g.size(); ++i) ga.values()[i] += g.values()[i];
        }
        if (t.tracked_node(ib)) {
          Matrix& gb = t.grad_of(ib);
          for (std::size_t i = 0; i < g.size(); ++i) gb.values()[i] += g.values()[i];
        }
      });
}

Var sub(Var a, Var b) {
  return elementwise2(
      a, b, "sub", [](double x, double y) { return x - y; },
      [](Tape& t, std::size_t self, std::size_t ia, std::size_t ib) {
        const Matrix& g = t.grad_of(self);
        if (t.tracked_node(ia)) {
          Matrix& ga = t.grad_of(ia);
          for (std::size_t i = 0; i < g.size(); ++i) ga.values()[i] += g.values()[i];
        }
        if (t.tracked_node(ib)) {
          Matrix& gb = t.grad_of(ib);
          for (std::size_t i = 0; i < g.size(); ++i) gb.values()[i] -= g.values()[i];
        }
      });
}

Var hadamard(Var a, Var b) {
  return elementwise2(
      a, b, "hadamard", [](double x, double y) { return x * y; },
      [](Tape& t, std::size_t self, std::size_t ia, std::size_t ib) {
        const Matrix& g = t.grad_of(self);
        const Matrix& av = t.value_of(ia);
        const Matrix& bv = t.value_of(ib);
        if (t.tracked_node(ia)) {
          Matrix& ga = t.grad_of(ia);
          for (std::size_t i = 0; i < g.size(); ++i)
            ga.values()[i] += g.values()[i] * bv.values()[i];
        }
        if (t.tracked_node(ib)) {
          Matrix& gb = t.grad_of(ib);
          for (std::size_t i = 0; i < g.size(); ++i)
            gb.values()[i] += g.values()[i] * av.values()[i];
        }
      });
}

namespace {

// Unary elementwise helper; dfa(x, y) is the local derivative given input x
// and output y.
template <typename Fwd, typename Dfa>
Var elementwise1(Var a, const char* name, Fwd fwd, Dfa dfa) {
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  Matrix out(av.rows(), av.cols());
  for (std::size_t i = 0; i < av.size(); ++i) out.values()[i] = fwd(av.values()[i]);
  const std::size_t ia = tape.index_of(a, name);
  return tape.emplace(
      std::move(out), {ia},
      [ia, dfa](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        const Matrix& x = t.value_of(ia);
        const Matrix& y = t.value_of(self);
        Matrix& ga = t.grad_of(ia);
        for (std::size_t i = 0; i < g.size(); ++i)
          ga.values()[i] += g.values()[i] * dfa(x.values()[i], y.values()[i]);
      },
      name);
}

}  // namespace

Var scale(Var a, double s) {
  return elementwise1(
      a, "scale", [s](double x) { return s * x; },
      [s](double, double) { return s; });
}

Var add_scalar(Var a, double s) {
  return elementwise1(
      a, "add_scalar", [s](double x) { return x + s; },
      [](double, double) { return 1.0; });
}

Var square(Var a) {
  return elementwise1(
      a, "square", [](double x) { return x * x; },
      [](double x, double) { return 2.0 * x; });
}

Var reciprocal(Var a) {
  return elementwise1(
      a, "reciprocal", [](double x) { return 1.0 / x; },
      [](double, double y) { return -y * y; });
}

Var relu(Var a) {
  // subgradient at exactly 0 is taken as 0
  return elementwise1(
      a, "relu", [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var log(Var a) {
  const Matrix& av = a.value();
  for (double x : av.values())
    if (!(x > 0.0))
      throw DomainError("log: non-positive entry " + std::to_string(x));
  return elementwise1(
      a, "log", [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Var softmax_rows(Var a) {
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  Matrix out(av.rows(), av.cols());
  for (std::size_t i = 0; i < av.rows(); ++i) {
    const double* xi = av.row(i);
    double* yi = out.row(i);
    double mx = xi[0];
    for (std::size_t j = 1; j < av.cols(); ++j) mx = std::max(mx, xi[j]);
    double total = 0.0;
    for (std::size_t j = 0; j < av.cols(); ++j) {
      yi[j] = std::exp(xi[j] - mx);
      total += yi[j];
    }
    for (std::size_t j = 0; j < av.cols(); ++j) yi[j] /= total;
  }
  const std::size_t ia = tape.index_of(a, "softmax_rows");
  return tape.emplace(
      std::move(out), {ia},
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        const Matrix& y = t.value_of(self);
        Matrix& ga = t.grad_of(ia);
        for (std::size_t i = 0; i < y.rows(); ++i) {
          const double* gi = g.row(i);
          const double* yi = y.row(i);
          double dot = 0.0;
          for (std::size_t j = 0; j < y.cols(); ++j) dot += gi[j] * yi[j];
          double* gai = ga.row(i);
          for (std::size_t j = 0; j < y.cols(); ++j)
            gai[j] += yi[j] * (gi[j] - dot);
        }
      },
      "softmax_rows");
}

Var row_sum(Var a) {
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  Matrix out(av.rows(), 1);
  for (std::size_t i = 0; i < av.rows(); ++i) {
    double acc = 0.0;
    const double* xi = av.row(i);
    for (std::size_t j = 0; j < av.cols(); ++j) acc += xi[j];
    out(i, 0) = acc;
  }
  const std::size_t ia = tape.index_of(a, "row_sum");
  return tape.emplace(
      std::move(out), {ia},
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        Matrix& ga = t.grad_of(ia);
        for (std::size_t i = 0; i < ga.rows(); ++i) {
          double* gai = ga.row(i);
          for (std::size_t j = 0; j < ga.cols(); ++j) gai[j] += g(i, 0);
        }
      },
      "row_sum");
}

Var col_sum(Var a) {
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  Matrix out(1, av.cols());
  for (std::size_t i = 0; i < av.rows(); ++i) {
    const double* xi = av.row(i);
    for (std::size_t j = 0; j < av.cols(); ++j) out(0, j) += xi[j];
  }
  const std::size_t ia = tape.index_of(a, "col_sum");
  return tape.emplace(
      std::move(out), {ia},
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        Matrix& ga = t.grad_of(ia);
        for (std::size_t i = 0; i < ga.rows(); ++i) {
          double* gai = ga.row(i);
          for (std::size_t j = 0; j < ga.cols(); ++j) gai[j] += g(0, j);
        }
      },
      "col_sum");
}

namespace {

Var full_reduce(Var a, const char* name, double scale_factor) {
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  double acc = 0.0;
  for (double x : av.values()) acc += x;
  Matrix out(1, 1, {acc * scale_factor});
  const std::size_t ia = tape.index_of(a, name);
  return tape.emplace(
      std::move(out), {ia},
      [ia, scale_factor](Tape& t, std::size_t self) {
        const double g = t.grad_of(self)(0, 0) * scale_factor;
        Matrix& ga = t.grad_of(ia);
        for (double& x : ga.values()) x += g;
      },
      name);
}

}  // namespace

Var sum(Var a) { return full_reduce(a, "sum", 1.0); }

Var mean(Var a) {
  if (a.value().size() == 0) throw ShapeError("mean: empty matrix");
  return full_reduce(a, "mean", 1.0 / static_cast<double>(a.value().size()));
}

Var sqfrob(Var a) {
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  double acc = 0.0;
  for (double x : av.values()) acc += x * x;
  const std::size_t ia = tape.index_of(a, "sqfrob");
  return tape.emplace(
      Matrix(1, 1, {acc}), {ia},
      [ia](Tape& t, std::size_t self) {
        const double g = t.grad_of(self)(0, 0);
        const Matrix& x = t.value_of(ia);
        Matrix& ga = t.grad_of(ia);
        for (std::size_t i = 0; i < x.size(); ++i)
          ga.values()[i] += 2.0 * g * x.values()[i];
      },
      "sqfrob");
}

Var pairwise_sqdist(Var a, Var b) {
  require_same_tape(a, b, "pairwise_sqdist");
  Tape& tape = *a.tape();
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  if (av.cols() != bv.cols())
    throw ShapeError("pairwise_sqdist: column counts differ, " + av.shape_str() +
                     " vs " + bv.shape_str());
  const std::size_t n = av.rows(), k = bv.rows(), d = av.cols();
  Matrix out(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = av.row(i);
    double* oi = out.row(i);
    for (std::size_t j = 0; j < k; ++j) {
      const double* bj = bv.row(j);
      double acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double diff = ai[c] - bj[c];
        acc += diff * diff;
      }
      oi[j] = acc;
    }
  }
  const std::size_t ia = tape.index_of(a, "pairwise_sqdist");
  const std::size_t ib = tape.index_of(b, "pairwise_sqdist");
  return tape.emplace(
      std::move(out), {ia, ib},
      [ia, ib, n, k, d](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        const Matrix& av = t.value_of(ia);
        const Matrix& bv = t.value_of(ib);
        const bool ta = t.tracked_node(ia);
        const bool tb = t.tracked_node(ib);
        for (std::size_t i = 0; i < n; ++i) {
          const double* ai = av.row(i);
          const double* gi = g.row(i);
          for (std::size_t j = 0; j < k; ++j) {
            const double gij2 = 2.0 * gi[j];
            if (gij2 == 0.0) continue;
            const double* bj = bv.row(j);
            if (ta) {
              double* gai = t.grad_of(ia).row(i);
              for (std::size_t c = 0; c < d; ++c) gai[c] += gij2 * (ai[c] - bj[c]);
            }
            if (tb) {
              double* gbj = t.grad_of(ib).row(j);
              for (std::size_t c = 0; c < d; ++c) gbj[c] += gij2 * (bj[c] - ai[c]);
            }
          }
        }
      },
      "pairwise_sqdist");
}

Var broadcast_row(Var row, std::size_t rows) {
  Tape& tape = *row.tape();
  const Matrix& rv = row.value();
  if (rv.rows() != 1)
    throw ShapeError("broadcast_row: expected 1-row vector, got " + rv.shape_str());
  Matrix out(rows, rv.cols());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rv.cols(); ++j) out(i, j) = rv(0, j);
  const std::size_t ia = tape.index_of(row, "broadcast_row");
  return tape.emplace(
      std::move(out), {ia},
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        Matrix& ga = t.grad_of(ia);
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < g.cols(); ++j) ga(0, j) += g(i, j);
      },
      "broadcast_row");
}

Var broadcast_col(Var col, std::size_t cols) {
  Tape& tape = *col.tape();
  const Matrix& cv = col.value();
  if (cv.cols() != 1)
    throw ShapeError("broadcast_col: expected 1-column vector, got " + cv.shape_str());
  Matrix out(cv.rows(), cols);
  for (std::size_t i = 0; i < cv.rows(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = cv(i, 0);
  const std::size_t ia = tape.index_of(col, "broadcast_col");
  return tape.emplace(
      std::move(out), {ia},
      [ia](Tape& t, std::size_t self) {
        const Matrix& g = t.grad_of(self);
        Matrix& ga = t.grad_of(ia);
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < g.cols(); ++j) ga(i, 0) += g(i, j);
      },
      "broadcast_col");
}

double grad_check(const std::function<Var(Tape&, Var)>& f, const Matrix& point,
                  double step) {
  if (!(step > 0.0)) throw Error("grad_check: step must be positive");
  Matrix analytic;
  {
    Tape tape;
    Var x = tape.parameter(point);
    Var loss = f(tape, x);
    tape.backward(loss);
    analytic = x.grad();
  }
  const auto eval = [&f](const Matrix& at) {
    Tape tape;
    Var x = tape.constant(at);
    Var loss = f(tape, x);
    const Matrix& v = loss.value();
    if (v.rows() != 1 || v.cols() != 1)
      throw ShapeError("grad_check: f must return a scalar, got " + v.shape_str());
    return v(0, 0);
  };
  double max_err = 0.0;
  Matrix probe = point;
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double saved = probe.values()[i];
    probe.values()[i] = saved + step;
    const double fp = eval(probe);
    probe.values()[i] = saved - step;
    const double fm = eval(probe);
    probe.values()[i] = saved;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw DomainError("grad_check: non-finite function value");
    const double fd = (fp - fm) / (2.0 * step);
    const double a = analytic.values()[i];
    const double err = std::abs(a - fd) / std::max(1.0, std::abs(a));
    max_err = std::max(max_err, err);
  }
  return max_err;
}

}  // namespace ddac
