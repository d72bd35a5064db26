#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sqsim/nn/tape.hpp"
#include "sqsim/rng.hpp"

// Differentiable primitives. Every op appends one node whose backward
// closure accumulates into its parents; closures capture node ids, never
// references, so tape growth cannot invalidate them.
namespace sqsim::nn {

template <class S>
using MatOf = typename Tape<S>::Mat;

namespace detail {

template <class S>
inline void check_shape(bool ok, const char* what) {
  if (!ok) throw_runtime(std::string("shape mismatch in ") + what);
}

}  // namespace detail

template <class S>
Var<S> matmul(Var<S> a, Var<S> b) {
  check_same_tape(a, b);
  Tape<S>& t = *a.tape;
  detail::check_shape<S>(t.value(a).cols() == t.value(b).rows(), "matmul");
  MatOf<S> out = t.value(a) * t.value(b);
  const int aid = a.id, bid = b.id;
  return t.append(std::move(out), [aid, bid](Tape<S>& tp, int self) {
    const auto& g = tp.grad_at(self);
    tp.accum(aid, g * tp.value_at(bid).transpose());
    tp.accum(bid, tp.value_at(aid).transpose() * g);
  });
}

template <class S>
Var<S> add(Var<S> a, Var<S> b) {
  check_same_tape(a, b);
  Tape<S>& t = *a.tape;
  detail::check_shape<S>(t.value(a).rows() == t.value(b).rows() &&
                             t.value(a).cols() == t.value(b).cols(),
                         "add");
  MatOf<S> out = t.value(a) + t.value(b);
  const int aid = a.id, bid = b.id;
  return t.append(std::move(out), [aid, bid](Tape<S>& tp, int self) {
    tp.accum(aid, tp.grad_at(self));
    tp.accum(bid, tp.grad_at(self));
  });
}

template <class S>
Var<S> sub(Var<S> a, Var<S> b) {
  check_same_tape(a, b);
  Tape<S>& t = *a.tape;
  detail::check_shape<S>(t.value(a).rows() == t.value(b).rows() &&
                             t.value(a).cols() == t.value(b).cols(),
                         "sub");
  MatOf<S> out = t.value(a) - t.value(b);
  const int aid = a.id, bid = b.id;
  return t.append(std::move(out), [aid, bid](Tape<S>& tp, int self) {
    tp.accum(aid, tp.grad_at(self));
    tp.accum(bid, -tp.grad_at(self));
  });
}

// Hadamard product.
template <class S>
Var<S> mul(Var<S> a, Var<S> b) {
  check_same_tape(a, b);
  Tape<S>& t = *a.tape;
  detail::check_shape<S>(t.value(a).rows() == t.value(b).rows() &&
                             t.value(a).cols() == t.value(b).cols(),
                         "mul");
  MatOf<S> out = t.value(a).cwiseProduct(t.value(b));
  const int aid = a.id, bid = b.id;
  return t.append(std::move(out), [aid, bid](Tape<S>& tp, int self) {
    const auto& g = tp.grad_at(self);
    tp.accum(aid, g.cwiseProduct(tp.value_at(bid)));
    tp.accum(bid, g.cwiseProduct(tp.value_at(aid)));
  });
}

// x + b with b an m x 1 column broadcast across the columns of x.
template <class S>
Var<S> add_bias(Var<S> x, Var<S> b) {
  check_same_tape(x, b);
  Tape<S>& t = *x.tape;
  detail::check_shape<S>(
      t.value(b).cols() == 1 && t.value(x).rows() == t.value(b).rows(),
      "add_bias");
  MatOf<S> out = t.value(x).colwise() + t.value(b).col(0);
  const int xid = x.id, bid = b.id;
  return t.append(std::move(out), [xid, bid](Tape<S>& tp, int self) {
    const auto& g = tp.grad_at(self);
    tp.accum(xid, g);
    tp.accum(bid, g.rowwise().sum());
  });
}

// alpha * x + beta, elementwise with scalar constants.
template <class S>
Var<S> affine(Var<S> x, S alpha, S beta) {
  Tape<S>& t = *x.tape;
  MatOf<S> out = (t.value(x).array() * alpha + beta).matrix();
  const int xid = x.id;
  return t.append(std::move(out), [xid, alpha](Tape<S>& tp, int self) {
    tp.accum(xid, (tp.grad_at(self).array() * alpha).matrix());
  });
}

template <class S>
Var<S> scale(Var<S> x, S alpha) {
  return affine(x, alpha, S(0));
}

template <class S>
Var<S> one_minus(Var<S> x) {
  return affine(x, S(-1), S(1));
}

template <class S>
Var<S> transpose(Var<S> x) {
  Tape<S>& t = *x.tape;
  MatOf<S> out = t.value(x).transpose();
  const int xid = x.id;
  return t.append(std::move(out), [xid](Tape<S>& tp, int self) {
    tp.accum(xid, tp.grad_at(self).transpose());
  });
}

// Concatenate along axis 0 (stack rows) or axis 1 (side by side).
template <class S>
Var<S> concat(const std::vector<Var<S>>& xs, int axis) {
  if (xs.empty()) throw_runtime("concat of zero tensors");
  if (axis != 0 && axis != 1) throw_runtime("concat axis must be 0 or 1");
  Tape<S>& t = *xs.front().tape;
  for (const auto& v : xs) check_same_tape(xs.front(), v);
  Eigen::Index rows = t.value(xs[0]).rows(), cols = t.value(xs[0]).cols();
  Eigen::Index total = 0;
  for (const auto& v : xs) {
    const auto& m = t.value(v);
    if (axis == 0) {
      detail::check_shape<S>(m.cols() == cols, "concat");
      total += m.rows();
    } else {
      detail::check_shape<S>(m.rows() == rows, "concat");
      total += m.cols();
    }
  }
  MatOf<S> out(axis == 0 ? total : rows, axis == 0 ? cols : total);
  std::vector<int> ids;
  std::vector<Eigen::Index> offsets, extents;
  Eigen::Index at = 0;
  for (const auto& v : xs) {
    const auto& m = t.value(v);
    const Eigen::Index ext = axis == 0 ? m.rows() : m.cols();
    if (axis == 0)
      out.middleRows(at, ext) = m;
    else
      out.middleCols(at, ext) = m;
    ids.push_back(v.id);
    offsets.push_back(at);
    extents.push_back(ext);
    at += ext;
  }
  return t.append(std::move(out),
                  [ids, offsets, extents, axis](Tape<S>& tp, int self) {
                    const auto& g = tp.grad_at(self);
                    for (std::size_t i = 0; i < ids.size(); ++i) {
                      if (axis == 0)
                        tp.accum(ids[i], g.middleRows(offsets[i], extents[i]));
                      else
                        tp.accum(ids[i], g.middleCols(offsets[i], extents[i]));
                    }
                  });
}

template <class S>
Var<S> concat(Var<S> a, Var<S> b, int axis) {
  return concat(std::vector<Var<S>>{a, b}, axis);
}

// Each row of x repeated k consecutive times; the chunk-to-neuron expansion
// of the master gates.
template <class S>
Var<S> repeat_rows(Var<S> x, int k) {
  if (k < 1) throw_runtime("repeat_rows: k must be >= 1");
  Tape<S>& t = *x.tape;
  const auto& v = t.value(x);
  MatOf<S> out(v.rows() * k, v.cols());
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (int r = 0; r < k; ++r) out.row(i * k + r) = v.row(i);
  const int xid = x.id;
  return t.append(std::move(out), [xid, k](Tape<S>& tp, int self) {
    const auto& g = tp.grad_at(self);
    MatOf<S> gx = MatOf<S>::Zero(g.rows() / k, g.cols());
    for (Eigen::Index i = 0; i < gx.rows(); ++i)
      for (int r = 0; r < k; ++r) gx.row(i) += g.row(i * k + r);
    tp.accum(xid, gx);
  });
}

template <class S>
Var<S> sigmoid(Var<S> x) {
  Tape<S>& t = *x.tape;
  MatOf<S> out = t.value(x).unaryExpr(
      [](S v) { return S(1) / (S(1) + std::exp(-v)); });
  const int xid = x.id;
  return t.append(std::move(out), [xid](Tape<S>& tp, int self) {
    const auto& y = tp.value_at(self);
    tp.accum(xid, tp.grad_at(self)
                      .cwiseProduct(y)
                      .cwiseProduct((MatOf<S>::Ones(y.rows(), y.cols()) - y)));
  });
}

template <class S>
Var<S> tanh_(Var<S> x) {
  Tape<S>& t = *x.tape;
  MatOf<S> out = t.value(x).unaryExpr([](S v) { return std::tanh(v); });
  const int xid = x.id;
  return t.append(std::move(out), [xid](Tape<S>& tp, int self) {
    const auto& y = tp.value_at(self);
    tp.accum(xid,
             tp.grad_at(self).cwiseProduct(
                 (MatOf<S>::Ones(y.rows(), y.cols()) - y.cwiseProduct(y))));
  });
}

template <class S>
Var<S> relu(Var<S> x) {
  Tape<S>& t = *x.tape;
  MatOf<S> out = t.value(x).cwiseMax(S(0));
  const int xid = x.id;
  return t.append(std::move(out), [xid](Tape<S>& tp, int self) {
    const auto& xin = tp.value_at(xid);
    MatOf<S> gate =
        (xin.array() > S(0)).template cast<S>().matrix();
    tp.accum(xid, tp.grad_at(self).cwiseProduct(gate));
  });
}

// Numerically stabilized softmax along axis 0 (down each column) or
// axis 1 (across each row).
template <class S>
Var<S> softmax(Var<S> x, int axis) {
  if (axis != 0 && axis != 1) throw_runtime("softmax axis must be 0 or 1");
  Tape<S>& t = *x.tape;
  const auto& v = t.value(x);
  MatOf<S> out(v.rows(), v.cols());
  const Eigen::Index slices = axis == 0 ? v.cols() : v.rows();
  for (Eigen::Index s = 0; s < slices; ++s) {
    auto slice = axis == 0 ? v.col(s) : v.row(s).transpose();
    S mx = slice.maxCoeff();
    Eigen::Matrix<S, Eigen::Dynamic, 1> e =
        (slice.array() - mx).exp().matrix();
    e /= e.sum();
    if (axis == 0)
      out.col(s) = e;
    else
      out.row(s) = e.transpose();
  }
  const int xid = x.id;
  return t.append(std::move(out), [xid, axis](Tape<S>& tp, int self) {
    const auto& y = tp.value_at(self);
    const auto& g = tp.grad_at(self);
    MatOf<S> gx(y.rows(), y.cols());
    const Eigen::Index slices = axis == 0 ? y.cols() : y.rows();
    for (Eigen::Index s = 0; s < slices; ++s) {
      if (axis == 0) {
        S dot = g.col(s).dot(y.col(s));
        gx.col(s) = y.col(s).cwiseProduct(
            g.col(s) - Eigen::Matrix<S, Eigen::Dynamic, 1>::Constant(
                           y.rows(), dot));
      } else {
        S dot = g.row(s).dot(y.row(s));
        gx.row(s) = y.row(s).cwiseProduct(
            g.row(s) - Eigen::Matrix<S, 1, Eigen::Dynamic>::Constant(
                           y.cols(), dot));
      }
    }
    tp.accum(xid, gx);
  });
}

template <class S>
Var<S> cumsum(Var<S> x, int axis) {
  if (axis != 0 && axis != 1) throw_runtime("cumsum axis must be 0 or 1");
  Tape<S>& t = *x.tape;
  const auto& v = t.value(x);
  MatOf<S> out = v;
  if (axis == 0) {
    for (Eigen::Index i = 1; i < out.rows(); ++i)
      out.row(i) += out.row(i - 1);
  } else {
    for (Eigen::Index j = 1; j < out.cols(); ++j)
      out.col(j) += out.col(j - 1);
  }
  const int xid = x.id;
  return t.append(std::move(out), [xid, axis](Tape<S>& tp, int self) {
    // d/dx_i = sum of incoming grads at positions >= i: a reversed prefix sum.
    MatOf<S> gx = tp.grad_at(self);
    if (axis == 0) {
      for (Eigen::Index i = gx.rows() - 2; i >= 0; --i)
        gx.row(i) += gx.row(i + 1);
    } else {
      for (Eigen::Index j = gx.cols() - 2; j >= 0; --j)
        gx.col(j) += gx.col(j + 1);
    }
    tp.accum(xid, gx);
  });
}

// cumax(x) = cumsum(softmax(x)): a monotone profile in (0, 1] ending at 1.
template <class S>
Var<S> cumax(Var<S> x, int axis) {
  return cumsum(softmax(x, axis), axis);
}

// Inverted dropout: zero with probability `rate`, scale survivors by
// 1/(1-rate). Identity when not training or rate == 0.
template <class S>
Var<S> dropout(Var<S> x, double rate, bool training, Rng& rng) {
  if (rate < 0.0 || rate >= 1.0)
    throw_runtime("dropout rate must be in [0, 1)");
  if (!training || rate == 0.0) return x;
  Tape<S>& t = *x.tape;
  const auto& v = t.value(x);
  const S keep_scale = S(1.0 / (1.0 - rate));
  MatOf<S> mask(v.rows(), v.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      mask(i, j) = rng.next_double() < rate ? S(0) : keep_scale;
  MatOf<S> out = v.cwiseProduct(mask);
  const int xid = x.id;
  return t.append(std::move(out), [xid, mask](Tape<S>& tp, int self) {
    tp.accum(xid, tp.grad_at(self).cwiseProduct(mask));
  });
}

template <class S>
Var<S> sum_all(Var<S> x) {
  Tape<S>& t = *x.tape;
  MatOf<S> out(1, 1);
  out(0, 0) = t.value(x).sum();
  const int xid = x.id;
  return t.append(std::move(out), [xid](Tape<S>& tp, int self) {
    const auto& xin = tp.value_at(xid);
    tp.accum(xid, MatOf<S>::Constant(xin.rows(), xin.cols(),
                                     tp.grad_at(self)(0, 0)));
  });
}

// Binary cross entropy on a scalar probability, clamped away from 0 and 1.
// The gradient is the true derivative of the clamped function (zero where
// the clamp is active) so it matches finite differences.
template <class S>
Var<S> bce_loss(Var<S> p, int y) {
  if (y != 0 && y != 1) throw_runtime("bce_loss: label must be 0 or 1");
  Tape<S>& t = *p.tape;
  const auto& pv = t.value(p);
  if (pv.rows() != 1 || pv.cols() != 1)
    throw_runtime("bce_loss: probability must be a scalar");
  constexpr double kEps = 1e-7;
  const double praw = static_cast<double>(pv(0, 0));
  const double pc = praw < kEps ? kEps : (praw > 1.0 - kEps ? 1.0 - kEps : praw);
  MatOf<S> out(1, 1);
  out(0, 0) = static_cast<S>(-(y * std::log(pc) + (1 - y) * std::log(1.0 - pc)));
  const int pid = p.id;
  const bool clamped = praw < kEps || praw > 1.0 - kEps;
  return t.append(std::move(out), [pid, y, pc, clamped](Tape<S>& tp, int self) {
    if (clamped) return;
    const double d = (pc - y) / (pc * (1.0 - pc));
    MatOf<S> gx(1, 1);
    gx(0, 0) = static_cast<S>(d) * tp.grad_at(self)(0, 0);
    tp.accum(pid, gx);
  });
}

}  // namespace sqsim::nn
