#pragma once

#include <vector>

#include "sqsim/nn/ops.hpp"

namespace sqsim::model {

using nn::Tape;
using nn::Var;

// Cell weights. Standard gates act per neuron (rows = H); the master gates
// act per chunk (rows = H/chunk) and get expanded back to H by repetition.
template <class S>
struct OnLstmCellParams {
  using Mat = typename Tape<S>::Mat;

  Mat W_f, U_f, b_f;  // forget gate
  Mat W_i, U_i, b_i;  // input gate
  Mat W_o, U_o, b_o;  // output gate
  Mat W_c, U_c, b_c;  // candidate cell
  Mat W_mf, U_mf, b_mf;  // master forget gate (chunk resolution)
  Mat W_mi, U_mi, b_mi;  // master input gate (chunk resolution)

  int hidden = 0;
  int chunk = 1;

  static OnLstmCellParams zeros(int input_dim, int hidden, int chunk) {
    if (hidden % chunk != 0)
      throw_schema("hidden must be divisible by chunk");
    OnLstmCellParams p;
    p.hidden = hidden;
    p.chunk = chunk;
    const int m = hidden / chunk;
    auto zw = [&](int rows, int cols) { return Mat::Zero(rows, cols); };
    p.W_f = zw(hidden, input_dim); p.U_f = zw(hidden, hidden); p.b_f = zw(hidden, 1);
    p.W_i = zw(hidden, input_dim); p.U_i = zw(hidden, hidden); p.b_i = zw(hidden, 1);
    p.W_o = zw(hidden, input_dim); p.U_o = zw(hidden, hidden); p.b_o = zw(hidden, 1);
    p.W_c = zw(hidden, input_dim); p.U_c = zw(hidden, hidden); p.b_c = zw(hidden, 1);
    p.W_mf = zw(m, input_dim); p.U_mf = zw(m, hidden); p.b_mf = zw(m, 1);
    p.W_mi = zw(m, input_dim); p.U_mi = zw(m, hidden); p.b_mi = zw(m, 1);
    return p;
  }
};

template <class S>
struct OnLstmCellVars {
  Var<S> W_f, U_f, b_f;
  Var<S> W_i, U_i, b_i;
  Var<S> W_o, U_o, b_o;
  Var<S> W_c, U_c, b_c;
  Var<S> W_mf, U_mf, b_mf;
  Var<S> W_mi, U_mi, b_mi;
  int hidden = 0;
  int chunk = 1;
};

// Diagnostic record of every intermediate gate signal of one step,
// captured as plain values.
template <class S>
struct GateActivations {
  using Mat = typename Tape<S>::Mat;
  Mat forget, input, output, candidate;   // f, i, o, c-hat
  Mat master_forget, master_input;        // expanded to length H
  Mat master_forget_profile, master_input_profile;  // chunk resolution
  Mat overlap;                            // w = master_forget . master_input
  Mat forget_eff, input_eff;              // effective gates on the cell
};

template <class S>
struct CellStep {
  Var<S> h;
  Var<S> c;
  GateActivations<S> gates;
};

// One recurrent step.
//
// Standard LSTM gates:   f,i,o = sigmoid(W x + U h + b), chat = tanh(...)
// Master gates: a cumax profile over the chunks decides which contiguous
// block of the cell is erased (master forget, nondecreasing) and which is
// written (master input, nonincreasing); their overlap w blends in the
// standard gates:
//   fhat = f . w + (mf - w),  ihat = i . w + (mi - w)
//   c    = fhat . c_prev + ihat . chat,   h = o . tanh(c)
template <class S>
CellStep<S> onlstm_cell_step(Tape<S>& t, const OnLstmCellVars<S>& p,
                             Var<S> x, Var<S> h_prev, Var<S> c_prev) {
  using nn::add; using nn::add_bias; using nn::matmul; using nn::mul;
  using nn::sub; using nn::sigmoid; using nn::tanh_; using nn::cumax;
  using nn::one_minus; using nn::repeat_rows;

  auto preact = [&](Var<S> W, Var<S> U, Var<S> b) {
    return add_bias(add(matmul(W, x), matmul(U, h_prev)), b);
  };

  Var<S> f = sigmoid(preact(p.W_f, p.U_f, p.b_f));
  Var<S> i = sigmoid(preact(p.W_i, p.U_i, p.b_i));
  Var<S> o = sigmoid(preact(p.W_o, p.U_o, p.b_o));
  Var<S> chat = tanh_(preact(p.W_c, p.U_c, p.b_c));

  Var<S> mf_profile = cumax(preact(p.W_mf, p.U_mf, p.b_mf), 0);
  Var<S> mi_profile = one_minus(cumax(preact(p.W_mi, p.U_mi, p.b_mi), 0));
  Var<S> mf = repeat_rows(mf_profile, p.chunk);
  Var<S> mi = repeat_rows(mi_profile, p.chunk);

  Var<S> w = mul(mf, mi);
  Var<S> fhat = add(mul(f, w), sub(mf, w));
  Var<S> ihat = add(mul(i, w), sub(mi, w));
  Var<S> c = add(mul(fhat, c_prev), mul(ihat, chat));
  Var<S> h = mul(o, tanh_(c));

  CellStep<S> step;
  step.h = h;
  step.c = c;
  step.gates.forget = t.value(f);
  step.gates.input = t.value(i);
  step.gates.output = t.value(o);
  step.gates.candidate = t.value(chat);
  step.gates.master_forget = t.value(mf);
  step.gates.master_input = t.value(mi);
  step.gates.master_forget_profile = t.value(mf_profile);
  step.gates.master_input_profile = t.value(mi_profile);
  step.gates.overlap = t.value(w);
  step.gates.forget_eff = t.value(fhat);
  step.gates.input_eff = t.value(ihat);
  return step;
}

// Runs the cell over a sequence from a zero initial state. `reverse` flips
// the iteration order and re-reverses the outputs so results align with the
// input positions. `out_dropout` is applied to every output when training
// (the inter-layer dropout of the stacked encoder).
template <class S>
std::vector<Var<S>> run_direction(
    Tape<S>& t, const OnLstmCellVars<S>& p, const std::vector<Var<S>>& xs,
    bool reverse, double out_dropout, bool training, Rng& rng,
    std::vector<GateActivations<S>>* gates_out = nullptr) {
  using Mat = typename Tape<S>::Mat;
  if (xs.empty()) throw_runtime("run_direction: empty sequence");
  const int T = static_cast<int>(xs.size());
  Var<S> h = t.leaf(Mat::Zero(p.hidden, 1));
  Var<S> c = t.leaf(Mat::Zero(p.hidden, 1));
  std::vector<Var<S>> out(T);
  if (gates_out) gates_out->resize(T);
  for (int step = 0; step < T; ++step) {
    const int pos = reverse ? T - 1 - step : step;
    CellStep<S> cs = onlstm_cell_step(t, p, xs[pos], h, c);
    h = cs.h;
    c = cs.c;
    out[pos] = nn::dropout(cs.h, out_dropout, training, rng);
    if (gates_out) (*gates_out)[pos] = std::move(cs.gates);
  }
  return out;
}

}  // namespace sqsim::model
