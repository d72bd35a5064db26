#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sqsim/model/config.hpp"
#include "sqsim/model/onlstm.hpp"

namespace sqsim::model {

// Full trainable parameter set: two stacked bidirectional ON-LSTM layers
// shared by both questions, one attention weight vector, and the dense head.
template <class S>
struct SiameseParams {
  using Mat = typename Tape<S>::Mat;

  struct Dense {
    Mat W, b;
  };

  ModelConfig config;
  OnLstmCellParams<S> l1_fwd, l1_bwd, l2_fwd, l2_bwd;
  Mat attention;             // 1 x encoder_width
  std::vector<Dense> head;   // ReLU layers
  Dense out;                 // final logit row, 1 x last

  static SiameseParams zeros(const ModelConfig& cfg) {
    cfg.validate();
    SiameseParams p;
    p.config = cfg;
    p.l1_fwd = OnLstmCellParams<S>::zeros(cfg.input_dim, cfg.hidden, cfg.chunk);
    p.l1_bwd = OnLstmCellParams<S>::zeros(cfg.input_dim, cfg.hidden, cfg.chunk);
    p.l2_fwd =
        OnLstmCellParams<S>::zeros(cfg.encoder_width(), cfg.hidden, cfg.chunk);
    p.l2_bwd =
        OnLstmCellParams<S>::zeros(cfg.encoder_width(), cfg.hidden, cfg.chunk);
    p.attention = Mat::Zero(1, cfg.encoder_width());
    int prev = cfg.encoder_width();
    for (int h : cfg.head) {
      p.head.push_back({Mat::Zero(h, prev), Mat::Zero(h, 1)});
      prev = h;
    }
    p.out = {Mat::Zero(1, prev), Mat::Zero(1, 1)};
    return p;
  }
};

// Fixed traversal over every tensor; the single source of truth for
// initialization, optimizer slots, gradient collection and the file layout.
template <class Params, class Fn>
void visit_params(Params& p, Fn&& fn) {
  auto cell = [&](const std::string& prefix, auto& c) {
    fn(prefix + ".W_f", c.W_f); fn(prefix + ".U_f", c.U_f); fn(prefix + ".b_f", c.b_f);
    fn(prefix + ".W_i", c.W_i); fn(prefix + ".U_i", c.U_i); fn(prefix + ".b_i", c.b_i);
    fn(prefix + ".W_o", c.W_o); fn(prefix + ".U_o", c.U_o); fn(prefix + ".b_o", c.b_o);
    fn(prefix + ".W_c", c.W_c); fn(prefix + ".U_c", c.U_c); fn(prefix + ".b_c", c.b_c);
    fn(prefix + ".W_mf", c.W_mf); fn(prefix + ".U_mf", c.U_mf); fn(prefix + ".b_mf", c.b_mf);
    fn(prefix + ".W_mi", c.W_mi); fn(prefix + ".U_mi", c.U_mi); fn(prefix + ".b_mi", c.b_mi);
  };
  cell("l1_fwd", p.l1_fwd);
  cell("l1_bwd", p.l1_bwd);
  cell("l2_fwd", p.l2_fwd);
  cell("l2_bwd", p.l2_bwd);
  fn("attention.w", p.attention);
  for (std::size_t i = 0; i < p.head.size(); ++i) {
    fn("head" + std::to_string(i) + ".W", p.head[i].W);
    fn("head" + std::to_string(i) + ".b", p.head[i].b);
  }
  fn("out.W", p.out.W);
  fn("out.b", p.out.b);
}

template <class S>
std::size_t parameter_count(const SiameseParams<S>& p) {
  std::size_t n = 0;
  visit_params(p, [&](const std::string&, const auto& m) {
    n += static_cast<std::size_t>(m.size());
  });
  return n;
}

// Glorot-uniform weights, zero biases, optional additive offset on the
// standard forget-gate bias. Values are drawn in a fixed traversal order in
// row-major element order, so a seed pins every bit of the model.
template <class S>
SiameseParams<S> init_params(const ModelConfig& cfg, Rng& rng,
                             double forget_bias = 0.0) {
  SiameseParams<S> p = SiameseParams<S>::zeros(cfg);
  visit_params(p, [&](const std::string& name, auto& m) {
    const bool is_bias = m.cols() == 1 && name.find(".b") != std::string::npos;
    if (is_bias) return;  // biases stay zero
    const double fan_in = static_cast<double>(m.cols());
    const double fan_out = static_cast<double>(m.rows());
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        m(i, j) = static_cast<S>(limit * rng.next_pm1());
  });
  if (forget_bias != 0.0) {
    p.l1_fwd.b_f.array() += static_cast<S>(forget_bias);
    p.l1_bwd.b_f.array() += static_cast<S>(forget_bias);
    p.l2_fwd.b_f.array() += static_cast<S>(forget_bias);
    p.l2_bwd.b_f.array() += static_cast<S>(forget_bias);
  }
  return p;
}

template <class S>
struct SiameseVars {
  OnLstmCellVars<S> l1_fwd, l1_bwd, l2_fwd, l2_bwd;
  Var<S> attention;
  struct Dense {
    Var<S> W, b;
  };
  std::vector<Dense> head;
  Dense out;
};

template <class S>
struct BoundModel {
  SiameseVars<S> vars;
  std::vector<Var<S>> param_vars;  // same order as visit_params
};

// Registers every parameter as a tape leaf. The Var layout mirrors the
// params struct; param_vars keeps the flat traversal order for gradient
// readout.
template <class S>
BoundModel<S> bind_model(Tape<S>& t, const SiameseParams<S>& p) {
  BoundModel<S> bm;
  std::vector<Var<S>> flat;
  visit_params(p, [&](const std::string&, const auto& m) {
    flat.push_back(t.leaf(m));
  });
  bm.param_vars = flat;
  std::size_t k = 0;
  auto next = [&]() { return flat[k++]; };
  auto cell = [&](OnLstmCellVars<S>& c, const OnLstmCellParams<S>& cp) {
    c.W_f = next(); c.U_f = next(); c.b_f = next();
    c.W_i = next(); c.U_i = next(); c.b_i = next();
    c.W_o = next(); c.U_o = next(); c.b_o = next();
    c.W_c = next(); c.U_c = next(); c.b_c = next();
    c.W_mf = next(); c.U_mf = next(); c.b_mf = next();
    c.W_mi = next(); c.U_mi = next(); c.b_mi = next();
    c.hidden = cp.hidden;
    c.chunk = cp.chunk;
  };
  cell(bm.vars.l1_fwd, p.l1_fwd);
  cell(bm.vars.l1_bwd, p.l1_bwd);
  cell(bm.vars.l2_fwd, p.l2_fwd);
  cell(bm.vars.l2_bwd, p.l2_bwd);
  bm.vars.attention = next();
  for (std::size_t i = 0; i < p.head.size(); ++i)
    bm.vars.head.push_back({next(), next()});
  bm.vars.out = {next(), next()};
  return bm;
}

// Importance-weighted pooling: score each step with the attention vector,
// softmax over steps, return the weighted sum of step outputs.
template <class S>
Var<S> attention_pool(Var<S> attention_w, Var<S> outputs) {
  Var<S> scores = nn::matmul(attention_w, outputs);         // 1 x T
  Var<S> weights = nn::softmax(scores, 1);
  return nn::matmul(outputs, nn::transpose(weights));       // width x 1
}

// Elementwise squared distance of the two question representations.
template <class S>
Var<S> merge_pairwise_sqdist(Var<S> v1, Var<S> v2) {
  Var<S> d = nn::sub(v1, v2);
  return nn::mul(d, d);
}

template <class S>
Var<S> mlp_head(Tape<S>&, const SiameseVars<S>& vars, const ModelConfig& cfg,
                Var<S> merged, bool training, Rng& rng) {
  Var<S> h = merged;
  for (const auto& layer : vars.head) {
    h = nn::relu(nn::add_bias(nn::matmul(layer.W, h), layer.b));
    h = nn::dropout(h, cfg.dropout, training, rng);
  }
  return nn::sigmoid(nn::add_bias(nn::matmul(vars.out.W, h), vars.out.b));
}

// Embedding (input_dim x T) -> representation (encoder_width x 1):
// two stacked bidirectional runs, inter-layer dropout on the first layer's
// outputs, attention pooling over the second layer's outputs.
template <class S>
Var<S> encode_question(Tape<S>& t, const SiameseVars<S>& vars,
                       const ModelConfig& cfg,
                       const typename Tape<S>::Mat& emb, bool training,
                       Rng& rng) {
  if (emb.rows() != cfg.input_dim)
    throw_runtime("encode_question: embedding dimension mismatch");
  if (emb.cols() < 1) throw_runtime("encode_question: empty sequence");
  const int T = static_cast<int>(emb.cols());
  std::vector<Var<S>> xs(T);
  for (int i = 0; i < T; ++i) xs[i] = t.leaf(emb.col(i));

  auto l1f = run_direction(t, vars.l1_fwd, xs, false, cfg.dropout, training, rng);
  auto l1b = run_direction(t, vars.l1_bwd, xs, true, cfg.dropout, training, rng);
  std::vector<Var<S>> x2(T);
  for (int i = 0; i < T; ++i) x2[i] = nn::concat(l1f[i], l1b[i], 0);

  auto l2f = run_direction(t, vars.l2_fwd, x2, false, 0.0, training, rng);
  auto l2b = run_direction(t, vars.l2_bwd, x2, true, 0.0, training, rng);
  std::vector<Var<S>> steps(T);
  for (int i = 0; i < T; ++i) steps[i] = nn::concat(l2f[i], l2b[i], 0);

  Var<S> outputs = nn::concat(steps, 1);  // encoder_width x T
  return attention_pool(vars.attention, outputs);
}

// Probability that the two questions are similar. Both questions go through
// the same encoder weights; the merge is symmetric in its arguments.
template <class S>
Var<S> forward_pair(Tape<S>& t, const SiameseVars<S>& vars,
                    const ModelConfig& cfg, const typename Tape<S>::Mat& emb_a,
                    const typename Tape<S>::Mat& emb_b, bool training,
                    Rng& rng) {
  Var<S> va = encode_question(t, vars, cfg, emb_a, training, rng);
  Var<S> vb = encode_question(t, vars, cfg, emb_b, training, rng);
  Var<S> merged = merge_pairwise_sqdist(va, vb);
  return mlp_head(t, vars, cfg, merged, training, rng);
}

// Convenience inference entry points (fresh tape, dropout off).

template <class S>
double pair_probability(const SiameseParams<S>& params,
                        const typename Tape<S>::Mat& emb_a,
                        const typename Tape<S>::Mat& emb_b) {
  Tape<S> t;
  BoundModel<S> bm = bind_model(t, params);
  Rng rng(0);
  Var<S> p = forward_pair(t, bm.vars, params.config, emb_a, emb_b, false, rng);
  return static_cast<double>(t.value(p)(0, 0));
}

template <class S>
Eigen::VectorXd question_representation(const SiameseParams<S>& params,
                                        const typename Tape<S>::Mat& emb) {
  Tape<S> t;
  BoundModel<S> bm = bind_model(t, params);
  Rng rng(0);
  Var<S> v = encode_question(t, bm.vars, params.config, emb, false, rng);
  return t.value(v).template cast<double>().col(0);
}

}  // namespace sqsim::model
