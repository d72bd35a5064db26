#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <thread>
#include <vector>

#include "sqsim/dataset.hpp"
#include "sqsim/embed.hpp"
#include "sqsim/model/serialize.hpp"
#include "sqsim/model/siamese.hpp"
#include "sqsim/nn/adam.hpp"
#include "sqsim/train/config.hpp"
#include "sqsim/train/metrics.hpp"

namespace sqsim::train {

using nn::Var;

template <class S>
struct TrainResult {
  model::SiameseParams<S> params;
  std::vector<double> epoch_loss;  // mean per-example loss per epoch
  long long steps = 0;             // optimizer steps taken
  double duration_sec = 0.0;
};

// Per-question-id embeddings cast to the training scalar. Fails fast on any
// question missing from the store and on a store/model width disagreement.
template <class S>
std::vector<typename nn::Tape<S>::Mat> resolve_embeddings(
    const Dataset& data, const embed::EmbeddingStore& store, int input_dim) {
  if (store.dim() != input_dim)
    throw_schema("embedding dimension " + std::to_string(store.dim()) +
                 " does not match model input_dim " +
                 std::to_string(input_dim));
  std::vector<typename nn::Tape<S>::Mat> embs;
  embs.reserve(data.questions.size());
  for (const auto& q : data.questions)
    embs.push_back(store.lookup(q).cast<S>());
  return embs;
}

// Seeded mini-batch SGD-with-Adam over the pair dataset. One RNG stream
// drives initialization, epoch shuffles and dropout in sequence, so a
// (config, seed, data order) triple pins every bit of the result.
template <class S>
TrainResult<S> train_model(const TrainConfig& cfg, const Dataset& data,
                           const embed::EmbeddingStore& store,
                           std::uint64_t seed) {
  using Mat = typename nn::Tape<S>::Mat;
  const model::ModelConfig mcfg = cfg.model_config();
  mcfg.validate();
  if (data.pairs.empty()) throw_schema("training dataset has no pairs");
  const auto embs = resolve_embeddings<S>(data, store, mcfg.input_dim);

  const auto t_start = std::chrono::steady_clock::now();
  Rng rng(seed);
  TrainResult<S> result;
  result.params = model::init_params<S>(mcfg, rng, cfg.forget_bias);

  std::vector<Mat*> param_ptrs;
  model::visit_params(result.params,
                      [&](const std::string&, Mat& m) { param_ptrs.push_back(&m); });
  nn::AdamState<S> opt(param_ptrs, cfg.learning_rate);

  const std::size_t n = data.pairs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<Mat> grad_acc;
  for (Mat* p : param_ptrs) grad_acc.push_back(Mat::Zero(p->rows(), p->cols()));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss_sum = 0.0;
    for (std::size_t start = 0; start < n;
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      const std::size_t bsize = stop - start;
      for (auto& g : grad_acc) g.setZero();
      double batch_loss_sum = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const LabeledPair& pair = data.pairs[order[k]];
        nn::Tape<S> tape;
        auto bound = model::bind_model(tape, result.params);
        Var<S> p = model::forward_pair(tape, bound.vars, mcfg, embs[pair.q1],
                                       embs[pair.q2], true, rng);
        Var<S> loss = nn::bce_loss(p, pair.label);
        const double lv = static_cast<double>(tape.value(loss)(0, 0));
        if (!std::isfinite(lv))
          throw_runtime("non-finite loss at epoch " + std::to_string(epoch) +
                        ", pair (" + data.questions[pair.q1] + ", " +
                        data.questions[pair.q2] + ")");
        tape.backward(loss);
        for (std::size_t i = 0; i < param_ptrs.size(); ++i)
          grad_acc[i] += tape.grad(bound.param_vars[i]);
        batch_loss_sum += lv;
      }
      const S inv = S(1.0 / static_cast<double>(bsize));
      for (auto& g : grad_acc) g *= inv;
      nn::adam_step(opt, param_ptrs, grad_acc);
      epoch_loss_sum += batch_loss_sum;
    }
    result.epoch_loss.push_back(epoch_loss_sum / static_cast<double>(n));
  }
  result.steps = opt.t;
  result.duration_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

// Mean BCE over a dataset with dropout off; the pre-training baseline and a
// cheap progress probe.
template <class S>
double evaluate_loss(const model::SiameseParams<S>& params, const Dataset& data,
                     const embed::EmbeddingStore& store) {
  const auto embs = resolve_embeddings<S>(data, store, params.config.input_dim);
  double sum = 0.0;
  for (const auto& pair : data.pairs) {
    nn::Tape<S> tape;
    auto bound = model::bind_model(tape, params);
    Rng rng(0);
    Var<S> p = model::forward_pair(tape, bound.vars, params.config,
                                   embs[pair.q1], embs[pair.q2], false, rng);
    Var<S> loss = nn::bce_loss(p, pair.label);
    sum += static_cast<double>(tape.value(loss)(0, 0));
  }
  return sum / static_cast<double>(data.pairs.size());
}

template <class S>
std::vector<double> predict_probabilities(const model::SiameseParams<S>& params,
                                          const Dataset& data,
                                          const embed::EmbeddingStore& store) {
  const auto embs = resolve_embeddings<S>(data, store, params.config.input_dim);
  std::vector<double> probs;
  probs.reserve(data.pairs.size());
  for (const auto& pair : data.pairs)
    probs.push_back(
        model::pair_probability(params, embs[pair.q1], embs[pair.q2]));
  return probs;
}

// Threshold is inclusive: p == threshold predicts similar.
template <class S>
std::vector<int> predict_labels(const model::SiameseParams<S>& params,
                                const Dataset& data,
                                const embed::EmbeddingStore& store,
                                double threshold = 0.5) {
  std::vector<int> labels;
  for (double p : predict_probabilities(params, data, store))
    labels.push_back(p >= threshold ? 1 : 0);
  return labels;
}

struct EnsembleReport {
  std::vector<double> per_model_f1;
  double min = 0.0;
  double max = 0.0;
  double avg = 0.0;
  double vote_f1 = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> durations_sec;
};

template <class S>
struct ExperimentResult {
  std::vector<TrainResult<S>> runs;
  EnsembleReport report;
};

// The five-replica protocol: train one model per seed, evaluate each on the
// evaluation set, report min/max/avg F1 and the majority-vote F1. Replicas
// are independent, so `jobs` > 1 trains them concurrently without changing
// any result.
template <class S>
ExperimentResult<S> run_experiment(const TrainConfig& cfg,
                                   const Dataset& train_data,
                                   const Dataset& eval_data,
                                   const embed::EmbeddingStore& store,
                                   int jobs = 1) {
  if (cfg.seeds.size() != 5)
    throw_schema("the ensemble protocol needs exactly 5 seeds, got " +
                 std::to_string(cfg.seeds.size()));
  ExperimentResult<S> result;
  result.runs.resize(cfg.seeds.size());

  const int workers = std::max(1, std::min<int>(jobs, 5));
  std::vector<std::exception_ptr> errors(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cfg.seeds.size()) return;
      try {
        result.runs[i] = train_model<S>(cfg, train_data, store, cfg.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<int> truth;
  for (const auto& p : eval_data.pairs) truth.push_back(p.label);
  std::vector<std::vector<int>> votes;
  EnsembleReport& rep = result.report;
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    votes.push_back(predict_labels(result.runs[i].params, eval_data, store));
    rep.per_model_f1.push_back(f1_score(votes.back(), truth).f1);
    rep.durations_sec.push_back(result.runs[i].duration_sec);
  }
  rep.seeds = cfg.seeds;
  rep.min = *std::min_element(rep.per_model_f1.begin(), rep.per_model_f1.end());
  rep.max = *std::max_element(rep.per_model_f1.begin(), rep.per_model_f1.end());
  rep.avg = std::accumulate(rep.per_model_f1.begin(), rep.per_model_f1.end(),
                            0.0) /
            static_cast<double>(rep.per_model_f1.size());
  rep.vote_f1 = f1_score(majority_vote(votes), truth).f1;
  return result;
}

}  // namespace sqsim::train
