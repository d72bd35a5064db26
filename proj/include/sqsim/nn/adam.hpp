#pragma once

#include <cmath>
#include <vector>

#include "sqsim/nn/tape.hpp"

namespace sqsim::nn {

// Adam with bias correction. Moments live here, one slot per parameter in
// the caller's fixed traversal order.
template <class Scalar>
struct AdamState {
  using Mat = typename Tape<Scalar>::Mat;

  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long t = 0;

  std::vector<Mat> m;
  std::vector<Mat> v;

  AdamState() = default;
  AdamState(const std::vector<Mat*>& params, double lr_) : lr(lr_) {
    for (const Mat* p : params) {
      m.push_back(Mat::Zero(p->rows(), p->cols()));
      v.push_back(Mat::Zero(p->rows(), p->cols()));
    }
  }
};

template <class Scalar>
void adam_step(AdamState<Scalar>& st,
               const std::vector<typename Tape<Scalar>::Mat*>& params,
               const std::vector<typename Tape<Scalar>::Mat>& grads) {
  using Mat = typename Tape<Scalar>::Mat;
  if (params.size() != grads.size() || params.size() != st.m.size())
    throw_runtime("adam_step: parameter/gradient count mismatch");
  st.t += 1;
  const double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Mat& p = *params[i];
    const Mat& g = grads[i];
    if (g.rows() != p.rows() || g.cols() != p.cols())
      throw_runtime("adam_step: gradient shape mismatch");
    st.m[i] = Scalar(st.beta1) * st.m[i] + Scalar(1.0 - st.beta1) * g;
    st.v[i] =
        Scalar(st.beta2) * st.v[i] + Scalar(1.0 - st.beta2) * g.cwiseProduct(g);
    const Mat mhat = st.m[i] / Scalar(bc1);
    const Mat vhat = st.v[i] / Scalar(bc2);
    p.array() -= Scalar(st.lr) * mhat.array() /
                 (vhat.array().sqrt() + Scalar(st.eps));
  }
}

}  // namespace sqsim::nn
