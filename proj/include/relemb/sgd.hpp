#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace relemb {

// Skip-gram-with-negative-sampling step primitives, templated on the scalar
// type: float for training, double for the finite-difference checks.
//
// Dot products are clipped to [-30, 30] before exponentiation and the loss
// clamps the logistic output at 1e-12 before taking logs, so neither overflow
// nor -inf can occur at trained scales.

inline constexpr double kMaxExpArg = 30.0;
inline constexpr double kMinSigmoid = 1e-12;

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  T acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
T logistic(T x) {
  x = std::clamp(x, static_cast<T>(-kMaxExpArg), static_cast<T>(kMaxExpArg));
  return static_cast<T>(1) / (static_cast<T>(1) + std::exp(-x));
}

// -log s(vp.vq) - sum_i log s(-vp.vneg_i); always >= 0.
template <typename T>
T pair_loss(std::span<const T> vp, std::span<const T> vq,
            std::span<const std::span<const T>> negatives) {
  auto safe_log = [](T s) {
    return std::log(std::max(s, static_cast<T>(kMinSigmoid)));
  };
  T loss = -safe_log(logistic(dot(vp, vq)));
  for (const auto& vn : negatives) {
    loss -= safe_log(logistic(-dot(vp, vn)));
  }
  return loss;
}

// Positive-pair update. Both assignments use pre-update values, so the result
// is order-independent and equals one gradient step on the first loss term.
//   g = s(vp.vq) - 1
//   vq <- vq - eta*alpha*g*vp,   vp <- vp - eta*alpha*g*vq
template <typename T>
void update_positive(std::span<T> vp, std::span<T> vq, T eta, T alpha) {
  const T g = logistic(dot<T>(vp, vq)) - static_cast<T>(1);
  const T step = eta * alpha * g;
  for (std::size_t i = 0; i < vp.size(); ++i) {
    const T p = vp[i];
    vp[i] -= step * vq[i];
    vq[i] -= step * p;
  }
}

// Negative-pair update, same simultaneous convention with g = s(vp.vneg).
template <typename T>
void update_negative(std::span<T> vp, std::span<T> vneg, T eta, T alpha) {
  const T g = logistic(dot<T>(vp, vneg));
  const T step = eta * alpha * g;
  for (std::size_t i = 0; i < vp.size(); ++i) {
    const T p = vp[i];
    vp[i] -= step * vneg[i];
    vneg[i] -= step * p;
  }
}

// One full SGD step on the pair loss: every partial derivative is evaluated
// at the pre-update point and vp's contributions from the positive and all
// negative terms are accumulated before being applied. `vp_delta` is scratch
// of the embedding dimension. Returns the positive-pair dot product, which
// goes NaN as soon as any touched component does.
template <typename T>
T update_pair(std::span<T> vp, std::span<T> vq,
              std::span<const std::span<T>> negatives, T eta, T alpha,
              std::span<T> vp_delta) {
  const std::size_t d = vp.size();
  const T dot_pq = dot<T>(vp, vq);
  const T step_q = eta * alpha * (logistic(dot_pq) - static_cast<T>(1));
  for (std::size_t i = 0; i < d; ++i) vp_delta[i] = step_q * vq[i];
  for (std::size_t i = 0; i < d; ++i) vq[i] -= step_q * vp[i];

  for (const auto& vn : negatives) {
    const T step_n = eta * alpha * logistic(dot<T>(vp, vn));
    for (std::size_t i = 0; i < d; ++i) vp_delta[i] += step_n * vn[i];
    for (std::size_t i = 0; i < d; ++i) vn[i] -= step_n * vp[i];
  }
  for (std::size_t i = 0; i < d; ++i) vp[i] -= vp_delta[i];
  return dot_pq;
}

}  // namespace relemb
