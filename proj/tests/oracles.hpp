// Copyright 2026 The DGL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Independent reference implementations used only by tests. None of these
// call into the code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "dgl/types.hpp"

namespace dgl::oracle {

using BigFloat = boost::multiprecision::cpp_dec_float_50;

// Temperature softmax of integer counts in 50-digit decimal arithmetic.
inline std::vector<double> softmax_counts(std::span<const int> counts, double beta) {
  std::vector<BigFloat> e;
  BigFloat sum = 0;
  const BigFloat b(beta);
  for (int c : counts) {
    e.push_back(boost::multiprecision::exp(BigFloat(c) / b));
    sum += e.back();
  }
  std::vector<double> out;
  for (const auto& v : e) out.push_back(static_cast<double>(v / sum));
  return out;
}

// Median of each edge-replicated window by sorting a fresh copy.
inline std::vector<double> median_filter(std::span<const double> signal, int window) {
  const auto n = static_cast<std::ptrdiff_t>(signal.size());
  const std::ptrdiff_t half = window / 2;
  std::vector<double> out;
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    std::vector<double> w;
    for (std::ptrdiff_t k = t - half; k <= t + half; ++k) w.push_back(signal[std::clamp<std::ptrdiff_t>(k, 0, n - 1)]);
    std::sort(w.begin(), w.end());
    out.push_back(w[w.size() / 2]);
  }
  return out;
}

// Interval fill without any validation.
inline std::vector<ClassId> interval_fill(std::span<const AnnotationEvent> events, FrameIndex len) {
  std::vector<ClassId> labels(static_cast<std::size_t>(len), 0);
  for (const auto& e : events) {
    for (FrameIndex f = e.start_frame; f <= e.end_frame; ++f) labels[static_cast<std::size_t>(f)] = e.class_id;
  }
  return labels;
}

// Maximum number of one-to-one matches between ground truth and predictions
// under the boundary tolerance, by exhaustive search.
inline std::size_t max_matching(std::span<const AnnotationEvent> gts, std::span<const Prediction> preds,
                                std::int64_t tol) {
  auto eligible = [&](std::size_t g, std::size_t p) {
    return gts[g].scene_id == preds[p].scene_id && gts[g].class_id == preds[p].class_id &&
           std::llabs(gts[g].start_frame - preds[p].start_frame) <= tol &&
           std::llabs(gts[g].end_frame - preds[p].end_frame) <= tol;
  };
  std::vector<bool> used(preds.size(), false);
  std::function<std::size_t(std::size_t)> best = [&](std::size_t g) -> std::size_t {
    if (g == gts.size()) return 0;
    std::size_t result = best(g + 1);  // leave gt g unmatched
    for (std::size_t p = 0; p < preds.size(); ++p) {
      if (used[p] || !eligible(g, p)) continue;
      used[p] = true;
      result = std::max(result, 1 + best(g + 1));
      used[p] = false;
    }
    return result;
  };
  return best(0);
}

// Central finite difference of f at x along every coordinate.
inline std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                              std::vector<double> x, double h) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = f(x);
    x[i] = orig - h;
    const double down = f(x);
    x[i] = orig;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace dgl::oracle

namespace dgl::oracle {

// Mean cross-entropy of a sigmoid/softmax two-layer network given its flat
// parameter vector (W1, b1, W2, b2 row-major), written out longhand.
inline double network_mean_loss(std::span<const double> theta, std::size_t nf, std::size_t nh,
                                std::size_t nc, const std::vector<std::vector<float>>& xs,
                                const std::vector<std::vector<double>>& targets) {
  const double* w1 = theta.data();
  const double* b1 = w1 + nh * nf;
  const double* w2 = b1 + nh;
  const double* b2 = w2 + nc * nh;
  double total = 0.0;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    std::vector<double> h(nh);
    for (std::size_t j = 0; j < nh; ++j) {
      double a = b1[j];
      for (std::size_t i = 0; i < nf; ++i) a += w1[j * nf + i] * static_cast<double>(xs[s][i]);
      h[j] = 1.0 / (1.0 + std::exp(-a));
    }
    std::vector<double> z(nc);
    double zmax = -1e300;
    for (std::size_t c = 0; c < nc; ++c) {
      z[c] = b2[c];
      for (std::size_t j = 0; j < nh; ++j) z[c] += w2[c * nh + j] * h[j];
      zmax = std::max(zmax, z[c]);
    }
    double lse = 0.0;
    for (double v : z) lse += std::exp(v - zmax);
    lse = zmax + std::log(lse);
    for (std::size_t c = 0; c < nc; ++c) total -= targets[s][c] * (z[c] - lse);
  }
  return total / static_cast<double>(xs.size());
}

}  // namespace dgl::oracle
