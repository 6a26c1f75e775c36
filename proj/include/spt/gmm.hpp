// spt/gmm.hpp

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPT_GMM_HPP_
#define SPT_GMM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "spt/types.hpp"

namespace spt {

struct GmmConfig {
  int num_components = 40;
  std::uint64_t seed = 0;
  int max_iters = 200;
  double tol = 1e-6;  // relative log-likelihood improvement to keep going
  double variance_floor_scale = 1e-6;  // times global per-dimension variance
};

/// Diagonal-covariance Gaussian mixture, fitted per speaker. The speaker
/// tag is part of the model: quantizing another speaker's vectors through
/// it is an input error at the sequence-preparation layer.
struct GmmModel {
  std::string speaker;
  std::uint64_t seed = 0;
  Vector weights;    // K, positive, sums to 1
  Matrix means;      // K x dim
  Matrix variances;  // K x dim, floored
  double train_log_likelihood = 0.0;

  // Fit diagnostics; in-memory only, not serialized.
  std::vector<double> iteration_log_likelihoods;
  int reseed_count = 0;

  int num_components() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.cols()); }
};

/// EM fit with k-means++ seeding. Deterministic given the seed; the
/// returned iteration_log_likelihoods are non-decreasing (up to round-off)
/// except across an empty-component reseed.
GmmModel gmm_fit(const Matrix& vectors, const std::string& speaker,
                 const GmmConfig& config);

/// argmax_k log(weight_k) + log-density_k(v); ties go to the lowest index.
int gmm_assign(const GmmModel& model, const Vector& v);

std::vector<std::int32_t> gmm_assign_all(const GmmModel& model,
                                         const Matrix& vectors);

void save_gmm(const GmmModel& model, const std::string& path);
GmmModel load_gmm(const std::string& path);

}  // namespace spt

#endif  // SPT_GMM_HPP_
