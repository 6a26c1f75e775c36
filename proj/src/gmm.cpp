// spt/gmm.cpp

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

#include "spt/gmm.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <unordered_set>

#include "spt/rng.hpp"

namespace spt {

namespace {

constexpr const char* kModelFileVersion = "1";

std::size_t count_distinct_rows(const Matrix& x) {
  std::unordered_set<std::string> seen;
  seen.reserve(static_cast<std::size_t>(x.rows()));
  for (Index i = 0; i < x.rows(); ++i) {
    // Rows of a column-major matrix are strided; copy through a buffer.
    Vector row = x.row(i);
    seen.emplace(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::size_t>(row.size()) * sizeof(double));
  }
  return seen.size();
}

// k-means++ seeding: first center uniform, then data points sampled with
// probability proportional to squared distance from the nearest chosen
// center.
Matrix seed_means(const Matrix& x, int k, SplitMix64& rng) {
  const Index n = x.rows();
  Matrix means(k, x.cols());
  means.row(0) = x.row(static_cast<Index>(rng.next_below(n)));
  Vector min_d2 = (x.rowwise() - means.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = min_d2.sum();
    Index pick;
    if (total <= 0.0) {
      pick = static_cast<Index>(rng.next_below(n));
    } else {
      double target = rng.next_double() * total;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        target -= min_d2[i];
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    }
    means.row(c) = x.row(pick);
    min_d2 = min_d2.cwiseMin(
        (x.rowwise() - means.row(c)).rowwise().squaredNorm());
  }
  return means;
}

// Per-sample log p(x) and, when resp != nullptr, the responsibilities.
double log_likelihood(const Matrix& x, const GmmModel& model,
                      Matrix* resp = nullptr) {
  const Index n = x.rows();
  const int k = model.num_components();
  Matrix log_p(n, k);
  for (int c = 0; c < k; ++c) {
    const Array inv_var = model.variances.row(c).transpose().array().inverse();
    const double constant =
        std::log(model.weights[c]) -
        0.5 * (model.variances.row(c).array().log().sum() +
               model.dim() * std::log(2.0 * std::numbers::pi));
    log_p.col(c) =
        constant -
        0.5 * ((x.rowwise() - model.means.row(c)).array().square().rowwise() *
               inv_var.transpose())
                  .rowwise()
                  .sum();
  }
  const Vector row_max = log_p.rowwise().maxCoeff();
  const Vector lse =
      row_max.array() +
      (log_p.colwise() - row_max).array().exp().rowwise().sum().log();
  if (resp != nullptr) {
    *resp = (log_p.colwise() - lse).array().exp();
  }
  return lse.sum();
}

}  // namespace

GmmModel gmm_fit(const Matrix& x, const std::string& speaker,
                 const GmmConfig& config) {
  const Index n = x.rows();
  const int k = config.num_components;
  require(k >= 1, ErrorCode::kInvalidInput, "gmm_fit: K must be >= 1");
  require(n >= k, ErrorCode::kInvalidInput,
          "gmm_fit: fewer vectors than components");
  require(x.allFinite(), ErrorCode::kInvalidInput,
          "gmm_fit: non-finite training vectors");
  require(count_distinct_rows(x) >= static_cast<std::size_t>(k),
          ErrorCode::kInvalidInput,
          "gmm_fit: fewer distinct vectors than components");

  const Vector global_mean = x.colwise().mean();
  Vector global_var =
      (x.rowwise() - global_mean.transpose()).array().square().colwise().mean();
  const Vector var_floor =
      (config.variance_floor_scale * global_var.array())
          .max(1e-300)
          .matrix();
  global_var = global_var.cwiseMax(var_floor);

  SplitMix64 rng(config.seed);
  GmmModel model;
  model.speaker = speaker;
  model.seed = config.seed;
  model.weights = Vector::Constant(k, 1.0 / k);
  model.means = seed_means(x, k, rng);
  model.variances = global_var.transpose().replicate(k, 1);

  double prev_ll = -std::numeric_limits<double>::infinity();
  Matrix resp;
  for (int iter = 0; iter < config.max_iters; ++iter) {
    const double ll = log_likelihood(x, model, &resp);
    model.iteration_log_likelihoods.push_back(ll);
    model.train_log_likelihood = ll;
    if (iter > 0 && ll - prev_ll < config.tol * std::abs(prev_ll)) break;
    prev_ll = ll;

    const Vector occupancy = resp.colwise().sum();
    for (int c = 0; c < k; ++c) {
      if (occupancy[c] < 1e-10) {
        // Component lost all mass; reseed it on a random data point.
        model.means.row(c) = x.row(static_cast<Index>(rng.next_below(n)));
        model.variances.row(c) = global_var;
        model.weights[c] = 1.0 / k;
        ++model.reseed_count;
        std::clog << "gmm_fit[" << speaker << "]: reseeded empty component "
                  << c << " at iteration " << iter << "\n";
        continue;
      }
      model.weights[c] = occupancy[c] / static_cast<double>(n);
      model.means.row(c) = (resp.col(c).transpose() * x) / occupancy[c];
      model.variances.row(c) =
          ((x.rowwise() - model.means.row(c)).array().square().colwise() *
           resp.col(c).array())
              .colwise()
              .sum() /
          occupancy[c];
      model.variances.row(c) =
          model.variances.row(c).cwiseMax(var_floor.transpose());
    }
    model.weights /= model.weights.sum();
  }
  return model;
}

int gmm_assign(const GmmModel& model, const Vector& v) {
  require(v.size() == model.dim(), ErrorCode::kInvalidInput,
          "gmm_assign: dimension mismatch");
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < model.num_components(); ++c) {
    const Array diff = (v - model.means.row(c).transpose()).array();
    const Array var = model.variances.row(c).transpose().array();
    const double score = std::log(model.weights[c]) -
                         0.5 * (var.log().sum() + (diff.square() / var).sum());
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return best;
}

std::vector<std::int32_t> gmm_assign_all(const GmmModel& model,
                                         const Matrix& vectors) {
  std::vector<std::int32_t> ids;
  ids.reserve(static_cast<std::size_t>(vectors.rows()));
  for (Index i = 0; i < vectors.rows(); ++i) {
    ids.push_back(gmm_assign(model, vectors.row(i).transpose()));
  }
  return ids;
}

void save_gmm(const GmmModel& model, const std::string& path) {
  nlohmann::ordered_json j;
  j["version"] = kModelFileVersion;
  j["speaker"] = model.speaker;
  j["K"] = model.num_components();
  j["seed"] = model.seed;
  j["weights"] = std::vector<double>(
      model.weights.data(), model.weights.data() + model.weights.size());
  auto rows_of = [](const Matrix& m) {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(m.rows()));
    for (Index i = 0; i < m.rows(); ++i) {
      Vector row = m.row(i);
      rows.emplace_back(row.data(), row.data() + row.size());
    }
    return rows;
  };
  j["means"] = rows_of(model.means);
  j["variances"] = rows_of(model.variances);
  j["train_log_likelihood"] = model.train_log_likelihood;
  std::ofstream out(path);
  require(out.good(), ErrorCode::kIo, "cannot write model file: " + path);
  out << j.dump(2) << "\n";
  require(out.good(), ErrorCode::kIo, "failed writing model file: " + path);
}

GmmModel load_gmm(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open model file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kIo, "malformed model file " + path + ": " + e.what());
  }
  GmmModel model;
  model.speaker = j.at("speaker").get<std::string>();
  model.seed = j.at("seed").get<std::uint64_t>();
  const auto weights = j.at("weights").get<std::vector<double>>();
  const auto means = j.at("means").get<std::vector<std::vector<double>>>();
  const auto vars = j.at("variances").get<std::vector<std::vector<double>>>();
  const int k = j.at("K").get<int>();
  require(static_cast<int>(weights.size()) == k &&
              static_cast<int>(means.size()) == k &&
              static_cast<int>(vars.size()) == k && k >= 1,
          ErrorCode::kIo, "model file inconsistent: " + path);
  const std::size_t dim = means.front().size();
  model.weights = Eigen::Map<const Vector>(weights.data(), k);
  model.means = Matrix(k, dim);
  model.variances = Matrix(k, dim);
  for (int c = 0; c < k; ++c) {
    require(means[c].size() == dim && vars[c].size() == dim, ErrorCode::kIo,
            "model file inconsistent: " + path);
    model.means.row(c) =
        Eigen::Map<const Vector>(means[c].data(), dim).transpose();
    model.variances.row(c) =
        Eigen::Map<const Vector>(vars[c].data(), dim).transpose();
  }
  model.train_log_likelihood = j.at("train_log_likelihood").get<double>();
  return model;
}

}  // namespace spt
