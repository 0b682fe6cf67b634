// Copyright 2026 The m2b Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support/catch_torch.hpp"

#include <cmath>
#include <random>

#include "m2b/error.hpp"
#include "m2b/losses/losses.hpp"
#include "m2b/model/model.hpp"
#include "support/tiny_config.hpp"

using namespace m2b;
using namespace m2b::losses;
using Catch::Approx;

namespace {

double oracle_sum_squares(const torch::Tensor& a, const torch::Tensor& b) {
  const auto x = a.contiguous().to(torch::kFloat64), y = b.contiguous().to(torch::kFloat64);
  const double* px = x.data_ptr<double>();
  const double* py = y.data_ptr<double>();
  double acc = 0.0;
  for (int64_t i = 0; i < x.numel(); ++i) acc += (px[i] - py[i]) * (px[i] - py[i]);
  return acc / static_cast<double>(x.size(0));
}

}  // namespace

TEST_CASE("difference loss", "[losses]") {
  const auto gt = torch::randn({3, 2, 8, 4}, torch::kFloat64);
  CHECK(loss_difference(gt, gt).item<double>() == 0.0);

  auto one = torch::zeros({1, 2, 1, 1}, torch::kFloat64);
  one[0][0][0][0] = 1.0;
  CHECK(loss_difference(torch::zeros_like(one), one).item<double>() == 1.0);

  auto pred = torch::randn({3, 2, 8, 4}, torch::kFloat64).requires_grad_();
  auto loss = loss_difference(pred, gt);
  CHECK(loss.item<double>() == Approx(oracle_sum_squares(pred.detach(), gt)).epsilon(1e-12));
  loss.backward();
  // Batch mean contributes 1/B to each element's 2(pred - gt).
  CHECK(torch::allclose(pred.grad(), 2 * (pred.detach() - gt) / 3, 1e-12, 1e-12));
  CHECK_THROWS_AS(loss_difference(gt, torch::zeros({3, 2, 8, 5}, torch::kFloat64)), ShapeError);
}

TEST_CASE("channel loss", "[losses]") {
  torch::manual_seed(1);
  const auto l = torch::randn({2, 2, 16, 8}, torch::kFloat64), r = torch::randn({2, 2, 16, 8}, torch::kFloat64);
  CHECK(loss_channels(l, r, l, r).item<double>() == 0.0);
  const auto wrong = r + 0.5;
  CHECK(loss_channels(l, wrong, l, r).item<double>() == loss_difference(wrong, r).item<double>());
  const auto pl = torch::randn_like(l), pr = torch::randn_like(r);
  const double oracle = oracle_sum_squares(pl, l) + oracle_sum_squares(pr, r);
  CHECK(std::abs(loss_channels(pl, pr, l, r).item<double>() - oracle) < 1e-6);
  CHECK(loss_channels(pl.to(torch::kFloat32), pr.to(torch::kFloat32), l.to(torch::kFloat32),
                      r.to(torch::kFloat32)).item<double>() == Approx(oracle).epsilon(1e-5));
}

TEST_CASE("classification loss", "[losses]") {
  const auto y = torch::tensor({1.0, 0.0, 1.0, 0.0}, torch::kFloat64);
  CHECK(loss_classification(y, y).item<double>() <= 1e-6);
  CHECK(loss_classification(y.to(torch::kFloat32), y.to(torch::kFloat32)).item<double>() <= 1e-6);
  for (double label : {0.0, 1.0})
    CHECK(loss_classification(torch::full({5}, 0.5, torch::kFloat64), torch::full({5}, label, torch::kFloat64))
              .item<double>() == Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(loss_classification(torch::tensor({0.9}, torch::kFloat64), torch::tensor({1.0}, torch::kFloat64))
            .item<double>() == Approx(0.10536051565782628).epsilon(1e-12));
  CHECK(std::isfinite(loss_classification(torch::tensor({0.0}), torch::tensor({1.0})).item<double>()));
  CHECK_THROWS_AS(loss_classification(torch::tensor({0.3}), torch::tensor({0.5})), std::invalid_argument);
  CHECK_THROWS_AS(loss_classification(torch::tensor({0.3, 0.2}), torch::tensor({1.0})), ShapeError);
}

TEST_CASE("weighted total", "[losses]") {
  const LossWeights paper;
  CHECK(paper == LossWeights{44.0, 44.0, 1.0});
  CHECK(loss_total(1.0, 1.0, 1.0, paper) == 89.0);
  CHECK(loss_total(torch::tensor(1.0), torch::tensor(1.0), torch::tensor(1.0), paper).item<double>() == 89.0);
  CHECK(loss_total(3.0, 5.0, 7.0, {0.0, 0.0, 0.0}) == 0.0);
  const auto f = [&](double a, double b, double c) { return loss_total(a, b, c, paper); };
  CHECK(f(2.0, 1.0, 1.0) - f(1.0, 1.0, 1.0) == Approx(f(5.0, 1.0, 1.0) - f(4.0, 1.0, 1.0)));
  CHECK(f(1.0, 3.0, 1.0) - f(1.0, 1.0, 1.0) == Approx(2 * (f(1.0, 2.0, 1.0) - f(1.0, 1.0, 1.0))));
  CHECK(f(1.0, 1.0, 0.5) + f(1.0, 1.0, 1.5) == Approx(2 * f(1.0, 1.0, 1.0)));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    CHECK(f(a + d, b, c) >= f(a, b, c));
    CHECK(f(a, b + d, c) >= f(a, b, c));
    CHECK(f(a, b, c + d) >= f(a, b, c));
  }
  CHECK_THROWS_AS(loss_total(1.0, 1.0, 1.0, {-1.0, 1.0, 1.0}), ConfigError);
  CHECK(loss_weights_from_json(to_json(paper)) == paper);
  CHECK_THROWS_AS(loss_weights_from_json(config::Json{{"lambda", 1}}), ConfigError);
}

TEST_CASE("gradient-matching calibration on synthetic tasks", "[losses][calibration]") {
  auto theta = torch::randn({6}, torch::kFloat64).requires_grad_();
  const auto target = torch::linspace(-1.0, 1.0, 6, torch::kFloat64);
  const auto f = [&] { return (theta - target).square().sum(); };
  std::vector<CalibrationTask> tasks{{"double", [&] { return 2.0 * f(); }}, {"single", f}};
  CalibrationOptions opts;
  opts.steps = 100;
  const auto before = theta.detach().clone();
  auto r = calibrate_tasks(tasks, {theta}, {theta}, opts);
  CHECK(torch::equal(theta.detach(), before));
  REQUIRE(r.weights.size() == 2);
  CHECK(r.mean_gradients[0] / r.mean_gradients[1] == Approx(2.0).epsilon(1e-6));
  CHECK(r.weights[1] == 1.0);
  CHECK(r.weights[0] / r.weights[1] == Approx(0.5).epsilon(0.05));

  std::vector<CalibrationTask> same{{"a", f}, {"b", f}};
  r = calibrate_tasks(same, {theta}, {theta}, opts);
  CHECK(r.weights[0] == Approx(1.0).epsilon(1e-12));

  auto other = torch::randn({3}, torch::kFloat64).requires_grad_();
  std::vector<CalibrationTask> dead{{"live", f}, {"dead", [&] { return other.square().sum(); }}};
  try {
    calibrate_tasks(dead, {theta, other}, {theta}, opts);
    FAIL("expected TrainingError");
  } catch (const TrainingError& e) {
    CHECK(std::string(e.what()).find("'dead'") != std::string::npos);
  }
}

TEST_CASE("total loss reaches every subnetwork", "[losses][model]") {
  const auto cfg = testing::tiny_net_config();
  auto net = model::make_model(cfg, 2);
  torch::manual_seed(5);
  const auto l = torch::randn({2, 2, 64, 16}), r = 0.5 * l + 0.1 * torch::randn({2, 2, 64, 16});
  const auto y = torch::tensor({1.0f, 0.0f});
  model::ModelInputs in{torch::rand({2, 3, 32, 64}), (l + r) / 2,
                        model::swap_channels(torch::cat({l, r}, 1), y == 0)};
  auto out = net->forward(in);
  const auto total = loss_total(loss_difference(out.pred_diff, (l - r) / 2),
                                loss_channels(out.pred_left, out.pred_right, l, r),
                                loss_classification(out.flip_prob, y), LossWeights{});
  total.backward();
  const auto grad_norm = [](torch::nn::Module& m) {
    double acc = 0.0;
    for (const auto& p : m.parameters())
      if (p.grad().defined()) acc += p.grad().square().sum().item<double>();
    return std::sqrt(acc);
  };
  CHECK(grad_norm(*net->backbone()) > 0.0);
  CHECK(grad_norm(*net->apnet()) > 0.0);
  CHECK(grad_norm(*net->classifier()) > 0.0);
  CHECK(grad_norm(*net->binaural_encoder()) > 0.0);
  CHECK(grad_norm(*net->visual()) > 0.0);
  CHECK(grad_norm(*net->attention_generation()) > 0.0);
  CHECK(grad_norm(*net->attention_classification()) > 0.0);
}

TEST_CASE("label and input flip consistency", "[losses][model]") {
  const auto cfg = testing::tiny_net_config();
  auto net = model::make_model(cfg, 3);
  torch::NoGradGuard guard;
  std::mt19937_64 rng(17);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> drawn, mirrored;
  for (int batch = 0; batch < 40; ++batch) {
    torch::manual_seed(1000 + batch);
    const auto frames = torch::rand({4, 3, 32, 64});
    const auto l = torch::randn({4, 2, 64, 16}), r = 0.3 * torch::randn({4, 2, 64, 16});
    std::vector<float> ys;
    for (int i = 0; i < 4; ++i) ys.push_back(coin(rng) ? 1.0f : 0.0f);
    const auto y = torch::tensor(ys);
    const auto f_vf = net->visual_features(frames).classification.features;
    const auto orig = torch::cat({l, r}, 1);
    const auto p = net->discriminate(f_vf, model::swap_channels(orig, y == 0));
    const auto q = net->discriminate(f_vf, model::swap_channels(orig, y == 1));
    drawn.push_back(loss_classification(p, y).item<double>());
    mirrored.push_back(loss_classification(q, 1 - y).item<double>());
  }
  // Each element's (input, label) pair under the mirrored draw is the other
  // outcome of the same fair coin, so both traces share one distribution.
  double mean_a = 0.0, mean_b = 0.0, var = 0.0;
  for (std::size_t i = 0; i < drawn.size(); ++i) mean_a += drawn[i], mean_b += mirrored[i];
  mean_a /= drawn.size();
  mean_b /= mirrored.size();
  for (std::size_t i = 0; i < drawn.size(); ++i) var += std::pow(drawn[i] - mean_a, 2) + std::pow(mirrored[i] - mean_b, 2);
  const double se = std::sqrt(var / (2.0 * drawn.size()) * 2.0 / drawn.size());
  CHECK(std::abs(mean_a - mean_b) <= 4 * se + 1e-9);
}
