#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dara/adam.hpp"
#include "dara/checkpoint.hpp"
#include "dara/dqn.hpp"
#include "dara/exploration.hpp"
#include "dara/mlp.hpp"
#include "dara/qtable.hpp"
#include "dara/replay_buffer.hpp"
#include "support.hpp"

using namespace dara;

namespace {

Trajectory tr(double s, int a, double r, double s2, bool terminal = false) { return Trajectory{s, a, r, s2, terminal}; }

// Rectifier on/off pattern of every hidden unit over the batch's states.
std::vector<bool> relu_pattern(const Mlp& net, const std::vector<Trajectory>& batch) {
  std::vector<bool> pattern;
  Mlp::Trace trace;
  for (const auto& t : batch) {
    const double in[] = {t.state};
    net.forward(in, trace);
    for (std::size_t l = 0; l + 1 < net.num_layers(); ++l) {
      for (double z : trace.pre_activations[l]) pattern.push_back(z > 0.0);
    }
  }
  return pattern;
}

bool near_kink(const Mlp& net, const std::vector<Trajectory>& batch) {
  Mlp::Trace trace;
  for (const auto& t : batch) {
    const double in[] = {t.state};
    net.forward(in, trace);
    for (std::size_t l = 0; l + 1 < net.num_layers(); ++l) {
      for (double z : trace.pre_activations[l]) {
        if (std::abs(z) < 1e-6) return true;
      }
    }
  }
  return false;
}

Checkpoint random_checkpoint(std::uint64_t seed) {
  Rng rng(seed);
  Checkpoint ckpt;
  ckpt.net = Mlp::glorot(default_q_dims(), rng);
  ckpt.adam = AdamState(ckpt.net.num_params());
  for (double& m : ckpt.adam.first_moment) m = rng.normal(0.0, 0.1);
  for (double& v : ckpt.adam.second_moment) v = rng.uniform(0.0, 1e-3);
  ckpt.adam.step = 1234;
  ckpt.train_step = 98765;
  ckpt.gamma = 0.9;
  return ckpt;
}

std::string serialize(const Checkpoint& ckpt) {
  std::ostringstream out;
  write_checkpoint(out, ckpt);
  return out.str();
}

Checkpoint deserialize(const std::string& text) {
  std::istringstream in(text);
  return read_checkpoint(in);
}

}  // namespace

TEST_CASE("mlp forward examples") {
  Mlp zero(default_q_dims());
  const auto q = mlp_forward(zero, 0.4);
  CHECK(q.size() == 8);
  for (double v : q) CHECK(v == 0.0);

  Mlp toy({1, 1, 1, 1});
  for (double& p : toy.params()) p = 0.0;
  for (std::size_t l = 0; l < 3; ++l) toy.weights(l)[0] = 1.0;
  CHECK(mlp_forward(toy, 0.5)[0] == 0.5);
  CHECK(mlp_forward(toy, -0.5)[0] == 0.0);

  Rng rng(1);
  const auto net = Mlp::glorot(default_q_dims(), rng);
  CHECK(mlp_forward(net, 0.3).size() == 8);
  CHECK(mlp_forward(net, 0.3) == mlp_forward(net, 0.3));
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(net.dims()[l] + net.dims()[l + 1]));
    for (double w : net.weights(l)) CHECK(std::abs(w) <= limit);
    for (double b : net.bias(l)) CHECK(b == 0.0);
  }
}

TEST_CASE("dqn loss examples") {
  Mlp zero(default_q_dims());
  std::vector<Trajectory> ones;
  for (int i = 0; i < 64; ++i) ones.push_back(tr(i / 64.0, i % 8, 1.0, 0.5));
  CHECK(dqn_loss_and_grads(zero, zero, ones, 0.0).loss == doctest::Approx(1.0));

  std::vector<Trajectory> fixed;
  for (int i = 0; i < 64; ++i) fixed.push_back(tr(i / 64.0, i % 8, 0.0, 0.5));
  const auto at_rest = dqn_loss_and_grads(zero, zero, fixed, 0.9);
  CHECK(at_rest.loss == 0.0);
  for (double g : at_rest.grads) CHECK(g == 0.0);

  // Terminal transitions ignore the bootstrap term.
  Mlp toy({1, 1});
  toy.bias(0)[0] = 3.0;
  const std::vector<Trajectory> one{tr(0.0, 0, 1.0, 0.0, true)};
  CHECK(dqn_loss_and_grads(toy, toy, one, 0.9).loss == doctest::Approx(4.0));
  const std::vector<Trajectory> boot{tr(0.0, 0, 1.0, 0.0, false)};
  CHECK(dqn_loss_and_grads(toy, toy, boot, 0.5).loss == doctest::Approx(0.25));
}

TEST_CASE("dqn gradients match central finite differences") {
  Rng rng(2024);
  int nets_checked = 0;
  int params_checked = 0;
  for (int trial = 0; nets_checked < 20 && trial < 200; ++trial) {
    const std::size_t h1 = 2 + rng.below(5);
    const std::size_t h2 = 2 + rng.below(5);
    Mlp net = Mlp::glorot({1, h1, h2, 8}, rng);
    for (double& b : net.params()) b += rng.normal(0.0, 0.05);
    Mlp target = Mlp::glorot({1, h1, h2, 8}, rng);
    std::vector<Trajectory> batch;
    const std::size_t n = 1 + rng.below(16);
    for (std::size_t i = 0; i < n; ++i) {
      batch.push_back(tr(rng.uniform(), static_cast<int>(rng.below(8)), rng.uniform(), rng.uniform(), rng.bernoulli(0.2)));
    }
    if (near_kink(net, batch)) continue;
    ++nets_checked;
    const double gamma = rng.uniform();
    const auto analytic = dqn_loss_and_grads(net, target, batch, gamma).grads;
    const auto base_pattern = relu_pattern(net, batch);
    const double h = 1e-5;
    for (std::size_t p = 0; p < net.num_params(); ++p) {
      Mlp plus = net;
      Mlp minus = net;
      plus.params()[p] += h;
      minus.params()[p] -= h;
      if (relu_pattern(plus, batch) != base_pattern || relu_pattern(minus, batch) != base_pattern) continue;
      const double numeric = (dqn_loss_and_grads(plus, target, batch, gamma).loss -
                              dqn_loss_and_grads(minus, target, batch, gamma).loss) /
                             (2 * h);
      const double scale = std::max({std::abs(numeric), std::abs(analytic[p]), 1e-7});
      CHECK(std::abs(numeric - analytic[p]) / scale < 1e-4);
      ++params_checked;
    }
  }
  CHECK(nets_checked == 20);
  CHECK(params_checked > 500);
}

TEST_CASE("adam") {
  std::vector<double> theta{0.0};
  const std::vector<double> g{1.0};
  AdamState state(1);
  adam_step(theta, g, state);
  CHECK(std::abs(theta[0] - -0.01 / (1.0 + 1e-8)) < 1e-10);
  CHECK(state.step == 1);

  std::vector<double> still{0.3, -0.2};
  const std::vector<double> zero{0.0, 0.0};
  AdamState fresh(2);
  adam_step(still, zero, fresh);
  CHECK(still == std::vector<double>{0.3, -0.2});
  CHECK(fresh.first_moment == std::vector<double>{0.0, 0.0});

  AdamState decaying(1);
  decaying.first_moment[0] = 0.5;
  decaying.second_moment[0] = 0.2;
  std::vector<double> x{1.0};
  adam_step(x, std::vector<double>{0.0}, decaying);
  CHECK(decaying.first_moment[0] == doctest::Approx(0.45));
  CHECK(decaying.second_moment[0] == doctest::Approx(0.1998));

  std::vector<double> y{0.0};
  AdamState s2(1);
  adam_step(y, std::vector<double>{2.0}, s2);
  const double after_one = y[0];
  adam_step(y, std::vector<double>{2.0}, s2);
  CHECK(after_one < 0.0);
  CHECK(y[0] < after_one);

  std::vector<double> wrong{0.0, 0.0};
  CHECK_THROWS_AS(adam_step(wrong, g, state), std::invalid_argument);
}

TEST_CASE("replay buffer") {
  ReplayBuffer two(2);
  two.push(tr(0.1, 0, 0, 0));
  two.push(tr(0.2, 0, 0, 0));
  two.push(tr(0.3, 0, 0, 0));
  CHECK(two.size() == 2);
  CHECK(two.at(0).state == 0.2);
  CHECK(two.at(1).state == 0.3);

  ReplayBuffer ten(100);
  Rng rng(3);
  for (int i = 0; i < 10; ++i) ten.push(tr(i, 0, 0, 0));
  CHECK_FALSE(ten.sample(64, rng).has_value());
  CHECK_FALSE(ten.ready(64));

  std::array<int, 10> counts{};
  const int draws = 100000;
  for (int i = 0; i < draws / 10; ++i) {
    const auto batch = ten.sample(10, rng);
    for (const auto& t : *batch) ++counts[static_cast<std::size_t>(t.state)];
  }
  const double sigma = std::sqrt(draws * 0.1 * 0.9);
  for (int c : counts) CHECK(std::abs(c - draws * 0.1) < 3 * sigma);
}

TEST_CASE("replay evicts oldest first") {
  ReplayBuffer buffer(50);
  for (int i = 0; i < 50 + 17; ++i) buffer.push(tr(i, 0, 0, 0));
  Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    const auto batch = buffer.sample(32, rng);
    REQUIRE(batch.has_value());
    for (const auto& t : *batch) CHECK(t.state >= 17);
  }
}

TEST_CASE("epsilon schedule") {
  EpsilonSchedule s{1.0, 0.1, 1000, 1.0};
  CHECK(epsilon_value(s, 0) == 1.0);
  CHECK(epsilon_value(s, 1000) == doctest::Approx(0.1));
  CHECK(epsilon_value(s, 5000) == doctest::Approx(0.1));
  CHECK(epsilon_value(s, 500) == doctest::Approx(0.55));
  EpsilonSchedule poly{1.0, 0.1, 1000, 2.0};
  double last = 1.0;
  for (std::uint64_t t = 0; t < 1200; t += 7) {
    const double e = epsilon_value(poly, t);
    CHECK(e <= last);
    CHECK(e >= 0.1);
    last = e;
  }
}

TEST_CASE("select action") {
  Rng rng(5);
  Mlp zero(default_q_dims());
  CHECK(select_action(zero, 0.3, 0.0, rng) == 0);

  Rng init(6);
  const auto net = Mlp::glorot(default_q_dims(), init);
  for (double s = 0.0; s <= 1.0; s += 0.1) CHECK(select_action(net, s, 0.0, rng) == greedy_action(net, s));

  std::array<int, 8> counts{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(select_action(net, 0.5, 1.0, rng))];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 8.0) * (c - n / 8.0) / (n / 8.0);
  CHECK(chi2 < 24.32);  // 7 degrees of freedom, p = 0.001
}

TEST_CASE("target sync") {
  Rng rng(7);
  Mlp net = Mlp::glorot(default_q_dims(), rng);
  Mlp target(default_q_dims());
  target_sync(net, target);
  for (int i = 0; i < 100; ++i) {
    const double s = rng.uniform();
    CHECK(mlp_forward(net, s) == mlp_forward(target, s));
  }
  const Mlp snapshot = target;
  net.params()[3] += 1.0;
  CHECK(target == snapshot);
  target_sync(net, target);
  const Mlp once = target;
  target_sync(net, target);
  CHECK(target == once);
  Mlp other({1, 4, 8});
  CHECK_THROWS(target_sync(net, other));
}

TEST_CASE("qtable update examples") {
  QTable q(3, 2, 1.0, 0.0);
  qtable_update(q, 0, 1, 0.7, 2);
  CHECK(q.at(0, 1) == 0.7);

  QTable h(3, 2, 0.5, 0.9);
  h.at(2, 0) = 2.0;
  h.at(2, 1) = -1.0;
  qtable_update(h, 0, 0, 1.0, 2);
  CHECK(h.at(0, 0) == doctest::Approx(1.4).epsilon(1e-15));

  QTable frozen(2, 2, 0.0, 0.9);
  frozen.at(0, 0) = 0.25;
  qtable_update(frozen, 0, 0, 5.0, 1);
  CHECK(frozen.at(0, 0) == 0.25);
}

TEST_CASE("tabular q-learning converges to value iteration") {
  // Deterministic 4-state, 2-action MDP: action 0 stays, action 1 advances.
  const double gamma = 0.2;
  const double reward[4][2] = {{0.1, 0.5}, {0.3, 0.0}, {1.0, 0.2}, {0.0, 0.8}};
  auto next = [](std::size_t s, std::size_t a) { return a == 0 ? s : (s + 1) % 4; };

  double v[4][2] = {};
  for (int it = 0; it < 1000; ++it) {
    double nv[4][2];
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t a = 0; a < 2; ++a) {
        const auto s2 = next(s, a);
        nv[s][a] = reward[s][a] + gamma * std::max(v[s2][0], v[s2][1]);
      }
    }
    std::copy(&nv[0][0], &nv[0][0] + 8, &v[0][0]);
  }

  QTable q(4, 2, 1.0, gamma);
  std::array<int, 8> visits{};
  double err = 1.0;
  int updates = 0;
  while (updates < 100000 && err >= 1e-3) {
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t a = 0; a < 2; ++a) {
        q.alpha = 1.0 / ++visits[s * 2 + a];
        qtable_update(q, s, a, reward[s][a], next(s, a));
        ++updates;
      }
    }
    err = 0.0;
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t a = 0; a < 2; ++a) err = std::max(err, std::abs(q.at(s, a) - v[s][a]));
    }
  }
  CHECK(err < 1e-3);
  CHECK(updates <= 100000);
}

TEST_CASE("checkpoint round trip") {
  const auto ckpt = random_checkpoint(11);
  const auto text = serialize(ckpt);
  CHECK(text.starts_with("DARA-CKPT v1\n1 32 32 8\n98765 0.9\nW0 32x1 "));
  const auto back = deserialize(text);
  CHECK(back.net == ckpt.net);
  CHECK(back.adam == ckpt.adam);
  CHECK(back.train_step == 98765);
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const double s = rng.uniform();
    CHECK(mlp_forward(back.net, s) == mlp_forward(ckpt.net, s));
  }
  CHECK(serialize(back) == text);

  const auto dir = testing::scratch_dir("ckpt");
  checkpoint_save(dir / "a.ckpt", ckpt);
  checkpoint_save(dir / "b.ckpt", checkpoint_load(dir / "a.ckpt"));
  CHECK(testing::read_file(dir / "a.ckpt") == testing::read_file(dir / "b.ckpt"));
}

TEST_CASE("checkpoint load errors") {
  const auto text = serialize(random_checkpoint(13));
  auto corrupt = text;
  corrupt[0] = 'X';
  CHECK_THROWS_AS(deserialize(corrupt), CheckpointError);

  auto version = text;
  version.replace(0, 12, "DARA-CKPT v9");
  CHECK_THROWS_WITH(deserialize(version), doctest::Contains("unsupported checkpoint version"));

  CHECK_THROWS_WITH(deserialize(text.substr(0, text.size() / 2)), doctest::Contains("checkpoint"));
  CHECK_THROWS_WITH(deserialize(text.substr(0, text.find("ADAM"))), doctest::Contains("truncated"));

  auto dims = text;
  dims.replace(dims.find("W0 32x1"), 7, "W0 31x1");
  CHECK_THROWS_WITH(deserialize(dims), doctest::Contains("shape"));

  CHECK_THROWS_WITH(checkpoint_load("/nonexistent/x.ckpt"), doctest::Contains("/nonexistent/x.ckpt"));
}

TEST_CASE("dqn solves a deterministic contextual bandit") {
  // 8 states, best action per state is a fixed permutation.
  const int best[8] = {3, 7, 0, 5, 1, 6, 2, 4};
  auto reward = [&](int s, int a) { return a == best[s] ? 1.0 : 0.2 * (1.0 - std::abs(a - best[s]) / 7.0); };
  Rng rng(99);
  Mlp net = Mlp::glorot(default_q_dims(), rng);
  Mlp target = net;
  AdamState adam(net.num_params(), 1e-2);
  ReplayBuffer buffer(100000);
  for (int i = 0; i < 4000; ++i) {
    const int s = static_cast<int>(rng.below(8));
    const int a = static_cast<int>(rng.below(8));
    buffer.push(tr(s / 7.0, a, reward(s, a), 0.0, true));
  }
  for (int step = 0; step < 3000; ++step) {
    const auto batch = *buffer.sample(64, rng);
    const auto out = dqn_loss_and_grads(net, target, batch, 0.0);
    adam_step(net.params(), out.grads, adam);
  }
  int correct = 0;
  for (int s = 0; s < 8; ++s) correct += greedy_action(net, s / 7.0) == best[s] ? 1 : 0;
  CHECK(correct / 8.0 >= 0.95);
}
