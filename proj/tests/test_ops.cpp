#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "c2aug/gradcheck.hpp"
#include "c2aug/ops.hpp"
#include "c2aug/params.hpp"
#include "c2aug/rng.hpp"

using namespace c2aug;

namespace {

Tensor random_tensor(Rng& rng, std::initializer_list<std::size_t> shape, double scale = 1.0) {
  Tensor t = Tensor::zeros(shape);
  for (double& v : t.data) v = scale * rng.normal();
  return t;
}

}  // namespace

TEST_CASE("masked_softmax analytic examples") {
  Tape t;
  // logits [0, 0], mask [keep, mask] -> [~1, ~0]
  {
    NodeId x = t.constant(Tensor::vec({0.0, 0.0}));
    std::vector<std::uint8_t> mask{0, 1};
    NodeId p = ops::masked_softmax(t, x, &mask);
    CHECK(t.value(p)[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.value(p)[1] <= 1e-12);
    const double s = t.value(p)[0] + t.value(p)[1];
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }
  // constant logits, no mask -> uniform
  {
    NodeId x = t.constant(Tensor::vec({3.7, 3.7, 3.7}));
    NodeId p = ops::masked_softmax(t, x, nullptr);
    for (int i = 0; i < 3; ++i)
      CHECK(t.value(p)[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  // [ln 2, 0] -> [2/3, 1/3]
  {
    NodeId x = t.constant(Tensor::vec({std::log(2.0), 0.0}));
    NodeId p = ops::masked_softmax(t, x, nullptr);
    CHECK(t.value(p)[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(t.value(p)[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  // degenerate mask
  {
    NodeId x = t.constant(Tensor::vec({1.0, 2.0}));
    std::vector<std::uint8_t> mask{1, 1};
    CHECK_THROWS_WITH_AS(ops::masked_softmax(t, x, &mask), "degenerate mask", Error);
  }
}

TEST_CASE("softmax output is a distribution on random inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Tape t;
    const std::size_t m = 1 + rng.uniform_index(9);
    NodeId x = t.constant(random_tensor(rng, {m}, 3.0));
    std::vector<std::uint8_t> mask(m, 0);
    for (std::size_t i = 0; i < m; ++i) mask[i] = rng.bernoulli(0.4);
    mask[rng.uniform_index(m)] = 0;  // keep at least one
    NodeId p = ops::masked_softmax(t, x, &mask);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = t.value(p)[i];
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (mask[i]) CHECK(v <= 1e-12);
      s += v;
    }
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }
}

TEST_CASE("l2_normalize examples and idempotence") {
  Tape t;
  NodeId v = t.constant(Tensor::vec({3.0, 4.0}));
  NodeId n1 = ops::l2_normalize(t, v);
  CHECK(t.value(n1)[0] == doctest::Approx(0.6));
  CHECK(t.value(n1)[1] == doctest::Approx(0.8));

  NodeId n2 = ops::l2_normalize(t, n1);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(t.value(n2)[i] - t.value(n1)[i]) <= 1e-9);

  NodeId u = t.constant(Tensor::vec({0.0, 1.0}));
  NodeId nu = ops::l2_normalize(t, u);
  CHECK(t.value(nu)[1] == doctest::Approx(1.0));

  NodeId z = t.constant(Tensor::vec({0.0, 0.0}));
  CHECK_THROWS_WITH_AS(ops::l2_normalize(t, z), "zero-norm embedding", Error);
}

TEST_CASE("cross_attention degenerate cases") {
  // m=1, identity transforms: output equals the single value row.
  {
    Tape t;
    NodeId q = t.constant(Tensor::vec({1.0, -2.0, 0.5}));
    NodeId k = t.constant(Tensor({1, 3}, {0.3, 0.1, 0.2}));
    NodeId v = t.constant(Tensor({1, 3}, {7.0, 8.0, 9.0}));
    NodeId out = ops::cross_attention(t, q, k, v, nullptr, {});
    CHECK(t.value(out)[0] == doctest::Approx(7.0));
    CHECK(t.value(out)[1] == doctest::Approx(8.0));
    CHECK(t.value(out)[2] == doctest::Approx(9.0));
  }
  // all keys identical: uniform mean of value rows.
  {
    Tape t;
    NodeId q = t.constant(Tensor::vec({1.0, 1.0}));
    NodeId k = t.constant(Tensor({3, 2}, {0.5, 0.5, 0.5, 0.5, 0.5, 0.5}));
    NodeId v = t.constant(Tensor({3, 2}, {0.0, 0.0, 3.0, 3.0, 6.0, 9.0}));
    NodeId out = ops::cross_attention(t, q, k, v, nullptr, {});
    CHECK(t.value(out)[0] == doctest::Approx(3.0));
    CHECK(t.value(out)[1] == doctest::Approx(4.0));
  }
  // m=3 with rows 2 and 3 masked: output equals value row 1.
  {
    Tape t;
    Rng rng(5);
    NodeId q = t.constant(random_tensor(rng, {4}));
    NodeId k = t.constant(random_tensor(rng, {3, 4}));
    NodeId v = t.constant(random_tensor(rng, {3, 4}));
    std::vector<std::uint8_t> mask{0, 1, 1};
    NodeId out = ops::cross_attention(t, q, k, v, &mask, {});
    for (int i = 0; i < 4; ++i)
      CHECK(t.value(out)[i] == doctest::Approx(t.value(v).at(0, i)).epsilon(1e-12));
  }
  // dimension mismatch -> shape error
  {
    Tape t;
    NodeId q = t.constant(Tensor::vec({1.0, 2.0}));
    NodeId k = t.constant(Tensor({2, 3}, {1, 2, 3, 4, 5, 6}));
    NodeId v = t.constant(Tensor({2, 3}, {1, 2, 3, 4, 5, 6}));
    CHECK_THROWS_AS(ops::cross_attention(t, q, k, v, nullptr, {}), Error);
  }
}

TEST_CASE("masked rows do not influence cross_attention") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.uniform_index(5);
    const std::size_t d = 1 + rng.uniform_index(8);
    Tensor q = random_tensor(rng, {d});
    Tensor k = random_tensor(rng, {m, d});
    Tensor v = random_tensor(rng, {m, d});
    std::vector<std::uint8_t> mask(m, 0);
    std::size_t masked_count = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (rng.bernoulli(0.5)) {
        mask[i] = 1;
        ++masked_count;
      }
    if (masked_count == m) mask[rng.uniform_index(m)] = 0;

    Tape t1;
    NodeId out1 = ops::cross_attention(t1, t1.constant(q), t1.constant(k),
                                       t1.constant(v), &mask, {});
    // Perturb every masked key/value row.
    Tensor k2 = k, v2 = v;
    for (std::size_t i = 0; i < m; ++i)
      if (mask[i])
        for (std::size_t j = 0; j < d; ++j) {
          k2.at(i, j) += rng.normal();
          v2.at(i, j) += rng.normal();
        }
    Tape t2;
    NodeId out2 = ops::cross_attention(t2, t2.constant(q), t2.constant(k2),
                                       t2.constant(v2), &mask, {});
    for (std::size_t j = 0; j < d; ++j)
      CHECK(std::abs(t1.value(out1)[j] - t2.value(out2)[j]) <= 1e-9);
  }
}

TEST_CASE("backward analytic examples") {
  // f(x) = x^2 at x=3 -> gradient 6
  {
    Tape t;
    NodeId x = t.leaf(Tensor::vec({3.0}));
    NodeId y = ops::mul(t, x, x);
    t.backward(y);
    CHECK(t.grad(x)[0] == doctest::Approx(6.0));
  }
  // loss independent of parameter p -> grad(p) = 0
  {
    Tape t;
    NodeId p = t.leaf(Tensor::vec({1.0, 2.0}));
    NodeId x = t.leaf(Tensor::vec({5.0}));
    NodeId y = ops::mul(t, x, x);
    t.backward(y);
    CHECK(t.grad(p)[0] == 0.0);
    CHECK(t.grad(p)[1] == 0.0);
  }
  // non-finite loss rejected before backprop
  {
    Tape t;
    NodeId x = t.leaf(Tensor::vec({1e308}));
    NodeId y = ops::mul(t, x, x);  // overflows to inf
    CHECK_THROWS_AS(t.backward(y), Error);
  }
}

TEST_CASE("finite_diff_check: quadratic is near-exact") {
  ParamStore params;
  params.add("x", Tensor::vec({1.5, -2.0, 0.25}));
  auto loss = [&]() {
    const Tensor& x = params.at("x");
    return x[0] * x[0] + 2.0 * x[1] * x[1] + 3.0 * x[2] * x[2];
  };
  auto grads = [&]() {
    const Tensor& x = params.at("x");
    std::map<std::string, Tensor> g;
    g["x"] = Tensor::vec({2.0 * x[0], 4.0 * x[1], 6.0 * x[2]});
    return g;
  };
  auto rep = finite_diff_check(params, loss, grads, 1e-5);
  CHECK(rep.max_rel_err < 1e-8);
}

TEST_CASE("finite_diff_check: random two-layer net under 1e-4") {
  Rng rng(99);
  ParamStore params;
  params.add("w1", random_tensor(rng, {4, 5}, 0.7));
  params.add("b1", random_tensor(rng, {5}, 0.3));
  params.add("w2", random_tensor(rng, {5, 3}, 0.7));
  params.add("b2", random_tensor(rng, {3}, 0.3));
  const Tensor input = random_tensor(rng, {2, 4});

  auto build = [&](Tape& t, Binding& b) {
    b = bind(t, params, true);
    NodeId x = t.constant(input);
    NodeId h = ops::tanh_act(t, ops::linear(t, x, b.at("w1"), b.at("b1")));
    NodeId o = ops::linear(t, h, b.at("w2"), b.at("b2"));
    // scalar loss: sum of squares
    NodeId flat = ops::mul(t, o, o);
    return ops::sum(t, flat);
  };
  auto loss = [&]() {
    Tape t;
    Binding b;
    return t.value(build(t, b))[0];
  };
  auto grads = [&]() {
    Tape t;
    Binding b;
    NodeId l = build(t, b);
    t.backward(l);
    std::map<std::string, Tensor> g;
    for (auto& [name, _] : params) g[name] = t.grad(b.at(name));
    return g;
  };
  auto rep = finite_diff_check(params, loss, grads, 1e-5);
  CHECK(rep.max_rel_err < 1e-4);
}

TEST_CASE("finite_diff_check: masked softmax composite under 1e-4") {
  Rng rng(123);
  ParamStore params;
  params.add("w", random_tensor(rng, {6, 6}, 0.5));
  const Tensor logits_in = random_tensor(rng, {6});
  const Tensor target = random_tensor(rng, {6});
  std::vector<std::uint8_t> mask{0, 1, 0, 0, 1, 0};

  auto build = [&](Tape& t, Binding& b) {
    b = bind(t, params, true);
    NodeId x = t.constant(logits_in);
    NodeId z = ops::matvec(t, b.at("w"), x);
    NodeId p = ops::masked_softmax(t, z, &mask);
    NodeId diff = ops::sub(t, p, t.constant(target));
    return ops::sum(t, ops::mul(t, diff, diff));
  };
  auto loss = [&]() {
    Tape t;
    Binding b;
    return t.value(build(t, b))[0];
  };
  auto grads = [&]() {
    Tape t;
    Binding b;
    NodeId l = build(t, b);
    t.backward(l);
    std::map<std::string, Tensor> g;
    for (auto& [name, _] : params) g[name] = t.grad(b.at(name));
    return g;
  };
  auto rep = finite_diff_check(params, loss, grads, 1e-5);
  CHECK(rep.max_rel_err < 1e-4);
}

TEST_CASE("assembly ops roundtrip gradients") {
  Rng rng(3);
  ParamStore params;
  params.add("a", random_tensor(rng, {3, 4}));
  params.add("b", random_tensor(rng, {2, 4}));
  const Tensor wvec = random_tensor(rng, {5});

  auto build = [&](Tape& t, Binding& b) {
    b = bind(t, params, true);
    NodeId cat = ops::vconcat(t, b.at("a"), b.at("b"));           // 5x4
    NodeId g = ops::gather_rows(t, cat, {0, 2, 2, 4});            // 4x4
    NodeId r0 = ops::row(t, g, 1);                                // 4
    NodeId sr = ops::scale_rows(t, g, t.constant(Tensor::vec({1.0, -2.0, 0.5, 3.0})));
    NodeId rd = ops::rows_dot(t, sr, g);                          // 4
    std::vector<NodeId> cols{rd, ops::relu(t, rd)};
    NodeId sc = ops::stack_cols(t, cols);                         // 4x2
    NodeId v = ops::vecmat(t, t.constant(Tensor::vec({1., 1., 1., 1.})), sc);  // 2
    std::vector<NodeId> parts{v, r0};
    NodeId cc = ops::concat_vec(t, parts);                        // 6
    NodeId w = ops::matvec(t, ops::stack_rows(t, std::vector<NodeId>{cc}), cc);  // 1
    (void)wvec;
    return ops::sum(t, w);
  };
  auto loss = [&]() {
    Tape t;
    Binding b;
    return t.value(build(t, b))[0];
  };
  auto grads = [&]() {
    Tape t;
    Binding b;
    NodeId l = build(t, b);
    t.backward(l);
    std::map<std::string, Tensor> g;
    for (auto& [name, _] : params) g[name] = t.grad(b.at(name));
    return g;
  };
  auto rep = finite_diff_check(params, loss, grads, 1e-5);
  CHECK(rep.max_rel_err < 1e-4);
}

TEST_CASE("softmax_cross_entropy and kl_div values") {
  {
    Tape t;
    NodeId x = t.leaf(Tensor::vec({0.0, 0.0}));
    NodeId l = ops::softmax_cross_entropy(t, x, 0);
    CHECK(t.value(l)[0] == doctest::Approx(std::log(2.0)));
    t.backward(l);
    CHECK(t.grad(x)[0] == doctest::Approx(-0.5));
    CHECK(t.grad(x)[1] == doctest::Approx(0.5));
  }
  {
    Tape t;
    NodeId p = t.constant(Tensor::vec({0.5, 0.5}));
    NodeId q = t.constant(Tensor::vec({0.25, 0.75}));
    NodeId l = ops::kl_div(t, p, q);
    CHECK(t.value(l)[0] == doctest::Approx(0.143841).epsilon(1e-5));
  }
  {
    Tape t;
    NodeId p = t.constant(Tensor::vec({0.3, 0.7}));
    NodeId l = ops::kl_div(t, p, p);
    CHECK(t.value(l)[0] == doctest::Approx(0.0));
  }
}
