#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pinndarts/autodiff/dual.hpp"
#include "pinndarts/autodiff/engine.hpp"
#include "pinndarts/autodiff/taylor.hpp"
#include "pinndarts/error.hpp"
#include "pinndarts/nn/reference.hpp"
#include "support.hpp"

using namespace pinndarts;

namespace {

DerivativeRequest full_second(std::size_t dim) {
  DerivativeRequest r;
  for (std::size_t k = 0; k < dim; ++k) r.require(k, 2);
  return r;
}

// A composite loss exercising every jet entry nonlinearly.
template <class T>
T point_term(const Jet<T>& j) {
  using std::sin;
  const T r = j.d2[0] + j.d2[1] * j.u + sin(j.d1[0]) - j.d1[1] * j.d1[1];
  return r * r;
}

}  // namespace

TEST_CASE("derivative request component layout") {
  DerivativeRequest r;
  r.require(0, 2).require(1, 1);
  CHECK(r.component_count() == 4);
  CHECK(r.first_component(0) == 1);
  CHECK(r.first_component(1) == 2);
  CHECK(r.second_component(0) == 3);
  CHECK(r.second_component(1) == -1);
  CHECK(DerivativeRequest::value_only().component_count() == 1);
  CHECK_THROWS_AS(r.require(0, 3), ConfigError);
}

TEST_CASE("activation closed forms agree with Taylor arithmetic") {
  for (double z : {-2.3, -0.4, 0.0, 0.7, 3.1}) {
    const Taylor2 t = tanh(Taylor2::variable(z));
    const ActivationValues v = activate(Activation::tanh, z);
    CHECK(v.f == doctest::Approx(t.v).epsilon(1e-15));
    CHECK(v.d1 == doctest::Approx(t.d).epsilon(1e-14));
    CHECK(v.d2 == doctest::Approx(t.dd).epsilon(1e-14));
    // swish = z / (1 + exp(-z)) through generic Taylor arithmetic
    const Taylor2 x = Taylor2::variable(z);
    const Taylor2 s = x / (Taylor2(1.0) + exp(-x));
    const ActivationValues w = activate(Activation::swish, z);
    CHECK(w.f == doctest::Approx(s.v).epsilon(1e-14));
    CHECK(w.d1 == doctest::Approx(s.d).epsilon(1e-13));
    CHECK(w.d2 == doctest::Approx(s.dd).epsilon(1e-13));
    // third derivatives by central differences of the closed-form second
    for (Activation a : {Activation::tanh, Activation::swish}) {
      const double h = 1e-5;
      const double fd = (activate(a, z + h).d2 - activate(a, z - h).d2) / (2 * h);
      CHECK(activate(a, z).d3 == doctest::Approx(fd).epsilon(1e-8));
    }
  }
}

TEST_CASE("hand-set quadratic network realizes u = x*y exactly") {
  Fnn net(2, {2}, Activation::quadratic);
  net.weight(0) << 1.0, 1.0, 1.0, -1.0;
  net.weight(1) << 0.25, -0.25;
  PointSet pts(2, {2.0, 3.0});
  DerivativeRequest req;
  req.require(0, 2);
  const auto jets = evaluate_with_derivatives(net, pts, req);
  CHECK(jets[0].u == 6.0);
  CHECK(jets[0].d1[0] == 3.0);
  CHECK(jets[0].d2[0] == 0.0);
}

TEST_CASE("value-only request equals the plain forward pass bit for bit") {
  for (Activation act : {Activation::tanh, Activation::swish}) {
    const Fnn net = testing::random_fnn(2, {16, 12, 9}, act, 11);
    const PointSet pts = testing::random_points(2, 150, 5);
    const auto jets = evaluate_with_derivatives(net, pts, DerivativeRequest::value_only());
    const auto plain = net.predict(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(jets[i].u == plain[i]);
  }
}

TEST_CASE("input derivatives match central finite differences") {
  const Fnn net = testing::random_fnn(2, {8, 8}, Activation::tanh, 3);
  const PointSet pts = testing::random_points(2, 10, 9);
  const auto req = full_second(2);
  const auto jets = evaluate_with_derivatives(net, pts, req);
  const double h = 1e-4;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      std::vector<double> plus(pts[i].begin(), pts[i].end()), minus = plus;
      plus[k] += h;
      minus[k] -= h;
      PointSet shifted(2);
      shifted.push_back(plus);
      shifted.push_back(minus);
      const auto s = evaluate_with_derivatives(net, shifted, req);
      const double fd1 = (s[0].u - s[1].u) / (2 * h);
      const double fd2 = (s[0].d1[k] - s[1].d1[k]) / (2 * h);
      CHECK(testing::relative_error(jets[i].d1[k], fd1) < 1e-5);
      CHECK(testing::relative_error(jets[i].d2[k], fd2) < 1e-5);
    }
  }
}

TEST_CASE("batched kernel agrees with the serial reference") {
  for (Activation act : {Activation::tanh, Activation::swish}) {
    const Fnn net = testing::random_fnn(2, {10, 7, 12}, act, 21);
    const PointSet pts = testing::random_points(2, 70, 4);
    DerivativeRequest req;
    req.require(0, 2).require(1, 1);
    const auto jets = evaluate_with_derivatives(net, pts, req);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Jet<double> ref = reference::fnn_jet(net, pts[i], req);
      CHECK(jets[i].u == doctest::Approx(ref.u).epsilon(1e-12));
      CHECK(jets[i].d1[0] == doctest::Approx(ref.d1[0]).epsilon(1e-12));
      CHECK(jets[i].d1[1] == doctest::Approx(ref.d1[1]).epsilon(1e-12));
      CHECK(jets[i].d2[0] == doctest::Approx(ref.d2[0]).epsilon(1e-12));
    }
  }
}

TEST_CASE("tape: quadratic and stationary losses") {
  std::vector<double> p{0.5, -1.25, 3.0};
  Tape tape(p.size());
  const auto vars = tape.parameters(p);
  Var loss = 0.0;
  for (const auto& v : vars) loss = loss + square(v);
  const auto g = loss_parameter_gradient(tape, loss);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(g[i] == 2.0 * p[i]);

  const Fnn net = testing::random_fnn(2, {6}, Activation::tanh, 2);
  const PointSet pts(2, {0.3, -0.2});
  Tape t2(net.parameter_count());
  const auto jets = t2.network(net, 0, pts, DerivativeRequest::value_only());
  const double c = jets[0].u.value();
  const auto g2 = t2.gradient(square(jets[0].u - c));
  CHECK(g2.norm() == 0.0);
}

TEST_CASE("tape rejects losses built elsewhere") {
  Tape a(1), b(1);
  const Var x = a.parameter(0, 1.0);
  const Var y = b.parameter(0, 2.0);
  CHECK_THROWS_AS(a.gradient(Var(3.0)), std::invalid_argument);
  CHECK_THROWS_AS(b.gradient(x * x), std::invalid_argument);
  CHECK_THROWS_AS(x + y, std::invalid_argument);
}

TEST_CASE("tape gradient through second derivatives matches finite differences") {
  Fnn net = testing::random_fnn(2, {8, 8}, Activation::tanh, 7);
  const PointSet pts = testing::random_points(2, 5, 13);
  const auto req = full_second(2);
  auto loss_value = [&] {
    double s = 0.0;
    for (const auto& j : evaluate_with_derivatives(net, pts, req)) s += point_term(j);
    return s / static_cast<double>(pts.size());
  };
  Tape tape(net.parameter_count());
  Var loss = 0.0;
  for (const auto& j : tape.network(net, 0, pts, req)) loss = loss + point_term(j);
  loss = loss / static_cast<double>(pts.size());
  const auto g = tape.gradient(loss);
  const auto fd = testing::fd_gradient(loss_value, net.mutable_parameters());
  CHECK(testing::max_relative_error(g.values, fd) < 1e-5);
}

TEST_CASE("property: parameter gradients match finite differences on random networks") {
  pinndarts::Rng rng(2024, "property");
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t depth = 1 + rng.below(4);
    std::vector<std::size_t> widths;
    for (std::size_t l = 0; l < depth; ++l) widths.push_back(2 + rng.below(15));
    const Activation act = trial % 2 ? Activation::swish : Activation::tanh;
    Fnn net = testing::random_fnn(2, widths, act, 100 + trial, 0.6);
    const PointSet pts = testing::random_points(2, 5, 200 + trial);
    const auto req = full_second(2);
    std::vector<double> grad(net.parameter_count(), 0.0);
    const PointLoss term = [](std::size_t, const Jet<double>& j, Jet<double>& adj) {
      using D = Dual<4>;
      Jet<D> d;
      d.u = D::seed(j.u, 0);
      d.d1[0] = D::seed(j.d1[0], 1);
      d.d1[1] = D(j.d1[1]);
      d.d2[0] = D::seed(j.d2[0], 2);
      d.d2[1] = D::seed(j.d2[1], 3);
      const D r = point_term(d);
      adj.u = r.g[0];
      adj.d2[0] = r.g[2];
      adj.d2[1] = r.g[3];
      adj.d1[0] = r.g[1];
      // d1[1] enters through -d1[1]^2
      adj.d1[1] = -2.0 * j.d1[1] * 2.0 * (j.d2[0] + j.d2[1] * j.u + std::sin(j.d1[0]) - j.d1[1] * j.d1[1]);
      return r.v;
    };
    accumulate_point_losses(net, pts, req, term, grad, GradientScope::all());
    auto value = [&] {
      double s = 0.0;
      for (const auto& j : evaluate_with_derivatives(net, pts, req)) s += point_term(j);
      return s;
    };
    const auto fd = testing::fd_gradient(value, net.mutable_parameters());
    CHECK_MESSAGE(testing::max_relative_error(grad, fd) < 1e-5, "trial " << trial);
  }
}

TEST_CASE("fused pointwise path and tape path give the same gradient") {
  const Fnn net = testing::random_fnn(2, {12, 9}, Activation::swish, 5);
  const PointSet pts = testing::random_points(2, 130, 6);
  DerivativeRequest req;
  req.require(0, 2).require(1, 1);
  const auto value_of = [](const Jet<double>& j) { return j.d1[1] - j.d2[0] + j.u * j.u; };
  std::vector<double> fused(net.parameter_count(), 0.0);
  const double total = accumulate_point_losses(
      net, pts, req,
      [&](std::size_t, const Jet<double>& j, Jet<double>& adj) {
        const double r = value_of(j);
        adj.d1[1] = 2 * r;
        adj.d2[0] = -2 * r;
        adj.u = 2 * r * 2 * j.u;
        return r * r;
      },
      fused, GradientScope::all());
  Tape tape(net.parameter_count());
  Var loss = 0.0;
  for (const auto& j : tape.network(net, 0, pts, req)) loss = loss + square(j.d1[1] - j.d2[0] + j.u * j.u);
  CHECK(total == doctest::Approx(loss.value()).epsilon(1e-12));
  const auto g = tape.gradient(loss);
  for (std::size_t i = 0; i < fused.size(); ++i) CHECK(fused[i] == doctest::Approx(g[i]).epsilon(1e-10));
}

TEST_CASE("reference tape route gives the same parameter gradient") {
  const Fnn net = testing::random_fnn(2, {5, 4}, Activation::tanh, 8);
  const PointSet pts = testing::random_points(2, 3, 1);
  const auto req = full_second(2);
  Tape batched(net.parameter_count());
  Var lb = 0.0;
  for (const auto& j : batched.network(net, 0, pts, req)) lb = lb + point_term(j);
  Tape scalar(net.parameter_count());
  const auto params = scalar.parameters(net.parameters());
  Var ls = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) ls = ls + point_term(reference::fnn_jet(params, net, pts[i], req));
  const auto gb = batched.gradient(lb);
  const auto gs = scalar.gradient(ls);
  for (std::size_t i = 0; i < gb.size(); ++i) CHECK(gb[i] == doctest::Approx(gs[i]).epsilon(1e-10));
}

TEST_CASE("evaluation is deterministic and serial/parallel agree") {
  const Fnn net = testing::random_fnn(2, {16, 16}, Activation::tanh, 4);
  const PointSet pts = testing::random_points(2, 300, 2);
  const auto req = full_second(2);
  const auto a = evaluate_batch(net, pts, req, Execution::parallel);
  const auto b = evaluate_batch(net, pts, req, Execution::parallel);
  const auto c = evaluate_batch(net, pts, req, Execution::serial);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(a[i].u == b[i].u);
    CHECK(a[i].d2[1] == b[i].d2[1]);
    CHECK(a[i].d2[1] == c[i].d2[1]);
  }
}

TEST_CASE("engine errors") {
  Fnn net = testing::random_fnn(2, {4}, Activation::identity, 1);
  CHECK_THROWS_AS(evaluate_with_derivatives(net, testing::random_points(3, 2, 1), DerivativeRequest{}),
                  DimensionError);
  DerivativeRequest third;
  third.require(2, 1);
  CHECK_THROWS_AS(evaluate_with_derivatives(net, testing::random_points(2, 2, 1), third), DimensionError);
  for (double& p : net.mutable_parameters()) p = 1e300;
  CHECK_THROWS_AS(evaluate_with_derivatives(net, testing::random_points(2, 2, 1), DerivativeRequest{}),
                  NumericalError);
}
