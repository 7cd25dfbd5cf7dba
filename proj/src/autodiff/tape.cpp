#include "pinndarts/autodiff/tape.hpp"

#include <cmath>
#include <stdexcept>

#include "pinndarts/error.hpp"
#include "pinndarts/nn/batch.hpp"
#include "pinndarts/nn/network.hpp"
#include "pinndarts/nn/taylor_layer.hpp"

namespace pinndarts {

double ParameterGradient::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

struct Tape::Block {
  const DifferentiableNetwork* net;
  std::size_t offset;
  DerivativeRequest request;
  std::vector<std::unique_ptr<ChunkCache>> caches;
  std::vector<std::size_t> counts;
  std::vector<std::int64_t> bases;
};

Tape::Tape(std::size_t parameter_count) : parameter_count_(parameter_count) {}
Tape::~Tape() = default;

Var Tape::push(double value, std::int64_t p0, double d0, std::int64_t p1, double d1) {
  nodes_.push_back(Node{value, {p0, p1}, {d0, d1}});
  return Var(this, static_cast<std::int64_t>(nodes_.size()) - 1, value);
}

Var Tape::parameter(std::size_t slot, double value) {
  if (slot >= parameter_count_) throw DimensionError("tape: parameter slot out of range");
  Var v = push(value, -1, 0.0, -1, 0.0);
  parameter_leaves_.emplace_back(v.index(), slot);
  return v;
}

std::vector<Var> Tape::parameters(std::span<const double> values, std::size_t first_slot) {
  std::vector<Var> vars;
  vars.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) vars.push_back(parameter(first_slot + i, values[i]));
  return vars;
}

std::vector<Jet<Var>> Tape::network(const DifferentiableNetwork& net, std::size_t parameter_offset,
                                    const PointSet& points, const DerivativeRequest& request) {
  if (parameter_offset + net.parameter_count() > parameter_count_)
    throw DimensionError("tape: network parameters exceed the parameter space");
  if (!points.empty() && points.dim() != net.input_dim()) throw DimensionError("tape: point dimension mismatch");
  auto block = std::make_unique<Block>();
  block->net = &net;
  block->offset = parameter_offset;
  block->request = request;
  const std::size_t n = points.size();
  std::vector<Jet<Var>> jets(n);
  RowVector out;
  for (std::size_t first = 0; first < n; first += kChunkPoints) {
    const std::size_t count = std::min(kChunkPoints, n - first);
    const TaylorLayout layout(request, count);
    auto cache = net.make_cache();
    out.resize(static_cast<Eigen::Index>(layout.columns()));
    net.forward(points.columns(first, count), request, *cache, out);
    require_finite({out.data(), static_cast<std::size_t>(out.size())}, "network output");
    const auto base = static_cast<std::int64_t>(nodes_.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) push(out(i), -1, 0.0, -1, 0.0);
    auto leaf = [&](int component, std::size_t j) {
      const auto idx = base + static_cast<std::int64_t>(component * count + j);
      return Var(this, idx, nodes_[static_cast<std::size_t>(idx)].value);
    };
    for (std::size_t j = 0; j < count; ++j) {
      auto& jet = jets[first + j];
      jet.u = leaf(0, j);
      for (std::size_t k = 0; k < kMaxInputs; ++k) {
        if (layout.first[k] >= 0) jet.d1[k] = leaf(layout.first[k], j);
        if (layout.second[k] >= 0) jet.d2[k] = leaf(layout.second[k], j);
      }
    }
    block->caches.push_back(std::move(cache));
    block->counts.push_back(count);
    block->bases.push_back(base);
  }
  blocks_.push_back(std::move(block));
  return jets;
}

ParameterGradient Tape::gradient(const Var& loss) const {
  if (loss.tape() != this) throw std::invalid_argument("loss was not recorded on this tape");
  std::vector<double> adj(nodes_.size(), 0.0);
  adj[static_cast<std::size_t>(loss.index())] = 1.0;
  for (std::size_t i = static_cast<std::size_t>(loss.index()) + 1; i-- > 0;) {
    const double a = adj[i];
    if (a == 0.0) continue;
    const Node& node = nodes_[i];
    for (int p = 0; p < 2; ++p)
      if (node.parent[p] >= 0) adj[static_cast<std::size_t>(node.parent[p])] += a * node.partial[p];
  }
  ParameterGradient g;
  g.values.assign(parameter_count_, 0.0);
  for (const auto& [node, slot] : parameter_leaves_) g.values[slot] += adj[static_cast<std::size_t>(node)];
  RowVector out_adj;
  for (const auto& block : blocks_) {
    std::span<double> slice(g.values.data() + block->offset, block->net->parameter_count());
    for (std::size_t c = 0; c < block->caches.size(); ++c) {
      const TaylorLayout layout(block->request, block->counts[c]);
      out_adj.resize(static_cast<Eigen::Index>(layout.columns()));
      for (Eigen::Index i = 0; i < out_adj.size(); ++i)
        out_adj(i) = adj[static_cast<std::size_t>(block->bases[c] + i)];
      block->net->backward(*block->caches[c], out_adj, slice, GradientScope::all());
    }
  }
  require_finite(g.values, "parameter gradient");
  return g;
}

Tape* Tape::owner_of(const Var& a, const Var& b) {
  if (a.tape() && b.tape() && a.tape() != b.tape())
    throw std::invalid_argument("operands recorded on different tapes");
  return a.tape() ? a.tape() : b.tape();
}

Var Tape::unary(const Var& a, double value, double partial) {
  if (a.is_constant()) return Var(value);
  return a.tape()->push(value, a.index(), partial, -1, 0.0);
}

Var Tape::binary(const Var& a, const Var& b, double value, double partial_a, double partial_b) {
  Tape* t = owner_of(a, b);
  if (!t) return Var(value);
  return t->push(value, a.index(), a.is_constant() ? 0.0 : partial_a, b.index(),
                 b.is_constant() ? 0.0 : partial_b);
}

namespace {
// Static helper dispatch; the tape of the operand does the recording.
Var record_unary(const Var& a, double value, double partial) {
  return a.is_constant() ? Var(value) : a.tape()->unary(a, value, partial);
}
Var record_binary(const Var& a, const Var& b, double value, double da, double db) {
  Tape* t = a.tape() ? a.tape() : b.tape();
  return t ? t->binary(a, b, value, da, db) : Var(value);
}
}  // namespace

Var operator+(const Var& a, const Var& b) { return record_binary(a, b, a.value() + b.value(), 1.0, 1.0); }
Var operator-(const Var& a, const Var& b) { return record_binary(a, b, a.value() - b.value(), 1.0, -1.0); }
Var operator*(const Var& a, const Var& b) {
  return record_binary(a, b, a.value() * b.value(), b.value(), a.value());
}
Var operator/(const Var& a, const Var& b) {
  const double q = a.value() / b.value();
  return record_binary(a, b, q, 1.0 / b.value(), -q / b.value());
}
Var operator-(const Var& a) { return record_unary(a, -a.value(), -1.0); }
Var sin(const Var& a) { return record_unary(a, std::sin(a.value()), std::cos(a.value())); }
Var cos(const Var& a) { return record_unary(a, std::cos(a.value()), -std::sin(a.value())); }
Var exp(const Var& a) {
  const double e = std::exp(a.value());
  return record_unary(a, e, e);
}
Var tanh(const Var& a) {
  const double t = std::tanh(a.value());
  return record_unary(a, t, 1.0 - t * t);
}
Var square(const Var& a) { return record_unary(a, a.value() * a.value(), 2.0 * a.value()); }

Var activation(Activation kind, int order, const Var& a) {
  const ActivationValues v = activate(kind, a.value());
  switch (order) {
    case 0: return record_unary(a, v.f, v.d1);
    case 1: return record_unary(a, v.d1, v.d2);
    case 2: return record_unary(a, v.d2, v.d3);
    default: throw ConfigError("activation: derivative order above 2 is not available");
  }
}

ParameterGradient loss_parameter_gradient(const Tape& tape, const Var& loss) { return tape.gradient(loss); }

}  // namespace pinndarts
