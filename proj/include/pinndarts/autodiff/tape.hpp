#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pinndarts/aligned.hpp"
#include "pinndarts/autodiff/activation.hpp"
#include "pinndarts/autodiff/jet.hpp"

namespace pinndarts {

class DifferentiableNetwork;
class PointSet;
class Tape;

// Gradient of a scalar with respect to a flat parameter vector, in that
// vector's canonical order.
struct ParameterGradient {
  AlignedVector values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double norm() const;
};

// Handle to a scalar recorded on a Tape. A Var without a tape is a constant
// and records nothing; mixing Vars from two different tapes is an error.
class Var {
 public:
  Var() = default;
  Var(double constant) : value_(constant) {}  // NOLINT: implicit constant

  double value() const { return value_; }
  Tape* tape() const { return tape_; }
  std::int64_t index() const { return index_; }
  bool is_constant() const { return tape_ == nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::int64_t index, double value) : tape_(tape), index_(index), value_(value) {}

  Tape* tape_ = nullptr;
  std::int64_t index_ = -1;
  double value_ = 0.0;
};

// Reverse-mode recorder over scalars plus whole-network blocks. Parameters
// live in one flat space of `parameter_count` slots; scalar parameters and
// network blocks map into it by offset.
class Tape {
 public:
  explicit Tape(std::size_t parameter_count = 0);
  ~Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  std::size_t parameter_count() const { return parameter_count_; }
  std::size_t node_count() const { return nodes_.size(); }

  Var parameter(std::size_t slot, double value);
  std::vector<Var> parameters(std::span<const double> values, std::size_t first_slot = 0);

  // Evaluates `net` at every point with the requested partials. The returned
  // jet entries are tape leaves; the reverse sweep hands their adjoints to the
  // network, whose parameters occupy slots [offset, offset + count).
  std::vector<Jet<Var>> network(const DifferentiableNetwork& net, std::size_t parameter_offset,
                                const PointSet& points, const DerivativeRequest& request);

  // Gradient of `loss` with respect to all parameter slots. Throws
  // std::invalid_argument when `loss` was not recorded on this tape and
  // NumericalError on non-finite entries.
  ParameterGradient gradient(const Var& loss) const;

  Var unary(const Var& a, double value, double partial);
  Var binary(const Var& a, const Var& b, double value, double partial_a, double partial_b);

 private:
  struct Node {
    double value;
    std::int64_t parent[2];
    double partial[2];
  };
  struct Block;

  Var push(double value, std::int64_t p0, double d0, std::int64_t p1, double d1);
  Tape* owner_of(const Var& a, const Var& b);

  std::size_t parameter_count_;
  std::vector<Node> nodes_;
  std::vector<std::pair<std::int64_t, std::size_t>> parameter_leaves_;
  std::vector<std::unique_ptr<Block>> blocks_;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);
Var sin(const Var& a);
Var cos(const Var& a);
Var exp(const Var& a);
Var tanh(const Var& a);
Var square(const Var& a);
// order 0: s(a), 1: s'(a), 2: s''(a).
Var activation(Activation kind, int order, const Var& a);

// Gradient of a tape-built scalar loss with respect to every parameter slot.
ParameterGradient loss_parameter_gradient(const Tape& tape, const Var& loss);

}  // namespace pinndarts
