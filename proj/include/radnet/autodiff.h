// Copyright 2026 The radnet Authors.
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

#ifndef RADNET_AUTODIFF_H_
#define RADNET_AUTODIFF_H_

// A small reverse-mode automatic differentiation engine over dense row-major
// tensors. Operations append nodes to a Tape in execution order, so the node
// list is already topologically sorted; Backward walks it once in reverse.
//
// Parameters live outside the tape. A tape leaf created from a Parameter
// reads the parameter's storage directly and accumulates into its grad, so
// successive Backward calls sum up until the caller zeroes the gradients.
//
// Instantiated for float (training) and double (gradient checks).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace radnet::ad {

using Shape = std::vector<size_t>;

size_t NumElements(const Shape& shape);
std::string ShapeToString(const Shape& shape);

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename T>
struct Tensor {
  Shape shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(Shape s, T fill = T(0));
  Tensor(Shape s, std::vector<T> values);

  size_t size() const { return data.size(); }
  size_t rank() const { return shape.size(); }
  T& operator[](size_t i) { return data[i]; }
  const T& operator[](size_t i) const { return data[i]; }
};

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;

  Parameter() = default;
  Parameter(std::string n, Shape shape)
      : name(std::move(n)), value(shape), grad(shape) {}

  const Shape& shape() const { return value.shape; }
  size_t size() const { return value.size(); }
  void ZeroGrad();
};

template <typename T>
class Tape;

// Lightweight handle to a node on a tape.
template <typename T>
class Var {
 public:
  Var() = default;
  Var(Tape<T>* tape, size_t id) : tape_(tape), id_(id) {}

  Tape<T>* tape() const { return tape_; }
  size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Shape& shape() const;
  size_t size() const;
  std::span<const T> value() const;
  // Gradient after Backward; empty when the node does not require grad.
  std::span<const T> grad() const;
  // Value of a single-element tensor.
  T item() const;
  Tensor<T> ToTensor() const;

 private:
  Tape<T>* tape_ = nullptr;
  size_t id_ = 0;
};

template <typename T>
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var<T> Constant(Tensor<T> value);
  // Gradients flow into param.grad.
  Var<T> Leaf(Parameter<T>& param);
  // Reads param without copying and without tracking gradients.
  Var<T> View(const Parameter<T>& param);

  // Populates gradients for every node that requires one. `loss` must hold
  // exactly one element.
  void Backward(Var<T> loss);

  size_t size() const { return nodes_.size(); }
  void Clear() { nodes_.clear(); }

  // Operation plumbing.
  Var<T> Record(Shape shape, std::vector<T> value,
                std::initializer_list<Var<T>> inputs, BackwardFn backward);
  Var<T> Record(Shape shape, std::vector<T> value,
                std::span<const Var<T>> inputs, BackwardFn backward);

  const Shape& shape(size_t id) const { return nodes_[id].shape; }
  const T* value(size_t id) const;
  // nullptr when node `id` does not require grad.
  T* grad(size_t id);
  bool requires_grad(size_t id) const { return nodes_[id].requires_grad; }

 private:
  struct Node {
    Shape shape;
    std::vector<T> value;
    std::vector<T> grad;
    const Tensor<T>* external_value = nullptr;
    Tensor<T>* external_grad = nullptr;
    bool requires_grad = false;
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
};

enum class Activation { kRelu, kTanh, kSigmoid, kLinear };

Activation ParseActivation(const std::string& name);
std::string ActivationName(Activation a);

// C = A·B for A p×q, B q×s.
template <typename T>
Var<T> MatMul(Var<T> a, Var<T> b);

// y = x·Wᵀ + b for x N×in, W out×in, b out. `bias` may be invalid (no bias).
template <typename T>
Var<T> Linear(Var<T> x, Var<T> weight, Var<T> bias);

// Valid cross-correlation with stride. input C×T or N×C×T, filter A×C×w,
// bias A. Output A×T' or N×A×T' with T' = floor((T − w)/stride) + 1.
template <typename T>
Var<T> Conv1d(Var<T> input, Var<T> filter, Var<T> bias, size_t stride);

// Maximum over the last axis. Ties route the gradient to the first index.
template <typename T>
Var<T> MaxPoolOverTime(Var<T> input);

template <typename T>
Var<T> Relu(Var<T> x);
template <typename T>
Var<T> Tanh(Var<T> x);
template <typename T>
Var<T> Sigmoid(Var<T> x);
template <typename T>
Var<T> Activate(Var<T> x, Activation a);

template <typename T>
Var<T> Add(Var<T> a, Var<T> b);
template <typename T>
Var<T> Sub(Var<T> a, Var<T> b);
template <typename T>
Var<T> Mul(Var<T> a, Var<T> b);
template <typename T>
Var<T> Scale(Var<T> x, T alpha);

// Concatenation along the last axis; leading dimensions must agree.
template <typename T>
Var<T> Concat(std::span<const Var<T>> parts);
template <typename T>
Var<T> Concat(std::initializer_list<Var<T>> parts);

// Rows [begin, end) of a rank-2 tensor.
template <typename T>
Var<T> SliceRows(Var<T> x, size_t begin, size_t end);

template <typename T>
Var<T> Reshape(Var<T> x, Shape shape);

template <typename T>
Var<T> Sum(Var<T> x);

// Columns of `table` (d×V) gathered for `indices` laid out as N×L; output
// N×d×L. Entries equal to `frozen_id` (the padding id) pass no gradient back.
template <typename T>
Var<T> EmbeddingLookup(Var<T> table, std::span<const int32_t> indices,
                       size_t n, size_t len, int32_t frozen_id);

// Mean over the batch of −log softmax(logits)[label], logits B×K.
template <typename T>
Var<T> SoftmaxCrossEntropy(Var<T> logits, std::span<const int> labels);

// Row-wise softmax of a B×K matrix (no tape), max-subtracted.
template <typename T>
std::vector<T> Softmax(std::span<const T> logits, size_t rows, size_t cols);

// ---------------------------------------------------------------------------

template <typename T>
const Shape& Var<T>::shape() const {
  return tape_->shape(id_);
}

template <typename T>
size_t Var<T>::size() const {
  return NumElements(shape());
}

template <typename T>
std::span<const T> Var<T>::value() const {
  return {tape_->value(id_), size()};
}

template <typename T>
std::span<const T> Var<T>::grad() const {
  T* g = tape_->grad(id_);
  if (g == nullptr) return {};
  return {g, size()};
}

template <typename T>
T Var<T>::item() const {
  if (size() != 1) {
    throw ShapeError("item() on tensor of shape " + ShapeToString(shape()));
  }
  return value()[0];
}

template <typename T>
Tensor<T> Var<T>::ToTensor() const {
  auto v = value();
  return Tensor<T>(shape(), std::vector<T>(v.begin(), v.end()));
}

template <typename T>
Var<T> Concat(std::initializer_list<Var<T>> parts) {
  return Concat<T>(std::span<const Var<T>>(parts.begin(), parts.size()));
}

}  // namespace radnet::ad

#endif  // RADNET_AUTODIFF_H_
