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

#include "radnet/autodiff.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace radnet::ad {

size_t NumElements(const Shape& shape) {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return n;
}

std::string ShapeToString(const Shape& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Activation ParseActivation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "linear") return Activation::kLinear;
  throw std::invalid_argument("unknown activation: " + name);
}

std::string ActivationName(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kLinear:
      return "linear";
  }
  return "?";
}

template <typename T>
Tensor<T>::Tensor(Shape s, T fill)
    : shape(std::move(s)), data(NumElements(shape), fill) {}

template <typename T>
Tensor<T>::Tensor(Shape s, std::vector<T> values)
    : shape(std::move(s)), data(std::move(values)) {
  if (data.size() != NumElements(shape)) {
    throw ShapeError("tensor of shape " + ShapeToString(shape) + " given " +
                     std::to_string(data.size()) + " values");
  }
}

template <typename T>
void Parameter<T>::ZeroGrad() {
  if (grad.shape != value.shape) grad = Tensor<T>(value.shape);
  std::fill(grad.data.begin(), grad.data.end(), T(0));
}

// --- Tape ------------------------------------------------------------------

template <typename T>
Var<T> Tape<T>::Constant(Tensor<T> value) {
  Node node;
  node.shape = std::move(value.shape);
  node.value = std::move(value.data);
  nodes_.push_back(std::move(node));
  return Var<T>(this, nodes_.size() - 1);
}

template <typename T>
Var<T> Tape<T>::Leaf(Parameter<T>& param) {
  if (param.grad.shape != param.value.shape) param.ZeroGrad();
  Node node;
  node.shape = param.value.shape;
  node.external_value = &param.value;
  node.external_grad = &param.grad;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Var<T>(this, nodes_.size() - 1);
}

template <typename T>
Var<T> Tape<T>::View(const Parameter<T>& param) {
  Node node;
  node.shape = param.value.shape;
  node.external_value = &param.value;
  nodes_.push_back(std::move(node));
  return Var<T>(this, nodes_.size() - 1);
}

template <typename T>
Var<T> Tape<T>::Record(Shape shape, std::vector<T> value,
                       std::initializer_list<Var<T>> inputs,
                       BackwardFn backward) {
  return Record(std::move(shape), std::move(value),
                std::span<const Var<T>>(inputs.begin(), inputs.size()),
                std::move(backward));
}

template <typename T>
Var<T> Tape<T>::Record(Shape shape, std::vector<T> value,
                       std::span<const Var<T>> inputs, BackwardFn backward) {
  Node node;
  node.shape = std::move(shape);
  node.value = std::move(value);
  for (const Var<T>& in : inputs) {
    if (in.tape() != this) throw std::logic_error("operand from another tape");
    node.requires_grad |= nodes_[in.id()].requires_grad;
  }
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var<T>(this, nodes_.size() - 1);
}

template <typename T>
const T* Tape<T>::value(size_t id) const {
  const Node& n = nodes_[id];
  return n.external_value != nullptr ? n.external_value->data.data()
                                   : n.value.data();
}

template <typename T>
T* Tape<T>::grad(size_t id) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return nullptr;
  if (n.external_grad != nullptr) return n.external_grad->data.data();
  return n.grad.empty() ? nullptr : n.grad.data();
}

template <typename T>
void Tape<T>::Backward(Var<T> loss) {
  if (loss.tape() != this) throw std::logic_error("loss from another tape");
  if (NumElements(nodes_[loss.id()].shape) != 1) {
    throw ShapeError("backward needs a scalar loss, got shape " +
                     ShapeToString(nodes_[loss.id()].shape));
  }
  const size_t last = loss.id();
  if (!nodes_[last].requires_grad) return;
  for (size_t i = 0; i <= last; ++i) {
    Node& n = nodes_[i];
    if (n.requires_grad && n.external_grad == nullptr) {
      n.grad.assign(NumElements(n.shape), T(0));
    }
  }
  grad(last)[0] += T(1);
  for (size_t i = last + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.requires_grad && n.backward) n.backward(*this);
  }
}

// --- Operations ----------------------------------------------------------

namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

template <typename T>
void CheckSameShape(Var<T> a, Var<T> b, const char* op) {
  Require(a.shape() == b.shape(), std::string(op) + ": shape mismatch " +
                                      ShapeToString(a.shape()) + " vs " +
                                      ShapeToString(b.shape()));
}

}  // namespace

template <typename T>
Var<T> MatMul(Var<T> a, Var<T> b) {
  Require(a.shape().size() == 2 && b.shape().size() == 2,
          "matmul: operands must be rank 2");
  const size_t p = a.shape()[0], q = a.shape()[1], s = b.shape()[1];
  Require(b.shape()[0] == q, "matmul: inner dimensions disagree " +
                                 ShapeToString(a.shape()) + " x " +
                                 ShapeToString(b.shape()));
  Tape<T>& tape = *a.tape();
  const T* av = a.value().data();
  const T* bv = b.value().data();
  std::vector<T> c(p * s, T(0));
  for (size_t i = 0; i < p; ++i) {
    for (size_t k = 0; k < q; ++k) {
      const T aik = av[i * q + k];
      for (size_t j = 0; j < s; ++j) c[i * s + j] += aik * bv[k * s + j];
    }
  }
  const size_t ai = a.id(), bi = b.id();
  const size_t ci = tape.size();
  return tape.Record({p, s}, std::move(c), {a, b}, [=](Tape<T>& t) {
    const T* dc = t.grad(ci);
    const T* av = t.value(ai);
    const T* bv = t.value(bi);
    if (T* da = t.grad(ai)) {
      for (size_t i = 0; i < p; ++i)
        for (size_t k = 0; k < q; ++k) {
          T acc = 0;
          for (size_t j = 0; j < s; ++j) acc += dc[i * s + j] * bv[k * s + j];
          da[i * q + k] += acc;
        }
    }
    if (T* db = t.grad(bi)) {
      for (size_t i = 0; i < p; ++i)
        for (size_t k = 0; k < q; ++k) {
          const T aik = av[i * q + k];
          for (size_t j = 0; j < s; ++j) db[k * s + j] += aik * dc[i * s + j];
        }
    }
  });
}

template <typename T>
Var<T> Linear(Var<T> x, Var<T> weight, Var<T> bias) {
  Require(x.shape().size() == 2 && weight.shape().size() == 2,
          "linear: input and weight must be rank 2");
  const size_t n = x.shape()[0], in = x.shape()[1], out = weight.shape()[0];
  Require(weight.shape()[1] == in, "linear: weight " +
                                       ShapeToString(weight.shape()) +
                                       " does not accept input " +
                                       ShapeToString(x.shape()));
  const bool has_bias = bias.valid();
  if (has_bias) {
    Require(bias.shape() == Shape{out},
            "linear: bias shape " + ShapeToString(bias.shape()));
  }
  Tape<T>& tape = *x.tape();
  const T* xv = x.value().data();
  const T* wv = weight.value().data();
  const T* bv = has_bias ? bias.value().data() : nullptr;
  std::vector<T> y(n * out);
  for (size_t r = 0; r < n; ++r) {
    const T* xr = xv + r * in;
    for (size_t o = 0; o < out; ++o) {
      const T* wr = wv + o * in;
      T acc = bv ? bv[o] : T(0);
      for (size_t i = 0; i < in; ++i) acc += xr[i] * wr[i];
      y[r * out + o] = acc;
    }
  }
  const size_t xi = x.id(), wi = weight.id();
  const size_t bi = has_bias ? bias.id() : 0;
  const size_t yi = tape.size();
  std::vector<Var<T>> inputs{x, weight};
  if (has_bias) inputs.push_back(bias);
  return tape.Record({n, out}, std::move(y), inputs, [=](Tape<T>& t) {
    const T* dy = t.grad(yi);
    const T* xv = t.value(xi);
    const T* wv = t.value(wi);
    if (T* dx = t.grad(xi)) {
      for (size_t r = 0; r < n; ++r)
        for (size_t o = 0; o < out; ++o) {
          const T g = dy[r * out + o];
          if (g == T(0)) continue;
          const T* wr = wv + o * in;
          T* dxr = dx + r * in;
          for (size_t i = 0; i < in; ++i) dxr[i] += g * wr[i];
        }
    }
    if (T* dw = t.grad(wi)) {
      for (size_t r = 0; r < n; ++r)
        for (size_t o = 0; o < out; ++o) {
          const T g = dy[r * out + o];
          if (g == T(0)) continue;
          const T* xr = xv + r * in;
          T* dwr = dw + o * in;
          for (size_t i = 0; i < in; ++i) dwr[i] += g * xr[i];
        }
    }
    if (has_bias) {
      if (T* db = t.grad(bi)) {
        for (size_t r = 0; r < n; ++r)
          for (size_t o = 0; o < out; ++o) db[o] += dy[r * out + o];
      }
    }
  });
}

template <typename T>
Var<T> Conv1d(Var<T> input, Var<T> filter, Var<T> bias, size_t stride) {
  const Shape& is = input.shape();
  Require(is.size() == 2 || is.size() == 3, "conv1d: input must be rank 2 or 3");
  const bool batched = is.size() == 3;
  const size_t n = batched ? is[0] : 1;
  const size_t c = is[is.size() - 2];
  const size_t len = is[is.size() - 1];
  const Shape& fs = filter.shape();
  Require(fs.size() == 3 && fs[1] == c,
          "conv1d: filter " + ShapeToString(fs) + " incompatible with input " +
              ShapeToString(is));
  const size_t a = fs[0], w = fs[2];
  Require(bias.shape() == Shape{a},
          "conv1d: bias shape " + ShapeToString(bias.shape()));
  Require(stride >= 1, "conv1d: stride must be >= 1");
  Require(w >= 1 && len >= w, "conv1d: temporal length " + std::to_string(len) +
                                  " shorter than filter width " +
                                  std::to_string(w));
  const size_t out_len = (len - w) / stride + 1;

  Tape<T>& tape = *input.tape();
  const T* xv = input.value().data();
  const T* hv = filter.value().data();
  const T* bv = bias.value().data();
  std::vector<T> y(n * a * out_len);
  for (size_t b = 0; b < n; ++b) {
    const T* xb = xv + b * c * len;
    for (size_t o = 0; o < a; ++o) {
      T* yo = y.data() + (b * a + o) * out_len;
      for (size_t t = 0; t < out_len; ++t) yo[t] = bv[o];
      for (size_t ch = 0; ch < c; ++ch) {
        const T* xc = xb + ch * len;
        const T* hk = hv + (o * c + ch) * w;
        for (size_t t = 0; t < out_len; ++t) {
          const T* xt = xc + t * stride;
          T acc = 0;
          for (size_t k = 0; k < w; ++k) acc += xt[k] * hk[k];
          yo[t] += acc;
        }
      }
    }
  }
  Shape out_shape = batched ? Shape{n, a, out_len} : Shape{a, out_len};
  const size_t xi = input.id(), hi = filter.id(), bi = bias.id();
  const size_t yi = tape.size();
  return tape.Record(
      std::move(out_shape), std::move(y), {input, filter, bias},
      [=](Tape<T>& tp) {
        const T* dy = tp.grad(yi);
        const T* xv = tp.value(xi);
        const T* hv = tp.value(hi);
        T* dx = tp.grad(xi);
        T* dh = tp.grad(hi);
        T* db = tp.grad(bi);
        for (size_t b = 0; b < n; ++b) {
          const T* xb = xv + b * c * len;
          for (size_t o = 0; o < a; ++o) {
            const T* dyo = dy + (b * a + o) * out_len;
            if (db) {
              for (size_t t = 0; t < out_len; ++t) db[o] += dyo[t];
            }
            for (size_t ch = 0; ch < c; ++ch) {
              const size_t base = (o * c + ch) * w;
              for (size_t t = 0; t < out_len; ++t) {
                const T g = dyo[t];
                if (g == T(0)) continue;
                const size_t off = ch * len + t * stride;
                for (size_t k = 0; k < w; ++k) {
                  if (dh) dh[base + k] += g * xb[off + k];
                  if (dx) dx[b * c * len + off + k] += g * hv[base + k];
                }
              }
            }
          }
        }
      });
}

template <typename T>
Var<T> MaxPoolOverTime(Var<T> input) {
  const Shape& is = input.shape();
  Require(!is.empty() && is.back() >= 1,
          "maxpool: empty temporal axis in shape " + ShapeToString(is));
  const size_t len = is.back();
  const size_t rows = NumElements(is) / len;
  Shape out_shape(is.begin(), is.end() - 1);
  Tape<T>& tape = *input.tape();
  const T* xv = input.value().data();
  std::vector<T> y(rows);
  std::vector<size_t> argmax(rows);
  for (size_t r = 0; r < rows; ++r) {
    const T* xr = xv + r * len;
    size_t best = 0;
    for (size_t t = 1; t < len; ++t) {
      if (xr[t] > xr[best]) best = t;
    }
    argmax[r] = r * len + best;
    y[r] = xr[best];
  }
  const size_t xi = input.id();
  const size_t yi = tape.size();
  return tape.Record(std::move(out_shape), std::move(y), {input},
                     [=, argmax = std::move(argmax)](Tape<T>& t) {
                       T* dx = t.grad(xi);
                       if (!dx) return;
                       const T* dy = t.grad(yi);
                       for (size_t r = 0; r < rows; ++r) dx[argmax[r]] += dy[r];
                     });
}

namespace {

// Elementwise op whose derivative is expressed through input x and output y.
template <typename T, typename Fwd, typename Deriv>
Var<T> Pointwise(Var<T> x, Fwd fwd, Deriv deriv) {
  Tape<T>& tape = *x.tape();
  const size_t n = x.size();
  const T* xv = x.value().data();
  std::vector<T> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = fwd(xv[i]);
  const size_t xi = x.id();
  const size_t yi = tape.size();
  return tape.Record(x.shape(), std::move(out), {x}, [=](Tape<T>& t) {
    T* dx = t.grad(xi);
    if (!dx) return;
    const T* dy = t.grad(yi);
    const T* xv = t.value(xi);
    const T* yv = t.value(yi);
    for (size_t i = 0; i < n; ++i) dx[i] += dy[i] * deriv(xv[i], yv[i]);
  });
}

template <typename T>
T SigmoidScalar(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

}  // namespace

template <typename T>
Var<T> Relu(Var<T> x) {
  return Pointwise<T>(
      x, [](T v) { return v > T(0) ? v : T(0); },
      [](T v, T) { return v > T(0) ? T(1) : T(0); });
}

template <typename T>
Var<T> Tanh(Var<T> x) {
  return Pointwise<T>(
      x, [](T v) { return std::tanh(v); }, [](T, T y) { return T(1) - y * y; });
}

template <typename T>
Var<T> Sigmoid(Var<T> x) {
  return Pointwise<T>(
      x, [](T v) { return SigmoidScalar(v); },
      [](T, T y) { return y * (T(1) - y); });
}

template <typename T>
Var<T> Activate(Var<T> x, Activation a) {
  switch (a) {
    case Activation::kRelu:
      return Relu(x);
    case Activation::kTanh:
      return Tanh(x);
    case Activation::kSigmoid:
      return Sigmoid(x);
    case Activation::kLinear:
      return x;
  }
  return x;
}

template <typename T>
Var<T> Scale(Var<T> x, T alpha) {
  return Pointwise<T>(
      x, [alpha](T v) { return alpha * v; }, [alpha](T, T) { return alpha; });
}

namespace {

template <typename T, typename Fwd, typename DA, typename DB>
Var<T> Binary(Var<T> a, Var<T> b, const char* name, Fwd fwd, DA da_fn,
              DB db_fn) {
  CheckSameShape(a, b, name);
  Tape<T>& tape = *a.tape();
  const size_t n = a.size();
  const T* av = a.value().data();
  const T* bv = b.value().data();
  std::vector<T> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = fwd(av[i], bv[i]);
  const size_t ai = a.id(), bi = b.id();
  const size_t yi = tape.size();
  return tape.Record(a.shape(), std::move(out), {a, b}, [=](Tape<T>& t) {
    const T* dy = t.grad(yi);
    const T* av = t.value(ai);
    const T* bv = t.value(bi);
    if (T* da = t.grad(ai)) {
      for (size_t i = 0; i < n; ++i) da[i] += dy[i] * da_fn(av[i], bv[i]);
    }
    if (T* db = t.grad(bi)) {
      for (size_t i = 0; i < n; ++i) db[i] += dy[i] * db_fn(av[i], bv[i]);
    }
  });
}

}  // namespace

template <typename T>
Var<T> Add(Var<T> a, Var<T> b) {
  return Binary<T>(
      a, b, "add", [](T x, T y) { return x + y; }, [](T, T) { return T(1); },
      [](T, T) { return T(1); });
}

template <typename T>
Var<T> Sub(Var<T> a, Var<T> b) {
  return Binary<T>(
      a, b, "sub", [](T x, T y) { return x - y; }, [](T, T) { return T(1); },
      [](T, T) { return T(-1); });
}

template <typename T>
Var<T> Mul(Var<T> a, Var<T> b) {
  return Binary<T>(
      a, b, "mul", [](T x, T y) { return x * y; }, [](T, T y) { return y; },
      [](T x, T) { return x; });
}

template <typename T>
Var<T> Concat(std::span<const Var<T>> parts) {
  Require(!parts.empty(), "concat: no operands");
  const Shape& first = parts[0].shape();
  Require(!first.empty(), "concat: operands must have rank >= 1");
  Shape lead(first.begin(), first.end() - 1);
  const size_t outer = NumElements(lead);
  std::vector<size_t> widths;
  size_t total = 0;
  for (const Var<T>& p : parts) {
    const Shape& s = p.shape();
    Require(s.size() == first.size() &&
                std::equal(lead.begin(), lead.end(), s.begin()),
            "concat: shape " + ShapeToString(s) + " disagrees with " +
                ShapeToString(first) + " off the last axis");
    widths.push_back(s.back());
    total += s.back();
  }
  Tape<T>& tape = *parts[0].tape();
  std::vector<T> out(outer * total);
  std::vector<size_t> ids;
  size_t offset = 0;
  for (size_t k = 0; k < parts.size(); ++k) {
    const T* pv = parts[k].value().data();
    for (size_t r = 0; r < outer; ++r) {
      std::copy(pv + r * widths[k], pv + (r + 1) * widths[k],
                out.begin() + r * total + offset);
    }
    offset += widths[k];
    ids.push_back(parts[k].id());
  }
  Shape out_shape = lead;
  out_shape.push_back(total);
  const size_t yi = tape.size();
  return tape.Record(std::move(out_shape), std::move(out), parts,
                     [=, ids = std::move(ids), widths = std::move(widths)](
                         Tape<T>& t) {
                       const T* dy = t.grad(yi);
                       size_t offset = 0;
                       for (size_t k = 0; k < ids.size(); ++k) {
                         if (T* dp = t.grad(ids[k])) {
                           for (size_t r = 0; r < outer; ++r) {
                             const T* src = dy + r * total + offset;
                             T* dst = dp + r * widths[k];
                             for (size_t i = 0; i < widths[k]; ++i)
                               dst[i] += src[i];
                           }
                         }
                         offset += widths[k];
                       }
                     });
}

template <typename T>
Var<T> SliceRows(Var<T> x, size_t begin, size_t end) {
  Require(x.shape().size() == 2, "slice_rows: input must be rank 2");
  const size_t rows = x.shape()[0], cols = x.shape()[1];
  Require(begin <= end && end <= rows, "slice_rows: range out of bounds");
  Tape<T>& tape = *x.tape();
  const T* xv = x.value().data();
  std::vector<T> out(xv + begin * cols, xv + end * cols);
  const size_t xi = x.id();
  const size_t yi = tape.size();
  return tape.Record({end - begin, cols}, std::move(out), {x},
                     [=](Tape<T>& t) {
                       T* dx = t.grad(xi);
                       if (!dx) return;
                       const T* dy = t.grad(yi);
                       const size_t n = (end - begin) * cols;
                       T* dst = dx + begin * cols;
                       for (size_t i = 0; i < n; ++i) dst[i] += dy[i];
                     });
}

template <typename T>
Var<T> Reshape(Var<T> x, Shape shape) {
  Require(NumElements(shape) == x.size(),
          "reshape: " + ShapeToString(x.shape()) + " to " +
              ShapeToString(shape));
  Tape<T>& tape = *x.tape();
  auto v = x.value();
  const size_t xi = x.id();
  const size_t yi = tape.size();
  const size_t n = x.size();
  return tape.Record(std::move(shape), std::vector<T>(v.begin(), v.end()), {x},
                     [=](Tape<T>& t) {
                       T* dx = t.grad(xi);
                       if (!dx) return;
                       const T* dy = t.grad(yi);
                       for (size_t i = 0; i < n; ++i) dx[i] += dy[i];
                     });
}

template <typename T>
Var<T> Sum(Var<T> x) {
  Tape<T>& tape = *x.tape();
  T acc = 0;
  for (T v : x.value()) acc += v;
  const size_t xi = x.id();
  const size_t yi = tape.size();
  const size_t n = x.size();
  return tape.Record({1}, {acc}, {x}, [=](Tape<T>& t) {
    T* dx = t.grad(xi);
    if (!dx) return;
    const T g = t.grad(yi)[0];
    for (size_t i = 0; i < n; ++i) dx[i] += g;
  });
}

template <typename T>
Var<T> EmbeddingLookup(Var<T> table, std::span<const int32_t> indices,
                       size_t n, size_t len, int32_t frozen_id) {
  Require(table.shape().size() == 2, "embedding: table must be rank 2");
  const size_t d = table.shape()[0], vocab = table.shape()[1];
  Require(indices.size() == n * len,
          "embedding: expected " + std::to_string(n * len) + " indices, got " +
              std::to_string(indices.size()));
  for (int32_t id : indices) {
    if (id < 0 || static_cast<size_t>(id) >= vocab) {
      throw std::out_of_range("embedding: index " + std::to_string(id) +
                              " outside vocabulary of size " +
                              std::to_string(vocab));
    }
  }
  Tape<T>& tape = *table.tape();
  const T* q = table.value().data();
  std::vector<T> out(n * d * len);
  for (size_t b = 0; b < n; ++b) {
    for (size_t t = 0; t < len; ++t) {
      const size_t col = static_cast<size_t>(indices[b * len + t]);
      for (size_t j = 0; j < d; ++j) {
        out[(b * d + j) * len + t] = q[j * vocab + col];
      }
    }
  }
  const size_t qi = table.id();
  const size_t yi = tape.size();
  return tape.Record(
      {n, d, len}, std::move(out), {table},
      [=, idx = std::vector<int32_t>(indices.begin(), indices.end())](
          Tape<T>& t) {
        T* dq = t.grad(qi);
        if (!dq) return;
        const T* dy = t.grad(yi);
        for (size_t b = 0; b < n; ++b) {
          for (size_t tt = 0; tt < len; ++tt) {
            const int32_t col = idx[b * len + tt];
            if (col == frozen_id) continue;
            for (size_t j = 0; j < d; ++j) {
              dq[j * vocab + col] += dy[(b * d + j) * len + tt];
            }
          }
        }
      });
}

template <typename T>
std::vector<T> Softmax(std::span<const T> logits, size_t rows, size_t cols) {
  if (logits.size() != rows * cols) throw ShapeError("softmax: size mismatch");
  std::vector<T> p(logits.size());
  for (size_t r = 0; r < rows; ++r) {
    const T* z = logits.data() + r * cols;
    const T mx = *std::max_element(z, z + cols);
    T sum = 0;
    for (size_t k = 0; k < cols; ++k) {
      p[r * cols + k] = std::exp(z[k] - mx);
      sum += p[r * cols + k];
    }
    for (size_t k = 0; k < cols; ++k) p[r * cols + k] /= sum;
  }
  return p;
}

template <typename T>
Var<T> SoftmaxCrossEntropy(Var<T> logits, std::span<const int> labels) {
  Require(logits.shape().size() == 2, "cross_entropy: logits must be rank 2");
  const size_t rows = logits.shape()[0], cols = logits.shape()[1];
  Require(labels.size() == rows, "cross_entropy: " + std::to_string(rows) +
                                     " rows but " +
                                     std::to_string(labels.size()) + " labels");
  Require(rows > 0, "cross_entropy: empty batch");
  for (int y : labels) {
    if (y < 0 || static_cast<size_t>(y) >= cols) {
      throw std::out_of_range("cross_entropy: label " + std::to_string(y) +
                              " outside [0, " + std::to_string(cols) + ")");
    }
  }
  Tape<T>& tape = *logits.tape();
  const T* z = logits.value().data();
  std::vector<T> probs(rows * cols);
  T loss = 0;
  for (size_t r = 0; r < rows; ++r) {
    const T* zr = z + r * cols;
    const T mx = *std::max_element(zr, zr + cols);
    T sum = 0;
    for (size_t k = 0; k < cols; ++k) sum += std::exp(zr[k] - mx);
    const T log_norm = mx + std::log(sum);
    for (size_t k = 0; k < cols; ++k) {
      probs[r * cols + k] = std::exp(zr[k] - log_norm);
    }
    loss += log_norm - zr[labels[r]];
  }
  loss /= static_cast<T>(rows);
  const size_t zi = logits.id();
  const size_t yi = tape.size();
  return tape.Record(
      {1}, {loss}, {logits},
      [=, probs = std::move(probs),
       labels = std::vector<int>(labels.begin(), labels.end())](Tape<T>& t) {
        T* dz = t.grad(zi);
        if (!dz) return;
        const T g = t.grad(yi)[0] / static_cast<T>(rows);
        for (size_t r = 0; r < rows; ++r) {
          for (size_t k = 0; k < cols; ++k) {
            const T onehot = static_cast<int>(k) == labels[r] ? T(1) : T(0);
            dz[r * cols + k] += g * (probs[r * cols + k] - onehot);
          }
        }
      });
}

#define RADNET_INSTANTIATE(T)                                                 \
  template struct Tensor<T>;                                                  \
  template struct Parameter<T>;                                               \
  template class Tape<T>;                                                     \
  template Var<T> MatMul(Var<T>, Var<T>);                                     \
  template Var<T> Linear(Var<T>, Var<T>, Var<T>);                             \
  template Var<T> Conv1d(Var<T>, Var<T>, Var<T>, size_t);                     \
  template Var<T> MaxPoolOverTime(Var<T>);                                    \
  template Var<T> Relu(Var<T>);                                               \
  template Var<T> Tanh(Var<T>);                                               \
  template Var<T> Sigmoid(Var<T>);                                            \
  template Var<T> Activate(Var<T>, Activation);                               \
  template Var<T> Add(Var<T>, Var<T>);                                        \
  template Var<T> Sub(Var<T>, Var<T>);                                        \
  template Var<T> Mul(Var<T>, Var<T>);                                        \
  template Var<T> Scale(Var<T>, T);                                           \
  template Var<T> Concat(std::span<const Var<T>>);                            \
  template Var<T> SliceRows(Var<T>, size_t, size_t);                          \
  template Var<T> Reshape(Var<T>, Shape);                                     \
  template Var<T> Sum(Var<T>);                                                \
  template Var<T> EmbeddingLookup(Var<T>, std::span<const int32_t>, size_t,   \
                                  size_t, int32_t);                           \
  template Var<T> SoftmaxCrossEntropy(Var<T>, std::span<const int>);          \
  template std::vector<T> Softmax(std::span<const T>, size_t, size_t);

RADNET_INSTANTIATE(float)
RADNET_INSTANTIATE(double)

#undef RADNET_INSTANTIATE

}  // namespace radnet::ad
