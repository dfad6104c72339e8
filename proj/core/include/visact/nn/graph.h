// Copyright 2026 The visact Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "visact/common/rng.h"
#include "visact/nn/params.h"
#include "visact/nn/tensor.h"

namespace visact::nn {

class Graph;

// Handle to a node on a Graph tape.
struct Var {
  Graph* graph = nullptr;
  int id = -1;

  const Tensor& value() const;
  bool valid() const { return graph != nullptr && id >= 0; }
};

// Reverse-mode tape. Every op appends a node holding its value and a
// closure that pushes the node's gradient to its inputs. Parameter leaves
// route their gradient into the ParameterStore on backward().
class Graph {
 public:
  explicit Graph(ParameterStore* store = nullptr, bool training = false, uint64_t dropout_seed = 0);
  // Inference-only graph: parameters are read but never receive gradients.
  explicit Graph(const ParameterStore& store);
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Tensor value);
  Var param(ParamId id);

  // Parameters read through this graph are treated as constants.
  void set_grad_enabled(bool on) { grad_enabled_ = on && !read_only_; }
  bool grad_enabled() const { return grad_enabled_; }
  bool training() const { return training_; }
  Rng& rng() { return rng_; }

  const Tensor& value(Var v) const { return nodes_.at(static_cast<size_t>(v.id)).val(); }
  // Gradient of the last backward() with respect to `v`; zeros if unreached.
  Tensor grad(Var v) const;

  void backward(Var loss);

  size_t num_nodes() const { return nodes_.size(); }

  // Op plumbing.
  struct Node {
    Tensor value;
    const Tensor* ref = nullptr;  // parameter leaves read the store directly
    Tensor grad;
    bool requires_grad = false;
    std::function<void(Graph&)> backward;
    ParamId param = -1;

    const Tensor& val() const { return ref ? *ref : value; }
  };
  Var push(Tensor value, bool requires_grad, std::function<void(Graph&)> backward);
  Node& node(int id) { return nodes_[static_cast<size_t>(id)]; }
  bool requires_grad(Var v) const { return nodes_[static_cast<size_t>(v.id)].requires_grad; }
  Tensor& grad_buffer(Var v);  // allocated on first use during backward

 private:
  ParameterStore* store_;
  bool training_;
  bool grad_enabled_ = true;
  bool read_only_ = false;
  bool backward_done_ = false;
  Rng rng_;
  std::vector<Node> nodes_;
  std::unordered_map<ParamId, int> param_nodes_;
};

// Elementwise and linear algebra.
Var matmul(Var a, Var b);            // [n x k] . [k x m]
Var add(Var a, Var b);               // same shape
Var add_row(Var a, Var row);         // [n x m] + broadcast [1 x m]
Var mul(Var a, Var b);               // elementwise
Var scale(Var a, double s);
Var gelu(Var a);                     // tanh approximation
Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);
Var log_softmax(Var x);              // per row
Var dropout(Var x, double rate);     // identity unless the graph is training
Var embed(Var table, std::span<const int> ids);
Var concat_rows(std::span<const Var> parts);
Var sum(Var a);                      // scalar

// Multi-head scaled dot-product attention over already projected q, k, v.
// With `causal`, query i only sees keys j <= i.
Var attention(Var q, Var k, Var v, int heads, bool causal);

// Sum over rows i with targets[i] >= 0 of x[i, targets[i]]; scalar.
Var pick_sum(Var x, std::span<const int> targets);

}  // namespace visact::nn
