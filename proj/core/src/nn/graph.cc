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

#include "visact/nn/graph.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "visact/common/error.h"

namespace visact::nn {
namespace {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapM = Eigen::Map<Mat>;
using CMapM = Eigen::Map<const Mat>;

MapM map(Tensor& t) { return MapM(t.data(), t.rows(), t.cols()); }
CMapM map(const Tensor& t) { return CMapM(t.data(), t.rows(), t.cols()); }

std::string dims(const Tensor& t) { return std::to_string(t.rows()) + "x" + std::to_string(t.cols()); }

Graph& same_graph(Var a, Var b) {
  if (!a.valid() || !b.valid() || a.graph != b.graph) throw InvalidArgument("vars belong to different graphs");
  return *a.graph;
}

Tensor checked(Tensor t, const char* op) {
  if (!t.all_finite()) throw NonFiniteValue(std::string("non-finite value produced by ") + op);
  return t;
}

}  // namespace

const Tensor& Var::value() const {
  if (!valid()) throw InvalidArgument("use of an empty Var");
  return graph->value(*this);
}

Graph::Graph(ParameterStore* store, bool training, uint64_t dropout_seed)
    : store_(store), training_(training), rng_(dropout_seed) {}

Graph::Graph(const ParameterStore& store)
    : store_(const_cast<ParameterStore*>(&store)), training_(false), grad_enabled_(false), read_only_(true), rng_(0) {}

Var Graph::push(Tensor value, bool requires_grad, std::function<void(Graph&)> backward) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size() - 1)};
}

Var Graph::constant(Tensor value) {
  if (!value.all_finite()) throw NonFiniteValue("non-finite constant");
  return push(std::move(value), false, nullptr);
}

Var Graph::param(ParamId id) {
  if (!store_) throw InvalidArgument("graph has no parameter store");
  auto it = param_nodes_.find(id);
  if (it != param_nodes_.end()) return Var{this, it->second};
  Var v = push(Tensor(), grad_enabled_, nullptr);
  nodes_.back().ref = &store_->at(id).value;
  nodes_.back().param = grad_enabled_ ? id : -1;
  param_nodes_.emplace(id, v.id);
  return v;
}

Tensor& Graph::grad_buffer(Var v) {
  Node& n = nodes_[static_cast<size_t>(v.id)];
  const Tensor& v0 = n.val();
  if (n.grad.size() != v0.size() || !n.grad.same_shape(v0)) n.grad = Tensor(v0.rows(), v0.cols());
  return n.grad;
}

Tensor Graph::grad(Var v) const {
  const Node& n = nodes_.at(static_cast<size_t>(v.id));
  const Tensor& v0 = n.val();
  if (n.grad.same_shape(v0) && n.grad.size() == v0.size()) return n.grad;
  return Tensor(v0.rows(), v0.cols());
}

void Graph::backward(Var loss) {
  if (loss.graph != this) throw InvalidArgument("loss belongs to another graph");
  if (backward_done_) throw GraphReuse("backward() already ran on this graph; record a fresh forward pass");
  const Tensor& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1) throw ShapeMismatch("backward() needs a scalar loss, got " + dims(lv));
  backward_done_ = true;
  if (!nodes_[static_cast<size_t>(loss.id)].requires_grad) return;
  grad_buffer(loss)(0, 0) = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[static_cast<size_t>(i)];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.backward) {
      n.backward(*this);
    } else if (n.param >= 0) {
      Tensor& g = store_->at(n.param).grad;
      map(g) += map(n.grad);
    }
  }
}

Var matmul(Var a, Var b) {
  Graph& g = same_graph(a, b);
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (A.cols() != B.rows()) throw ShapeMismatch("matmul " + dims(A) + " . " + dims(B));
  Tensor out(A.rows(), B.cols());
  map(out).noalias() = map(A) * map(B);
  const bool rg = g.requires_grad(a) || g.requires_grad(b);
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(std::move(out), "matmul"), rg, [a, b, out_id](Graph& gr) {
    const Tensor& G = gr.node(out_id).grad;
    if (gr.requires_grad(a)) map(gr.grad_buffer(a)).noalias() += map(G) * map(b.value()).transpose();
    if (gr.requires_grad(b)) map(gr.grad_buffer(b)).noalias() += map(a.value()).transpose() * map(G);
  });
}

Var add(Var a, Var b) {
  Graph& g = same_graph(a, b);
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (!A.same_shape(B)) throw ShapeMismatch("add " + dims(A) + " + " + dims(B));
  Tensor out = A;
  map(out) += map(B);
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(std::move(out), "add"), g.requires_grad(a) || g.requires_grad(b), [a, b, out_id](Graph& gr) {
    const Tensor& G = gr.node(out_id).grad;
    if (gr.requires_grad(a)) map(gr.grad_buffer(a)) += map(G);
    if (gr.requires_grad(b)) map(gr.grad_buffer(b)) += map(G);
  });
}

Var add_row(Var a, Var row) {
  Graph& g = same_graph(a, row);
  const Tensor& A = a.value();
  const Tensor& R = row.value();
  if (R.rows() != 1 || R.cols() != A.cols()) throw ShapeMismatch("add_row " + dims(A) + " + " + dims(R));
  Tensor out = A;
  map(out).rowwise() += map(R).row(0);
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(std::move(out), "add_row"), g.requires_grad(a) || g.requires_grad(row),
                [a, row, out_id](Graph& gr) {
                  const Tensor& G = gr.node(out_id).grad;
                  if (gr.requires_grad(a)) map(gr.grad_buffer(a)) += map(G);
                  if (gr.requires_grad(row)) map(gr.grad_buffer(row)) += map(G).colwise().sum();
                });
}

Var mul(Var a, Var b) {
  Graph& g = same_graph(a, b);
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (!A.same_shape(B)) throw ShapeMismatch("mul " + dims(A) + " * " + dims(B));
  Tensor out = A;
  map(out).array() *= map(B).array();
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(std::move(out), "mul"), g.requires_grad(a) || g.requires_grad(b), [a, b, out_id](Graph& gr) {
    const Tensor& G = gr.node(out_id).grad;
    if (gr.requires_grad(a)) map(gr.grad_buffer(a)).array() += map(G).array() * map(b.value()).array();
    if (gr.requires_grad(b)) map(gr.grad_buffer(b)).array() += map(G).array() * map(a.value()).array();
  });
}

Var scale(Var a, double s) {
  Graph& g = *a.graph;
  Tensor out = a.value();
  map(out) *= s;
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(std::move(out), "scale"), g.requires_grad(a), [a, s, out_id](Graph& gr) {
    map(gr.grad_buffer(a)) += s * map(gr.node(out_id).grad);
  });
}

Var gelu(Var a) {
  Graph& g = *a.graph;
  constexpr double kC = 0.7978845608028654;  // sqrt(2 / pi)
  constexpr double kA = 0.044715;
  const Tensor& X = a.value();
  Tensor out(X.rows(), X.cols());
  for (size_t i = 0; i < X.size(); ++i) {
    const double x = X.data()[i];
    out.data()[i] = 0.5 * x * (1.0 + std::tanh(kC * (x + kA * x * x * x)));
  }
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(std::move(out), "gelu"), g.requires_grad(a), [a, out_id](Graph& gr) {
    const Tensor& G = gr.node(out_id).grad;
    const Tensor& Xv = a.value();
    Tensor& ga = gr.grad_buffer(a);
    for (size_t i = 0; i < Xv.size(); ++i) {
      const double x = Xv.data()[i];
      const double t = std::tanh(kC * (x + kA * x * x * x));
      const double d = 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * kC * (1.0 + 3.0 * kA * x * x);
      ga.data()[i] += G.data()[i] * d;
    }
  });
}

Var layer_norm(Var x, Var gain, Var bias, double eps) {
  Graph& g = same_graph(x, gain);
  same_graph(x, bias);
  const Tensor& X = x.value();
  const int n = X.rows();
  const int m = X.cols();
  if (gain.value().rows() != 1 || gain.value().cols() != m || !bias.value().same_shape(gain.value())) {
    throw ShapeMismatch("layer_norm gain/bias must be 1x" + std::to_string(m));
  }
  Tensor xhat(n, m);
  std::vector<double> inv_std(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto r = X.row(i);
    double mu = 0.0;
    for (double v : r) mu += v;
    mu /= m;
    double var = 0.0;
    for (double v : r) var += (v - mu) * (v - mu);
    var /= m;
    const double is = 1.0 / std::sqrt(var + eps);
    inv_std[static_cast<size_t>(i)] = is;
    for (int j = 0; j < m; ++j) xhat(i, j) = (r[static_cast<size_t>(j)] - mu) * is;
  }
  Tensor out = xhat;
  map(out).array().rowwise() *= map(gain.value()).row(0).array();
  map(out).rowwise() += map(bias.value()).row(0);
  const int out_id = static_cast<int>(g.num_nodes());
  const bool rg = g.requires_grad(x) || g.requires_grad(gain) || g.requires_grad(bias);
  return g.push(checked(std::move(out), "layer_norm"), rg,
                [x, gain, bias, xhat = std::move(xhat), inv_std = std::move(inv_std), out_id](Graph& gr) {
                  const Tensor& G = gr.node(out_id).grad;
                  const int rows = G.rows();
                  const int cols = G.cols();
                  if (gr.requires_grad(gain)) {
                    map(gr.grad_buffer(gain)) += (map(G).array() * map(xhat).array()).matrix().colwise().sum();
                  }
                  if (gr.requires_grad(bias)) map(gr.grad_buffer(bias)) += map(G).colwise().sum();
                  if (!gr.requires_grad(x)) return;
                  Tensor& gx = gr.grad_buffer(x);
                  const Tensor& gv = gain.value();
                  std::vector<double> dxhat(static_cast<size_t>(cols));
                  for (int i = 0; i < rows; ++i) {
                    double mean_d = 0.0;
                    double mean_dx = 0.0;
                    for (int j = 0; j < cols; ++j) {
                      const double d = G(i, j) * gv(0, j);
                      dxhat[static_cast<size_t>(j)] = d;
                      mean_d += d;
                      mean_dx += d * xhat(i, j);
                    }
                    mean_d /= cols;
                    mean_dx /= cols;
                    const double is = inv_std[static_cast<size_t>(i)];
                    for (int j = 0; j < cols; ++j) {
                      gx(i, j) += is * (dxhat[static_cast<size_t>(j)] - mean_d - xhat(i, j) * mean_dx);
                    }
                  }
                });
}

Var log_softmax(Var x) {
  Graph& g = *x.graph;
  const Tensor& X = x.value();
  Tensor out(X.rows(), X.cols());
  for (int i = 0; i < X.rows(); ++i) {
    auto r = X.row(i);
    const double mx = *std::max_element(r.begin(), r.end());
    double s = 0.0;
    for (double v : r) s += std::exp(v - mx);
    const double lse = mx + std::log(s);
    for (int j = 0; j < X.cols(); ++j) out(i, j) = r[static_cast<size_t>(j)] - lse;
  }
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(std::move(out), "log_softmax"), g.requires_grad(x), [x, out_id](Graph& gr) {
    const Tensor& G = gr.node(out_id).grad;
    const Tensor& Y = gr.node(out_id).val();
    Tensor& gx = gr.grad_buffer(x);
    for (int i = 0; i < G.rows(); ++i) {
      double s = 0.0;
      for (int j = 0; j < G.cols(); ++j) s += G(i, j);
      for (int j = 0; j < G.cols(); ++j) gx(i, j) += G(i, j) - std::exp(Y(i, j)) * s;
    }
  });
}

Var dropout(Var x, double rate) {
  Graph& g = *x.graph;
  if (!g.training() || rate <= 0.0) return x;
  if (rate >= 1.0) throw InvalidArgument("dropout rate must be below 1");
  const Tensor& X = x.value();
  Tensor mask(X.rows(), X.cols());
  const double keep = 1.0 / (1.0 - rate);
  for (double& m : mask.values()) m = g.rng().uniform() < rate ? 0.0 : keep;
  Tensor out = X;
  map(out).array() *= map(mask).array();
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(std::move(out), g.requires_grad(x), [x, mask = std::move(mask), out_id](Graph& gr) {
    map(gr.grad_buffer(x)).array() += map(gr.node(out_id).grad).array() * map(mask).array();
  });
}

Var embed(Var table, std::span<const int> ids) {
  Graph& g = *table.graph;
  const Tensor& T = table.value();
  Tensor out(static_cast<int>(ids.size()), T.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= T.rows()) {
      throw ShapeMismatch("embedding id " + std::to_string(ids[i]) + " outside table of " + std::to_string(T.rows()));
    }
    auto src = T.row(ids[i]);
    std::copy(src.begin(), src.end(), out.row(static_cast<int>(i)).begin());
  }
  std::vector<int> idv(ids.begin(), ids.end());
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(std::move(out), g.requires_grad(table), [table, idv = std::move(idv), out_id](Graph& gr) {
    const Tensor& G = gr.node(out_id).grad;
    Tensor& gt = gr.grad_buffer(table);
    for (size_t i = 0; i < idv.size(); ++i) {
      auto src = G.row(static_cast<int>(i));
      auto dst = gt.row(idv[i]);
      for (size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
    }
  });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw InvalidArgument("concat_rows of nothing");
  Graph& g = *parts[0].graph;
  const int cols = parts[0].value().cols();
  int rows = 0;
  bool rg = false;
  for (const Var& p : parts) {
    same_graph(parts[0], p);
    if (p.value().cols() != cols) throw ShapeMismatch("concat_rows with differing column counts");
    rows += p.value().rows();
    rg = rg || g.requires_grad(p);
  }
  Tensor out(rows, cols);
  int r0 = 0;
  for (const Var& p : parts) {
    const Tensor& v = p.value();
    std::copy(v.data(), v.data() + v.size(), out.data() + static_cast<size_t>(r0) * cols);
    r0 += v.rows();
  }
  std::vector<Var> pv(parts.begin(), parts.end());
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(std::move(out), rg, [pv = std::move(pv), out_id](Graph& gr) {
    const Tensor& G = gr.node(out_id).grad;
    size_t off = 0;
    for (const Var& p : pv) {
      const size_t n = p.value().size();
      if (gr.requires_grad(p)) {
        Tensor& gp = gr.grad_buffer(p);
        for (size_t i = 0; i < n; ++i) gp.data()[i] += G.data()[off + i];
      }
      off += n;
    }
  });
}

Var sum(Var a) {
  Graph& g = *a.graph;
  double s = 0.0;
  for (double v : a.value().values()) s += v;
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(Tensor::scalar(s), "sum"), g.requires_grad(a), [a, out_id](Graph& gr) {
    map(gr.grad_buffer(a)).array() += gr.node(out_id).grad(0, 0);
  });
}

Var attention(Var q, Var k, Var v, int heads, bool causal) {
  Graph& g = same_graph(q, k);
  same_graph(q, v);
  const Tensor& Q = q.value();
  const Tensor& K = k.value();
  const Tensor& V = v.value();
  const int n = Q.rows();
  const int m = K.rows();
  const int d = Q.cols();
  if (K.cols() != d || !V.same_shape(K) || heads <= 0 || d % heads != 0) {
    throw ShapeMismatch("attention q " + dims(Q) + " k " + dims(K) + " v " + dims(V) + " heads " +
                        std::to_string(heads));
  }
  if (causal && n != m) throw ShapeMismatch("causal attention needs equal query and key lengths");
  const int dh = d / heads;
  const double sc = 1.0 / std::sqrt(static_cast<double>(dh));

  std::vector<Mat> probs(static_cast<size_t>(heads));
  Tensor out(n, d);
  for (int h = 0; h < heads; ++h) {
    Mat s = sc * (map(Q).middleCols(h * dh, dh) * map(K).middleCols(h * dh, dh).transpose());
    for (int i = 0; i < n; ++i) {
      const int visible = causal ? i + 1 : m;
      const double mx = s.row(i).head(visible).maxCoeff();
      double z = 0.0;
      for (int j = 0; j < m; ++j) {
        const double e = j < visible ? std::exp(s(i, j) - mx) : 0.0;
        s(i, j) = e;
        z += e;
      }
      s.row(i) /= z;
    }
    map(out).middleCols(h * dh, dh).noalias() = s * map(V).middleCols(h * dh, dh);
    probs[static_cast<size_t>(h)] = std::move(s);
  }
  const bool rg = g.requires_grad(q) || g.requires_grad(k) || g.requires_grad(v);
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(std::move(out), "attention"), rg,
                [q, k, v, heads, dh, sc, probs = std::move(probs), out_id](Graph& gr) {
                  const Tensor& G = gr.node(out_id).grad;
                  const bool gq = gr.requires_grad(q);
                  const bool gk = gr.requires_grad(k);
                  const bool gv = gr.requires_grad(v);
                  for (int h = 0; h < heads; ++h) {
                    const Mat& P = probs[static_cast<size_t>(h)];
                    auto Gh = map(G).middleCols(h * dh, dh);
                    if (gv) map(gr.grad_buffer(v)).middleCols(h * dh, dh).noalias() += P.transpose() * Gh;
                    if (!gq && !gk) continue;
                    Mat dP = Gh * map(v.value()).middleCols(h * dh, dh).transpose();
                    Eigen::VectorXd rs = (dP.array() * P.array()).rowwise().sum();
                    Mat dS = P.array() * (dP.colwise() - rs).array();
                    if (gq) {
                      map(gr.grad_buffer(q)).middleCols(h * dh, dh).noalias() +=
                          sc * (dS * map(k.value()).middleCols(h * dh, dh));
                    }
                    if (gk) {
                      map(gr.grad_buffer(k)).middleCols(h * dh, dh).noalias() +=
                          sc * (dS.transpose() * map(q.value()).middleCols(h * dh, dh));
                    }
                  }
                });
}

Var pick_sum(Var x, std::span<const int> targets) {
  Graph& g = *x.graph;
  const Tensor& X = x.value();
  if (static_cast<int>(targets.size()) > X.rows()) {
    throw ShapeMismatch("pick_sum: " + std::to_string(targets.size()) + " targets for " + dims(X));
  }
  double s = 0.0;
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0) continue;
    if (targets[i] >= X.cols()) throw ShapeMismatch("pick_sum: target id outside row width");
    s += X(static_cast<int>(i), targets[i]);
  }
  std::vector<int> tv(targets.begin(), targets.end());
  const int out_id = static_cast<int>(g.num_nodes());
  return g.push(checked(Tensor::scalar(s), "pick_sum"), g.requires_grad(x), [x, tv = std::move(tv), out_id](Graph& gr) {
    const double G = gr.node(out_id).grad(0, 0);
    Tensor& gx = gr.grad_buffer(x);
    for (size_t i = 0; i < tv.size(); ++i) {
      if (tv[i] >= 0) gx(static_cast<int>(i), tv[i]) += G;
    }
  });
}

}  // namespace visact::nn
