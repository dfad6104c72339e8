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

#include "visact/nn/gradcheck.h"

#include <algorithm>
#include <cmath>

namespace visact::nn {

GradcheckResult gradcheck(ParameterStore& store, const std::function<Var(Graph&)>& loss, Rng& rng,
                          const GradcheckOptions& opts) {
  store.zero_grad();
  {
    Graph g(&store);
    g.backward(loss(g));
  }
  auto eval = [&] {
    Graph g(&store);
    g.set_grad_enabled(false);
    return loss(g).value().item();
  };

  GradcheckResult res;
  for (auto& p : store.all()) {
    const size_t n = p.value.size();
    std::vector<size_t> coords;
    if (n <= static_cast<size_t>(opts.probes_per_tensor)) {
      for (size_t i = 0; i < n; ++i) coords.push_back(i);
    } else {
      for (int i = 0; i < opts.probes_per_tensor; ++i) coords.push_back(rng.below(n));
    }
    for (size_t i : coords) {
      double& x = p.value.data()[i];
      const double x0 = x;
      x = x0 + opts.h;
      const double up = eval();
      x = x0 - opts.h;
      const double down = eval();
      x = x0;
      const double numeric = (up - down) / (2.0 * opts.h);
      const double analytic = p.grad.data()[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), opts.floor});
      const double err = std::abs(analytic - numeric) / denom;
      ++res.probes;
      if (err > res.max_rel_err || res.worst.empty()) {
        if (err >= res.max_rel_err) {
          res.max_rel_err = err;
          res.worst = p.name + "[" + std::to_string(i) + "]";
        }
      }
    }
  }
  return res;
}

}  // namespace visact::nn
