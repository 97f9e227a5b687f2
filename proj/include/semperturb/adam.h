// Copyright 2026 The semperturb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMPERTURB_ADAM_H_
#define SEMPERTURB_ADAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace semperturb {

struct AdamOptions {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment buffers for one parameter block.
class AdamState {
 public:
  AdamState(std::size_t size, AdamOptions options)
      : options_(options), m_(size, 0.0), v_(size, 0.0) {}

  // param -= lr * m_hat / (sqrt(v_hat) + eps), with bias-corrected moments.
  void step(std::span<double> param, std::span<const double> grad);

  std::int64_t steps() const { return t_; }

 private:
  AdamOptions options_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t t_ = 0;
};

}  // namespace semperturb

#endif  // SEMPERTURB_ADAM_H_
