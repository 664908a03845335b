// Copyright 2026 The reachcert Authors
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

#include <stdexcept>
#include <string>
#include <vector>

namespace reachcert {

// Thrown by the synthesis routines when the requested target is provably
// outside the reachable set of the given drift.  Carries the majorization
// slack vector that witnessed the rejection (empty when rejection happened
// for a structural reason).
class not_reachable_error : public std::runtime_error {
 public:
  explicit not_reachable_error(const std::string& what,
                               std::vector<double> slacks = {})
      : std::runtime_error(what), slacks_(std::move(slacks)) {}

  const std::vector<double>& slacks() const { return slacks_; }

 private:
  std::vector<double> slacks_;
};

}  // namespace reachcert
