// Copyright 2026 The cvsn Authors
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

#include <functional>
#include <string>
#include <vector>

namespace cvsn::cli {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // worst deviation and the tolerance it was held to
  double seconds = 0.0;
};

/// The ten acceptance checks, in order. Each check has its own runtime
/// budget; exceeding it is a failure.
std::vector<CheckResult> run_acceptance_suite(
    const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace cvsn::cli
