// Copyright 2026 The FAS Authors
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

#include <string>
#include <vector>

namespace fas {

struct KatResult {
  std::string name;
  std::string expected;
  std::string actual;
  bool passed = false;
};

// Hand-computed regression values over the toy parameter sets.
std::vector<KatResult> run_known_answer_tests();

}  // namespace fas
