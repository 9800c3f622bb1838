// Copyright 2026 the decolab developers
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

// Runs the full cross-module criterion battery and prints one line per
// criterion.  Exits nonzero if any criterion fails.

#include <cstdio>
#include <cstdlib>

#include "core/suite.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20260819ULL;
  if (argc > 1) {
    seed = std::strtoull(argv[1], nullptr, 10);
  }

  const auto results = decolab::run_reference_suite(seed);
  int failures = 0;
  for (const auto& result : results) {
    std::printf("[%s] %-22s %s (%s)\n", result.pass ? "PASS" : "FAIL",
                result.id.c_str(), result.name.c_str(),
                result.details.c_str());
    if (!result.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(results.size()) - failures, results.size());
  return failures == 0 ? 0 : 1;
}
