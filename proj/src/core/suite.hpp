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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace decolab {

/** One end-to-end correctness criterion of the library. */
struct CriterionResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string details;
};

/**
 * Run the full battery of cross-module checks: Kraus/Schur agreement,
 * perfect qubit recovery, the lopsided qutrit recovery, the d=4
 * impossibility certificate, three-route entropy agreement, entropy
 * bounds with the orthogonality equality condition, decay/commutation
 * laws, and the extremality rank bound.
 *
 * Deterministic: the same seed gives byte-identical results.
 */
std::vector<CriterionResult> run_reference_suite(std::uint64_t seed);

}  // namespace decolab
