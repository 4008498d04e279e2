// Copyright 2026 The skatemount Authors
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

#ifndef SKATEMOUNT_CHECKPOINT_HPP_
#define SKATEMOUNT_CHECKPOINT_HPP_

#include <cstdint>
#include <string>

#include "skatemount/policy.hpp"

namespace skatemount {

struct Checkpoint {
  GaussianPolicy policy;
  double learning_rate = 1.0e-3;
  int64_t iteration = 0;
  uint64_t master_seed = 0;
};

// Versioned binary container in native byte order. Parameter bytes are
// written verbatim, so save -> load -> save reproduces the file exactly.
// The write goes through a temporary file and a rename, so a crash cannot
// leave a half-written checkpoint at the target path.
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);

// Throws std::runtime_error naming the file and the defect (missing file,
// wrong magic, unsupported version, truncation, inconsistent shapes).
Checkpoint load_checkpoint(const std::string& path);

}  // namespace skatemount

#endif  // SKATEMOUNT_CHECKPOINT_HPP_
