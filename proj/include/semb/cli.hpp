// Copyright 2026 The semb Authors. All Rights Reserved.
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

// The `semb` command line: preprocess, train, eval-analogy, eval-sts,
// eval-wsd, nn and bench. Results go to `out`, everything else to `err`.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semb::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kDiverged = 3,
};

/// `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

int dispatch(int argc, const char* const* argv);

}  // namespace semb::cli
