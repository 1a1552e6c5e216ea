// Copyright 2026 The hhlsim Authors
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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hhlsim::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kInvalidInput = 2,
    kZeroProbability = 3,
};

/// Parses argv and dispatches. Diagnostics go to `err`, reports to the --out
/// file or `out`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct SelftestCheck {
    std::string name;
    bool passed;
    std::string detail;
};

/// Embedded invariant suite. `theta_big_override` corrupts the compiled
/// rotation angle so the suite's negative control can be exercised.
std::vector<SelftestCheck> run_selftest(std::optional<double> theta_big_override = std::nullopt);

}  // namespace hhlsim::cli
