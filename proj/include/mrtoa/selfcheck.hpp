// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace mrtoa {

struct SelfcheckOptions {
    // Test hook: deliberately corrupt the subspace row selection to verify
    // that the checks can fail.
    bool corrupt_selection = false;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Noiseless-exactness, Hankel rank, projector-idempotence and CRLB-vs-FIM
// checks; each entry carries a pass flag and a short diagnostic.
std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& opt = {});

} // namespace mrtoa
