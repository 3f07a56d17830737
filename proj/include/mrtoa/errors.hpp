// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace mrtoa {

// Subspace or eigen problem too ill conditioned to trust (near-coincident
// delays, rank-deficient selections).
class degenerate_geometry_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A multiband ladder step could not resolve the integer cycle count with
// sufficient rounding margin.
class unwrap_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace mrtoa
