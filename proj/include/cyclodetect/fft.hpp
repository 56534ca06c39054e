#pragma once

#include "cyclodetect/types.hpp"

namespace cyclodetect {

// In-place unitary forward DFT (negative exponent, scaled by 1/sqrt(n)).
// Arbitrary n; plans are cached per length and shared across threads.
void unitary_forward_fft_inplace(cdouble* data, int n);

} // namespace cyclodetect
