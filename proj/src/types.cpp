#include "cyclodetect/types.hpp"

#include "cyclodetect/errors.hpp"

namespace cyclodetect {

const char* to_string(NoiseStructureCase c)
{
    switch (c) {
    case NoiseStructureCase::ColoredCorrelated: return "colored-correlated";
    case NoiseStructureCase::ColoredUncorrelated: return "colored-uncorrelated";
    case NoiseStructureCase::WhiteCorrelated: return "white-correlated";
    case NoiseStructureCase::WhiteUncorrelated: return "white-uncorrelated";
    }
    return "?";
}

bool is_white(NoiseStructureCase c)
{
    return c == NoiseStructureCase::WhiteCorrelated
           || c == NoiseStructureCase::WhiteUncorrelated;
}

bool is_uncorrelated(NoiseStructureCase c)
{
    return c == NoiseStructureCase::ColoredUncorrelated
           || c == NoiseStructureCase::WhiteUncorrelated;
}

void SignalDims::validate() const
{
    if (n_antennas <= 0 || cycle_period <= 0 || n_blocks <= 0
        || n_snapshots <= 0) {
        throw InvalidSpec("SignalDims: all dimensions must be positive");
    }
}

} // namespace cyclodetect
