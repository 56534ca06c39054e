#pragma once

#include <stdexcept>
#include <string>

namespace cyclodetect {

// A matrix that must be positive definite failed the conditioning floor
// (smallest eigenvalue <= dim * 1e-12 * largest), or a sample coherence was
// requested with fewer snapshots than the block dimension.
class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed generator or experiment description.
class InvalidSpec : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Sequence lengths disagree with what the operation requires.
class LengthMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation applied under a noise-structure case it is not defined for.
class WrongCase : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Probability argument outside (0, 1).
class InvalidProbability : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Empty sample list where at least one value is required.
class EmptyInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Unreadable or malformed sample file.
class FileFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cyclodetect
