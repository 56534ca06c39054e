#pragma once

#include <string>
#include <utility>

#include "cyclodetect/types.hpp"

namespace cyclodetect {

// Binary sample-file layout:
//   bytes 0..7   magic "CYCLOIQ1"
//   bytes 8..23  L, P, N, M as little-endian uint32
//   bytes 24..27 sample format tag (little-endian uint32): 64 = complex64
//                (float32 components), 128 = complex128 (float64 components)
//   payload      2 * L * M * N * P components, interleaved re/im,
//                antenna-major within a time sample, time-major overall
struct IqFileHeader {
    SignalDims dims;
    enum class Format : std::uint32_t { Complex64 = 64, Complex128 = 128 };
    Format format = Format::Complex128;

    long payload_bytes() const;
};

void write_iq_file(const std::string& path, const CMatrix& samples,
                   const SignalDims& dims,
                   IqFileHeader::Format format = IqFileHeader::Format::Complex128);

// Throws FileFormatError on bad magic, bad tag, or payload size mismatch
// (truncated and oversized files both fail).
std::pair<IqFileHeader, CMatrix> read_iq_file(const std::string& path);

// CSV interchange: one row per time sample, 2L columns (re,im per antenna).
void write_iq_csv(const std::string& path, const CMatrix& samples);
CMatrix read_iq_csv(const std::string& path);

} // namespace cyclodetect
