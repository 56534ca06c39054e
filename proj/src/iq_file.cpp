#include "cyclodetect/iq_file.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "cyclodetect/errors.hpp"

namespace cyclodetect {

namespace {

constexpr char kMagic[8] = {'C', 'Y', 'C', 'L', 'O', 'I', 'Q', '1'};

void put_u32(std::ostream& out, std::uint32_t v)
{
    const std::array<unsigned char, 4> buf = {
        static_cast<unsigned char>(v & 0xff),
        static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff),
        static_cast<unsigned char>((v >> 24) & 0xff),
    };
    out.write(reinterpret_cast<const char*>(buf.data()), 4);
}

std::uint32_t get_u32(std::istream& in)
{
    std::array<unsigned char, 4> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), 4);
    return static_cast<std::uint32_t>(buf[0])
           | (static_cast<std::uint32_t>(buf[1]) << 8)
           | (static_cast<std::uint32_t>(buf[2]) << 16)
           | (static_cast<std::uint32_t>(buf[3]) << 24);
}

} // namespace

long IqFileHeader::payload_bytes() const
{
    const long width = (format == Format::Complex64) ? 4 : 8;
    return 2L * dims.n_antennas * dims.total_samples() * width;
}

void write_iq_file(const std::string& path, const CMatrix& samples,
                   const SignalDims& dims, IqFileHeader::Format format)
{
    dims.validate();
    if (samples.rows() != dims.n_antennas
        || samples.cols() != dims.total_samples()) {
        throw LengthMismatch("write_iq_file: samples must be L x (M*N*P)");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FileFormatError("write_iq_file: cannot open " + path);
    }
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, static_cast<std::uint32_t>(dims.n_antennas));
    put_u32(out, static_cast<std::uint32_t>(dims.cycle_period));
    put_u32(out, static_cast<std::uint32_t>(dims.n_blocks));
    put_u32(out, static_cast<std::uint32_t>(dims.n_snapshots));
    put_u32(out, static_cast<std::uint32_t>(format));

    // Column-major complex storage is already time-major with antennas
    // interleaved per sample.
    const long n_complex = static_cast<long>(samples.size());
    if (format == IqFileHeader::Format::Complex128) {
        out.write(reinterpret_cast<const char*>(samples.data()),
                  n_complex * 2 * static_cast<long>(sizeof(double)));
    } else {
        std::vector<float> buf(static_cast<std::size_t>(n_complex) * 2);
        const auto* src = samples.data();
        for (long i = 0; i < n_complex; ++i) {
            buf[static_cast<std::size_t>(2 * i)] =
                static_cast<float>(src[i].real());
            buf[static_cast<std::size_t>(2 * i + 1)] =
                static_cast<float>(src[i].imag());
        }
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<long>(buf.size() * sizeof(float)));
    }
    if (!out) {
        throw FileFormatError("write_iq_file: write failed for " + path);
    }
}

std::pair<IqFileHeader, CMatrix> read_iq_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileFormatError("read_iq_file: cannot open " + path);
    }
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw FileFormatError("read_iq_file: bad magic (not a CYCLOIQ1 file)");
    }
    IqFileHeader header;
    header.dims.n_antennas = static_cast<int>(get_u32(in));
    header.dims.cycle_period = static_cast<int>(get_u32(in));
    header.dims.n_blocks = static_cast<int>(get_u32(in));
    header.dims.n_snapshots = static_cast<int>(get_u32(in));
    const std::uint32_t tag = get_u32(in);
    if (!in) {
        throw FileFormatError("read_iq_file: truncated header");
    }
    if (tag != 64 && tag != 128) {
        throw FileFormatError("read_iq_file: unknown sample format tag "
                              + std::to_string(tag));
    }
    header.format = static_cast<IqFileHeader::Format>(tag);
    try {
        header.dims.validate();
    } catch (const InvalidSpec& e) {
        throw FileFormatError(std::string("read_iq_file: bad dimensions: ")
                              + e.what());
    }

    const long expected = header.payload_bytes();
    std::vector<char> payload(static_cast<std::size_t>(expected));
    in.read(payload.data(), expected);
    if (in.gcount() != expected) {
        throw FileFormatError("read_iq_file: truncated payload (expected "
                              + std::to_string(expected) + " bytes, got "
                              + std::to_string(in.gcount()) + ")");
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FileFormatError("read_iq_file: trailing bytes after payload");
    }

    CMatrix samples(header.dims.n_antennas, header.dims.total_samples());
    const long n_complex = static_cast<long>(samples.size());
    if (header.format == IqFileHeader::Format::Complex128) {
        std::memcpy(samples.data(), payload.data(),
                    static_cast<std::size_t>(expected));
    } else {
        const auto* buf = reinterpret_cast<const float*>(payload.data());
        for (long i = 0; i < n_complex; ++i) {
            samples.data()[i] = cdouble(buf[2 * i], buf[2 * i + 1]);
        }
    }
    return {header, std::move(samples)};
}

void write_iq_csv(const std::string& path, const CMatrix& samples)
{
    std::ofstream out(path);
    if (!out) {
        throw FileFormatError("write_iq_csv: cannot open " + path);
    }
    char buf[64];
    for (Eigen::Index t = 0; t < samples.cols(); ++t) {
        for (Eigen::Index a = 0; a < samples.rows(); ++a) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g", samples(a, t).real(),
                          samples(a, t).imag());
            out << (a == 0 ? "" : ",") << buf;
        }
        out << '\n';
    }
}

CMatrix read_iq_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FileFormatError("read_iq_csv: cannot open " + path);
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                fields.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw FileFormatError("read_iq_csv: non-numeric cell '" + cell
                                      + "'");
            }
        }
        if (fields.size() % 2 != 0) {
            throw FileFormatError("read_iq_csv: rows need re,im pairs");
        }
        if (width == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw FileFormatError("read_iq_csv: ragged rows");
        }
        rows.push_back(std::move(fields));
    }
    if (rows.empty()) {
        throw FileFormatError("read_iq_csv: no samples");
    }
    const auto l = static_cast<Eigen::Index>(width / 2);
    CMatrix samples(l, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (Eigen::Index a = 0; a < l; ++a) {
            samples(a, static_cast<Eigen::Index>(t)) =
                cdouble(rows[t][static_cast<std::size_t>(2 * a)],
                        rows[t][static_cast<std::size_t>(2 * a + 1)]);
        }
    }
    return samples;
}

} // namespace cyclodetect
