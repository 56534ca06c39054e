#pragma once

#include <cstdint>
#include <vector>

#include "cyclodetect/types.hpp"

namespace cyclodetect {

// Baseband transmit-signal description. Two families:
//  - qpsk_single_carrier: i.i.d. QPSK at one symbol per cycle period, with a
//    rectangular or root-raised-cosine pulse;
//  - ofdm: each symbol is the cyclic-prefixed inverse DFT of i.i.d. QPSK
//    subcarrier symbols.
// In both families the cycle period equals the samples-per-symbol count.
struct SignalSpec {
    enum class Kind { QpskSingleCarrier, Ofdm };
    enum class Pulse { Rect, Rrc };

    Kind kind = Kind::QpskSingleCarrier;
    int samples_per_symbol = 1;   // single-carrier T (= cycle period)
    Pulse pulse = Pulse::Rect;
    double rrc_rolloff = 0.25;
    int n_subcarriers = 16;       // ofdm
    int cp_len = 4;               // ofdm cyclic prefix

    int cycle_period() const;
    void validate() const;
};

// Frequency-selective Rayleigh channel: per antenna, independent complex
// Gaussian taps weighted by an exponential power delay profile normalized to
// unit total power.
struct ChannelSpec {
    int n_antennas = 1;
    int n_taps = 6;
    double delay_decay = 2.0;

    void validate() const;
    std::vector<double> tap_powers() const; // sums to 1
};

// Additive noise: temporal shaping by an FIR filter (equal-tap moving average
// or truncated exponential impulse response), spatial correlation by a fixed
// mixing matrix. Always normalized to unit average power per antenna.
struct NoiseSpec {
    enum class Temporal { White, MaColored, ExpColored };
    enum class Spatial { Uncorrelated, Correlated };

    Temporal temporal = Temporal::White;
    int ma_len = 19;              // MaColored filter length
    double exp_sigma = 0.0;       // ExpColored decay; 0 degenerates to white
    Spatial spatial = Spatial::Uncorrelated;
    CMatrix correlation;          // L x L, PD, unit diagonal (Correlated only)

    void validate(int n_antennas) const;

    static NoiseSpec white();
    static NoiseSpec ma_colored(int filter_len);
    static NoiseSpec exp_colored(double sigma);

    NoiseSpec with_spatial(const CMatrix& corr) const;
};

// Unit-energy FIR taps realizing the requested temporal shaping. The
// exponential response exp(-n/sigma) is truncated where it falls below 1e-4.
std::vector<double> temporal_filter_taps(const NoiseSpec& spec);

// Spatial correlation matrix rho^|i-j| (unit diagonal, PD for |rho| < 1).
CMatrix exponential_correlation(int n_antennas, double rho);

// Unit-average-power transmit signal of n_samples samples (n_samples must be
// a multiple of the symbol length).
CVector gen_signal(const SignalSpec& spec, long n_samples, std::uint64_t seed);

// Convolve the scalar signal with per-antenna channel taps drawn once per
// call from `ch`; returns L x n_samples.
CMatrix apply_channel(const CVector& signal, const ChannelSpec& ch,
                      std::uint64_t seed);

// Proper complex Gaussian noise, L x n_samples, unit average power per
// antenna, shaped per spec. Stationary from the first sample (the FIR warm-up
// is consumed internally).
CMatrix gen_noise(const NoiseSpec& spec, int n_antennas, long n_samples,
                  std::uint64_t seed);

// alpha * signal + noise with alpha scaling the empirical total signal power
// (summed over antennas) to 10^(snr_db/10) times the empirical total noise
// power. snr_db = -infinity returns the noise unchanged.
CMatrix mix_at_snr(const CMatrix& signal, const CMatrix& noise, double snr_db);

} // namespace cyclodetect
