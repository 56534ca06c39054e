#include "cyclodetect/signal_gen.hpp"

#include <cmath>

#include "cyclodetect/errors.hpp"
#include "cyclodetect/matrix_core.hpp"
#include "cyclodetect/rng.hpp"

namespace cyclodetect {

namespace {

constexpr int kRrcSpanSymbols = 8;     // pulse truncated to +/- 4 symbols
constexpr double kExpTruncation = 1e-4;

// Root-raised-cosine impulse response at t symbol periods from the peak.
double rrc_value(double t, double beta)
{
    constexpr double eps = 1e-9;
    if (std::abs(t) < eps) {
        return 1.0 - beta + 4.0 * beta / M_PI;
    }
    if (std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < eps) {
        const double a = (1.0 + 2.0 / M_PI) * std::sin(M_PI / (4.0 * beta));
        const double b = (1.0 - 2.0 / M_PI) * std::cos(M_PI / (4.0 * beta));
        return beta / std::sqrt(2.0) * (a + b);
    }
    const double num = std::sin(M_PI * t * (1.0 - beta))
                       + 4.0 * beta * t * std::cos(M_PI * t * (1.0 + beta));
    const double den = M_PI * t * (1.0 - 16.0 * beta * beta * t * t);
    return num / den;
}

// Pulse taps over the truncated span, scaled so that sum |g|^2 = T. With
// unit-modulus symbols that makes the expected signal power exactly 1.
std::vector<double> rrc_taps(int samples_per_symbol, double beta)
{
    const int t_half = kRrcSpanSymbols / 2 * samples_per_symbol;
    std::vector<double> g(static_cast<std::size_t>(2 * t_half + 1));
    double energy = 0.0;
    for (int i = -t_half; i <= t_half; ++i) {
        const double v =
            rrc_value(static_cast<double>(i) / samples_per_symbol, beta);
        g[static_cast<std::size_t>(i + t_half)] = v;
        energy += v * v;
    }
    const double scale = std::sqrt(samples_per_symbol / energy);
    for (double& v : g) {
        v *= scale;
    }
    return g;
}

CVector gen_qpsk_rect(int t_len, long n_samples, Rng& rng)
{
    CVector x(n_samples);
    for (long s = 0; s < n_samples / t_len; ++s) {
        const cdouble sym = rng.qpsk_symbol();
        x.segment(s * t_len, t_len).setConstant(sym);
    }
    return x;
}

CVector gen_qpsk_rrc(int t_len, double beta, long n_samples, Rng& rng)
{
    const std::vector<double> g = rrc_taps(t_len, beta);
    const int g_len = static_cast<int>(g.size());
    const long n_syms = n_samples / t_len;
    // Extra symbols on both sides keep the observation window in pulse
    // steady state (exact unit power, no edge transients).
    const long lead = kRrcSpanSymbols / 2;
    const long total_syms = n_syms + 2 * lead;

    CVector x = CVector::Zero(n_samples);
    for (long s = 0; s < total_syms; ++s) {
        const cdouble sym = rng.qpsk_symbol();
        const long start = (s - lead) * t_len - g_len / 2;
        const long lo = std::max<long>(0, start);
        const long hi = std::min<long>(n_samples, start + g_len);
        for (long i = lo; i < hi; ++i) {
            x(i) += sym * g[static_cast<std::size_t>(i - start)];
        }
    }
    return x;
}

CVector gen_ofdm(const SignalSpec& spec, long n_samples, Rng& rng)
{
    const int nsc = spec.n_subcarriers;
    const int cp = spec.cp_len;
    const int sym_len = nsc + cp;
    const long n_syms = n_samples / sym_len;
    const double scale = 1.0 / std::sqrt(static_cast<double>(nsc));

    CVector x(n_samples);
    CVector body(nsc);
    for (long s = 0; s < n_syms; ++s) {
        body.setZero();
        // Unitary inverse DFT of i.i.d. QPSK subcarrier symbols.
        for (int q = 0; q < nsc; ++q) {
            const cdouble sym = rng.qpsk_symbol();
            for (int t = 0; t < nsc; ++t) {
                const double phase = 2.0 * M_PI * q * t / nsc;
                body(t) += sym * cdouble(std::cos(phase), std::sin(phase));
            }
        }
        body *= scale;
        auto out = x.segment(s * sym_len, sym_len);
        out.head(cp) = body.tail(cp); // cyclic prefix
        out.tail(nsc) = body;
    }
    return x;
}

} // namespace

int SignalSpec::cycle_period() const
{
    return kind == Kind::Ofdm ? n_subcarriers + cp_len : samples_per_symbol;
}

void SignalSpec::validate() const
{
    if (kind == Kind::QpskSingleCarrier) {
        if (samples_per_symbol < 1) {
            throw InvalidSpec("SignalSpec: samples_per_symbol must be >= 1");
        }
        if (pulse == Pulse::Rrc
            && !(rrc_rolloff > 0.0 && rrc_rolloff <= 1.0)) {
            throw InvalidSpec("SignalSpec: rrc_rolloff must lie in (0, 1]");
        }
    } else {
        if (n_subcarriers < 1 || cp_len < 0) {
            throw InvalidSpec("SignalSpec: bad ofdm subcarrier/prefix sizes");
        }
    }
}

void ChannelSpec::validate() const
{
    if (n_antennas < 1 || n_taps < 1 || !(delay_decay > 0.0)) {
        throw InvalidSpec("ChannelSpec: antennas/taps positive, decay > 0");
    }
}

std::vector<double> ChannelSpec::tap_powers() const
{
    std::vector<double> p(static_cast<std::size_t>(n_taps));
    double total = 0.0;
    for (int t = 0; t < n_taps; ++t) {
        p[static_cast<std::size_t>(t)] = std::exp(-t / delay_decay);
        total += p[static_cast<std::size_t>(t)];
    }
    for (double& v : p) {
        v /= total;
    }
    return p;
}

void NoiseSpec::validate(int n_antennas) const
{
    if (temporal == Temporal::MaColored && ma_len < 1) {
        throw InvalidSpec("NoiseSpec: moving-average length must be >= 1");
    }
    if (temporal == Temporal::ExpColored && !(exp_sigma >= 0.0)) {
        throw InvalidSpec("NoiseSpec: exp_sigma must be >= 0");
    }
    if (spatial == Spatial::Correlated) {
        if (correlation.rows() != n_antennas
            || correlation.cols() != n_antennas) {
            throw InvalidSpec("NoiseSpec: correlation matrix must be L x L");
        }
        for (int i = 0; i < n_antennas; ++i) {
            if (std::abs(correlation(i, i) - cdouble(1.0, 0.0)) > 1e-9) {
                throw InvalidSpec("NoiseSpec: correlation diagonal must be 1");
            }
        }
        // PD check via the shared conditioning floor.
        pd_eigenvalues(HermitianMatrix(correlation).mat(),
                       "NoiseSpec correlation");
    }
}

NoiseSpec NoiseSpec::white()
{
    return NoiseSpec{};
}

NoiseSpec NoiseSpec::ma_colored(int filter_len)
{
    NoiseSpec s;
    s.temporal = Temporal::MaColored;
    s.ma_len = filter_len;
    return s;
}

NoiseSpec NoiseSpec::exp_colored(double sigma)
{
    NoiseSpec s;
    s.temporal = Temporal::ExpColored;
    s.exp_sigma = sigma;
    return s;
}

NoiseSpec NoiseSpec::with_spatial(const CMatrix& corr) const
{
    NoiseSpec s = *this;
    s.spatial = Spatial::Correlated;
    s.correlation = corr;
    return s;
}

std::vector<double> temporal_filter_taps(const NoiseSpec& spec)
{
    std::vector<double> taps;
    switch (spec.temporal) {
    case NoiseSpec::Temporal::White:
        taps = {1.0};
        break;
    case NoiseSpec::Temporal::MaColored:
        taps.assign(static_cast<std::size_t>(spec.ma_len), 1.0);
        break;
    case NoiseSpec::Temporal::ExpColored: {
        if (spec.exp_sigma <= 0.0) {
            taps = {1.0};
            break;
        }
        for (int n = 0;; ++n) {
            const double v = std::exp(-n / spec.exp_sigma);
            if (v < kExpTruncation) {
                break;
            }
            taps.push_back(v);
        }
        break;
    }
    }
    double energy = 0.0;
    for (double v : taps) {
        energy += v * v;
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (double& v : taps) {
        v *= scale;
    }
    return taps;
}

CMatrix exponential_correlation(int n_antennas, double rho)
{
    CMatrix k(n_antennas, n_antennas);
    for (int i = 0; i < n_antennas; ++i) {
        for (int j = 0; j < n_antennas; ++j) {
            k(i, j) = std::pow(rho, std::abs(i - j));
        }
    }
    return k;
}

CVector gen_signal(const SignalSpec& spec, long n_samples, std::uint64_t seed)
{
    spec.validate();
    const int sym_len = spec.cycle_period();
    if (n_samples <= 0 || n_samples % sym_len != 0) {
        throw InvalidSpec("gen_signal: n_samples must be a positive multiple "
                          "of the symbol length");
    }
    Rng rng(seed);
    if (spec.kind == SignalSpec::Kind::Ofdm) {
        return gen_ofdm(spec, n_samples, rng);
    }
    if (spec.pulse == SignalSpec::Pulse::Rect) {
        return gen_qpsk_rect(sym_len, n_samples, rng);
    }
    return gen_qpsk_rrc(sym_len, spec.rrc_rolloff, n_samples, rng);
}

CMatrix apply_channel(const CVector& signal, const ChannelSpec& ch,
                      std::uint64_t seed)
{
    ch.validate();
    const long n = signal.size();
    Rng rng(seed);
    const std::vector<double> powers = ch.tap_powers();

    CMatrix out = CMatrix::Zero(ch.n_antennas, n);
    for (int ant = 0; ant < ch.n_antennas; ++ant) {
        for (int t = 0; t < ch.n_taps; ++t) {
            const cdouble tap = rng.cgaussian()
                                * std::sqrt(powers[static_cast<std::size_t>(t)]);
            const long len = n - t;
            if (len <= 0) {
                continue;
            }
            out.row(ant).tail(len) += tap * signal.head(len).transpose();
        }
    }
    return out;
}

CMatrix gen_noise(const NoiseSpec& spec, int n_antennas, long n_samples,
                  std::uint64_t seed)
{
    if (n_antennas < 1 || n_samples < 1) {
        throw InvalidSpec("gen_noise: need L >= 1 and n_samples >= 1");
    }
    spec.validate(n_antennas);
    Rng rng(seed);
    const std::vector<double> taps = temporal_filter_taps(spec);
    const long f_len = static_cast<long>(taps.size());

    // Draw n + f_len - 1 raw samples per antenna and keep the fully warmed-up
    // ("valid") part of the convolution, so the output is stationary
    // throughout. Unit-energy taps preserve unit power per antenna.
    CMatrix out(n_antennas, n_samples);
    CVector raw(n_samples + f_len - 1);
    for (int ant = 0; ant < n_antennas; ++ant) {
        for (long i = 0; i < raw.size(); ++i) {
            raw(i) = rng.cgaussian();
        }
        if (f_len == 1) {
            out.row(ant) = raw.transpose();
        } else {
            out.row(ant).setZero();
            for (long t = 0; t < f_len; ++t) {
                out.row(ant) += taps[static_cast<std::size_t>(t)]
                                * raw.segment(f_len - 1 - t, n_samples)
                                      .transpose();
            }
        }
    }

    if (spec.spatial == NoiseSpec::Spatial::Correlated) {
        // Hermitian square root; unit diagonal keeps per-antenna power at 1.
        Eigen::SelfAdjointEigenSolver<CMatrix> es(
            HermitianMatrix(spec.correlation).mat());
        const Eigen::VectorXd root = es.eigenvalues().array().sqrt();
        const CMatrix mix =
            es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
        out = mix * out;
    }
    return out;
}

CMatrix mix_at_snr(const CMatrix& signal, const CMatrix& noise, double snr_db)
{
    if (std::isinf(snr_db) && snr_db < 0.0) {
        return noise;
    }
    if (signal.rows() != noise.rows() || signal.cols() != noise.cols()) {
        throw LengthMismatch("mix_at_snr: signal/noise shapes differ");
    }
    const double sig_power = signal.squaredNorm();
    const double noise_power = noise.squaredNorm();
    if (sig_power <= 0.0) {
        throw InvalidSpec("mix_at_snr: zero signal power at finite snr");
    }
    const double alpha =
        std::sqrt(std::pow(10.0, snr_db / 10.0) * noise_power / sig_power);
    return alpha * signal + noise;
}

} // namespace cyclodetect
