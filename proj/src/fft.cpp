#include "cyclodetect/fft.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

#include <fftw3.h>

#include "cyclodetect/errors.hpp"

namespace cyclodetect {

namespace {

// FFTW plan creation is not thread-safe; execution on caller-owned arrays is.
// Plans are created once per length against a scratch buffer and reused with
// the new-array execute interface (FFTW_UNALIGNED, so any caller buffer works).
class PlanCache {
public:
    static PlanCache& instance()
    {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) {
            return it->second;
        }
        fftw_complex* scratch = fftw_alloc_complex(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(n, scratch, scratch, FFTW_FORWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(scratch);
        if (plan == nullptr) {
            throw InvalidSpec("fft: planning failed");
        }
        plans_.emplace(n, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::unordered_map<int, fftw_plan> plans_;
};

} // namespace

void unitary_forward_fft_inplace(cdouble* data, int n)
{
    if (n <= 0) {
        throw InvalidSpec("fft: length must be positive");
    }
    fftw_plan plan = PlanCache::instance().get(n);
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, raw, raw);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        data[i] *= scale;
    }
}

} // namespace cyclodetect
