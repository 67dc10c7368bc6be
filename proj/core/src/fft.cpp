#include "mimoid/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace mimoid::fft {
namespace {

// fftw planner calls are not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(int n, int sign) : n_(n) {
        in_ = fftw_alloc_complex(static_cast<std::size_t>(n));
        out_ = fftw_alloc_complex(static_cast<std::size_t>(n));
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(n, in_, out_, sign, FFTW_ESTIMATE);
    }
    ~Plan() {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void run(std::span<cplx> data) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
        for (int i = 0; i < n_; ++i) {
            in_[i][0] = data[i].real();
            in_[i][1] = data[i].imag();
        }
        fftw_execute(plan_);
        for (int i = 0; i < n_; ++i) data[i] = cplx(out_[i][0], out_[i][1]) * scale;
    }

private:
    int n_;
    fftw_complex* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

Plan& plan_for(int n, int sign) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<Plan>> cache;
    auto& slot = cache[{n, sign}];
    if (!slot) slot = std::make_unique<Plan>(n, sign);
    return *slot;
}

void run(std::span<cplx> data, int sign) {
    if (data.empty()) throw ArgumentError("fft: empty input");
    plan_for(static_cast<int>(data.size()), sign).run(data);
}

}  // namespace

void forward(std::span<cplx> data) { run(data, FFTW_FORWARD); }
void inverse(std::span<cplx> data) { run(data, FFTW_BACKWARD); }

}  // namespace mimoid::fft
