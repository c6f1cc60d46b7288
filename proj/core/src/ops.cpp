#include <mvdict/ops.hpp>

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>

namespace mvdict {

Matrix instantiate_atom(const ShiftKernel& kernel, Index shift, Index n) {
    const Index t = kernel.length();
    if (shift < 0 || shift > n - t)
        throw RangeError("atom shift out of range for signal length");
    Matrix out = Matrix::Zero(n, kernel.channels());
    out.middleRows(shift, t) = kernel.waveform;
    return out;
}

Matrix synthesize(const KernelDictionary& dict, const SparseCode& code, Index n) {
    const Index c = dict.channels();
    Matrix out = Matrix::Zero(n, c);
    for (const auto& e : code.entries) {
        if (e.kernel < 0 || e.kernel >= dict.size())
            throw IndexError("sparse code references an invalid kernel index");
        const ShiftKernel& k = dict.kernels[static_cast<std::size_t>(e.kernel)];
        if (e.shift < 0 || e.shift > n - k.length())
            throw RangeError("sparse code shift out of range");
        out.middleRows(e.shift, k.length()) += e.coefficient * k.waveform;
    }
    return out;
}

double multivariate_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError("inner product requires equal shapes");
    return a.cwiseProduct(b).sum();
}

namespace {

Vector correlate_direct(const Matrix& residual, const Matrix& kernel) {
    const Index n = residual.rows();
    const Index t = kernel.rows();
    const Index c = residual.cols();
    Vector out(n - t + 1);
    for (Index tau = 0; tau <= n - t; ++tau) {
        double acc = 0.0;
        for (Index ch = 0; ch < c; ++ch)
            acc += residual.col(ch).segment(tau, t).dot(kernel.col(ch));
        out[tau] = acc;
    }
    return out;
}

// FFTW plan cache, one r2c/c2r pair per transform length. Plan creation is
// not thread-safe; execution on caller-owned arrays is.
class FftPlans {
public:
    struct Entry {
        fftw_plan forward = nullptr;
        fftw_plan inverse = nullptr;
    };

    static Entry get(Index n) {
        static FftPlans cache;
        std::lock_guard lock(cache.mutex_);
        auto it = cache.plans_.find(n);
        if (it != cache.plans_.end()) return it->second;

        double* real = fftw_alloc_real(static_cast<std::size_t>(n));
        fftw_complex* spec = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
        Entry e;
        e.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
        e.inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
        fftw_free(real);
        fftw_free(spec);
        cache.plans_.emplace(n, e);
        return e;
    }

private:
    FftPlans() = default;
    ~FftPlans() {
        for (auto& [n, e] : plans_) {
            fftw_destroy_plan(e.forward);
            fftw_destroy_plan(e.inverse);
        }
    }

    std::mutex mutex_;
    std::map<Index, Entry> plans_;
};

struct FftwDeleter {
    void operator()(void* p) const { fftw_free(p); }
};

// Circular correlation of length n equals the linear one on lags
// [0, n - t] because the kernel is zero-padded; no extra padding needed.
Vector correlate_fft(const Matrix& residual, const Matrix& kernel) {
    const Index n = residual.rows();
    const Index t = kernel.rows();
    const Index c = residual.cols();
    const Index spec_len = n / 2 + 1;
    const auto plans = FftPlans::get(n);

    std::unique_ptr<double, FftwDeleter> real(fftw_alloc_real(static_cast<std::size_t>(n)));
    std::unique_ptr<fftw_complex, FftwDeleter> res_spec(
        fftw_alloc_complex(static_cast<std::size_t>(spec_len)));
    std::unique_ptr<fftw_complex, FftwDeleter> ker_spec(
        fftw_alloc_complex(static_cast<std::size_t>(spec_len)));
    std::unique_ptr<fftw_complex, FftwDeleter> acc(
        fftw_alloc_complex(static_cast<std::size_t>(spec_len)));

    for (Index i = 0; i < spec_len; ++i) acc.get()[i][0] = acc.get()[i][1] = 0.0;

    for (Index ch = 0; ch < c; ++ch) {
        Eigen::Map<Vector>(real.get(), n) = residual.col(ch);
        fftw_execute_dft_r2c(plans.forward, real.get(), res_spec.get());

        Eigen::Map<Vector>(real.get(), n).setZero();
        Eigen::Map<Vector>(real.get(), n).head(t) = kernel.col(ch);
        fftw_execute_dft_r2c(plans.forward, real.get(), ker_spec.get());

        for (Index i = 0; i < spec_len; ++i) {
            const double rr = res_spec.get()[i][0], ri = res_spec.get()[i][1];
            const double kr = ker_spec.get()[i][0], ki = ker_spec.get()[i][1];
            // residual_spectrum * conj(kernel_spectrum)
            acc.get()[i][0] += rr * kr + ri * ki;
            acc.get()[i][1] += ri * kr - rr * ki;
        }
    }

    fftw_execute_dft_c2r(plans.inverse, acc.get(), real.get());
    Vector out(n - t + 1);
    const double scale = 1.0 / static_cast<double>(n);
    for (Index tau = 0; tau <= n - t; ++tau) out[tau] = real.get()[tau] * scale;
    return out;
}

}  // namespace

Vector correlate_all_shifts(const Matrix& residual, const Matrix& kernel,
                            const CorrelationConfig& config) {
    if (residual.cols() != kernel.cols())
        throw ShapeError("kernel and residual channel counts differ");
    if (kernel.rows() > residual.rows())
        throw LengthError("kernel longer than signal");
    if (residual.rows() * kernel.rows() > config.direct_threshold)
        return correlate_fft(residual, kernel);
    return correlate_direct(residual, kernel);
}

Vector correlate_all_shifts(const MultivariateSignal& residual, const ShiftKernel& kernel,
                            const CorrelationConfig& config) {
    return correlate_all_shifts(residual.samples, kernel.waveform, config);
}

}  // namespace mvdict
