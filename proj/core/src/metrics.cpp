#include <mvdict/metrics.hpp>

#include <mvdict/parallel.hpp>

#include <algorithm>
#include <cmath>

namespace mvdict {

double reconstruction_rate(const EpochSet& trials, const std::vector<Matrix>& residuals) {
    if (residuals.size() != static_cast<std::size_t>(trials.count()))
        throw ShapeError("trial and residual counts differ");
    double acc = 0.0;
    for (std::size_t p = 0; p < residuals.size(); ++p) {
        const Matrix& y = trials.epochs[p];
        if (residuals[p].rows() != y.rows() || residuals[p].cols() != y.cols())
            throw ShapeError("residual shape mismatch");
        const double y_norm = y.norm();
        if (!(y_norm > 0.0)) throw ConfigError("zero-norm trial in reconstruction rate");
        acc += residuals[p].norm() / y_norm;
    }
    return 1.0 - acc / static_cast<double>(residuals.size());
}

double max_correlation(const Matrix& estimate, const Matrix& reference,
                       std::optional<Index> max_lag) {
    if (estimate.cols() != reference.cols())
        throw ShapeError("patterns must share the channel count");
    const double en = estimate.norm();
    const double rn = reference.norm();
    if (!(en > 0.0) || !(rn > 0.0)) throw ShapeError("cannot correlate a zero pattern");
    const Matrix e = estimate / en;
    const Matrix r = reference / rn;

    const Index te = e.rows();
    const Index tr = r.rows();
    Index lag_lo = -(te - 1), lag_hi = tr - 1;
    if (max_lag) {
        lag_lo = std::max<Index>(lag_lo, -*max_lag);
        lag_hi = std::min<Index>(lag_hi, *max_lag);
    }

    double best = 0.0;
    for (Index lag = lag_lo; lag <= lag_hi; ++lag) {
        // estimate sample t aligns with reference sample t + lag
        const Index t_begin = std::max<Index>(0, -lag);
        const Index t_end = std::min<Index>(te, tr - lag);
        if (t_end <= t_begin) continue;
        double acc = 0.0;
        for (Index c = 0; c < e.cols(); ++c)
            acc += e.col(c).segment(t_begin, t_end - t_begin)
                       .dot(r.col(c).segment(t_begin + lag, t_end - t_begin));
        best = std::max(best, std::abs(acc));
    }
    return best;
}

double max_correlation(const EvokedPattern& estimate, const EvokedPattern& reference,
                       std::optional<Index> max_lag) {
    return max_correlation(estimate.waveform, reference.waveform, max_lag);
}

namespace {

template <typename DecomposeOnce>
RhoCurve rho_from_histories(const EpochSet& trials, std::vector<Index> k_values,
                            DecomposeOnce&& run) {
    if (k_values.empty()) throw ConfigError("rho curve needs at least one K");
    if (!std::is_sorted(k_values.begin(), k_values.end()))
        throw ConfigError("k values must be sorted ascending");
    const Index k_max = k_values.back();
    if (k_max < 0) throw ConfigError("negative sparsity");

    const std::size_t p_count = static_cast<std::size_t>(trials.count());
    std::vector<std::vector<double>> ratios(p_count);
    parallel_for(p_count, [&](std::size_t p) {
        const Matrix& y = trials.epochs[p];
        const double y_norm = y.norm();
        if (!(y_norm > 0.0)) throw ConfigError("zero-norm trial in rho curve");
        const std::vector<double> history = run(y, k_max);
        std::vector<double> r(k_values.size());
        for (std::size_t i = 0; i < k_values.size(); ++i) {
            const std::size_t k = static_cast<std::size_t>(k_values[i]);
            const double resid = history[std::min(k, history.size() - 1)];
            r[i] = resid / y_norm;
        }
        ratios[p] = std::move(r);
    });

    RhoCurve curve;
    curve.k_values = std::move(k_values);
    curve.rho.assign(curve.k_values.size(), 0.0);
    for (std::size_t p = 0; p < p_count; ++p)
        for (std::size_t i = 0; i < curve.rho.size(); ++i) curve.rho[i] += ratios[p][i];
    for (double& v : curve.rho) v = 1.0 - v / static_cast<double>(p_count);
    return curve;
}

}  // namespace

RhoCurve rho_curve(const EpochSet& trials, const KernelDictionary& dict,
                   std::vector<Index> k_values, const PursuitConfig& base) {
    RhoCurve curve = rho_from_histories(
        trials, std::move(k_values), [&](const Matrix& y, Index k_max) {
            if (k_max == 0) return std::vector<double>{y.norm()};
            PursuitConfig config = base;
            config.variant = Variant::MOMP;
            config.sparsity = k_max;
            return momp_decompose(y, dict, config).residual_norm_history;
        });
    curve.method = "momp";
    return curve;
}

namespace {

template <typename Table>
RhoCurve rho_curve_table(const EpochSet& trials, const Table& atoms, Variant variant,
                         std::vector<Index> k_values) {
    RhoCurve curve = rho_from_histories(
        trials, std::move(k_values), [&](const Matrix& y, Index k_max) {
            if (k_max == 0) return std::vector<double>{y.norm()};
            PursuitConfig config;
            config.variant = variant;
            config.sparsity = k_max;
            return decompose(y, atoms, config).residual_norm_history;
        });
    curve.method = to_string(variant);
    return curve;
}

}  // namespace

RhoCurve rho_curve(const EpochSet& trials, const Matrix& atoms, Variant variant,
                   std::vector<Index> k_values) {
    return rho_curve_table(trials, atoms, variant, std::move(k_values));
}

RhoCurve rho_curve(const EpochSet& trials, const ComplexMatrix& atoms, Variant variant,
                   std::vector<Index> k_values) {
    return rho_curve_table(trials, atoms, variant, std::move(k_values));
}

}  // namespace mvdict
