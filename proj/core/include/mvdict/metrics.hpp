#pragma once

#include <mvdict/gabor.hpp>
#include <mvdict/pursuit.hpp>
#include <mvdict/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mvdict {

/// rho = 1 - (1/P) * sum_p ||eps_p|| / ||y_p||.
double reconstruction_rate(const EpochSet& trials, const std::vector<Matrix>& residuals);

/// Maximum over lags of |<estimate shifted, reference>| after unit
/// normalization of both patterns; zero-padded overlap. `max_lag` restricts
/// the search range when set.
double max_correlation(const Matrix& estimate, const Matrix& reference,
                       std::optional<Index> max_lag = std::nullopt);
double max_correlation(const EvokedPattern& estimate, const EvokedPattern& reference,
                       std::optional<Index> max_lag = std::nullopt);

struct RhoCurve {
    std::vector<Index> k_values;
    std::vector<double> rho;
    std::string dataset;
    std::string method;
};

/// rho as a function of K. Greedy methods are evaluated once at max(K) per
/// trial; each curve point reads the matching prefix of the residual-norm
/// history.
RhoCurve rho_curve(const EpochSet& trials, const KernelDictionary& dict,
                   std::vector<Index> k_values, const PursuitConfig& base = {});
RhoCurve rho_curve(const EpochSet& trials, const Matrix& atoms, Variant variant,
                   std::vector<Index> k_values);
RhoCurve rho_curve(const EpochSet& trials, const ComplexMatrix& atoms, Variant variant,
                   std::vector<Index> k_values);

}  // namespace mvdict
