#pragma once

#include <mvdict/types.hpp>

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace mvdict {

/// Binary signal container, magic "MVSG1". Holds either a continuous record
/// (with its onset list) or an epoch set. Payload is little-endian float64,
/// time-major. Round-trips bit-exactly.
void save_signals(const std::filesystem::path& path, const EpochSet& epochs);
void save_signals(const std::filesystem::path& path, const ContinuousRecord& record);

using LoadedSignals = std::variant<EpochSet, ContinuousRecord>;
LoadedSignals load_signals(const std::filesystem::path& path);

/// Epochs regardless of the stored kind; a record requires `epoch_length`
/// to be cut at its onsets.
EpochSet load_epochs(const std::filesystem::path& path, Index epoch_length = 0);

/// Binary kernel dictionary, magic "MVDK1": header (L, C, per-kernel
/// lengths) + float64 payload.
void save_dictionary(const std::filesystem::path& path, const KernelDictionary& dict);
KernelDictionary load_dictionary(const std::filesystem::path& path);

/// CSV matrix: header row "c0,c1,...", rows = time, columns = channels.
/// Values rendered with 17 significant digits.
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix_csv(const std::filesystem::path& path);

}  // namespace mvdict
