#include <mvdict/io.hpp>

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mvdict {

namespace {

static_assert(std::endian::native == std::endian::little,
              "the binary formats are little-endian; add byteswapping for this platform");

constexpr std::array<char, 5> kSignalMagic = {'M', 'V', 'S', 'G', '1'};
constexpr std::array<char, 5> kDictMagic = {'M', 'V', 'D', 'K', '1'};
constexpr std::uint8_t kKindRecord = 0;
constexpr std::uint8_t kKindEpochs = 1;

class Writer {
public:
    explicit Writer(const std::filesystem::path& path)
        : out_(path, std::ios::binary), path_(path.string()) {
        if (!out_) throw ParseError("cannot open " + path_ + " for writing");
    }

    template <typename T>
    void put(const T& value) {
        out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
    }

    void put_matrix(const Matrix& m) {
        // Stored row by row (time-major), matching the declared shape.
        for (Index r = 0; r < m.rows(); ++r)
            for (Index c = 0; c < m.cols(); ++c) put(m(r, c));
    }

    void finish() {
        out_.flush();
        if (!out_) throw ParseError("write failed for " + path_);
    }

private:
    std::ofstream out_;
    std::string path_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path)
        : in_(path, std::ios::binary), path_(path.string()) {
        if (!in_) throw ParseError("cannot open " + path_);
    }

    template <typename T>
    T get() {
        T value;
        in_.read(reinterpret_cast<char*>(&value), sizeof(T));
        if (!in_)
            throw ParseError("truncated file " + path_ + " at offset " +
                             std::to_string(offset()));
        return value;
    }

    Matrix get_matrix(Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index r = 0; r < rows; ++r)
            for (Index c = 0; c < cols; ++c) m(r, c) = get<double>();
        return m;
    }

    void expect_magic(const std::array<char, 5>& magic, const char* kind) {
        std::array<char, 5> found{};
        in_.read(found.data(), found.size());
        if (!in_ || found != magic)
            throw ParseError(std::string("not a ") + kind + " file: " + path_);
    }

    long offset() { return static_cast<long>(in_.gcount()) + static_cast<long>(in_.tellg()); }

    const std::string& path() const { return path_; }

private:
    std::ifstream in_;
    std::string path_;
};

std::uint64_t checked_u64(Index v) { return static_cast<std::uint64_t>(v); }

}  // namespace

void save_signals(const std::filesystem::path& path, const EpochSet& epochs) {
    Writer w(path);
    w.put(kSignalMagic);
    w.put(kKindEpochs);
    w.put(static_cast<std::uint32_t>(epochs.channels()));
    w.put(epochs.sample_rate);
    w.put(checked_u64(epochs.count()));
    w.put(checked_u64(epochs.length()));
    for (const Matrix& e : epochs.epochs) w.put_matrix(e);
    w.finish();
}

void save_signals(const std::filesystem::path& path, const ContinuousRecord& record) {
    Writer w(path);
    w.put(kSignalMagic);
    w.put(kKindRecord);
    w.put(static_cast<std::uint32_t>(record.channels()));
    w.put(record.sample_rate);
    w.put(checked_u64(record.length()));
    w.put(checked_u64(static_cast<Index>(record.onsets.size())));
    for (Index t : record.onsets) w.put(checked_u64(t));
    w.put_matrix(record.samples);
    w.finish();
}

LoadedSignals load_signals(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic(kSignalMagic, "MVSG1 signal");
    const auto kind = r.get<std::uint8_t>();
    const auto channels = static_cast<Index>(r.get<std::uint32_t>());
    const double rate = r.get<double>();
    if (channels < 1) throw ParseError("declared channel count is zero in " + r.path());

    if (kind == kKindEpochs) {
        const auto count = static_cast<Index>(r.get<std::uint64_t>());
        const auto length = static_cast<Index>(r.get<std::uint64_t>());
        if (count < 1 || length < 1) throw ParseError("empty epoch set in " + r.path());
        std::vector<Matrix> epochs;
        epochs.reserve(static_cast<std::size_t>(count));
        for (Index p = 0; p < count; ++p) epochs.push_back(r.get_matrix(length, channels));
        return make_epoch_set(std::move(epochs), rate);
    }
    if (kind == kKindRecord) {
        const auto length = static_cast<Index>(r.get<std::uint64_t>());
        const auto onset_count = static_cast<Index>(r.get<std::uint64_t>());
        std::vector<Index> onsets;
        onsets.reserve(static_cast<std::size_t>(onset_count));
        for (Index i = 0; i < onset_count; ++i)
            onsets.push_back(static_cast<Index>(r.get<std::uint64_t>()));
        Matrix samples = r.get_matrix(length, channels);
        return make_record(std::move(samples), std::move(onsets), rate);
    }
    throw ParseError("unknown signal kind in " + r.path());
}

EpochSet load_epochs(const std::filesystem::path& path, Index epoch_length) {
    LoadedSignals loaded = load_signals(path);
    if (std::holds_alternative<EpochSet>(loaded)) return std::get<EpochSet>(std::move(loaded));
    const auto& record = std::get<ContinuousRecord>(loaded);
    if (epoch_length < 1)
        throw ConfigError("file holds a continuous record; an epoch length is required");
    std::vector<Matrix> epochs;
    for (Index t : record.onsets) {
        if (t + epoch_length > record.length())
            throw RangeError("onset + epoch length overflows the record");
        epochs.push_back(record.samples.middleRows(t, epoch_length));
    }
    return make_epoch_set(std::move(epochs), record.sample_rate);
}

void save_dictionary(const std::filesystem::path& path, const KernelDictionary& dict) {
    Writer w(path);
    w.put(kDictMagic);
    w.put(static_cast<std::uint32_t>(dict.size()));
    w.put(static_cast<std::uint32_t>(dict.channels()));
    for (const auto& k : dict.kernels) w.put(static_cast<std::uint32_t>(k.length()));
    for (const auto& k : dict.kernels) w.put_matrix(k.waveform);
    w.finish();
}

KernelDictionary load_dictionary(const std::filesystem::path& path) {
    Reader r(path);
    r.expect_magic(kDictMagic, "MVDK1 dictionary");
    const auto l = static_cast<Index>(r.get<std::uint32_t>());
    const auto channels = static_cast<Index>(r.get<std::uint32_t>());
    if (l < 1 || channels < 1) throw ParseError("empty dictionary in " + r.path());
    std::vector<Index> lengths;
    lengths.reserve(static_cast<std::size_t>(l));
    for (Index i = 0; i < l; ++i) lengths.push_back(static_cast<Index>(r.get<std::uint32_t>()));
    std::vector<ShiftKernel> kernels;
    kernels.reserve(static_cast<std::size_t>(l));
    for (Index i = 0; i < l; ++i)
        kernels.push_back(ShiftKernel{r.get_matrix(lengths[static_cast<std::size_t>(i)], channels)});
    return make_dictionary(std::move(kernels));
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    for (Index c = 0; c < m.cols(); ++c) out << (c ? ",c" : "c") << c;
    out << '\n';
    char buffer[64];
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", m(r, c));
            if (c) out << ',';
            out << buffer;
        }
        out << '\n';
    }
    if (!out) throw ParseError("write failed for " + path.string());
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV file " + path.string());

    const auto count_fields = [](const std::string& s) {
        return static_cast<Index>(std::count(s.begin(), s.end(), ',')) + 1;
    };
    const Index cols = count_fields(line);

    std::vector<double> values;
    Index rows = 0;
    long line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        if (count_fields(line) != cols)
            throw ParseError(path.string() + ":" + std::to_string(line_number) +
                             ": expected " + std::to_string(cols) + " fields");
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(field, &used);
            } catch (const std::exception&) {
                throw ParseError(path.string() + ":" + std::to_string(line_number) +
                                 ": not a number: " + field);
            }
            if (used != field.size())
                throw ParseError(path.string() + ":" + std::to_string(line_number) +
                                 ": trailing characters: " + field);
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw ParseError("CSV has a header but no data rows: " + path.string());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c)
            m(r, c) = values[static_cast<std::size_t>(r * cols + c)];
    return m;
}

}  // namespace mvdict
