#include <mvdict/config_file.hpp>
#include <mvdict/dla.hpp>
#include <mvdict/evoked.hpp>
#include <mvdict/experiments.hpp>
#include <mvdict/filter.hpp>
#include <mvdict/gabor.hpp>
#include <mvdict/io.hpp>
#include <mvdict/metrics.hpp>
#include <mvdict/parallel.hpp>
#include <mvdict/pursuit.hpp>
#include <mvdict/simulate.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace mvdict;

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

struct GlobalOptions {
    int threads = 0;  // 0 = default
    bool dry_run = false;
    bool quiet = false;
};

void apply_threads(const GlobalOptions& options) {
    if (options.threads > 0) {
        set_max_threads(options.threads);
        return;
    }
    if (const char* env = std::getenv("MVDICT_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) set_max_threads(t);
    }
}

void info(const GlobalOptions& options, const std::string& message) {
    if (!options.quiet) std::cout << message << "\n";
}

ConfigFile read_config(const std::string& path) {
    try {
        return ConfigFile::parse_file(path);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());  // a broken config file is a config error
    }
}

double parse_snr(const std::string& text) {
    if (text == "inf" || text == "+inf" || text == "noiseless")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("snr must be a number in dB or 'inf': " + text);
    }
}

std::vector<Index> parse_index_list(const std::string& text) {
    std::vector<Index> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            out.push_back(static_cast<Index>(std::stol(field)));
        } catch (const std::exception&) {
            throw ConfigError("not an integer list: " + text);
        }
    }
    if (out.empty()) throw ConfigError("empty integer list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            out.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw ConfigError("not a numeric list: " + text);
        }
    }
    if (out.empty()) throw ConfigError("empty numeric list");
    return out;
}

void require_file(const std::string& path, const std::string& what) {
    if (!std::filesystem::exists(path))
        throw ConfigError(what + " not found: " + path);
}

// ---------------------------------------------------------------------------
// gabor-gen
// ---------------------------------------------------------------------------

struct GaborGenArgs {
    Index n = 0;
    std::size_t target_m = 30720;
    std::string config_path;
    std::string out;
    std::string params_out;
};

GaborGrid grid_from_args(const GaborGenArgs& args) {
    if (args.config_path.empty()) return default_gabor_grid(args.n, args.target_m);

    const ConfigFile config = read_config(args.config_path);
    config.require_known({"scales", "alphas", "frequencies", "phases", "target_m"});
    GaborGrid grid;
    grid.signal_length = args.n;
    for (double s : config.get_double_list("scales")) grid.scales.push_back(s);
    if (config.has("alphas")) {
        for (double a : config.get_double_list("alphas")) grid.alphas.push_back(a);
    } else {
        grid.alphas.assign(grid.scales.size(), 1.0);
    }
    if (config.has("frequencies")) {
        for (long f : config.get_int_list("frequencies"))
            grid.frequency_counts.push_back(static_cast<int>(f));
    } else {
        grid.frequency_counts.assign(grid.scales.size(), 1);
    }
    if (config.has("phases")) {
        grid.phases = config.get_double_list("phases");
    } else {
        grid.phases = {0.0, std::numbers::pi / 2.0};
    }
    if (grid.alphas.size() != grid.scales.size() ||
        grid.frequency_counts.size() != grid.scales.size())
        throw ConfigError("scales, alphas and frequencies must have equal lengths");
    if (config.has("target_m"))
        grid = gabor_grid_for_target(std::move(grid),
                                     static_cast<std::size_t>(config.get_int("target_m")));
    return grid;
}

int run_gabor_gen(const GaborGenArgs& args, const GlobalOptions& options) {
    const GaborGrid grid = grid_from_args(args);
    if (options.dry_run) {
        info(options, "dry-run: grid ok, M = " + std::to_string(grid.atom_count()));
        return 0;
    }
    const GaborDictionary dict = build_gabor_dictionary(grid);

    std::vector<ShiftKernel> kernels;
    kernels.reserve(static_cast<std::size_t>(dict.atom_count()));
    for (Index m = 0; m < dict.atom_count(); ++m)
        kernels.push_back(ShiftKernel{dict.atoms.col(m)});
    save_dictionary(args.out, make_dictionary(std::move(kernels)));

    if (!args.params_out.empty()) {
        std::ofstream out(args.params_out);
        if (!out) throw Error("cannot open " + args.params_out);
        out << "atom,scale,shift_index,shift_factor,frequency,phase\n";
        for (std::size_t m = 0; m < dict.params.size(); ++m) {
            const GaborParams& p = dict.params[m];
            out << m << ',' << fmt(p.scale) << ',' << p.shift_index << ','
                << fmt(p.shift_factor) << ',' << fmt(p.frequency) << ',' << fmt(p.phase)
                << '\n';
        }
    }
    info(options, "wrote " + std::to_string(dict.atom_count()) + " atoms to " + args.out);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string config_path;
    std::string reference_path;
    Index t = 65, c = 8, p = 200, n = 192;
    double sigma = 0.0, shift_mean = -1.0;
    std::string snr = "-10";
    double amp_mean = 1.0, amp_std = 0.0;
    double sample_rate = 240.0;
    double noise_decay = 0.9;
    std::string noise_taps;
    std::uint64_t seed = 0;
    std::string out, truth_out, reference_out;
};

SimulationSpec spec_from_args(SimulateArgs args) {
    if (!args.config_path.empty()) {
        const ConfigFile config = read_config(args.config_path);
        config.require_known({"t", "c", "p", "n", "sigma", "shift_mean", "snr_db", "amp_mean",
                              "amp_std", "sample_rate", "noise_decay", "noise_taps", "seed",
                              "reference"});
        args.t = config.get_int("t", args.t);
        args.c = config.get_int("c", args.c);
        args.p = config.get_int("p", args.p);
        args.n = config.get_int("n", args.n);
        args.sigma = config.get_double("sigma", args.sigma);
        args.shift_mean = config.get_double("shift_mean", args.shift_mean);
        if (config.has("snr_db")) args.snr = config.get_string("snr_db");
        args.amp_mean = config.get_double("amp_mean", args.amp_mean);
        args.amp_std = config.get_double("amp_std", args.amp_std);
        args.sample_rate = config.get_double("sample_rate", args.sample_rate);
        args.noise_decay = config.get_double("noise_decay", args.noise_decay);
        if (config.has("noise_taps")) {
            std::string taps;
            for (double v : config.get_double_list("noise_taps"))
                taps += (taps.empty() ? "" : ",") + fmt(v);
            args.noise_taps = taps;
        }
        args.seed = static_cast<std::uint64_t>(config.get_int("seed", 0));
        if (config.has("reference")) args.reference_path = config.get_string("reference");
    }

    SimulationSpec spec;
    if (!args.reference_path.empty()) {
        require_file(args.reference_path, "reference pattern");
        spec.reference = load_matrix_csv(args.reference_path);
    } else {
        spec.reference = reference_ep_pattern(args.t, args.c);
    }
    spec.trials = args.p;
    spec.epoch_length = args.n;
    spec.shift_std = args.sigma;
    spec.shift_mean = args.shift_mean >= 0.0
                          ? args.shift_mean
                          : static_cast<double>((args.n - spec.reference.rows()) / 2);
    spec.snr_db = parse_snr(args.snr);
    spec.amplitude_mean = args.amp_mean;
    spec.amplitude_std = args.amp_std;
    spec.sample_rate = args.sample_rate;
    spec.rng_seed = args.seed;
    spec.noise = FirNoiseModel::default_model(spec.reference.cols(), args.noise_decay);
    if (!args.noise_taps.empty()) {
        const std::vector<double> taps = parse_double_list(args.noise_taps);
        spec.noise.taps = Eigen::Map<const Vector>(taps.data(), static_cast<Index>(taps.size()));
    }
    return spec;
}

int run_simulate(const SimulateArgs& args, const GlobalOptions& options) {
    const SimulationSpec spec = spec_from_args(args);
    if (options.dry_run) {
        info(options, "dry-run: simulation spec ok");
        return 0;
    }
    auto [epochs, truth] = generate_trials(spec);
    save_signals(args.out, epochs);
    if (!args.truth_out.empty()) {
        std::ofstream out(args.truth_out);
        if (!out) throw Error("cannot open " + args.truth_out);
        out << "trial,shift,amplitude\n";
        for (std::size_t p = 0; p < truth.size(); ++p)
            out << p << ',' << truth[p].shift << ',' << fmt(truth[p].amplitude) << '\n';
    }
    if (!args.reference_out.empty())
        save_matrix_csv(args.reference_out, spec.reference / spec.reference.norm());
    info(options, "wrote " + std::to_string(epochs.count()) + " trials to " + args.out);
    return 0;
}

// ---------------------------------------------------------------------------
// learn
// ---------------------------------------------------------------------------

struct LearnArgs {
    std::string input;
    Index epoch_length = 0;
    Index l = 1;
    int iters = 10;
    Index k = 1;
    Index ti = 0, tm = 0;
    Index fixed_t = 0;
    Index extension = 40;
    double eta0 = 0.1;
    Index interval_center = -1, interval_halfwidth = 0;
    bool skip_edge = false;
    std::uint64_t seed = 0;
    std::string out, trace_out;
};

int run_learn(const LearnArgs& args, const GlobalOptions& options) {
    require_file(args.input, "input signal file");
    LearnConfig config;
    config.kernel_count = args.l;
    config.iterations = args.iters;
    config.sparsity = args.k;
    if (args.fixed_t > 0) {
        config.initial_length = args.fixed_t;
        config.limit_length = args.fixed_t;
        config.adapt_lengths = false;
    } else {
        if (args.ti < 1 || args.tm < 1)
            throw ConfigError("learn requires --ti and --tm (or --t for a fixed length)");
        config.initial_length = args.ti;
        config.limit_length = args.tm;
    }
    config.length_extension = args.extension;
    config.eta0 = args.eta0;
    config.rng_seed = args.seed;
    if (args.interval_center >= 0) {
        config.shift_interval = ShiftInterval{args.interval_center, args.interval_halfwidth};
        config.skip_edge_updates = args.skip_edge;
    }
    if (options.dry_run) {
        info(options, "dry-run: learn config ok");
        return 0;
    }

    const EpochSet epochs = load_epochs(args.input, args.epoch_length);
    auto [dict, trace] = mdla_train(epochs, config);
    save_dictionary(args.out, dict);

    if (!args.trace_out.empty()) {
        std::ofstream out(args.trace_out);
        if (!out) throw Error("cannot open " + args.trace_out);
        out << "pass,mean_residual";
        for (Index l = 0; l < dict.size(); ++l) out << ",usage_" << l;
        out << '\n';
        for (std::size_t pass = 0; pass < trace.mean_residual_norm.size(); ++pass) {
            out << (pass + 1) << ',' << fmt(trace.mean_residual_norm[pass]);
            for (Index usage : trace.kernel_usage[pass]) out << ',' << usage;
            out << '\n';
        }
    }
    info(options, "learned " + std::to_string(dict.size()) + " kernels -> " + args.out);
    return 0;
}

// ---------------------------------------------------------------------------
// decompose & rho-curve
// ---------------------------------------------------------------------------

struct DictSource {
    std::string dict_path;
    std::string gabor_config;
    std::size_t gabor_target_m = 0;
};

struct AtomTables {
    std::optional<KernelDictionary> kernels;
    std::optional<Matrix> real_atoms;
    std::optional<ComplexMatrix> complex_atoms;
};

AtomTables resolve_dictionary(const DictSource& source, Variant variant, Index n) {
    AtomTables tables;
    const bool needs_complex = variant == Variant::MMP3 || variant == Variant::MMP4;
    const bool needs_table = variant != Variant::MOMP;

    if (!source.dict_path.empty()) {
        if (needs_complex)
            throw ConfigError("MMP3/MMP4 need --gabor-config (analytic atoms are parametric)");
        require_file(source.dict_path, "dictionary");
        KernelDictionary dict = load_dictionary(source.dict_path);
        if (!needs_table) {
            tables.kernels = std::move(dict);
            return tables;
        }
        if (dict.channels() != 1)
            throw ConfigError("atom-table variants need a monochannel dictionary");
        Matrix atoms(n, dict.size());
        for (Index m = 0; m < dict.size(); ++m) {
            const auto& k = dict.kernels[static_cast<std::size_t>(m)];
            if (k.length() != n)
                throw ConfigError("atom-table variants need atoms of the signal length");
            atoms.col(m) = k.waveform.col(0);
        }
        tables.real_atoms = std::move(atoms);
        return tables;
    }

    if (source.gabor_config.empty() && source.gabor_target_m == 0)
        throw ConfigError("provide --dict or --gabor-config/--gabor-target-m");
    if (variant == Variant::MOMP)
        throw ConfigError("momp runs on a kernel dictionary; use --dict");

    GaborGenArgs gen;
    gen.n = n;
    gen.config_path = source.gabor_config;
    gen.target_m = source.gabor_target_m > 0 ? source.gabor_target_m : 30720;
    const GaborGrid grid = grid_from_args(gen);
    if (needs_complex)
        tables.complex_atoms = build_complex_gabor_dictionary(grid).atoms;
    else
        tables.real_atoms = build_gabor_dictionary(grid).atoms;
    return tables;
}

struct DecomposeArgs {
    std::string input;
    Index epoch_length = 0;
    DictSource dict;
    std::string variant = "momp";
    Index k = 1;
    double tolerance = 0.0;
    std::string code_out, residual_out;
};

int run_decompose(const DecomposeArgs& args, const GlobalOptions& options) {
    require_file(args.input, "input signal file");
    const Variant variant = variant_from_string(args.variant);
    if (options.dry_run) {
        info(options, "dry-run: decompose config ok");
        return 0;
    }
    const EpochSet epochs = load_epochs(args.input, args.epoch_length);
    const AtomTables tables = resolve_dictionary(args.dict, variant, epochs.length());

    PursuitConfig config;
    config.variant = variant;
    config.sparsity = args.k;
    config.residual_tolerance = args.tolerance;

    std::ofstream code_out;
    if (!args.code_out.empty()) {
        code_out.open(args.code_out);
        if (!code_out) throw Error("cannot open " + args.code_out);
        if (variant == Variant::MOMP)
            code_out << "trial,kernel,shift,coefficient\n";
        else
            code_out << "trial,atom,channel,amplitude,phase\n";
    }

    std::vector<Matrix> residuals;
    residuals.reserve(static_cast<std::size_t>(epochs.count()));
    for (Index p = 0; p < epochs.count(); ++p) {
        const Matrix& y = epochs.epochs[static_cast<std::size_t>(p)];
        DecompositionResult res;
        if (variant == Variant::MOMP) {
            res = momp_decompose(y, *tables.kernels, config);
            if (code_out.is_open())
                for (const auto& e : res.code.entries)
                    code_out << p << ',' << e.kernel << ',' << e.shift << ','
                             << fmt(e.coefficient) << '\n';
        } else if (tables.real_atoms) {
            res = decompose(y, *tables.real_atoms, config);
        } else {
            res = decompose(y, *tables.complex_atoms, config);
        }
        if (code_out.is_open() && variant != Variant::MOMP) {
            for (const auto& e : res.channel_code.entries)
                for (Index c = 0; c < e.amplitudes.size(); ++c)
                    code_out << p << ',' << e.atom << ',' << c << ',' << fmt(e.amplitudes[c])
                             << ',' << fmt(e.phases[c]) << '\n';
        }
        residuals.push_back(std::move(res.residual));
    }

    if (!args.residual_out.empty())
        save_signals(args.residual_out, EpochSet{residuals, epochs.sample_rate});

    std::cout << "rho " << fmt(reconstruction_rate(epochs, residuals)) << "\n";
    return 0;
}

struct RhoCurveArgs {
    std::string input;
    Index epoch_length = 0;
    DictSource dict;
    std::string variant = "momp";
    std::string k_list = "1,2,4,8";
    std::string dataset = "dataset";
    std::string out, json_out;
};

int run_rho_curve(const RhoCurveArgs& args, const GlobalOptions& options) {
    require_file(args.input, "input signal file");
    const Variant variant = variant_from_string(args.variant);
    const std::vector<Index> ks = parse_index_list(args.k_list);
    if (options.dry_run) {
        info(options, "dry-run: rho-curve config ok");
        return 0;
    }
    const EpochSet epochs = load_epochs(args.input, args.epoch_length);
    const AtomTables tables = resolve_dictionary(args.dict, variant, epochs.length());

    RhoCurve curve;
    if (variant == Variant::MOMP)
        curve = rho_curve(epochs, *tables.kernels, ks);
    else if (tables.real_atoms)
        curve = rho_curve(epochs, *tables.real_atoms, variant, ks);
    else
        curve = rho_curve(epochs, *tables.complex_atoms, variant, ks);
    curve.dataset = args.dataset;

    if (!args.out.empty()) {
        std::ofstream out(args.out);
        if (!out) throw Error("cannot open " + args.out);
        out << "K,rho,method,dataset\n";
        for (std::size_t i = 0; i < curve.rho.size(); ++i)
            out << curve.k_values[i] << ',' << fmt(curve.rho[i]) << ',' << curve.method << ','
                << curve.dataset << '\n';
    }
    if (!args.json_out.empty()) {
        nlohmann::json j;
        j["method"] = curve.method;
        j["dataset"] = curve.dataset;
        j["k"] = curve.k_values;
        j["rho"] = curve.rho;
        std::ofstream out(args.json_out);
        if (!out) throw Error("cannot open " + args.json_out);
        out << j.dump(2) << '\n';
    }
    for (std::size_t i = 0; i < curve.rho.size(); ++i)
        std::cout << "K=" << curve.k_values[i] << " rho=" << fmt(curve.rho[i]) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// estimate-ep
// ---------------------------------------------------------------------------

struct EstimateArgs {
    std::string method = "ga";
    std::string input;
    Index epoch_length = 0;
    Index t = 65;
    double center_ms = 300.0;
    Index halfwidth = 4;
    int iters = 20;
    double eta0 = 0.02;
    std::uint64_t seed = 0;
    bool average_reference = false;
    Index truncate_to = 0;
    std::string reference_path;
    std::string out, spatial_out;
};

int run_estimate_ep(const EstimateArgs& args, const GlobalOptions& options) {
    require_file(args.input, "input signal file");
    if (args.method != "ga" && args.method != "ls" && args.method != "mdla")
        throw ConfigError("method must be one of ga, ls, mdla");
    if (options.dry_run) {
        info(options, "dry-run: estimate-ep config ok");
        return 0;
    }

    EvokedPattern pattern;
    if (args.method == "ls") {
        LoadedSignals loaded = load_signals(args.input);
        if (!std::holds_alternative<ContinuousRecord>(loaded))
            throw ConfigError("ls needs a continuous record with onsets");
        ContinuousRecord record = std::get<ContinuousRecord>(std::move(loaded));
        if (args.epoch_length < 1) throw ConfigError("ls requires --epoch-length");
        if (args.average_reference) record.samples = to_average_reference(record.samples);
        pattern = ls_estimate(record, args.epoch_length);
    } else {
        EpochSet epochs = load_epochs(args.input, args.epoch_length);
        if (args.average_reference)
            for (Matrix& e : epochs.epochs) e = to_average_reference(e);
        if (args.method == "ga") {
            pattern = grand_average(epochs);
        } else {
            const EvokedPattern init = grand_average(epochs);
            pattern = learn_ep_kernel(epochs, init, args.t, args.center_ms, args.halfwidth,
                                      args.iters, args.eta0, args.seed);
        }
    }

    EvokedPattern exported = pattern;
    if (args.truncate_to > 0 && args.method != "mdla")
        exported = truncate_and_normalize(pattern, args.truncate_to);

    if (!args.out.empty()) save_matrix_csv(args.out, exported.waveform);
    if (!args.spatial_out.empty()) {
        const Vector spatial = spatial_pattern(exported);
        Matrix row(1, spatial.size());
        row.row(0) = spatial.transpose();
        save_matrix_csv(args.spatial_out, row);
    }
    if (!args.reference_path.empty()) {
        require_file(args.reference_path, "reference pattern");
        const Matrix reference = load_matrix_csv(args.reference_path);
        std::cout << "correlation " << fmt(max_correlation(exported.waveform, reference))
                  << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// preprocess
// ---------------------------------------------------------------------------

struct PreprocessArgs {
    std::string input;
    double low = 0.0, high = 0.0;
    int order = 3;
    bool zero_phase = false;
    Index pad_front = 0, pad_back = 0;
    std::string out;
};

int run_preprocess(const PreprocessArgs& args, const GlobalOptions& options) {
    require_file(args.input, "input signal file");
    const bool filtering = args.low > 0.0 || args.high > 0.0;
    if (filtering && !(args.low > 0.0 && args.high > args.low))
        throw ConfigError("bandpass needs --low and --high with 0 < low < high");
    if (options.dry_run) {
        info(options, "dry-run: preprocess config ok");
        return 0;
    }

    const FilterSpec spec{args.low, args.high, args.order};
    const auto transform = [&](Matrix samples, double rate) {
        MultivariateSignal signal{std::move(samples), rate};
        if (filtering) signal = butterworth_bandpass(signal, spec, args.zero_phase);
        if (args.pad_front > 0 || args.pad_back > 0)
            signal = zero_pad(signal, args.pad_front, args.pad_back);
        return signal.samples;
    };

    LoadedSignals loaded = load_signals(args.input);
    if (std::holds_alternative<EpochSet>(loaded)) {
        EpochSet epochs = std::get<EpochSet>(std::move(loaded));
        for (Matrix& e : epochs.epochs) e = transform(std::move(e), epochs.sample_rate);
        save_signals(args.out, epochs);
        info(options, "preprocessed " + std::to_string(epochs.count()) + " epochs -> " +
                          args.out);
    } else {
        ContinuousRecord record = std::get<ContinuousRecord>(std::move(loaded));
        record.samples = transform(std::move(record.samples), record.sample_rate);
        // front padding moves every onset
        for (Index& t : record.onsets) t += args.pad_front;
        save_signals(args.out, record);
        info(options, "preprocessed record -> " + args.out);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// fig8
// ---------------------------------------------------------------------------

struct Fig8Args {
    std::string sigmas = "0,2,4,6,8";
    int reps = 10;
    Index p = 200;
    std::string snr = "-10";
    Index t = 65, c = 8, n = 192;
    int iters = 20;
    double eta0 = 0.02;
    double noise_decay = 0.5;
    std::string noise_taps = "0.25,0.5,0.25";
    std::uint64_t seed = 0;
    std::string out;
};

int run_fig8(const Fig8Args& args, const GlobalOptions& options) {
    SweepConfig config;
    config.sigmas = parse_double_list(args.sigmas);
    config.repetitions = args.reps;
    config.trials = args.p;
    config.snr_db = parse_snr(args.snr);
    config.pattern_length = args.t;
    config.channels = args.c;
    config.epoch_length = args.n;
    config.iterations = args.iters;
    config.eta0 = args.eta0;
    config.noise_spatial_decay = args.noise_decay;
    config.noise_taps = parse_double_list(args.noise_taps);
    config.seed = args.seed;
    if (options.dry_run) {
        info(options, "dry-run: fig8 config ok");
        return 0;
    }

    const std::vector<SweepRow> rows = shift_robustness_sweep(config);
    std::ofstream out(args.out);
    if (!out) throw Error("cannot open " + args.out);
    out << "method,sigma,mean_correlation\n";
    for (const SweepRow& row : rows)
        out << "ga," << fmt(row.sigma) << ',' << fmt(row.mean_ga) << '\n';
    for (const SweepRow& row : rows)
        out << "mdla," << fmt(row.sigma) << ',' << fmt(row.mean_mdla) << '\n';
    for (const SweepRow& row : rows)
        info(options, "sigma=" + fmt(row.sigma) + " ga=" + fmt(row.mean_ga) +
                          " mdla=" + fmt(row.mean_mdla));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mvdict: shift-invariant multivariate sparse coding and dictionary learning"};
    app.require_subcommand(1);

    GlobalOptions options;
    app.add_option("--threads", options.threads,
                   "cap worker threads (default: cores; env MVDICT_THREADS)");
    app.add_flag("--dry-run", options.dry_run, "validate the configuration and exit");
    app.add_flag("--quiet", options.quiet, "suppress progress output");

    GaborGenArgs gabor;
    CLI::App* gabor_cmd = app.add_subcommand("gabor-gen", "build a Gabor dictionary file");
    gabor_cmd->add_option("--n", gabor.n, "signal length in samples")->required();
    gabor_cmd->add_option("--target-m", gabor.target_m, "requested atom count");
    gabor_cmd->add_option("--config", gabor.config_path, "grid config file");
    gabor_cmd->add_option("--out", gabor.out, "output dictionary (MVDK1)")->required();
    gabor_cmd->add_option("--params-out", gabor.params_out, "atom parameter table CSV");

    SimulateArgs sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "generate synthetic trials");
    sim_cmd->add_option("--config", sim.config_path, "simulation spec file");
    sim_cmd->add_option("--reference", sim.reference_path, "reference pattern CSV (T x C)");
    sim_cmd->add_option("--t", sim.t, "built-in reference length");
    sim_cmd->add_option("--c", sim.c, "built-in reference channels");
    sim_cmd->add_option("--p", sim.p, "trial count");
    sim_cmd->add_option("--n", sim.n, "epoch length");
    sim_cmd->add_option("--sigma", sim.sigma, "shift standard deviation (samples)");
    sim_cmd->add_option("--shift-mean", sim.shift_mean, "mean shift (default: centered)");
    sim_cmd->add_option("--snr", sim.snr, "SNR in dB, or 'inf'");
    sim_cmd->add_option("--amp-mean", sim.amp_mean, "amplitude mean");
    sim_cmd->add_option("--amp-std", sim.amp_std, "amplitude std");
    sim_cmd->add_option("--sample-rate", sim.sample_rate, "samples per second");
    sim_cmd->add_option("--noise-decay", sim.noise_decay, "spatial mixing decay");
    sim_cmd->add_option("--noise-taps", sim.noise_taps, "temporal FIR taps, comma separated");
    sim_cmd->add_option("--seed", sim.seed, "rng seed");
    sim_cmd->add_option("--out", sim.out, "output trials (MVSG1)")->required();
    sim_cmd->add_option("--truth-out", sim.truth_out, "ground truth CSV");
    sim_cmd->add_option("--reference-out", sim.reference_out, "normalized reference CSV");

    LearnArgs learn;
    CLI::App* learn_cmd = app.add_subcommand("learn", "online multivariate dictionary learning");
    learn_cmd->add_option("--input", learn.input, "training epochs (MVSG1)")->required();
    learn_cmd->add_option("--epoch-length", learn.epoch_length,
                          "epoch length when the input is a continuous record");
    learn_cmd->add_option("--l", learn.l, "kernel count");
    learn_cmd->add_option("--iters", learn.iters, "training passes");
    learn_cmd->add_option("--k", learn.k, "sparsity per trial");
    learn_cmd->add_option("--ti", learn.ti, "initial kernel length");
    learn_cmd->add_option("--tm", learn.tm, "kernel length border");
    learn_cmd->add_option("--t", learn.fixed_t, "fixed kernel length (disables adaptation)");
    learn_cmd->add_option("--extension", learn.extension, "late-pass border extension");
    learn_cmd->add_option("--eta0", learn.eta0, "initial step size");
    learn_cmd->add_option("--interval-center", learn.interval_center,
                          "shift search center (samples)");
    learn_cmd->add_option("--interval-halfwidth", learn.interval_halfwidth,
                          "shift search halfwidth (samples)");
    learn_cmd->add_flag("--skip-edge-updates", learn.skip_edge,
                        "skip updates whose best shift sits on the interval edge");
    learn_cmd->add_option("--seed", learn.seed, "rng seed");
    learn_cmd->add_option("--out", learn.out, "output dictionary (MVDK1)")->required();
    learn_cmd->add_option("--trace", learn.trace_out, "training trace CSV");

    DecomposeArgs dec;
    CLI::App* dec_cmd = app.add_subcommand("decompose", "sparse-approximate signals");
    dec_cmd->add_option("--input", dec.input, "signals (MVSG1)")->required();
    dec_cmd->add_option("--epoch-length", dec.epoch_length, "epoch length for records");
    dec_cmd->add_option("--dict", dec.dict.dict_path, "kernel dictionary (MVDK1)");
    dec_cmd->add_option("--gabor-config", dec.dict.gabor_config, "gabor grid config");
    dec_cmd->add_option("--gabor-target-m", dec.dict.gabor_target_m,
                        "default gabor grid with this atom count");
    dec_cmd->add_option("--variant", dec.variant, "mp|omp|mmp1..mmp4|momp");
    dec_cmd->add_option("--k", dec.k, "sparsity");
    dec_cmd->add_option("--tolerance", dec.tolerance, "relative residual early stop");
    dec_cmd->add_option("--out-code", dec.code_out, "sparse code CSV");
    dec_cmd->add_option("--out-residual", dec.residual_out, "residuals (MVSG1)");

    RhoCurveArgs rho;
    CLI::App* rho_cmd = app.add_subcommand("rho-curve", "reconstruction rate vs sparsity");
    rho_cmd->add_option("--input", rho.input, "signals (MVSG1)")->required();
    rho_cmd->add_option("--epoch-length", rho.epoch_length, "epoch length for records");
    rho_cmd->add_option("--dict", rho.dict.dict_path, "kernel dictionary (MVDK1)");
    rho_cmd->add_option("--gabor-config", rho.dict.gabor_config, "gabor grid config");
    rho_cmd->add_option("--gabor-target-m", rho.dict.gabor_target_m,
                        "default gabor grid with this atom count");
    rho_cmd->add_option("--variant", rho.variant, "mp|omp|mmp1..mmp4|momp");
    rho_cmd->add_option("--k-list", rho.k_list, "sorted sparsities, comma separated");
    rho_cmd->add_option("--dataset", rho.dataset, "dataset id for the output table");
    rho_cmd->add_option("--out", rho.out, "curve CSV");
    rho_cmd->add_option("--json", rho.json_out, "curve JSON");

    EstimateArgs est;
    CLI::App* est_cmd = app.add_subcommand("estimate-ep", "evoked-potential estimation");
    est_cmd->add_option("--method", est.method, "ga | ls | mdla");
    est_cmd->add_option("--input", est.input, "signals (MVSG1)")->required();
    est_cmd->add_option("--epoch-length", est.epoch_length, "epoch length for records");
    est_cmd->add_option("--t", est.t, "kernel length (mdla) / truncation length");
    est_cmd->add_option("--center-ms", est.center_ms, "kernel center after stimulus, ms");
    est_cmd->add_option("--halfwidth", est.halfwidth, "shift interval halfwidth, points");
    est_cmd->add_option("--iters", est.iters, "learning passes (mdla)");
    est_cmd->add_option("--eta0", est.eta0, "initial step size (mdla)");
    est_cmd->add_option("--seed", est.seed, "rng seed (mdla)");
    est_cmd->add_flag("--average-reference", est.average_reference,
                      "re-reference channels to their mean first");
    est_cmd->add_option("--truncate-to", est.truncate_to,
                        "truncate + normalize GA/LS patterns to this length");
    est_cmd->add_option("--reference", est.reference_path,
                        "reference CSV; prints the max correlation");
    est_cmd->add_option("--out", est.out, "pattern CSV");
    est_cmd->add_option("--spatial-out", est.spatial_out, "spatial pattern CSV");

    PreprocessArgs pre;
    CLI::App* pre_cmd = app.add_subcommand("preprocess", "bandpass filter and zero-pad signals");
    pre_cmd->add_option("--input", pre.input, "signals (MVSG1)")->required();
    pre_cmd->add_option("--low", pre.low, "bandpass low edge, Hz");
    pre_cmd->add_option("--high", pre.high, "bandpass high edge, Hz");
    pre_cmd->add_option("--order", pre.order, "Butterworth order");
    pre_cmd->add_flag("--zero-phase", pre.zero_phase, "forward-backward filtering");
    pre_cmd->add_option("--pad-front", pre.pad_front, "zero rows prepended");
    pre_cmd->add_option("--pad-back", pre.pad_back, "zero rows appended");
    pre_cmd->add_option("--out", pre.out, "output signals (MVSG1)")->required();

    Fig8Args fig8;
    CLI::App* fig8_cmd = app.add_subcommand("fig8", "GA vs M-DLA shift-robustness sweep");
    fig8_cmd->add_option("--sigmas", fig8.sigmas, "shift stds, comma separated");
    fig8_cmd->add_option("--reps", fig8.reps, "repetitions per sigma");
    fig8_cmd->add_option("--p", fig8.p, "trials per repetition");
    fig8_cmd->add_option("--snr", fig8.snr, "SNR in dB");
    fig8_cmd->add_option("--t", fig8.t, "pattern length");
    fig8_cmd->add_option("--c", fig8.c, "channels");
    fig8_cmd->add_option("--n", fig8.n, "epoch length");
    fig8_cmd->add_option("--iters", fig8.iters, "learning passes");
    fig8_cmd->add_option("--eta0", fig8.eta0, "initial step size");
    fig8_cmd->add_option("--noise-decay", fig8.noise_decay, "spatial mixing decay");
    fig8_cmd->add_option("--noise-taps", fig8.noise_taps, "temporal FIR taps");
    fig8_cmd->add_option("--seed", fig8.seed, "rng seed");
    fig8_cmd->add_option("--out", fig8.out, "sweep CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    }

    try {
        apply_threads(options);
        if (gabor_cmd->parsed()) return run_gabor_gen(gabor, options);
        if (sim_cmd->parsed()) return run_simulate(sim, options);
        if (learn_cmd->parsed()) return run_learn(learn, options);
        if (dec_cmd->parsed()) return run_decompose(dec, options);
        if (rho_cmd->parsed()) return run_rho_curve(rho, options);
        if (est_cmd->parsed()) return run_estimate_ep(est, options);
        if (pre_cmd->parsed()) return run_preprocess(pre, options);
        if (fig8_cmd->parsed()) return run_fig8(fig8, options);
        std::cerr << "error: config: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << "\n";
        return 1;
    }
}
