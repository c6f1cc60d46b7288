#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <mvdict/io.hpp>
#include <mvdict/ops.hpp>
#include <mvdict/simulate.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;  // path to the mvdict binary, from argv[1]

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = g_cli + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file;
    cmd += " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_value(const fs::path& stdout_file, const std::string& key) {
    std::ifstream in(stdout_file);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + " ", 0) == 0) return std::stod(line.substr(key.size() + 1));
    }
    throw std::runtime_error("no '" + key + "' line in output");
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("mvdict_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("simulate then estimate-ep ga reaches 0.95 at sigma 0") {
    TempDir dir;
    const std::string trials = (dir.path / "tr.mvsg").string();
    const std::string ref = (dir.path / "ref.csv").string();
    REQUIRE(run("simulate --t 30 --c 4 --p 300 --n 96 --sigma 0 --snr -10 --seed 5 --out " +
                trials + " --reference-out " + ref) == 0);
    const fs::path out = dir.path / "ga.txt";
    REQUIRE(run("estimate-ep --method ga --input " + trials + " --truncate-to 30 --reference " +
                ref, out.string()) == 0);
    CHECK(parse_value(out, "correlation") >= 0.95);
}

TEST_CASE("decompose momp k=1 recovers a one-atom trial exactly") {
    using namespace mvdict;
    TempDir dir;
    // Exact dictionary: the simulation reference itself.
    const Matrix reference = reference_ep_pattern(24, 3);
    const fs::path dict_file = dir.path / "exact.mvdk";
    save_dictionary(dict_file, make_dictionary({normalized_kernel(reference)}));

    const std::string trials = (dir.path / "one.mvsg").string();
    REQUIRE(run("simulate --t 24 --c 3 --p 10 --n 80 --sigma 3 --snr inf --seed 8 --out " +
                trials) == 0);
    const fs::path out = dir.path / "rho.txt";
    REQUIRE(run("decompose --input " + trials + " --dict " + dict_file.string() +
                " --variant momp --k 1", out.string()) == 0);
    CHECK(parse_value(out, "rho") >= 1.0 - 1e-6);
}

TEST_CASE("fig8 emits 2 methods x sigma rows") {
    TempDir dir;
    const fs::path csv = dir.path / "fig8.csv";
    REQUIRE(run("--quiet fig8 --sigmas 0,2,4,6,8 --reps 2 --p 24 --n 96 --t 33 --c 3 "
                "--iters 4 --seed 2 --out " + csv.string()) == 0);
    std::ifstream in(csv);
    std::string line;
    int rows = 0, ga_rows = 0, mdla_rows = 0;
    std::getline(in, line);
    CHECK(line == "method,sigma,mean_correlation");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        if (line.rfind("ga,", 0) == 0) ++ga_rows;
        if (line.rfind("mdla,", 0) == 0) ++mdla_rows;
    }
    CHECK(rows == 10);
    CHECK(ga_rows == 5);
    CHECK(mdla_rows == 5);
}

TEST_CASE("learn and simulate are bit-identical across reruns") {
    TempDir dir;
    const std::string t1 = (dir.path / "a.mvsg").string();
    const std::string t2 = (dir.path / "b.mvsg").string();
    const std::string sim_args =
        " --t 16 --c 3 --p 24 --n 64 --sigma 2 --snr -5 --seed 11 --out ";
    REQUIRE(run("simulate" + sim_args + t1) == 0);
    REQUIRE(run("simulate" + sim_args + t2) == 0);
    CHECK(slurp(t1) == slurp(t2));

    const std::string d1 = (dir.path / "a.mvdk").string();
    const std::string d2 = (dir.path / "b.mvdk").string();
    const std::string learn_args =
        " --l 3 --iters 6 --k 2 --ti 8 --tm 14 --seed 21 --input " + t1 + " --out ";
    REQUIRE(run("learn" + learn_args + d1) == 0);
    REQUIRE(run("learn" + learn_args + d2) == 0);
    CHECK(slurp(d1) == slurp(d2));
}

TEST_CASE("thread count does not change fig8 results") {
    TempDir dir;
    const fs::path one = dir.path / "one.csv";
    const fs::path many = dir.path / "many.csv";
    const std::string base =
        "fig8 --sigmas 0,3 --reps 2 --p 20 --n 80 --t 25 --c 3 --iters 3 --seed 5 --out ";
    REQUIRE(run("--quiet --threads 1 " + base + one.string()) == 0);
    REQUIRE(run("--quiet --threads 4 " + base + many.string()) == 0);
    CHECK(slurp(one) == slurp(many));
}

TEST_CASE("preprocess filters and pads while keeping the shape bookkeeping") {
    TempDir dir;
    const std::string trials = (dir.path / "raw.mvsg").string();
    REQUIRE(run("simulate --t 16 --c 2 --p 6 --n 64 --snr -3 --sample-rate 250 --seed 4 "
                "--out " + trials) == 0);
    const std::string cooked = (dir.path / "cooked.mvsg").string();
    REQUIRE(run("preprocess --input " + trials +
                " --low 8 --high 30 --order 3 --pad-front 5 --pad-back 3 --out " + cooked) == 0);
    const auto loaded = mvdict::load_signals(cooked);
    const auto& epochs = std::get<mvdict::EpochSet>(loaded);
    CHECK(epochs.count() == 6);
    CHECK(epochs.length() == 72);
    CHECK(run("preprocess --input " + trials + " --low 30 --high 8 --out " + cooked) == 2);
}

TEST_CASE("exit codes: dry-run 0, config errors 2, runtime errors 1") {
    TempDir dir;
    CHECK(run("--dry-run fig8 --sigmas 0 --reps 1 --out " + (dir.path / "x.csv").string()) == 0);
    CHECK(run("fig8") == 2);                   // missing --out
    CHECK(run("--bogus-flag fig8 --out x") == 2);
    CHECK(run("nonsense-subcommand") == 2);
    CHECK(run("decompose --input missing.mvsg --dict missing.mvdk") == 2);

    // Corrupt payload: parses as config-complete, fails at runtime.
    const fs::path broken = dir.path / "broken.mvsg";
    {
        const std::string trials = (dir.path / "ok.mvsg").string();
        REQUIRE(run("simulate --t 8 --c 2 --p 4 --n 32 --out " + trials) == 0);
        std::string bytes = slurp(trials);
        bytes.resize(bytes.size() - 32);
        std::ofstream(broken, std::ios::binary) << bytes;
    }
    const fs::path dict = dir.path / "d.mvdk";
    {
        using namespace mvdict;
        save_dictionary(dict, make_dictionary({normalized_kernel(reference_ep_pattern(8, 2))}));
    }
    CHECK(run("decompose --input " + broken.string() + " --dict " + dict.string()) == 1);
}

int main(int argc, char** argv) {
    doctest::Context context;
    if (argc > 1 && argv[1][0] != '-') {
        g_cli = argv[1];
        context.applyCommandLine(argc - 1, argv + 1);
    } else {
        context.applyCommandLine(argc, argv);
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-mvdict-binary> [doctest args]\n");
        return 1;
    }
    return context.run();
}
