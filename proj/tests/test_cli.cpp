#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string kCli = PARAMGUIDE_CLI_PATH;
const std::string kConfigs = PARAMGUIDE_CONFIG_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pg_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
    std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string& header) {
    std::ifstream f(p);
    std::getline(f, header);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        std::vector<double> r;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) r.push_back(std::stod(cell));
        rows.push_back(r);
    }
    return rows;
}

std::string cfg(const char* name) { return "\"" + kConfigs + "/" + name + "\""; }

} // namespace

TEST_CASE("spectrum output is byte-identical and has a manifest") {
    TempDir t;
    auto a = t.path / "a" / "s.csv", b = t.path / "b" / "s.csv";
    REQUIRE(run("spectrum --config " + cfg("gasb_device.json") + " --out " + a.string()) == 0);
    REQUIRE(run("spectrum --config " + cfg("gasb_device.json") + " --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    std::string header;
    auto rows = read_csv(a, header);
    CHECK(header == "nu_thz,signal_density,noise_te_density,noise_tm_density");
    CHECK(rows.size() == 2001);
    auto m = nlohmann::json::parse(slurp(t.path / "a" / "manifest.json"));
    CHECK(m["subcommand"] == "spectrum");
    CHECK(m["config_hash"].get<std::string>().size() == 64);
    CHECK(m["flags"]["--samples"] == "2001");
    CHECK(m["artifact_paths"].size() == 1);
    auto mb = nlohmann::json::parse(slurp(t.path / "b" / "manifest.json"));
    CHECK(m["config_hash"] == mb["config_hash"]);
    // 17 significant digits
    std::string first = slurp(a).substr(header.size() + 1, 40);
    CHECK(first.find("e+") != std::string::npos);
}

TEST_CASE("spectrum side lobes sit where the phase mismatch predicts") {
    TempDir t;
    auto out = t.path / "s.csv";
    REQUIRE(run("spectrum --config " + cfg("gasb_device_lossless.json") +
                " --length-cm 0.1 --samples 4001 --out " + out.string()) == 0);
    std::string header;
    auto rows = read_csv(out, header);
    size_t ip = 0;
    for (size_t i = 0; i < rows.size(); ++i)
        if (rows[i][1] > rows[ip][1]) ip = i;
    CHECK(std::abs(rows[ip][0]) < 0.05);
    size_t k = ip;
    while (k + 1 < rows.size() && rows[k + 1][1] < rows[k][1]) ++k;
    double null_thz = rows[k][0];
    double expected = 1e-12 / (0.1 * (1 / 8.24e9 - 1 / 8.34e9));  // |D| L = 2 pi
    CHECK(null_thz == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("sweep reproduces the 1/L bandwidth law") {
    TempDir t;
    auto dir = t.path / "sw";
    REQUIRE(run("sweep --config " + cfg("gasb_device_lossless.json") +
                " --lengths 0.05,0.2,1.0 --out-dir " + dir.string()) == 0);
    std::vector<double> widths;
    for (const char* name : {"spectrum_L0.05cm.csv", "spectrum_L0.2cm.csv", "spectrum_L1cm.csv"}) {
        std::string header;
        auto rows = read_csv(dir / name, header);
        size_t ip = 0;
        for (size_t i = 0; i < rows.size(); ++i)
            if (rows[i][1] > rows[ip][1]) ip = i;
        double half = 0.5 * rows[ip][1];
        size_t a = ip, b = ip;
        while (a > 0 && rows[a][1] > half) --a;
        while (b + 1 < rows.size() && rows[b][1] > half) ++b;
        widths.push_back(rows[b][0] - rows[a][0]);
    }
    CHECK(widths[0] / widths[1] == doctest::Approx(4.0).epsilon(0.03));
    CHECK(widths[0] / widths[2] == doctest::Approx(20.0).epsilon(0.1));
    CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("other subcommands write their artifacts") {
    TempDir t;
    CHECK(run("correlation --config " + cfg("gasb_device.json") + " --samples 3 --out " +
              (t.path / "c" / "c.csv").string()) == 0);
    std::string header;
    auto rows = read_csv(t.path / "c" / "c.csv", header);
    CHECK(header == "tau_ps,theta,K,D_te,D_tm");
    CHECK(rows.size() == 3);
    CHECK(run("qpump --config " + cfg("gasb_qpump.json") + " --mode n-band --steps 10 --out " +
              (t.path / "q" / "q.csv").string()) == 0);
    rows = read_csv(t.path / "q" / "q.csv", header);
    CHECK(header == "z_cm,abs_cp_sq,sum_cw_sq,cw_re_0,cw_re_1,cw_im_0,cw_im_1");
    for (auto& r : rows) CHECK(r[1] + r[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(run("qpump --config " + cfg("gasb_qpump.json") + " --mode asymptotic --out " +
              (t.path / "q" / "a.csv").string()) == 0);
    CHECK(run("ivp --m-abs 1e-27 --m-arg 0.2 --t-int-s 5e-2 --out " + (t.path / "i" / "i.json").string()) == 0);
    auto j = nlohmann::json::parse(slurp(t.path / "i" / "i.json"));
    CHECK(j["amplitudes"].size() == 61);
    CHECK(j["leak"].get<double>() < 1e-9);
}

TEST_CASE("exit codes") {
    TempDir t;
    CHECK(run("spectrum --config " + cfg("gasb_device.json") + " --bogus 1") == 2);
    CHECK(run("nosuchcommand") == 2);
    auto bad = t.path / "bad.json";
    std::ofstream(bad) << "{\"modes\": ";
    CHECK(run("spectrum --config " + bad.string()) == 2);
    auto unk = t.path / "unk.json";
    std::string text = slurp(kConfigs + "/gasb_device.json");
    std::string u = text;
    u.replace(u.find("dk_per_cm"), 9, "dk_per_mm");
    std::ofstream(unk) << u;
    CHECK(run("spectrum --config " + unk.string()) == 2);
    auto neg = t.path / "neg.json";
    std::string n = text;
    n.replace(n.find("\"length_cm\": 0.1"), 16, "\"length_cm\": -0.1");
    std::ofstream(neg) << n;
    CHECK(run("spectrum --config " + neg.string()) == 2);
    CHECK(run("spectrum --config " + (t.path / "missing.json").string()) == 2);
    // truncation failure is a numerical-accuracy failure
    CHECK(run("ivp --m-abs 1e-26 --t-int-s 1 --nmax 10 --out " + (t.path / "x.json").string()) == 3);
}
