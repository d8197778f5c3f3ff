#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "carroll_app.hpp"

namespace fs = std::filesystem;
using carroll::app::Exit;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("carroll_cli_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(std::vector<std::string> args) {
    std::ostringstream log;
    return carroll::app::run(args, log);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << body;
    return p;
}

// Data rows (comment lines and header dropped), split on commas.
std::vector<std::vector<std::string>> rows(const fs::path& p, std::vector<std::string>* header = nullptr) {
    std::istringstream is(slurp(p));
    std::vector<std::vector<std::string>> out;
    bool seen_header = false;
    for (std::string line; std::getline(is, line);) {
        if (line.rfind("# ", 0) == 0) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (!seen_header) {
            seen_header = true;
            if (header) *header = cells;
            continue;
        }
        out.push_back(cells);
    }
    return out;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
}

const char* kFastGaussian = R"({"schema": "carroll-run/1", "gaussian": {"packets": 5}})";

}  // namespace

TEST_CASE("gaussian width ratio") {
    TempDir d("gauss");
    const auto cfg = write_config(d.path, kFastGaussian);
    REQUIRE(run({"gaussian", "--config", cfg.string(), "--out", d.path.string()}) == Exit::ok);
    std::vector<std::string> h;
    const auto r = rows(d.path / "gaussian.csv", &h);
    REQUIRE(r.size() == 11);
    const auto ic = column(h, "ratio");
    for (const auto& row : r) CHECK(std::abs(std::stod(row[ic]) - 1.0) <= 1e-6);
    CHECK(std::stod(r.back()[column(h, "x")]) == 5.0);
    CHECK_FALSE(fs::exists(d.path / "gaussian.csv.tmp"));
}

TEST_CASE("quantize levels") {
    TempDir d("quant");
    REQUIRE(run({"quantize", "--out", d.path.string()}) == Exit::ok);
    std::vector<std::string> h;
    const auto r = rows(d.path / "quantize_levels.csv", &h);
    REQUIRE(r.size() == 3);
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(std::stod(r[n][column(h, "E_n")]) == doctest::Approx(double(n + 1)).epsilon(1e-15));
    }
}

TEST_CASE("duality free tau(1)") {
    TempDir d("dual");
    REQUIRE(run({"duality", "--target", "free", "--out", d.path.string()}) == Exit::ok);
    std::vector<std::string> h;
    const auto r = rows(d.path / "duality_free_summary.csv", &h);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(std::stod(r[0][column(h, "tau_at_1")]) - std::numbers::pi / 4.0) <= 1e-8);
}

TEST_CASE("CSV layout") {
    TempDir d("layout");
    REQUIRE(run({"rays", "--out", d.path.string()}) == Exit::ok);
    const std::string text = slurp(d.path / "rays_linear.csv");
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.rfind("# ", 0) == 0);
    std::vector<std::string> h;
    const auto r = rows(d.path / "rays_linear.csv", &h);
    CHECK(h.front() == "x");
    for (const auto& row : r) CHECK(row.size() == h.size());
}

TEST_CASE("exit codes") {
    TempDir d("exit");
    CHECK(run({"nonsense"}) == Exit::invalid);
    CHECK(run({}) == Exit::invalid);
    CHECK(run({"gaussian", "--tolerance-profile", "lax", "--out", d.path.string()}) == Exit::invalid);
    CHECK(run({"gaussian", "--config", (d.path / "missing.json").string()}) == Exit::invalid);

    const auto bad_json = write_config(d.path, "{ not json");
    CHECK(run({"gaussian", "--config", bad_json.string(), "--out", d.path.string()}) == Exit::invalid);
    const auto bad_schema = write_config(d.path, R"({"schema": "other/2"})");
    CHECK(run({"gaussian", "--config", bad_schema.string(), "--out", d.path.string()}) == Exit::invalid);
    const auto bad_sigma = write_config(d.path, R"({"schema": "carroll-run/1", "gaussian": {"sigma": -1}})");
    CHECK(run({"gaussian", "--config", bad_sigma.string(), "--out", d.path.string()}) == Exit::invalid);
    const auto bad_type = write_config(d.path, R"({"schema": "carroll-run/1", "quantize": {"T": "pi"}})");
    CHECK(run({"quantize", "--config", bad_type.string(), "--out", d.path.string()}) == Exit::invalid);
    const auto bad_mass = write_config(d.path, R"({"schema": "carroll-run/1", "constants": {"m": 0}})");
    CHECK(run({"quantize", "--config", bad_mass.string(), "--out", d.path.string()}) == Exit::invalid);
    CHECK(run({"duality", "--target", "unknown", "--out", d.path.string()}) == Exit::invalid);

    // Sixteen samples cannot resolve the packet: a declared tolerance breach.
    const auto coarse = write_config(
        d.path, R"({"schema": "carroll-run/1", "gaussian": {"n": 16, "stations": 2, "packets": 1}})");
    CHECK(run({"gaussian", "--config", coarse.string(), "--out", d.path.string()}) == Exit::numerical);
}

TEST_CASE("reruns are byte-identical") {
    TempDir a("det_a"), b("det_b");
    const auto cfg = write_config(a.path, kFastGaussian);
    for (const auto& sub : {"gaussian", "rays", "quantize"}) {
        REQUIRE(run({sub, "--config", cfg.string(), "--out", (a.path / "out").string()}) == Exit::ok);
        REQUIRE(run({sub, "--config", cfg.string(), "--out", (b.path / "out").string()}) == Exit::ok);
    }
    std::size_t compared = 0;
    for (const auto& e : fs::directory_iterator(a.path / "out")) {
        const fs::path other = b.path / "out" / e.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(e.path()) == slurp(other));
        ++compared;
    }
    CHECK(compared >= 6);
}
