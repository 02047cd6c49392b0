#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oit/cli.hpp"

using namespace oit;
using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
    Json json() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// a_p = p - #{(x, y) : y^2 = x^3 + ax + b mod p}
std::int64_t ap_by_count(std::int64_t a, std::int64_t b, std::int64_t p) {
    std::int64_t affine = 0;
    for (std::int64_t x = 0; x < p; ++x)
        for (std::int64_t y = 0; y < p; ++y)
            if (((y * y - x * x % p * x - a * x - b) % p + 2 * p) % p == 0) ++affine;
    return p - affine;
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("oit-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    fs::path path_;
    static inline int counter_ = 0;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, AnalyzeExample) {
    auto r = run({"analyze", "--a", "1", "--b", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    EXPECT_EQ(j["schema"], "oit/1");
    EXPECT_EQ(j["disc_core"], 31);
    EXPECT_EQ(j["N"], 62);
    EXPECT_EQ(j["omega"], 2);
    EXPECT_EQ(j["j"], "6912/31");
    EXPECT_NEAR(j["height"].get<double>(), std::log(6912.0), 1e-9);
    EXPECT_EQ(j["bad_primes"], Json::array({2, 31}));
    EXPECT_TRUE(j.contains("N_note"));
    EXPECT_EQ(j["disc_factorization"][0]["p"], 31);
}

TEST(Cli, WideIntegersAreStrings) {
    auto r = run({"analyze", "--a", "100000000000", "--b", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    EXPECT_TRUE(j["disc_core"].is_string());
    EXPECT_EQ(j["disc_core"], "4000000000000000000000000000000027");
    EXPECT_TRUE(j["curve"]["a"].is_number());
}

TEST(Cli, BoundExample) {
    TempDir dir;
    auto r = run({"bound", "--a", "1", "--b", "1", "--cache-dir", dir.str()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    ASSERT_EQ(j["steps"].size(), 2u);
    EXPECT_EQ(j["steps"][0]["character"], "chi4");
    EXPECT_EQ(j["steps"][0]["p"], 7);
    EXPECT_EQ(j["steps"][0]["a_p"], ap_by_count(1, 1, 7));
    EXPECT_EQ(j["steps"][1]["character"], "chi31");
    EXPECT_EQ(j["steps"][1]["p"], 11);
    EXPECT_EQ(j["steps"][1]["a_p"], ap_by_count(1, 1, 11));
    const std::int64_t M = std::abs(ap_by_count(1, 1, 7) * ap_by_count(1, 1, 11));
    EXPECT_EQ(j["M"], M);
    EXPECT_EQ(j["m24"], static_cast<std::int64_t>(std::pow(6.0, 24)));
    EXPECT_TRUE(j["coverage"]);
    EXPECT_NEAR(j["kraus_bound"].get<double>(), 1152.0 * 62 * 62 * (1 + std::log(std::log(62.0))), 1e-3);

    auto csv = run({"bound", "--a", "1", "--b", "1", "--csv", "--cache-dir", dir.str()});
    ASSERT_EQ(csv.code, 0);
    EXPECT_EQ(csv.out, "step,character,mask,p,a_p,dim_before\n1,chi4,1,7,3,2\n2,chi31,2,11,-2,1\n");
    EXPECT_EQ(run({"bound", "--a", "1", "--b", "1", "--csv", "--json"}).code, 2);
}

TEST(Cli, ReportsAreByteStable) {
    TempDir dir;
    run({"bound", "--a", "-3", "--b", "5", "--cache-dir", dir.str()});
    auto a = run({"bound", "--a", "-3", "--b", "5", "--cache-dir", dir.str()});
    auto b = run({"bound", "--a", "-3", "--b", "5", "--cache-dir", dir.str()});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.json()["cache"]["computed"], 0);
    auto x = run({"average", "--A", "50", "--B", "50", "--r", "1", "--x", "100", "--sample", "20", "--seed", "3", "--threads", "1"});
    auto y = run({"average", "--A", "50", "--B", "50", "--r", "1", "--x", "100", "--sample", "20", "--seed", "3", "--threads", "4"});
    EXPECT_EQ(x.code, 0);
    EXPECT_EQ(x.out, y.out);
}

TEST(Cli, SurjectivityAndCounts) {
    TempDir dir;
    auto s = run({"surjectivity", "--a", "1", "--b", "1", "--ell", "5", "--x", "1000", "--cache-dir", dir.str()});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(s.json()["status"], "Surjective");
    EXPECT_EQ(s.json()["witnesses"].size(), 3u);

    auto c = run({"lt-count", "--a", "1", "--b", "0", "--r", "0", "--x", "50", "--cache-dir", dir.str()});
    ASSERT_EQ(c.code, 0) << c.err;
    Json want = Json::array();
    for (std::int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47})
        if (ap_by_count(1, 0, p) == 0) want.push_back(p);
    EXPECT_EQ(c.json()["primes"], want);
    EXPECT_EQ(c.json()["count"], 8);

    auto k = run({"lt-constant", "--r", "0", "--cutoff", "3"});
    ASSERT_EQ(k.code, 0);
    EXPECT_NEAR(k.json()["value"].get<double>(), 2 / M_PI * 4.0 / 3.0 * 9.0 / 8.0, 1e-15);
}

TEST(Cli, VerifyGroupTheory) {
    auto r = run({"verify", "group-theory", "--ell", "5", "--level", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    EXPECT_TRUE(j["passed"]);
    std::vector<std::string> names;
    for (const auto& s : j["suites"]) {
        names.push_back(s["name"]);
        EXPECT_TRUE(s["passed"]) << s["name"];
        EXPECT_GT(s["cases"].get<std::uint64_t>(), 0u) << s["name"];
    }
    EXPECT_EQ(names, (std::vector<std::string>{"cartan", "representation", "filtration", "dichotomy", "lang-trotter"}));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({"analyze", "--a", "0", "--b", "0"}).code, 1);
    auto sing = run({"analyze", "--a", "-3", "--b", "2"});
    EXPECT_EQ(sing.code, 1);
    EXPECT_EQ(sing.json()["error"]["code"], "SingularCurve");
    EXPECT_EQ(run({"surjectivity", "--a", "1", "--b", "1", "--ell", "31", "--x", "10", "--cache-dir", "/nonexistent"}).code, 1);
    EXPECT_EQ(run({"surjectivity", "--a", "1", "--b", "1", "--ell", "3", "--x", "10"}).code, 1);
    EXPECT_EQ(run({"lt-constant", "--r", "0", "--cutoff", "2"}).code, 1);
    EXPECT_EQ(run({"verify", "group-theory", "--ell", "4"}).code, 1);
    EXPECT_EQ(run({"average", "--A", "1", "--B", "5", "--r", "0", "--x", "100", "--sample", "3", "--seed", "1"}).code, 1);

    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"analyze", "--a", "1"}).code, 2);
    EXPECT_EQ(run({"analyze", "--a", "1", "--b", "1", "--verbose"}).code, 2);
    EXPECT_EQ(run({"analyze", "--a", "x1", "--b", "1"}).code, 2);
    EXPECT_EQ(run({"lt-constant", "--r", "zero", "--cutoff", "10"}).code, 2);
    EXPECT_EQ(run({"verify"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);

    EXPECT_EQ(cli::exit_code_for(Error(Errc::TheoremViolation, "x")), 3);
    EXPECT_EQ(cli::exit_code_for(Error(Errc::BoundViolation, "x")), 3);
    EXPECT_EQ(cli::exit_code_for(Error(Errc::NoWitnessWithinBound, "x")), 1);
    EXPECT_EQ(cli::exit_code_for(Error(Errc::CacheCorrupt, "x")), 1);
}

TEST(Cli, SearchLimitBelowKraus) {
    TempDir dir;
    auto r = run({"bound", "--a", "1", "--b", "1", "--search-limit", "5", "--cache-dir", dir.str()});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.json()["error"]["code"], "NoWitnessWithinBound");
}

TEST(ApCache, ColdThenWarm) {
    TempDir dir;
    PreparedCurve e(Curve(1, 1));
    {
        ApCache c(dir.path(), e);
        EXPECT_EQ(c.lookup_or_compute(5), -3);
        EXPECT_EQ(c.computed(), 1u);
        EXPECT_EQ(c.path().filename(), "a=1,b=1.txt");
    }
    EXPECT_EQ(slurp(dir.path() / "a=1,b=1.txt"), "5,-3\n");
    ApCache warm(dir.path(), e);
    EXPECT_EQ(warm.lookup_or_compute(5), -3);
    EXPECT_EQ(warm.computed(), 0u);
}

TEST(ApCache, WritersMergeInAscendingOrder) {
    TempDir dir;
    PreparedCurve e(Curve(2, 5));
    ApCache a(dir.path(), e), b(dir.path(), e);
    a.lookup_or_compute(13);
    b.lookup_or_compute(11);
    a.lookup_or_compute(5);
    std::string want;
    for (std::int64_t p : {5, 11, 13}) want += std::to_string(p) + "," + std::to_string(ap_by_count(2, 5, p)) + "\n";
    EXPECT_EQ(slurp(dir.path() / "a=2,b=5.txt"), want);
    auto s = b.source();
    EXPECT_EQ(s(17), ap_by_count(2, 5, 17));
    b.flush();
    EXPECT_EQ(ApCache(dir.path(), e).records().size(), 4u);
}

TEST(ApCache, CorruptFilesAreQuarantined) {
    PreparedCurve e(Curve(1, 1));
    for (const std::string bad : {"5,99\n", "5,-3\n3,0\n", "5;-3\n", "5,-3x\n", "4,0\n", "5,-3\n5,-3\n"}) {
        TempDir dir;
        const auto file = dir.path() / "a=1,b=1.txt";
        std::ofstream(file) << bad;
        try {
            ApCache c(dir.path(), e);
            c.lookup_or_compute(5);
            ADD_FAILURE() << "accepted " << bad;
        } catch (const Error& err) {
            EXPECT_EQ(err.code(), Errc::CacheCorrupt) << bad;
        }
        EXPECT_FALSE(fs::exists(file));
        EXPECT_EQ(slurp(file.string() + ".corrupt"), bad);
    }
    ApCache::Records ok;
    EXPECT_EQ(ApCache::parse("2,0\n3,-2\n", ok), "");
}
