#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <knotcs/cli.hpp>

using knotcs::cli::run;
using nlohmann::json;
using Catch::Matchers::WithinAbs;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("alpha0 json output", "[cli][alpha0]") {
    const Result r = invoke({"alpha0", "--n", "2", "--m", "1"});
    REQUIRE(r.code == 0);
    const json rec = json::parse(r.out);
    REQUIRE(rec["command"] == "alpha0");
    REQUIRE(rec["inputs"]["n"] == 2);
    REQUIRE(rec["inputs"]["m"] == 1);
    REQUIRE_THAT(rec["result"]["alpha0"].get<double>(), WithinAbs(2.574140778131840, 1e-9));
    REQUIRE(rec["result"].contains("collision_gap"));
    REQUIRE(rec["meta"]["tool"] == "knotcs");

    // serialization round-trip: parse(dump(rec)) == rec
    REQUIRE(json::parse(rec.dump()) == rec);
}

TEST_CASE("cs lens output in all formats", "[cli][lens]") {
    const Result j = invoke({"cs", "lens", "--n", "2", "--m", "1"});
    REQUIRE(j.code == 0);
    const json rec = json::parse(j.out);
    REQUIRE(rec["command"] == "cs lens");
    REQUIRE_THAT(rec["result"]["value"].get<double>(), WithinAbs(8.0 / 9.0, 1e-9));
    REQUIRE(rec["result"]["modulus"] == 1.0);
    REQUIRE(rec["meta"]["fraction"] == "8/9");

    const Result c = invoke({"cs", "lens", "--n", "2", "--m", "1", "--format", "csv"});
    REQUIRE(c.code == 0);
    REQUIRE(c.out.find("command,n,m,value,modulus") == 0);
    REQUIRE(c.out.find("0.888888889") != std::string::npos);

    const Result m = invoke({"cs", "lens", "--n", "2", "--m", "1", "--format", "md"});
    REQUIRE(m.code == 0);
    REQUIRE(m.out.find("| cs lens |") != std::string::npos);
}

TEST_CASE("cs knot at reduced resolution", "[cli][knot]") {
    const Result r = invoke({"cs", "knot", "--n", "2", "--m", "1", "--hyp-intervals", "400",
                             "--sph-intervals", "400"});
    REQUIRE(r.code == 0);
    const json rec = json::parse(r.out);
    REQUIRE(rec["command"] == "cs knot");
    REQUIRE(rec["result"]["modulus"] == 0.5);
    REQUIRE_THAT(rec["result"]["value"].get<double>(), WithinAbs(0.34402298, 1e-5));
    REQUIRE(rec["inputs"]["hyp_intervals"] == 400);
    REQUIRE_THAT(rec["meta"]["alpha0"].get<double>(), WithinAbs(2.574140778131840, 1e-9));
}

TEST_CASE("cs orbifold and cover are consistent", "[cli][orbifold]") {
    const Result ro = invoke({"cs", "orbifold", "--n", "2", "--m", "1", "--k", "5"});
    REQUIRE(ro.code == 0);
    const json orb = json::parse(ro.out);
    REQUIRE_THAT(orb["result"]["value"].get<double>(), WithinAbs(0.0784576, 1e-4));
    REQUIRE_THAT(orb["result"]["modulus"].get<double>(), WithinAbs(0.1, 1e-12));

    const Result rc = invoke({"cs", "cover", "--n", "2", "--m", "1", "--k", "5"});
    REQUIRE(rc.code == 0);
    const json cov = json::parse(rc.out);
    REQUIRE_THAT(cov["result"]["value"].get<double>(), WithinAbs(0.392288, 3e-4));
    REQUIRE(cov["result"]["modulus"] == 0.5);
    REQUIRE(cov["meta"].contains("orbifold_value"));
}

TEST_CASE("exit codes follow the contract", "[cli][exit]") {
    // usage errors -> 64
    REQUIRE(invoke({"alpha0", "--m", "1"}).code == 64);             // missing --n
    REQUIRE(invoke({"alpha0", "--n", "0", "--m", "1"}).code == 64); // n < 1
    REQUIRE(invoke({"nonsense"}).code == 64);
    REQUIRE(invoke({}).code == 64); // a subcommand is required
    REQUIRE(invoke({"cs", "knot", "--n", "2", "--m", "1", "--hyp-intervals", "7"}).code == 64);
    REQUIRE(invoke({"cs", "orbifold", "--n", "2", "--m", "1", "--k", "2"}).code == 64);
    REQUIRE(invoke({"alpha0", "--n", "2", "--m", "1", "--tol", "1e-15"}).code == 64);
    REQUIRE(invoke({"table", "paper-3"}).code == 64);
    REQUIRE(invoke({"alpha0", "--n", "2", "--m", "1", "--format", "xml"}).code == 64);

    // domain errors -> 2
    const Result dom = invoke({"cs", "orbifold", "--n", "1", "--m", "1", "--k", "3"});
    REQUIRE(dom.code == 2);
    REQUIRE(dom.err.find("domain error") != std::string::npos);

    // help -> 0
    const Result help = invoke({"--help"});
    REQUIRE(help.code == 0);
    REQUIRE(help.out.find("alpha0") != std::string::npos);
    REQUIRE(help.out.find("cs") != std::string::npos);
}

TEST_CASE("table paper-1 at reduced resolution", "[cli][table]") {
    const Result r = invoke({"table", "paper-1", "--hyp-intervals", "400", "--sph-intervals",
                             "400", "--format", "csv"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("two_n,two_m,alpha0,cs") == 0);
    REQUIRE(count_lines(r.out) == 11); // header + 10 rows
    REQUIRE(r.out.find("2.09439510239") != std::string::npos); // (1,1) alpha0

    const Result j = invoke({"table", "paper-1", "--hyp-intervals", "400", "--sph-intervals",
                             "400"});
    const json rec = json::parse(j.out);
    REQUIRE(rec["result"]["rows"].size() == 10);
}

TEST_CASE("table paper-2 at reduced resolution", "[cli][table]") {
    const Result r = invoke({"table", "paper-2", "--hyp-intervals", "200", "--sph-intervals",
                             "200", "--format", "csv"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("two_n,two_m,k,cs_orbifold,cs_cover") == 0);
    REQUIRE(count_lines(r.out) == 49); // header + 6 knots x 8 orders
}

TEST_CASE("trace emits the branch nodes", "[cli][trace]") {
    const Result r = invoke({"trace", "--n", "2", "--m", "1", "--steps", "10", "--format", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "alpha,re_x,im_x,beta");
    int rows = 0;
    double prev_alpha = -1.0;
    std::string line;
    while (std::getline(in, line)) {
        ++rows;
        double alpha, rx, ix, beta;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &alpha, &rx, &ix, &beta) == 4);
        REQUIRE(alpha >= prev_alpha - 1e-12); // nondecreasing across the dump
        prev_alpha = alpha;
        REQUIRE(std::isfinite(beta));
    }
    REQUIRE(rows == 11 + 2 * 11); // hyperbolic nodes + two spherical branches

    const Result j = invoke({"trace", "--n", "2", "--m", "1", "--steps", "10"});
    const json rec = json::parse(j.out);
    REQUIRE(rec["result"]["rows"].size() == 33);
    REQUIRE_THAT(rec["result"]["alpha0"].get<double>(), WithinAbs(2.574140778131840, 1e-9));
}

TEST_CASE("cache dumps quadrature nodes as CSV", "[cli][cache]") {
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() / "knotcs_cache_test";
    const Result r = invoke({"cs", "orbifold", "--n", "2", "--m", "1", "--k", "4",
                             "--hyp-intervals", "20", "--sph-intervals", "20", "--cache",
                             base.string()});
    REQUIRE(r.code == 0);
    for (const char* suffix : {".hyperbolic.csv", ".spherical.csv"}) {
        const fs::path file = base.string() + suffix;
        REQUIRE(fs::exists(file));
        std::ifstream in(file);
        std::string header;
        std::getline(in, header);
        REQUIRE(header == "alpha,re_x,im_x,beta");
        int rows = 0;
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) ++rows;
        REQUIRE(rows >= 21);
        fs::remove(file);
    }
}

TEST_CASE("output is deterministic", "[cli][determinism]") {
    const std::vector<std::string> cmd = {"cs", "orbifold", "--n", "3", "--m", "2", "--k", "6"};
    const Result a = invoke(cmd);
    const Result b = invoke(cmd);
    REQUIRE(a.code == 0);
    REQUIRE(a.out == b.out);
}
