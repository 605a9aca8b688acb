#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

using nlohmann::json;

namespace {

std::string cli() {
    const char* p = std::getenv("HEIGHTLAB_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string docs() {
    const char* p = std::getenv("HEIGHTLAB_DOCS");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = cli() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

} // namespace

TEST_CASE("spectral on the worked lattice example") {
    auto r = run("spectral --system " + docs() + "/example-lattice.json");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["delta"]["exact"] == "4");
    CHECK(j["l"] == 2);
    CHECK(j["certification"] == "exact");
}

TEST_CASE("spectral on z^2") {
    auto r = run("spectral --system " + docs() + "/squaring.json");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["delta"]["exact"] == "2");
    CHECK(j["l"] == 0);
}

TEST_CASE("every documented example file runs through spectral") {
    for (const char* name : {"example-lattice.json", "squaring.json", "zsq-minus-one.json",
                             "wehler-seed.json", "picard.json", "product.json",
                             "concrete-abelian.json", "cm-lattice.json"}) {
        auto r = run("spectral --system " + docs() + "/" + name);
        INFO("file ", name, " output ", r.out);
        CHECK(r.code == 0);
    }
}

TEST_CASE("series table carries the exact closed form") {
    auto r = run("series --system " + docs() + "/example-lattice.json --point 0,1 --steps 50");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["rows"].size() == 50);
    CHECK(j["rows"][0]["a_exact"] == "13/4"); // 9/4 + 1/1
    CHECK(j["rows"][1]["a_exact"] == "5/2");  // 9/4 + 1/4
    CHECK(j["rows"][49]["a_exact"] == "2813/1250"); // 9/4 + 1/2500
    CHECK(j["metadata"]["delta"]["exact"] == "4");
    CHECK(j["metadata"]["l"] == 2);
}

TEST_CASE("series on squaring is the constant log 2") {
    auto r = run("series --system " + docs() + "/squaring.json --point 2:1 --steps 10");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    std::string first = j["rows"][0]["a"];
    for (const auto& row : j["rows"]) CHECK(row["a"] == first);
    CHECK(first.substr(0, 7) == "0.69314");
}

TEST_CASE("series runs on a wehler corpus point without crashing") {
    auto r = run("series --system " + docs() + "/wehler-seed.json --point \"1:1;1:1;1:1\" --steps 5");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["rows"].size() >= 1);
    // heights grow with the hyperbolic degree; the table reports its mode flag
    CHECK(j["metadata"].contains("mode"));
}

TEST_CASE("byte-identical output across runs") {
    std::string args = "series --system " + docs() + "/example-lattice.json --point 0,1 --steps 7";
    auto a = run(args);
    auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto c = run("scan --system " + docs() + "/squaring.json --bound 20 --tolerance 1/20");
    auto d = run("scan --system " + docs() + "/squaring.json --bound 20 --tolerance 1/20");
    CHECK(c.out == d.out);
}

TEST_CASE("csv emission quotes and mirrors the json payload") {
    std::string tmp = "/tmp/heightlab_test_series.csv";
    auto r = run("series --system " + docs() + "/example-lattice.json --point 0,1 --steps 3 --csv " +
                 tmp);
    REQUIRE(r.code == 0);
    std::ifstream in(tmp);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,h_n,a_n,h_exact,a_exact,flags");
    std::string row1;
    std::getline(in, row1);
    json j = json::parse(r.out);
    std::string a_exact = j["rows"][0]["a_exact"];
    CHECK(row1.find(a_exact) != std::string::npos);
    std::remove(tmp.c_str());
}

TEST_CASE("zf membership through the cli") {
    auto no = run("zf --system " + docs() + "/example-lattice.json --point 0,1");
    REQUIRE(no.code == 0);
    json jn = json::parse(no.out);
    CHECK(jn["member"] == "no");
    auto yes = run("zf --system " + docs() + "/example-lattice.json --point 5,0");
    json jy = json::parse(yes.out);
    CHECK(jy["member"] == "yes");
    CHECK(jy["certification"] == "exact");
}

TEST_CASE("scan finds the squaring preperiodic set") {
    auto r = run("scan --system " + docs() + "/squaring.json --bound 100 --tolerance 1/20");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["confirmed"].size() == 4);
    CHECK(j["anomalies"].empty());
    // parallel run agrees
    auto p = run("scan --system " + docs() + "/squaring.json --bound 100 --tolerance 1/20 --jobs 4");
    json jp = json::parse(p.out);
    CHECK(jp["confirmed"] == j["confirmed"]);
}

TEST_CASE("intersect reports the exponent-comparison structure") {
    auto r = run("intersect --system " + docs() + "/squaring.json --point 2:1 --point2 16:1 --steps 12");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["max_gap"] == 2);
    REQUIRE(j["ap_decomposition"].size() == 1);
    CHECK(j["ap_decomposition"][0]["k"] == 1);
    CHECK(j["residual_pairs"].empty());
    CHECK(j["gap_hypothesis_ok"] == true);
    CHECK(j["stable_gap"] == 2);
}

TEST_CASE("preperiodic detects the two-cycle") {
    auto r = run("preperiodic --system " + docs() + "/zsq-minus-one.json --point 1:1 --budget 64");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["preperiodic"] == true);
    CHECK(j["tail_length"] == 1);
    CHECK(j["period"] == 2);
}

TEST_CASE("canonical estimates by kind") {
    auto r = run("canonical --system " + docs() + "/example-lattice.json --point 0,1");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["estimate"]["mode"] == "exact_lattice");
    CHECK(j["estimate"]["limsup_exact"] == "9/4");

    auto c = run("canonical --system " + docs() + "/squaring.json --point 2:1 --tolerance 1/100000");
    json jc = json::parse(c.out);
    CHECK(jc["estimate"]["mode"] == "telescoped_certified");
    std::string mid = jc["estimate"]["limsup"]["mid"];
    CHECK(mid.substr(0, 6) == "0.6931");
}

TEST_CASE("product systems parse product points end to end") {
    auto r = run("series --system " + docs() +
                 "/product.json --point \"(0,1)x(2:1)\" --steps 8");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["rows"].size() == 8);
    CHECK(j["metadata"]["delta"]["exact"] == "4");
    CHECK(j["metadata"]["l"] == 2);
    auto bad = run("series --system " + docs() + "/product.json --point \"0,1\" --steps 4");
    CHECK(bad.code == 2);
}

TEST_CASE("cm lattice canonical value through the cli") {
    auto r = run("canonical --system " + docs() + "/cm-lattice.json --point 1,0");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["estimate"]["mode"] == "exact_lattice");
    CHECK(j["estimate"]["limsup_exact"] == "1");
}

TEST_CASE("exit codes: malformed input is 2") {
    std::string tmp = "/tmp/heightlab_bad.json";
    {
        std::ofstream out(tmp);
        out << "{ not json";
    }
    auto r = run("spectral --system " + tmp);
    CHECK(r.code == 2);
    {
        std::ofstream out(tmp);
        out << R"({"schema": 1, "kind": "p1_morphism", "numerator": ["0","1","0"],)"
            << R"( "denominator": ["1","0","0"]})"; // shared root: not a morphism
    }
    auto r2 = run("spectral --system " + tmp);
    CHECK(r2.code == 2);
    std::remove(tmp.c_str());
    auto r3 = run("spectral --system /nonexistent/file.json");
    CHECK(r3.code == 2);
}
