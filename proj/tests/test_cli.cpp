// End-to-end checks of the command line tool. The binary path arrives as
// argv[1] from ctest.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string g_cli;

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = g_cli + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    int rc = pclose(p);
    r.status = WEXITSTATUS(rc);
    return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/dynlis_cli_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("lis prints the length") {
    auto f = write_temp("lis.txt", "1 2 3\n");
    auto r = run("lis " + f);
    CHECK(r.status == 0);
    CHECK(r.out == "3\n");
}

TEST_CASE("lis with ties and witness") {
    auto f = write_temp("lis2.txt", "5 5 3\n");
    auto r = run("lis " + f);
    CHECK(r.status == 0);
    CHECK(r.out == "1\n");
    auto w = run("lis --witness " + f);
    CHECK(w.status == 0);
    CHECK(w.out.substr(0, 2) == "1\n");
}

TEST_CASE("cover emits begin end score lines") {
    auto f = write_temp("cover.txt", "0 1 2 3 4 5\n");
    auto r = run("cover --k 3 " + f);
    CHECK(r.status == 0);
    CHECK(r.out == "0 2 3\n1 3 3\n2 4 3\n3 5 3\n");
    auto a = run("cover --k1 2 --k2 4 " + write_temp("cover2.txt", "0 1 2 3 4 5 6 7\n"));
    CHECK(a.status == 0);
    CHECK(a.out == "2 3 2\n4 5 2\n6 7 2\n");
}

TEST_CASE("cover json carries the same segments plus chains") {
    auto f = write_temp("coverj.txt", "0 1 2 3 4 5\n");
    auto plain = run("cover --k 3 " + f);
    auto j = run("cover --k 3 --json " + f);
    CHECK(j.status == 0);
    auto parsed = nlohmann::json::parse(j.out);
    std::ostringstream rebuilt;
    for (const auto& seg : parsed) {
        rebuilt << seg["begin"].get<int64_t>() << ' ' << seg["end"].get<int64_t>() << ' '
                << seg["score"].get<int64_t>() << '\n';
        CHECK(seg["chain"].size() == seg["score"].get<size_t>());
    }
    CHECK(rebuilt.str() == plain.out);
}

TEST_CASE("simulate answers queries within the approximation") {
    auto f = write_temp("sim.txt", "P 3 1 2\nQ 0 2\n");
    auto r = run("simulate --eps 1 " + f);
    CHECK(r.status == 0);
    // OPT = 2, 2-approximation allows 1 or 2
    std::istringstream in(r.out);
    int64_t v;
    REQUIRE((in >> v));
    CHECK(v >= 1);
    CHECK(v <= 2);
    // decremental path answers the same script
    auto d = run("simulate --eps 1 --decremental " + f);
    CHECK(d.status == 0);
    std::istringstream din(d.out);
    int64_t dv;
    REQUIRE((din >> dv));
    CHECK(dv >= 1);
    CHECK(dv <= 2);
}

TEST_CASE("simulate json matches plain output") {
    auto f = write_temp("simj.txt", "P 5 1 4 2 3\nQ 0 4\nQC 0 4\nD 2\nQ 0 3\n");
    auto plain = run("simulate --eps 0.5 " + f);
    auto j = run("simulate --eps 0.5 --json " + f);
    CHECK(plain.status == 0);
    CHECK(j.status == 0);
    auto parsed = nlohmann::json::parse(j.out);
    std::ostringstream rebuilt;
    for (const auto& row : parsed) {
        rebuilt << row["score"].get<int64_t>();
        if (row.contains("chain"))
            for (const auto& e : row["chain"])
                rebuilt << ' ' << e["position"].get<int64_t>() << ':' << e["value"].get<int64_t>();
        rebuilt << '\n';
    }
    CHECK(rebuilt.str() == plain.out);
}

TEST_CASE("espartition on an identity permutation prints one increasing line") {
    auto f = write_temp("esp.txt", "0 1 2 3 4 5 6 7 8\n");
    auto r = run("espartition " + f);
    CHECK(r.status == 0);
    CHECK(r.out == "+ 0 1 2 3 4 5 6 7 8\n");
    auto t = run("espartition --tight --eps 0.5 " + f);
    CHECK(t.status == 0);
    CHECK(t.out == "+ 0 1 2 3 4 5 6 7 8\n");
}

TEST_CASE("parse errors exit with code 2 and report the line") {
    auto f = write_temp("bad.txt", "Q 0\n");
    auto r = run("simulate " + f);
    CHECK(r.status == 2);
    auto missing = run("lis /tmp/definitely_missing_dynlis_file");
    CHECK(missing.status == 2);
}

TEST_CASE("fuzz runs clean on stock seeds") {
    auto r = run("fuzz --seed 7 --ops 400 --eps 0.5 --max-n 96");
    CHECK(r.status == 0);
    CHECK(r.out.substr(0, 3) == "ok:");
}

TEST_CASE("bench prints the CSV header") {
    auto r = run("bench --n 256 --eps 1.0 --ops 64 --seed 3");
    CHECK(r.status == 0);
    CHECK(r.out.rfind("n,eps,avg_update_us,avg_query_us,max_cover_depth\n", 0) == 0);
}

TEST_CASE("identical seeds give identical bytes") {
    auto a = run("fuzz --seed 11 --ops 200 --eps 1.0 --max-n 64");
    auto b = run("fuzz --seed 11 --ops 200 --eps 1.0 --max-n 64");
    CHECK(a.out == b.out);
    CHECK(a.status == b.status);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <dynlis-binary>\n");
        return 1;
    }
    g_cli = argv[1];
    doctest::Context ctx;
    return ctx.run();
}
