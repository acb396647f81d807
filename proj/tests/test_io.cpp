#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "benj/io.hpp"
#include "benj/spectral.hpp"

using namespace benj;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("benj_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("real formatting survives a round trip and is deterministic") {
    const Real vals[] = {0.0, 1.0, -1.0, 1.0 / 3.0, 1e-300, -2.718281828459045e8};
    for (Real v : vals) {
        const std::string s = format_real(v);
        CHECK(std::stod(s) == v);
        CHECK(format_real(v) == s);
    }
}

TEST_CASE("json emitter keeps insertion order and renders all types") {
    Json j = Json::object();
    j.set("zeta", Json::integer(3));
    j.set("alpha", Json::real(0.5));
    j.set("flag", Json::boolean(true));
    j.set("name", Json::str("wave \"x\"\n"));
    j.set("none", Json::null());
    Json arr = Json::array();
    arr.push(Json::integer(1));
    arr.push(Json::real(2.5));
    j.set("items", arr);
    const std::string out = j.dump();
    // zeta must come first even though alphabetical order says otherwise
    CHECK(out.find("\"zeta\"") < out.find("\"alpha\""));
    CHECK(out.find("\"flag\": true") != std::string::npos);
    CHECK(out.find("\\\"x\\\"") != std::string::npos);  // quotes escaped
    CHECK(out.find("\\n") != std::string::npos);        // newline escaped
    CHECK(out.find("null") != std::string::npos);
    CHECK(j.dump() == out);
}

TEST_CASE("field csv round trip is bit exact and restores the grid") {
    TempDir tmp;
    const Grid g = make_grid(128, 17.5);
    Field f(g, ((-(g.x * g.x) / 5.0).exp() * (1.3 * g.x).cos()).eval());
    const std::string path = tmp.file("field.csv");
    write_field_csv(path, f);
    CHECK(std::filesystem::exists(path + ".json"));  // sidecar with the grid
    const Field back = read_field_csv(path);
    CHECK(back.grid.n == g.n);
    CHECK(back.grid.half_length == doctest::Approx(g.half_length).epsilon(1e-15));
    CHECK((back.values - f.values).abs().maxCoeff() == 0.0);
}

TEST_CASE("field csv carries the expected header") {
    TempDir tmp;
    const Grid g = make_grid(16, 2.0);
    Field f(g, Vec::Zero(g.n).eval());
    const std::string path = tmp.file("zero.csv");
    write_field_csv(path, f);
    const std::string text = read_text_file(path);
    CHECK(text.rfind("x,value\n", 0) == 0);
}

TEST_CASE("reader reconstructs the grid from the x column alone") {
    TempDir tmp;
    const Grid g = make_grid(16, 2.0);
    Field f(g, Vec::Ones(g.n).eval());
    const std::string path = tmp.file("orphan.csv");
    write_field_csv(path, f);
    std::filesystem::remove(path + ".json");  // sidecar is informational only
    const Field back = read_field_csv(path);
    CHECK(back.grid.n == 16);
    CHECK(back.grid.half_length == doctest::Approx(2.0));
}

TEST_CASE("reader rejects non-uniform or headerless data") {
    TempDir tmp;
    const std::string bad = tmp.file("bad.csv");
    write_text_file(bad, "a,b\n1,2\n");
    CHECK_THROWS(read_field_csv(bad));
    std::string rows = "x,value\n";
    for (int i = 0; i < 16; ++i) rows += std::to_string(i * i) + ",0\n";  // quadratic nodes
    write_text_file(tmp.file("warped.csv"), rows);
    CHECK_THROWS(read_field_csv(tmp.file("warped.csv")));
}

TEST_CASE("missing files raise instead of returning empty data") {
    CHECK_THROWS(read_text_file("/nonexistent/benj/file.txt"));
    CHECK_THROWS(read_field_csv("/nonexistent/benj/field.csv"));
}

TEST_CASE("writing into a missing directory fails loudly") {
    TempDir tmp;
    CHECK_THROWS(write_text_file(tmp.file("a/b/c.txt"), "payload"));
}
