#include "covchain/chain_core.hpp"
#include "covchain/errors.hpp"
#include "covchain/io.hpp"
#include "covchain/zoo.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using namespace covchain;

namespace {

// Self-cleaning temp file under the system temp directory.
struct TempFile {
    std::string path;

    explicit TempFile(const std::string& name, const std::string& contents = "")
        : path(std::string("/tmp/covchain_test_") + name) {
        if (!contents.empty()) {
            std::ofstream out(path);
            out << contents;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("chain files round-trip through json") {
    MarkovChain chain = complete_graph_walk(4);
    chain.labels = {"a", "b", "c", "d"};
    TempFile file("roundtrip.json");
    write_chain_file(file.path, chain);

    const MarkovChain back = read_chain_file(file.path);
    REQUIRE(back.n == 4);
    REQUIRE(back.labels.size() == 4);
    CHECK(back.labels[2] == "c");
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(back.transition(i, j) == chain.transition(i, j));
}

TEST_CASE("weighted edge lists become degree-biased walks") {
    TempFile file("edges.json",
                  R"({"weighted_edges": [[0, 1, 1], [0, 2, 2], [0, 3, 3]]})");
    const MarkovChain walk = read_chain_file(file.path);
    REQUIRE(walk.n == 4);
    CHECK(std::abs(walk.transition(0, 3) - 0.5) < 1e-12);
    CHECK(walk.transition(1, 0) == 1.0);
}

TEST_CASE("malformed chain files raise validation errors") {
    TempFile syntax("syntax.json", "{ not json");
    CHECK_THROWS_AS(read_chain_file(syntax.path), ValidationError);

    TempFile neither("neither.json", R"({"labels": ["x"]})");
    CHECK_THROWS_AS(read_chain_file(neither.path), ValidationError);

    TempFile ragged("ragged.json", R"({"matrix": [[0.5, 0.5], [1.0]]})");
    CHECK_THROWS_AS(read_chain_file(ragged.path), ValidationError);

    TempFile badsum("badsum.json", R"({"matrix": [[0.5, 0.4], [0.5, 0.5]]})");
    CHECK_THROWS_AS(read_chain_file(badsum.path), ValidationError);

    TempFile loop("loop.json", R"({"weighted_edges": [[0, 0, 1], [0, 1, 1]]})");
    CHECK_THROWS_AS(read_chain_file(loop.path), ValidationError);

    CHECK_THROWS_AS(read_chain_file("/tmp/covchain_test_does_not_exist.json"),
                    ValidationError);
}

TEST_CASE("metric csv reading validates the axioms") {
    TempFile good("metric.csv", "0,1,2\n1,0,1\n2,1,0\n");
    const FiniteMetric metric = read_metric_csv(good.path);
    CHECK(metric.distance(0, 2) == 2.0);

    TempFile asym("asym.csv", "0,1\n2,0\n");
    CHECK_THROWS_AS(read_metric_csv(asym.path), ValidationError);

    TempFile ragged("ragged.csv", "0,1\n1\n");
    CHECK_THROWS_AS(read_metric_csv(ragged.path), ValidationError);

    TempFile junk("junk.csv", "0,x\nx,0\n");
    CHECK_THROWS_AS(read_metric_csv(junk.path), ValidationError);

    TempFile empty("empty.csv", "\n");
    CHECK_THROWS_AS(read_metric_csv(empty.path), ValidationError);
}

TEST_CASE("matrix csv writing keeps 17 significant digits") {
    Matrix m(2, 2);
    m(0, 0) = 1.0 / 3.0;
    m(0, 1) = 2.0;
    m(1, 0) = 0.1;
    m(1, 1) = 123456.789;
    std::ostringstream out;
    write_matrix_csv(out, m);
    std::istringstream in(out.str());
    std::string cell;
    std::getline(in, cell, ',');
    CHECK(std::stod(cell) == 1.0 / 3.0);
    std::getline(in, cell);
    CHECK(std::stod(cell) == 2.0);
    std::getline(in, cell, ',');
    CHECK(std::stod(cell) == 0.1);

    std::ostringstream labeled;
    write_matrix_csv(labeled, m, {"p", "q"});
    CHECK(labeled.str().substr(0, 2) == "p,");
}
