#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "svardisc/full_time_dag.hpp"
#include "svardisc/graph_io.hpp"

using namespace svardisc;
namespace bf = svardisc::testing;

TEST_CASE("summary graph text round trip is bit-exact") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = bf::random_dag_graph(1 + trial % 6, 0.4, rng, trial % 3 != 0);
        auto text = write_summary_graph(g);
        auto back = read_summary_graph(text);
        CHECK(back.graph == g);
        CHECK(write_summary_graph(back.graph, back.names) == text);
    }
}

TEST_CASE("summary graph reader: comments, custom names, self loops") {
    const std::string text =
        "# a comment line\n"
        "alpha\n"
        "beta\n"
        "alpha -> alpha\n"
        "alpha -> beta\n";
    auto g = read_summary_graph(text);
    CHECK(g.names == std::vector<std::string>{"alpha", "beta"});
    CHECK(g.graph.d == 2);
    CHECK(g.graph.self_loops == std::set<int>{0});
    CHECK(g.graph.edges == std::set<Edge>{{0, 1}});
}

TEST_CASE("summary graph reader rejects foreign edge kinds") {
    CHECK_THROWS_AS(read_summary_graph("a <-> b\n"), InvalidArgument);
    CHECK_THROWS_AS(read_summary_graph("a -> b -> c\n"), InvalidArgument);
    CHECK_THROWS_AS(read_summary_graph("a => b\n"), InvalidArgument);
}

TEST_CASE("pd-dag text round trip with dashed edges") {
    PdDag g;
    g.d = 3;
    g.solid = {{0, 1}};
    g.dashed = {{1, 2}, {2, 1}};
    auto text = write_pd_dag(g);
    auto back = read_pd_dag(text);
    CHECK(back.graph == g);
    CHECK(write_pd_dag(back.graph, back.names) == text);
    CHECK(text.find("X1 --> X2") != std::string::npos);
}

TEST_CASE("mag text round trip") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = trial % 2 ? 2 : 3;
        auto g = unroll(bf::random_dag_graph(1 + trial % 4, 0.4, rng), k + 1, k);
        auto mag = mag_from_full_time_dag(g);
        auto text = write_mag(mag);
        auto back = read_mag(text);
        CHECK(back.graph == mag);
        CHECK(write_mag(back.graph, back.names) == text);
    }
}

TEST_CASE("mag reader infers frame spacing and validates it") {
    const std::string ok =
        "A@1\nB@1\nA@3\nB@3\n"
        "A@1 -> A@3\n"
        "A@3 <-> B@3\n";
    auto m = read_mag(ok);
    CHECK(m.graph.k == 2);
    CHECK(m.graph.frame_times == std::vector<int>{1, 3});
    CHECK_THROWS_AS(read_mag("A@1\nA@2\nA@4\n"), InvalidArgument);
    CHECK_THROWS_AS(read_mag("A@1\n"), InvalidArgument);
    // a lagged bidirected edge violates the Mag invariants
    CHECK_THROWS_AS(read_mag("A@1\nB@3\nA@1 <-> B@3\n"), InvalidArgument);
}
