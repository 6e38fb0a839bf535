#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "assemblynet/errors.hpp"
#include "assemblynet/gossip.hpp"

using namespace assemblynet;

namespace {

Digest32 item(std::uint8_t b) {
    Digest32 d{};
    d.fill(b);
    return d;
}

/// Connectivity oracle, deliberately a different algorithm from the
/// library's breadth-first walk.
struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::size_t components() {
        std::size_t roots = 0;
        for (std::size_t i = 0; i < parent.size(); ++i)
            if (find(i) == i) ++roots;
        return roots;
    }
};

std::size_t oracle_components(const Topology& t) {
    UnionFind uf(t.node_count);
    for (std::size_t u = 0; u < t.node_count; ++u)
        for (std::size_t v : t.adjacency[u]) uf.unite(u, v);
    return uf.components();
}

}  // namespace

TEST_CASE("topologies normalize their adjacency and reject bad edges") {
    Topology t = make_topology(4, {{0, 1}, {1, 0}, {2, 1}, {0, 3}});
    CHECK(t.adjacency[0] == std::vector<std::size_t>{1, 3});
    CHECK(t.adjacency[1] == std::vector<std::size_t>{0, 2});  // duplicate collapsed
    CHECK(t.adjacency[3] == std::vector<std::size_t>{0});

    CHECK_THROWS_AS(make_topology(3, {{1, 1}}), Error);
    CHECK_THROWS_AS(make_topology(3, {{0, 3}}), Error);
    CHECK_THROWS_AS(make_topology(3, {{0, 1}}, 0), Error);
}

TEST_CASE("edge-list files tolerate comments and reject everything else") {
    Topology t = parse_topology_file(
        "# a path with a detour\n"
        "0 1\n"
        "\t1\t2\n"
        "\n"
        "2 3");
    CHECK(t.node_count == 4);
    CHECK(t.adjacency[1] == std::vector<std::size_t>{0, 2});

    CHECK(parse_topology_file("").node_count == 0);
    CHECK_THROWS_AS(parse_topology_file("0\n"), ParseError);
    CHECK_THROWS_AS(parse_topology_file("zero one\n"), ParseError);
    CHECK_THROWS_AS(parse_topology_file("0 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_topology_file("0 0\n"), Error);
}

TEST_CASE("partition check agrees with a union-find oracle") {
    // Two triangles and a hermit: three components.
    Topology split = make_topology(7, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    auto components = partition_check(split);
    CHECK(components.size() == 3);
    CHECK(components.size() == oracle_components(split));
    CHECK(components[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(components[1] == std::vector<std::size_t>{3, 4, 5});
    CHECK(components[2] == std::vector<std::size_t>{6});

    Topology joined = make_topology(7, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3},
                                        {2, 3}, {5, 6}});
    CHECK(partition_check(joined).size() == 1);
    CHECK(oracle_components(joined) == 1);
}

TEST_CASE("random topologies are connected for every seed tried") {
    for (std::uint64_t seed : {1ull, 7ull, 42ull, 1234567ull}) {
        for (std::size_t n : {std::size_t{2}, std::size_t{17}, std::size_t{64}}) {
            std::mt19937_64 rng(seed);
            Topology t = random_connected_topology(n, n / 2, 1, rng);
            CHECK(t.node_count == n);
            CHECK(oracle_components(t) == 1);
            CHECK(partition_check(t).size() == 1);
        }
    }

    std::mt19937_64 rng_a(99), rng_b(99), rng_c(100);
    Topology a = random_connected_topology(20, 10, 1, rng_a);
    Topology b = random_connected_topology(20, 10, 1, rng_b);
    Topology c = random_connected_topology(20, 10, 1, rng_c);
    CHECK(a.adjacency == b.adjacency);
    CHECK(a.adjacency != c.adjacency);
}

TEST_CASE("a round reconciles against the round-start snapshot") {
    // Star: the hub learns in round one, but other leaves only see the hub's
    // round-start knowledge, so the item cannot cross two hops in one round.
    Topology star = make_topology(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    GossipState state(5);
    std::mt19937_64 rng(7);
    Digest32 manifest = item(0xd1);
    state.seed_item(1, manifest);

    state.round(star, rng);
    CHECK(state.knows(0, manifest));
    CHECK(state.know_count(manifest) == 2);
    CHECK_FALSE(state.converged(manifest));

    state.round(star, rng);
    CHECK(state.know_count(manifest) == 5);
    CHECK(state.converged(manifest));
    CHECK(state.rounds_run() == 2);

    // Knowledge never shrinks.
    state.round(star, rng);
    CHECK(state.converged(manifest));
}

TEST_CASE("items spread independently and rounds stay deterministic") {
    Topology ring = make_topology(
        16, [] {
            std::vector<std::pair<std::size_t, std::size_t>> e;
            for (std::size_t i = 0; i < 16; ++i) e.emplace_back(i, (i + 1) % 16);
            return e;
        }());
    Digest32 first = item(0x01);
    Digest32 second = item(0x02);

    GossipState one(16);
    GossipState two(16);
    std::mt19937_64 rng_one(5), rng_two(5);
    one.seed_item(0, first);
    one.seed_item(8, second);
    two.seed_item(0, first);
    two.seed_item(8, second);

    int rounds = 0;
    while (!(one.converged(first) && one.converged(second)) && rounds < 64) {
        one.round(ring, rng_one);
        two.round(ring, rng_two);
        ++rounds;
        for (std::size_t node = 0; node < 16; ++node) {
            CHECK(one.knows(node, first) == two.knows(node, first));
            CHECK(one.knows(node, second) == two.knows(node, second));
        }
    }
    CHECK(one.converged(first));
    CHECK(one.converged(second));
    CHECK(rounds < 64);
}

TEST_CASE("the exchange hook sees every contacted pair") {
    Topology ring = make_topology(8, [] {
        std::vector<std::pair<std::size_t, std::size_t>> e;
        for (std::size_t i = 0; i < 8; ++i) e.emplace_back(i, (i + 1) % 8);
        return e;
    }());
    GossipState state(8);
    std::mt19937_64 rng(3);

    std::vector<std::pair<std::size_t, std::size_t>> seen;
    state.round(ring, rng, [&](std::size_t a, std::size_t b) { seen.emplace_back(a, b); });

    CHECK(seen.size() == 8);  // one contact per node at fanout 1
    for (auto [a, b] : seen) {
        const auto& neighbors = ring.adjacency[a];
        CHECK(std::find(neighbors.begin(), neighbors.end(), b) != neighbors.end());
    }

    GossipState mismatched(9);
    CHECK_THROWS_AS(mismatched.round(ring, rng), Error);
    CHECK_THROWS(state.seed_item(99, item(0x03)));
}
