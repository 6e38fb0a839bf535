#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <set>
#include <string_view>
#include <vector>

#include "assemblynet/bytes.hpp"

namespace assemblynet {

/// Undirected graph over nodes 0..N-1 with a per-round contact fanout.
struct Topology {
    std::size_t node_count = 0;
    std::vector<std::vector<std::size_t>> adjacency;  // sorted, deduplicated
    int fanout = 1;
};

Topology make_topology(std::size_t node_count,
                       const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                       int fanout = 1);

/// Line-oriented `u v` edge list with full-line `#` comments; node count is
/// one past the highest id mentioned.
Topology parse_topology_file(std::string_view text, int fanout = 1);

/// Random spanning tree plus `extra_edges` random edges: connected by
/// construction.
Topology random_connected_topology(std::size_t node_count, std::size_t extra_edges,
                                   int fanout, std::mt19937_64& rng);

/// Connected components in ascending node order.
std::vector<std::vector<std::size_t>> partition_check(const Topology& topology);

/// Synchronous push-pull dissemination of content digests. Knowledge only
/// grows; a round reconciles against the round-start snapshot, so the
/// iteration order of nodes cannot cascade within one round.
class GossipState {
public:
    explicit GossipState(std::size_t node_count);

    void seed_item(std::size_t node, const Digest32& item);
    bool knows(std::size_t node, const Digest32& item) const;
    bool converged(const Digest32& item) const;
    std::size_t know_count(const Digest32& item) const;
    int rounds_run() const { return rounds_; }
    std::size_t node_count() const { return known_.size(); }

    /// Both directions of every contact run; the hook observes each contacted
    /// pair so callers can reconcile payloads that ride along with digests.
    using ExchangeHook = std::function<void(std::size_t a, std::size_t b)>;
    void round(const Topology& topology, std::mt19937_64& rng,
               const ExchangeHook& hook = {});

private:
    std::vector<std::set<Digest32>> known_;
    int rounds_ = 0;
};

}  // namespace assemblynet
