#include "assemblynet/gossip.hpp"

#include <algorithm>
#include <charconv>
#include <deque>

#include "assemblynet/errors.hpp"
#include "assemblynet/rng.hpp"

namespace assemblynet {

Topology make_topology(std::size_t node_count,
                       const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                       int fanout) {
    if (fanout < 1) throw Error(Errc::parse_error, "fanout must be >= 1");
    Topology t;
    t.node_count = node_count;
    t.fanout = fanout;
    t.adjacency.resize(node_count);
    for (auto [u, v] : edges) {
        if (u == v) throw Error(Errc::parse_error, "self-loop in topology");
        if (u >= node_count || v >= node_count)
            throw Error(Errc::parse_error, "edge endpoint outside node range");
        t.adjacency[u].push_back(v);
        t.adjacency[v].push_back(u);
    }
    for (auto& neighbors : t.adjacency) {
        std::sort(neighbors.begin(), neighbors.end());
        neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
    }
    return t;
}

Topology parse_topology_file(std::string_view text, int fanout) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t max_id = 0;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string_view::npos) continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        line = line.substr(begin, end - begin + 1);
        if (line.front() == '#') continue;

        std::size_t u = 0, v = 0;
        const char* first = line.data();
        const char* last = first + line.size();
        auto [mid, ec1] = std::from_chars(first, last, u);
        if (ec1 != std::errc() || mid == last || (*mid != ' ' && *mid != '\t'))
            throw ParseError("expected 'u v' edge", line_no, 1);
        while (mid != last && (*mid == ' ' || *mid == '\t')) ++mid;
        auto [tail, ec2] = std::from_chars(mid, last, v);
        if (ec2 != std::errc() || tail != last)
            throw ParseError("expected 'u v' edge", line_no, 1);
        edges.emplace_back(u, v);
        max_id = std::max({max_id, u, v});
    }
    return make_topology(edges.empty() ? 0 : max_id + 1, edges, fanout);
}

Topology random_connected_topology(std::size_t node_count, std::size_t extra_edges,
                                   int fanout, std::mt19937_64& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 1; i < node_count; ++i)
        edges.emplace_back(uniform_below(rng, i), i);
    std::size_t added = 0;
    while (added < extra_edges && node_count >= 2) {
        std::size_t u = static_cast<std::size_t>(uniform_below(rng, node_count));
        std::size_t v = static_cast<std::size_t>(uniform_below(rng, node_count));
        if (u == v) continue;
        edges.emplace_back(u, v);
        ++added;
    }
    return make_topology(node_count, edges, fanout);
}

std::vector<std::vector<std::size_t>> partition_check(const Topology& topology) {
    std::vector<std::vector<std::size_t>> components;
    std::vector<bool> seen(topology.node_count, false);
    for (std::size_t start = 0; start < topology.node_count; ++start) {
        if (seen[start]) continue;
        std::vector<std::size_t> component;
        std::deque<std::size_t> frontier{start};
        seen[start] = true;
        while (!frontier.empty()) {
            std::size_t u = frontier.front();
            frontier.pop_front();
            component.push_back(u);
            for (std::size_t v : topology.adjacency[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    frontier.push_back(v);
                }
            }
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    return components;
}

GossipState::GossipState(std::size_t node_count) : known_(node_count) {}

void GossipState::seed_item(std::size_t node, const Digest32& item) {
    known_.at(node).insert(item);
}

bool GossipState::knows(std::size_t node, const Digest32& item) const {
    return known_.at(node).contains(item);
}

bool GossipState::converged(const Digest32& item) const {
    return std::all_of(known_.begin(), known_.end(),
                       [&](const std::set<Digest32>& s) { return s.contains(item); });
}

std::size_t GossipState::know_count(const Digest32& item) const {
    std::size_t count = 0;
    for (const auto& s : known_) count += s.contains(item);
    return count;
}

void GossipState::round(const Topology& topology, std::mt19937_64& rng,
                        const ExchangeHook& hook) {
    if (topology.node_count != known_.size())
        throw Error(Errc::parse_error, "topology and gossip state node counts differ");

    std::vector<std::set<Digest32>> next = known_;
    std::vector<std::size_t> pick;
    for (std::size_t u = 0; u < known_.size(); ++u) {
        pick = topology.adjacency[u];
        std::size_t contacts =
            std::min(pick.size(), static_cast<std::size_t>(topology.fanout));
        // Partial Fisher-Yates: the first `contacts` slots become a uniform
        // sample without replacement.
        for (std::size_t i = 0; i < contacts; ++i) {
            std::size_t j = i + static_cast<std::size_t>(
                                    uniform_below(rng, pick.size() - i));
            std::swap(pick[i], pick[j]);
            std::size_t v = pick[i];
            next[u].insert(known_[v].begin(), known_[v].end());
            next[v].insert(known_[u].begin(), known_[u].end());
            if (hook) hook(u, v);
        }
    }
    known_ = std::move(next);
    ++rounds_;
}

}  // namespace assemblynet
