#include "mbg/graph.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mbg/errors.hpp"
#include "mbg/rng.hpp"

namespace mbg {

ElementId encode_pair(Vertex u, Vertex v, std::uint32_t n) {
    if (u == v || u >= n || v >= n) throw InvalidBoard("encode_pair: invalid pair");
    if (u > v) std::swap(u, v);
    const std::uint64_t uu = u;
    return static_cast<ElementId>(uu * n - uu * (uu + 1) / 2 + (v - u - 1));
}

std::pair<Vertex, Vertex> decode_pair(ElementId id, std::uint32_t n) {
    if (id >= pair_count(n)) throw InvalidBoard("decode_pair: id out of range");
    // Row u starts at u*n - u(u+1)/2. Solve approximately, then correct.
    const double nn = static_cast<double>(n);
    const double disc = (2 * nn - 1) * (2 * nn - 1) - 8.0 * static_cast<double>(id);
    auto u = static_cast<std::int64_t>(std::floor(((2 * nn - 1) - std::sqrt(std::max(0.0, disc))) / 2));
    auto row_start = [n](std::int64_t r) { return r * static_cast<std::int64_t>(n) - r * (r + 1) / 2; };
    if (u < 0) u = 0;
    while (u > 0 && row_start(u) > static_cast<std::int64_t>(id)) --u;
    while (u + 1 < static_cast<std::int64_t>(n) && row_start(u + 1) <= static_cast<std::int64_t>(id)) ++u;
    const auto v = static_cast<Vertex>(static_cast<std::int64_t>(id) - row_start(u) + u + 1);
    return {static_cast<Vertex>(u), v};
}

std::size_t VertexSet::size() const {
    std::size_t s = 0;
    for (auto w : words_) s += static_cast<std::size_t>(std::popcount(w));
    return s;
}

bool VertexSet::empty() const {
    for (auto w : words_)
        if (w != 0) return false;
    return true;
}

VertexSet& VertexSet::operator&=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
}

VertexSet& VertexSet::operator|=(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
}

VertexSet& VertexSet::subtract(const VertexSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
}

void VertexSet::clear_below(Vertex v) {
    const std::size_t full = std::min<std::size_t>(v >> 6, words_.size());
    for (std::size_t i = 0; i < full; ++i) words_[i] = 0;
    if (full < words_.size() && (v & 63) != 0) words_[full] &= ~((std::uint64_t{1} << (v & 63)) - 1);
}

Vertex VertexSet::next(Vertex from) const {
    if (from >= n_) return n_;
    std::size_t w = from >> 6;
    std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (from & 63));
    while (true) {
        if (bits != 0) {
            const auto v = static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
            return v < n_ ? v : n_;
        }
        if (++w >= words_.size()) return n_;
        bits = words_[w];
    }
}

std::vector<Vertex> VertexSet::to_vector() const {
    std::vector<Vertex> out;
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
}

VertexSet operator&(VertexSet a, const VertexSet& b) {
    a &= b;
    return a;
}

Graph::Graph(std::uint32_t n) : n_(n), adj_(n, VertexSet(n)) {}

Graph Graph::complete(std::uint32_t n) {
    Graph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph Graph::from_edges(std::uint32_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

void Graph::add_edge(Vertex u, Vertex v) {
    if (u == v || u >= n_ || v >= n_) throw InvalidBoard("Graph::add_edge: invalid edge");
    if (adj_[u].contains(v)) return;
    adj_[u].insert(v);
    adj_[v].insert(u);
    ++edges_;
}

void Graph::remove_edge(Vertex u, Vertex v) {
    if (!adj_[u].contains(v)) return;
    adj_[u].erase(v);
    adj_[v].erase(u);
    --edges_;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edges_);
    for (Vertex u = 0; u < n_; ++u)
        for (Vertex v = adj_[u].next(u + 1); v < n_; v = adj_[u].next(v + 1)) out.emplace_back(u, v);
    return out;
}

Graph Graph::induced(std::span<const Vertex> keep) const {
    Graph h(static_cast<std::uint32_t>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = i + 1; j < keep.size(); ++j)
            if (has_edge(keep[i], keep[j])) h.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
    return h;
}

bool Graph::is_clique(std::span<const Vertex> vs) const {
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (vs[i] == vs[j] || !has_edge(vs[i], vs[j])) return false;
    return true;
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    auto next_line = [&](std::string& out) {
        while (std::getline(in, out)) {
            const auto pos = out.find_first_not_of(" \t\r");
            if (pos == std::string::npos || out[pos] == '#') continue;
            return true;
        }
        return false;
    };
    if (!next_line(line)) throw ParseError("edge list: missing header line \"k m\"");
    std::istringstream head(line);
    long long k = -1, m = -1;
    if (!(head >> k >> m) || k < 0 || m < 0) throw ParseError("edge list: malformed header \"" + line + "\"");
    Graph g(static_cast<std::uint32_t>(k));
    for (long long i = 0; i < m; ++i) {
        if (!next_line(line)) throw ParseError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
        std::istringstream es(line);
        long long u = -1, v = -1;
        if (!(es >> u >> v) || u < 0 || v < 0 || u >= k || v >= k || u == v)
            throw ParseError("edge list: bad edge on line " + std::to_string(i + 2) + ": \"" + line + "\"");
        g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    return g;
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph random_graph(std::uint32_t n, double p, Rng& rng) {
    Graph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) g.add_edge(u, v);
    return g;
}

std::optional<std::vector<Vertex>> find_clique(const Graph& g, const VertexSet& candidates, std::uint32_t k) {
    std::optional<std::vector<Vertex>> found;
    if (k == 0) return std::vector<Vertex>{};
    for_each_clique(g, candidates, k, [&](const std::vector<Vertex>& c) {
        found = c;
        return false;
    });
    return found;
}

}  // namespace mbg
