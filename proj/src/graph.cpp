#include "rapid/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace rapid {

Graph Graph::from_edges(Vertex n, std::vector<EdgeTriple> edges) {
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n)
            throw std::out_of_range("edge endpoint out of range: (" + std::to_string(e.u) +
                                    ", " + std::to_string(e.v) + ") with n=" + std::to_string(n));
        if (e.w == kInf) throw std::invalid_argument("edge weight must be finite");
    }

    // Drop self loops, sort, collapse duplicates to min weight.
    std::erase_if(edges, [](const EdgeTriple& e) { return e.u == e.v; });
    std::sort(edges.begin(), edges.end(), [](const EdgeTriple& a, const EdgeTriple& b) {
        if (a.u != b.u) return a.u < b.u;
        if (a.v != b.v) return a.v < b.v;
        return a.w < b.w;
    });

    Graph g;
    g.n_ = n;
    g.rowptr_.assign(std::size_t(n) + 1, 0);
    g.col_.reserve(edges.size());
    g.val_.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i > 0 && edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            continue; // duplicate; the sort put the minimum weight first
        g.col_.push_back(edges[i].v);
        g.val_.push_back(edges[i].w);
        g.rowptr_[edges[i].u + 1]++;
    }
    for (std::size_t i = 1; i < g.rowptr_.size(); ++i) g.rowptr_[i] += g.rowptr_[i - 1];
    return g;
}

DistanceMatrix csr_to_dense(const Graph& g, const std::vector<Vertex>* subset) {
    const Vertex n = g.num_vertices();
    if (subset == nullptr) {
        DistanceMatrix d = DistanceMatrix::identity(n);
        for (Vertex u = 0; u < n; ++u) {
            auto cols = g.neighbors(u);
            auto ws = g.weights(u);
            for (std::size_t e = 0; e < cols.size(); ++e) d(u, cols[e]) = ws[e];
        }
        return d;
    }

    std::vector<std::uint32_t> pos(n, 0xFFFFFFFFu);
    for (std::size_t i = 0; i < subset->size(); ++i) {
        Vertex v = (*subset)[i];
        if (v >= n) throw std::out_of_range("subset vertex out of range");
        if (pos[v] != 0xFFFFFFFFu) throw std::invalid_argument("subset vertices must be distinct");
        pos[v] = std::uint32_t(i);
    }
    DistanceMatrix d = DistanceMatrix::identity(subset->size());
    for (std::size_t i = 0; i < subset->size(); ++i) {
        Vertex u = (*subset)[i];
        auto cols = g.neighbors(u);
        auto ws = g.weights(u);
        for (std::size_t e = 0; e < cols.size(); ++e) {
            std::uint32_t j = pos[cols[e]];
            if (j != 0xFFFFFFFFu) d(i, j) = ws[e];
        }
    }
    return d;
}

Graph dense_to_csr(const DistanceMatrix& d) {
    const std::size_t n = d.side();
    std::vector<EdgeTriple> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && d(i, j) != kInf)
                edges.push_back({Vertex(i), Vertex(j), d(i, j)});
    return Graph::from_edges(Vertex(n), std::move(edges));
}

} // namespace rapid
