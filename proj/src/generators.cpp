#include "rapid/generators.hpp"

#include <stdexcept>

namespace rapid {

namespace {
Distance random_weight(Rng& rng) { return Distance(rng.range(1, 1000)); }
} // namespace

Graph gen_er(Vertex n, double degree, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("gen_er: n must be positive");
    if (!(degree > 0.0) || degree >= double(n))
        throw std::invalid_argument("gen_er: degree must lie in (0, n)");

    const double p = n > 1 ? degree / double(n - 1) : 0.0;
    Rng rng(seed);
    std::vector<EdgeTriple> edges;
    edges.reserve(std::size_t(double(n) * degree * 1.1) + 16);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = 0; v < n; ++v) {
            if (u == v) continue;
            if (rng.chance(p)) edges.push_back({u, v, random_weight(rng)});
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

Graph gen_nws(Vertex n, std::uint32_t k, double p, std::uint64_t seed) {
    if (k == 0 || k % 2 != 0 || k >= n)
        throw std::invalid_argument("gen_nws: k must be even and in (0, n)");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_nws: p must lie in [0, 1]");

    Rng rng(seed);
    std::vector<EdgeTriple> edges;
    edges.reserve(std::size_t(n) * k * 2);

    // Ring lattice: each vertex to its k/2 clockwise neighbors, both arcs per
    // undirected edge, one weight per edge.
    for (Vertex u = 0; u < n; ++u) {
        for (std::uint32_t d = 1; d <= k / 2; ++d) {
            const Vertex v = Vertex((std::uint64_t(u) + d) % n);
            const Distance w = random_weight(rng);
            edges.push_back({u, v, w});
            edges.push_back({v, u, w});
        }
    }
    // Shortcuts: per lattice edge (u, u+d), with probability p add u -- t for
    // a uniformly random t != u. Duplicates collapse to min at construction.
    for (Vertex u = 0; u < n; ++u) {
        for (std::uint32_t d = 1; d <= k / 2; ++d) {
            if (!rng.chance(p)) continue;
            Vertex t = Vertex(rng.bounded(n - 1));
            if (t >= u) ++t; // uniform over [0, n) \ {u}
            const Distance w = random_weight(rng);
            edges.push_back({u, t, w});
            edges.push_back({t, u, w});
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

} // namespace rapid
