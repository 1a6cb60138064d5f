#include "rapid/dijkstra.hpp"

#include <queue>
#include <stdexcept>
#include <utility>

namespace rapid {

std::vector<Distance> dijkstra(const Graph& g, Vertex source) {
    const Vertex n = g.num_vertices();
    if (source >= n) throw std::out_of_range("dijkstra: source out of range");
    std::vector<Distance> dist(n, kInf);
    dist[source] = 0;

    using Item = std::pair<Distance, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0, source});
    while (!heap.empty()) {
        auto [du, u] = heap.top();
        heap.pop();
        if (du != dist[u]) continue; // stale entry
        auto cols = g.neighbors(u);
        auto ws = g.weights(u);
        for (std::size_t e = 0; e < cols.size(); ++e) {
            const Distance cand = saturating_add(du, ws[e]);
            if (cand < dist[cols[e]]) {
                dist[cols[e]] = cand;
                heap.push({cand, cols[e]});
            }
        }
    }
    return dist;
}

} // namespace rapid
