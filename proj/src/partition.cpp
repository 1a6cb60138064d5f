#include "rapid/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rapid {
namespace part {

namespace {

// Symmetrized working graph for the multilevel scheme. Arc weights of both
// directions accumulate onto one undirected edge; merged vertices carry their
// constituent counts in vwgt.
struct WorkGraph {
    std::uint32_t n = 0;
    std::vector<std::uint64_t> xadj;
    std::vector<std::uint32_t> adj;
    std::vector<std::uint64_t> ewgt;
    std::vector<std::uint32_t> vwgt;
};

WorkGraph symmetrize(const Graph& g) {
    struct Und {
        std::uint32_t a, b;
        std::uint64_t w;
    };
    std::vector<Und> und;
    und.reserve(g.num_edges());
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
        auto cols = g.neighbors(u);
        auto ws = g.weights(u);
        for (std::size_t e = 0; e < cols.size(); ++e) {
            const Vertex v = cols[e];
            und.push_back({std::min(u, v), std::max(u, v), ws[e]});
        }
    }
    std::sort(und.begin(), und.end(), [](const Und& x, const Und& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    std::vector<Und> merged;
    for (const auto& e : und) {
        if (!merged.empty() && merged.back().a == e.a && merged.back().b == e.b)
            merged.back().w += e.w;
        else
            merged.push_back(e);
    }

    WorkGraph w;
    w.n = g.num_vertices();
    w.vwgt.assign(w.n, 1);
    w.xadj.assign(std::size_t(w.n) + 1, 0);
    for (const auto& e : merged) {
        w.xadj[e.a + 1]++;
        w.xadj[e.b + 1]++;
    }
    for (std::size_t i = 1; i < w.xadj.size(); ++i) w.xadj[i] += w.xadj[i - 1];
    w.adj.resize(merged.size() * 2);
    w.ewgt.resize(merged.size() * 2);
    std::vector<std::uint64_t> cursor(w.xadj.begin(), w.xadj.end() - 1);
    for (const auto& e : merged) {
        w.adj[cursor[e.a]] = e.b;
        w.ewgt[cursor[e.a]++] = e.w;
        w.adj[cursor[e.b]] = e.a;
        w.ewgt[cursor[e.b]++] = e.w;
    }
    return w;
}

// Heavy-edge matching: in id order, each unmatched vertex pairs with its
// unmatched neighbor of maximum edge weight (lowest id on ties), subject to
// the merged-weight cap. Returns coarse graph + fine->coarse map, or nullopt
// progress below 10%.
struct CoarsePair {
    WorkGraph graph;
    std::vector<std::uint32_t> fine_to_coarse;
};

CoarsePair coarsen_once(const WorkGraph& g, std::uint32_t max_vwgt) {
    std::vector<std::uint32_t> match(g.n, 0xFFFFFFFFu);
    std::uint32_t coarse_n = 0;
    std::vector<std::uint32_t> fine_to_coarse(g.n, 0xFFFFFFFFu);
    for (std::uint32_t u = 0; u < g.n; ++u) {
        if (match[u] != 0xFFFFFFFFu) continue;
        std::uint32_t best = 0xFFFFFFFFu;
        std::uint64_t best_w = 0;
        for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
            const std::uint32_t v = g.adj[e];
            if (match[v] != 0xFFFFFFFFu || v == u) continue;
            if (g.vwgt[u] + g.vwgt[v] > max_vwgt) continue;
            if (g.ewgt[e] > best_w || (g.ewgt[e] == best_w && v < best)) {
                best = v;
                best_w = g.ewgt[e];
            }
        }
        match[u] = (best == 0xFFFFFFFFu) ? u : best;
        if (best != 0xFFFFFFFFu) match[best] = u;
    }
    for (std::uint32_t u = 0; u < g.n; ++u) {
        if (fine_to_coarse[u] != 0xFFFFFFFFu) continue;
        fine_to_coarse[u] = coarse_n;
        if (match[u] != u) fine_to_coarse[match[u]] = coarse_n;
        ++coarse_n;
    }

    WorkGraph c;
    c.n = coarse_n;
    c.vwgt.assign(coarse_n, 0);
    for (std::uint32_t u = 0; u < g.n; ++u) c.vwgt[fine_to_coarse[u]] += g.vwgt[u];

    struct Und {
        std::uint32_t a, b;
        std::uint64_t w;
    };
    std::vector<Und> und;
    for (std::uint32_t u = 0; u < g.n; ++u) {
        const std::uint32_t cu = fine_to_coarse[u];
        for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
            const std::uint32_t cv = fine_to_coarse[g.adj[e]];
            if (cu < cv) und.push_back({cu, cv, g.ewgt[e]});
        }
    }
    std::sort(und.begin(), und.end(), [](const Und& x, const Und& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    std::vector<Und> merged;
    for (const auto& e : und) {
        if (!merged.empty() && merged.back().a == e.a && merged.back().b == e.b)
            merged.back().w += e.w;
        else
            merged.push_back(e);
    }
    c.xadj.assign(std::size_t(coarse_n) + 1, 0);
    for (const auto& e : merged) {
        c.xadj[e.a + 1]++;
        c.xadj[e.b + 1]++;
    }
    for (std::size_t i = 1; i < c.xadj.size(); ++i) c.xadj[i] += c.xadj[i - 1];
    c.adj.resize(merged.size() * 2);
    c.ewgt.resize(merged.size() * 2);
    std::vector<std::uint64_t> cursor(c.xadj.begin(), c.xadj.end() - 1);
    for (const auto& e : merged) {
        c.adj[cursor[e.a]] = e.b;
        c.ewgt[cursor[e.a]++] = e.w;
        c.adj[cursor[e.b]] = e.a;
        c.ewgt[cursor[e.b]++] = e.w;
    }
    return {std::move(c), std::move(fine_to_coarse)};
}

// Sum of edge weights from u into each part among its assigned neighbors.
void gather_gains(const WorkGraph& g, const std::vector<std::uint32_t>& where, std::uint32_t u,
                  std::vector<std::uint64_t>& conn) {
    for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
        const std::uint32_t p = where[g.adj[e]];
        if (p != 0xFFFFFFFFu) conn[p] += g.ewgt[e];
    }
}

// Greedy region growing from a given seed ordering. Assigns every vertex,
// respecting the per-part capacity.
std::vector<std::uint32_t> grow_parts(const WorkGraph& g, std::uint32_t k, std::uint64_t cap,
                                      std::uint32_t seed_shift) {
    std::vector<std::uint32_t> where(g.n, 0xFFFFFFFFu);
    std::vector<std::uint64_t> load(k, 0);
    const std::uint64_t total =
        std::accumulate(g.vwgt.begin(), g.vwgt.end(), std::uint64_t(0));
    const std::uint64_t target = (total + k - 1) / k;

    std::vector<std::uint64_t> conn(k, 0);

    std::uint32_t assigned = 0;
    for (std::uint32_t p = 0; p + 1 < k; ++p) {
        // Seed: first unassigned vertex at the rotated offset.
        std::uint32_t seed = 0xFFFFFFFFu;
        for (std::uint32_t i = 0; i < g.n; ++i) {
            const std::uint32_t u = (i + seed_shift) % g.n;
            if (where[u] == 0xFFFFFFFFu) {
                seed = u;
                break;
            }
        }
        if (seed == 0xFFFFFFFFu) break;
        where[seed] = p;
        load[p] += g.vwgt[seed];
        ++assigned;
        while (load[p] < target && assigned < g.n) {
            // Frontier vertex with the strongest connection to part p.
            std::uint32_t best = 0xFFFFFFFFu;
            std::uint64_t best_conn = 0;
            for (std::uint32_t u = 0; u < g.n; ++u) {
                if (where[u] != 0xFFFFFFFFu || load[p] + g.vwgt[u] > cap) continue;
                std::uint64_t c = 0;
                for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e)
                    if (where[g.adj[e]] == p) c += g.ewgt[e];
                if (c > best_conn || (c > 0 && c == best_conn && u < best)) {
                    best = u;
                    best_conn = c;
                }
            }
            if (best == 0xFFFFFFFFu) {
                // Disconnected from the current region: restart from the
                // lowest-id unassigned vertex that fits.
                for (std::uint32_t u = 0; u < g.n; ++u) {
                    if (where[u] == 0xFFFFFFFFu && load[p] + g.vwgt[u] <= cap) {
                        best = u;
                        break;
                    }
                }
                if (best == 0xFFFFFFFFu) break;
            }
            where[best] = p;
            load[p] += g.vwgt[best];
            ++assigned;
        }
    }
    // Remaining vertices: strongest-connection part with room, least loaded
    // on ties.
    for (std::uint32_t u = 0; u < g.n; ++u) {
        if (where[u] != 0xFFFFFFFFu) continue;
        std::fill(conn.begin(), conn.end(), 0);
        gather_gains(g, where, u, conn);
        std::uint32_t best = 0xFFFFFFFFu;
        for (std::uint32_t p = 0; p < k; ++p) {
            if (load[p] + g.vwgt[u] > cap) continue;
            if (best == 0xFFFFFFFFu || conn[p] > conn[best] ||
                (conn[p] == conn[best] && load[p] < load[best]))
                best = p;
        }
        if (best == 0xFFFFFFFFu) {
            // No part has nominal room (heavy merged vertices); take the
            // least loaded and let refinement repair.
            best = std::uint32_t(std::min_element(load.begin(), load.end()) - load.begin());
        }
        where[u] = best;
        load[best] += g.vwgt[u];
    }
    return where;
}

std::uint64_t cut_of(const WorkGraph& g, const std::vector<std::uint32_t>& where) {
    std::uint64_t cut = 0;
    for (std::uint32_t u = 0; u < g.n; ++u)
        for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e)
            if (u < g.adj[e] && where[u] != where[g.adj[e]]) cut += g.ewgt[e];
    return cut;
}

// Greedy boundary refinement, FM style: passes over boundary vertices moving
// each to its best-gain part while the balance cap holds; stops when a pass
// makes no move.
void refine(const WorkGraph& g, std::uint32_t k, std::uint64_t cap,
            std::vector<std::uint32_t>& where, int max_passes = 8) {
    std::vector<std::uint64_t> load(k, 0);
    for (std::uint32_t u = 0; u < g.n; ++u) load[where[u]] += g.vwgt[u];
    std::vector<std::uint64_t> conn(k, 0);

    for (int pass = 0; pass < max_passes; ++pass) {
        bool moved = false;
        for (std::uint32_t u = 0; u < g.n; ++u) {
            const std::uint32_t from = where[u];
            if (load[from] <= g.vwgt[u]) continue; // do not empty a part
            std::fill(conn.begin(), conn.end(), 0);
            bool on_boundary = false;
            for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
                const std::uint32_t p = where[g.adj[e]];
                conn[p] += g.ewgt[e];
                if (p != from) on_boundary = true;
            }
            if (!on_boundary) continue;
            std::uint32_t best = from;
            std::uint64_t best_gain = 0;
            for (std::uint32_t p = 0; p < k; ++p) {
                if (p == from || load[p] + g.vwgt[u] > cap) continue;
                if (conn[p] <= conn[from]) continue;
                const std::uint64_t gain = conn[p] - conn[from];
                if (gain > best_gain || (gain == best_gain && p < best)) {
                    best = p;
                    best_gain = gain;
                }
            }
            if (best != from) {
                load[from] -= g.vwgt[u];
                load[best] += g.vwgt[u];
                where[u] = best;
                moved = true;
            }
        }
        if (!moved) break;
    }
}

std::vector<std::uint32_t> project(const std::vector<std::uint32_t>& coarse_where,
                                   const std::vector<std::uint32_t>& fine_to_coarse) {
    std::vector<std::uint32_t> fine(fine_to_coarse.size());
    for (std::size_t u = 0; u < fine.size(); ++u) fine[u] = coarse_where[fine_to_coarse[u]];
    return fine;
}

// Unit-weight balance repair on the finest graph: while a part exceeds the
// cap, move its cheapest boundary-adjacent vertex to the best part with room.
void enforce_balance(const WorkGraph& g, std::uint32_t k, std::uint64_t cap,
                     std::vector<std::uint32_t>& where) {
    std::vector<std::uint64_t> load(k, 0);
    for (std::uint32_t u = 0; u < g.n; ++u) load[where[u]] += g.vwgt[u];
    for (;;) {
        std::uint32_t over = 0xFFFFFFFFu;
        for (std::uint32_t p = 0; p < k; ++p)
            if (load[p] > cap) {
                over = p;
                break;
            }
        if (over == 0xFFFFFFFFu) return;
        // Cheapest move out of the overloaded part: maximize (conn[to] -
        // conn[from]); any destination with room qualifies.
        std::uint32_t best_u = 0xFFFFFFFFu, best_to = 0;
        std::int64_t best_gain = 0;
        for (std::uint32_t u = 0; u < g.n; ++u) {
            if (where[u] != over) continue;
            std::int64_t conn_from = 0;
            std::vector<std::int64_t> conn(k, 0);
            for (std::uint64_t e = g.xadj[u]; e < g.xadj[u + 1]; ++e) {
                const std::uint32_t p = where[g.adj[e]];
                if (p == over)
                    conn_from += std::int64_t(g.ewgt[e]);
                else
                    conn[p] += std::int64_t(g.ewgt[e]);
            }
            for (std::uint32_t p = 0; p < k; ++p) {
                if (p == over || load[p] + g.vwgt[u] > cap) continue;
                const std::int64_t gain = conn[p] - conn_from;
                if (best_u == 0xFFFFFFFFu || gain > best_gain ||
                    (gain == best_gain && u < best_u)) {
                    best_u = u;
                    best_to = p;
                    best_gain = gain;
                }
            }
        }
        if (best_u == 0xFFFFFFFFu) return; // nowhere to move; caller validates
        load[over] -= g.vwgt[best_u];
        load[best_to] += g.vwgt[best_u];
        where[best_u] = best_to;
    }
}

} // namespace

std::vector<std::uint32_t> partition_kway(const Graph& g, std::uint32_t k, double imbalance) {
    const std::uint32_t n = g.num_vertices();
    if (k == 0) throw std::invalid_argument("partition_kway: k must be at least 1");
    if (k > n) throw std::invalid_argument("partition_kway: k exceeds vertex count");
    if (imbalance < 1.0) throw std::invalid_argument("partition_kway: imbalance must be >= 1");
    if (k == 1) return std::vector<std::uint32_t>(n, 0);

    const std::uint64_t ceil_nk = (std::uint64_t(n) + k - 1) / k;
    const std::uint64_t cap = std::max<std::uint64_t>(
        ceil_nk, std::uint64_t(std::floor(imbalance * double(ceil_nk))));

    WorkGraph finest = symmetrize(g);

    // Coarsen until the graph is small or matching stalls.
    std::vector<WorkGraph> levels;
    std::vector<std::vector<std::uint32_t>> maps;
    levels.push_back(std::move(finest));
    const std::uint32_t coarse_target = std::max<std::uint32_t>(4 * k, 64);
    const std::uint32_t max_vwgt = std::uint32_t(std::max<std::uint64_t>(1, cap / 4));
    while (levels.back().n > coarse_target) {
        CoarsePair next = coarsen_once(levels.back(), max_vwgt);
        if (next.graph.n > levels.back().n * 9 / 10) break; // matching stalled
        maps.push_back(std::move(next.fine_to_coarse));
        levels.push_back(std::move(next.graph));
    }

    // Initial partition on the coarsest graph: a few deterministic region
    // growths, keep the best cut.
    const WorkGraph& coarsest = levels.back();
    std::vector<std::uint32_t> where;
    std::uint64_t best_cut = ~std::uint64_t(0);
    const std::uint32_t tries = std::min<std::uint32_t>(coarsest.n, 8);
    for (std::uint32_t t = 0; t < tries; ++t) {
        std::vector<std::uint32_t> cand =
            grow_parts(coarsest, k, cap, t * (coarsest.n / std::max(1u, tries)));
        refine(coarsest, k, cap, cand);
        const std::uint64_t cut = cut_of(coarsest, cand);
        if (cut < best_cut) {
            best_cut = cut;
            where = std::move(cand);
        }
    }

    // Uncoarsen with refinement at every level.
    for (std::size_t lvl = levels.size(); lvl-- > 1;) {
        where = project(where, maps[lvl - 1]);
        refine(levels[lvl - 1], k, cap, where);
    }
    enforce_balance(levels[0], k, cap, where);
    return where;
}

std::vector<Vertex> find_boundary(const Graph& g, const std::vector<std::uint32_t>& assignment,
                                  std::uint32_t part) {
    const Vertex n = g.num_vertices();
    if (assignment.size() != n)
        throw std::invalid_argument("find_boundary: assignment does not cover all vertices");
    std::uint32_t nparts = 0;
    for (auto p : assignment) nparts = std::max(nparts, p + 1);
    if (part >= nparts) throw std::invalid_argument("find_boundary: invalid part id");

    std::vector<char> is_boundary(n, 0);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v : g.neighbors(u))
            if (assignment[u] != assignment[v]) {
                is_boundary[u] = 1;
                is_boundary[v] = 1;
            }
    std::vector<Vertex> out;
    for (Vertex u = 0; u < n; ++u)
        if (assignment[u] == part && is_boundary[u]) out.push_back(u);
    return out;
}

std::uint64_t edge_cut(const Graph& g, const std::vector<std::uint32_t>& assignment) {
    std::uint64_t cut = 0;
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
        auto cols = g.neighbors(u);
        auto ws = g.weights(u);
        for (std::size_t e = 0; e < cols.size(); ++e)
            if (assignment[u] != assignment[cols[e]]) cut += ws[e];
    }
    return cut;
}

} // namespace part
} // namespace rapid
