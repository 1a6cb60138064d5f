#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "rapid/distance.hpp"

namespace rapid {

using Vertex = std::uint32_t;

struct EdgeTriple {
    Vertex u;
    Vertex v;
    Distance w;
};

// Directed weighted graph in canonical CSR form:
//   - rowptr non-decreasing, rowptr[0] = 0, rowptr[n] = |col| = |val|
//   - col strictly increasing within each row (implies no parallel edges)
//   - no self loops; all weights finite
// Immutable after construction.
class Graph {
public:
    Graph() = default;

    // Canonicalizes: self loops dropped, duplicates collapsed to minimum
    // weight, rows sorted. Throws std::out_of_range on a vertex id >= n and
    // std::invalid_argument on an infinite weight.
    static Graph from_edges(Vertex n, std::vector<EdgeTriple> edges);

    Vertex num_vertices() const { return n_; }
    std::size_t num_edges() const { return col_.size(); }

    const std::vector<std::uint64_t>& rowptr() const { return rowptr_; }
    const std::vector<Vertex>& col() const { return col_; }
    const std::vector<Distance>& val() const { return val_; }

    std::span<const Vertex> neighbors(Vertex u) const {
        return {col_.data() + rowptr_[u], col_.data() + rowptr_[u + 1]};
    }
    std::span<const Distance> weights(Vertex u) const {
        return {val_.data() + rowptr_[u], val_.data() + rowptr_[u + 1]};
    }

    std::size_t out_degree(Vertex u) const { return rowptr_[u + 1] - rowptr_[u]; }

    bool operator==(const Graph& o) const {
        return n_ == o.n_ && rowptr_ == o.rowptr_ && col_ == o.col_ && val_ == o.val_;
    }

private:
    Vertex n_ = 0;
    std::vector<std::uint64_t> rowptr_{0};
    std::vector<Vertex> col_;
    std::vector<Distance> val_;
};

// Dense adjacency over `subset` (or all vertices): edge weight where an edge
// exists inside the subset, 0 on the diagonal, kInf elsewhere.
DistanceMatrix csr_to_dense(const Graph& g,
                            const std::vector<Vertex>* subset = nullptr);

// CSR holding exactly the finite off-diagonal entries of d. Inverse of
// csr_to_dense on the finite-entry structure.
Graph dense_to_csr(const DistanceMatrix& d);

} // namespace rapid
