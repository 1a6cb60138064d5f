#pragma once

#include <cstdint>
#include <vector>

#include "rapid/distance.hpp"

namespace rapid {
namespace kernels {

// In-place Floyd-Warshall closure: d[i][j] = min(d[i][j], d[i][k] + d[k][j])
// over every pivot k, with saturating arithmetic. Requires a zero diagonal.
// Returns the number of entries that were actually lowered (selective-write
// count for the cost model). Idempotent.
std::uint64_t fw_classic(DistanceMatrix& d);

// Pivot row/column split out of the block, the way the compute array holds
// them: panel_row[j'] = d[k][j'], panel_col[i'] = d[i'][k] over the non-pivot
// index maps, main_block the remaining (n-1) x (n-1) entries.
struct PanelLayout {
    std::size_t pivot = 0;
    Distance pivot_diag = 0;
    std::vector<Distance> panel_row;
    std::vector<Distance> panel_col;
    DistanceMatrix main_block;
};

PanelLayout extract_panels(const DistanceMatrix& d, std::size_t pivot);

// Exact inverse of extract_panels.
DistanceMatrix recombine_panels(const PanelLayout& layout);

// Floyd-Warshall organized as the array executes it: per pivot, extract the
// panels, relax the whole main block with one vector add and one vector min
// (the panels themselves never change at their own pivot since the pivot
// diagonal is 0), then permute the next pivot's row/column into the panels.
// Bit-identical to fw_classic. Returns the selective-write count.
std::uint64_t fw_remapped(DistanceMatrix& d);

// c[i][j] = min over t of a[i][t] + b[t][j], saturating. a is p x q, b is
// q x r. `writes` (optional) receives the number of finite output entries.
DistanceMatrix min_plus_product(const DistanceMatrix& a, const DistanceMatrix& b,
                                std::uint64_t* writes = nullptr);

// |idx| x |idx| submatrix d[idx][idx], in idx order.
DistanceMatrix restrict_to(const DistanceMatrix& d, const std::vector<std::uint32_t>& idx);

// Min-overwrite of db into d at the index-mapped positions:
// d[idx[a]][idx[b]] = min(d[idx[a]][idx[b]], db[a][b]). Never lengthens.
void inject(DistanceMatrix& d, const DistanceMatrix& db,
            const std::vector<std::uint32_t>& idx);

// Cross-component block: out[m][n] = min over i, j of
// d1[m][i] + db[b1[i]][b2[j]] + d2[j][n]. d1 and d2 are FW-closed component
// matrices in boundary-first order; b1/b2 map their leading boundary
// positions into db. Two chained min-plus passes. Empty boundaries give an
// all-infinite block (the components cannot reach each other).
DistanceMatrix cross_merge(const DistanceMatrix& d1, const DistanceMatrix& db,
                           const DistanceMatrix& d2,
                           const std::vector<std::uint32_t>& b1,
                           const std::vector<std::uint32_t>& b2,
                           std::uint64_t* writes = nullptr);

} // namespace kernels
} // namespace rapid
