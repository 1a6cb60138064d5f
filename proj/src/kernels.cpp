#include "rapid/kernels.hpp"

#include <stdexcept>

namespace rapid {
namespace kernels {

namespace {
void require_zero_diagonal(const DistanceMatrix& d) {
    const std::size_t n = d.side();
    for (std::size_t i = 0; i < n; ++i)
        if (d(i, i) != 0) throw std::invalid_argument("distance matrix diagonal must be zero");
}
} // namespace

std::uint64_t fw_classic(DistanceMatrix& d) {
    require_zero_diagonal(d);
    const std::size_t n = d.side();
    std::uint64_t updates = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Distance* rk = d.row(k);
        for (std::size_t i = 0; i < n; ++i) {
            const Distance dik = d(i, k);
            if (dik == kInf) continue;
            Distance* ri = d.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                const Distance cand = saturating_add(dik, rk[j]);
                if (cand < ri[j]) {
                    ri[j] = cand;
                    ++updates;
                }
            }
        }
    }
    return updates;
}

PanelLayout extract_panels(const DistanceMatrix& d, std::size_t pivot) {
    const std::size_t n = d.side();
    if (pivot >= n) throw std::out_of_range("pivot out of range");
    PanelLayout layout;
    layout.pivot = pivot;
    layout.pivot_diag = d(pivot, pivot);
    layout.panel_row.resize(n - 1);
    layout.panel_col.resize(n - 1);
    layout.main_block = DistanceMatrix(n - 1, n - 1);
    for (std::size_t i = 0, ii = 0; i < n; ++i) {
        if (i == pivot) continue;
        layout.panel_col[ii] = d(i, pivot);
        layout.panel_row[ii] = d(pivot, i);
        for (std::size_t j = 0, jj = 0; j < n; ++j) {
            if (j == pivot) continue;
            layout.main_block(ii, jj) = d(i, j);
            ++jj;
        }
        ++ii;
    }
    return layout;
}

DistanceMatrix recombine_panels(const PanelLayout& layout) {
    const std::size_t n = layout.main_block.rows() + 1;
    DistanceMatrix d(n, n);
    d(layout.pivot, layout.pivot) = layout.pivot_diag;
    for (std::size_t i = 0, ii = 0; i < n; ++i) {
        if (i == layout.pivot) continue;
        d(i, layout.pivot) = layout.panel_col[ii];
        d(layout.pivot, i) = layout.panel_row[ii];
        for (std::size_t j = 0, jj = 0; j < n; ++j) {
            if (j == layout.pivot) continue;
            d(i, j) = layout.main_block(ii, jj);
            ++jj;
        }
        ++ii;
    }
    return d;
}

std::uint64_t fw_remapped(DistanceMatrix& d) {
    require_zero_diagonal(d);
    const std::size_t n = d.side();
    if (n <= 1) return 0;
    std::uint64_t updates = 0;
    for (std::size_t k = 0; k < n; ++k) {
        PanelLayout layout = extract_panels(d, k);
        // One add and one min over the whole main block; the pivot row and
        // column are untouched at their own pivot (zero pivot diagonal).
        for (std::size_t i = 0; i < n - 1; ++i) {
            const Distance via = layout.panel_col[i];
            if (via == kInf) continue;
            Distance* row = layout.main_block.row(i);
            for (std::size_t j = 0; j < n - 1; ++j) {
                const Distance cand = saturating_add(via, layout.panel_row[j]);
                if (cand < row[j]) {
                    row[j] = cand;
                    ++updates;
                }
            }
        }
        // Permutation step: the updated block flows back so the next pivot's
        // row/column land in the panels.
        d = recombine_panels(layout);
    }
    return updates;
}

DistanceMatrix min_plus_product(const DistanceMatrix& a, const DistanceMatrix& b,
                                std::uint64_t* writes) {
    if (a.cols() != b.rows()) throw std::invalid_argument("min_plus_product: inner dimensions differ");
    const std::size_t p = a.rows(), q = a.cols(), r = b.cols();
    DistanceMatrix c(p, r, kInf);
    for (std::size_t i = 0; i < p; ++i) {
        const Distance* ra = a.row(i);
        Distance* rc = c.row(i);
        for (std::size_t t = 0; t < q; ++t) {
            const Distance at = ra[t];
            if (at == kInf) continue;
            const Distance* rb = b.row(t);
            for (std::size_t j = 0; j < r; ++j) {
                const Distance cand = saturating_add(at, rb[j]);
                if (cand < rc[j]) rc[j] = cand;
            }
        }
    }
    if (writes) {
        std::uint64_t finite = 0;
        for (Distance v : c.data())
            if (v != kInf) ++finite;
        *writes += finite;
    }
    return c;
}

DistanceMatrix restrict_to(const DistanceMatrix& d, const std::vector<std::uint32_t>& idx) {
    for (auto i : idx)
        if (i >= d.rows() || i >= d.cols()) throw std::out_of_range("restrict index out of range");
    DistanceMatrix out(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = d(idx[a], idx[b]);
    return out;
}

void inject(DistanceMatrix& d, const DistanceMatrix& db, const std::vector<std::uint32_t>& idx) {
    if (db.rows() != idx.size() || db.cols() != idx.size())
        throw std::invalid_argument("inject: index list does not match db block size");
    for (auto i : idx)
        if (i >= d.rows() || i >= d.cols()) throw std::out_of_range("inject index out of range");
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) {
            Distance& cell = d(idx[a], idx[b]);
            if (db(a, b) < cell) cell = db(a, b);
        }
}

DistanceMatrix cross_merge(const DistanceMatrix& d1, const DistanceMatrix& db,
                           const DistanceMatrix& d2,
                           const std::vector<std::uint32_t>& b1,
                           const std::vector<std::uint32_t>& b2, std::uint64_t* writes) {
    if (b1.size() > d1.cols() || b2.size() > d2.rows())
        throw std::invalid_argument("cross_merge: more boundary indices than matrix positions");
    for (auto i : b1)
        if (i >= db.rows()) throw std::invalid_argument("cross_merge: b1 index not covered by db");
    for (auto j : b2)
        if (j >= db.cols()) throw std::invalid_argument("cross_merge: b2 index not covered by db");

    // Source-to-boundary columns of d1.
    DistanceMatrix to_boundary(d1.rows(), b1.size());
    for (std::size_t m = 0; m < d1.rows(); ++m)
        for (std::size_t a = 0; a < b1.size(); ++a) to_boundary(m, a) = d1(m, a);
    // Boundary-to-boundary block of db.
    DistanceMatrix db_block(b1.size(), b2.size());
    for (std::size_t a = 0; a < b1.size(); ++a)
        for (std::size_t b = 0; b < b2.size(); ++b) db_block(a, b) = db(b1[a], b2[b]);
    // Boundary-to-destination rows of d2.
    DistanceMatrix from_boundary(b2.size(), d2.cols());
    for (std::size_t b = 0; b < b2.size(); ++b)
        for (std::size_t n = 0; n < d2.cols(); ++n) from_boundary(b, n) = d2(b, n);

    DistanceMatrix mid = min_plus_product(to_boundary, db_block);
    return min_plus_product(mid, from_boundary, writes);
}

} // namespace kernels
} // namespace rapid
