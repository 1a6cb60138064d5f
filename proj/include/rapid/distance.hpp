#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rapid {

// Path length over the (min, +) semiring. 32-bit, with the all-ones sentinel
// standing in for "unreachable".
using Distance = std::uint32_t;

inline constexpr Distance kInf = 0xFFFFFFFFu;

// min(a + b, kInf), computed exactly. kInf is absorbing.
inline Distance saturating_add(Distance a, Distance b) {
    if (a == kInf || b == kInf) return kInf;
    const std::uint64_t s = std::uint64_t(a) + std::uint64_t(b);
    return s >= kInf ? kInf : Distance(s);
}

inline Distance saturating_add3(Distance a, Distance b, Distance c) {
    return saturating_add(saturating_add(a, b), c);
}

// Dense row-major matrix of Distance values. Square in most uses (side() is
// only valid then); min-plus products and cross blocks are rectangular.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    DistanceMatrix(std::size_t rows, std::size_t cols, Distance fill = kInf)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    // Square matrix with zero diagonal and kInf elsewhere.
    static DistanceMatrix identity(std::size_t n) {
        DistanceMatrix m(n, n, kInf);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    std::size_t side() const {
        if (!square()) throw std::logic_error("side() on non-square matrix");
        return rows_;
    }

    Distance& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Distance operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Distance* row(std::size_t i) { return data_.data() + i * cols_; }
    const Distance* row(std::size_t i) const { return data_.data() + i * cols_; }

    const std::vector<Distance>& data() const { return data_; }

    bool operator==(const DistanceMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Distance> data_;
};

} // namespace rapid
