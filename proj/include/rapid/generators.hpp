#pragma once

#include <cstdint>
#include <random>

#include "rapid/graph.hpp"

namespace rapid {

// Thin wrapper over mt19937_64 with bias-free bounded draws. The standard
// distributions are implementation-defined, so all mapping from raw engine
// output to values happens here to keep generators bit-reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, bound), rejection sampled.
    std::uint64_t bounded(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [lo, hi], inclusive.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
        return lo + bounded(hi - lo + 1);
    }

    // Bernoulli(p) from the top 53 bits.
    bool chance(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        const double u = double(engine_() >> 11) * 0x1.0p-53;
        return u < p;
    }

private:
    std::mt19937_64 engine_;
};

// Directed Erdos-Renyi: each of the n(n-1) arcs present independently with
// p = degree/(n-1); weights uniform in [1, 1000].
Graph gen_er(Vertex n, double degree, std::uint64_t seed);

// Newman-Watts-Strogatz: ring lattice where each vertex connects to its k
// nearest neighbors (k even), plus shortcuts added (not rewired) with
// probability p per lattice edge. Undirected; stored as symmetric arc pairs.
Graph gen_nws(Vertex n, std::uint32_t k, double p, std::uint64_t seed);

} // namespace rapid
