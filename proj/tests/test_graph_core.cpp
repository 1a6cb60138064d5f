#include "doctest.h"

#include <set>
#include <sstream>

#include "rapid/error.hpp"
#include "rapid/generators.hpp"
#include "rapid/graph.hpp"
#include "rapid/graph_io.hpp"

using namespace rapid;

namespace {

Distance rand_dist(Rng& rng) {
    // Mix in the sentinel and saturation-adjacent values.
    switch (rng.bounded(8)) {
        case 0: return kInf;
        case 1: return kInf - Distance(rng.bounded(6));
        default: return Distance(rng.bounded(1u << 20));
    }
}

Graph random_graph(Vertex n, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<EdgeTriple> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
            if (u != v && rng.chance(p))
                edges.push_back({u, v, Distance(rng.range(1, 1000))});
    return Graph::from_edges(n, std::move(edges));
}

// Average local clustering coefficient of the undirected simple view.
double clustering_coefficient(const Graph& g) {
    const Vertex n = g.num_vertices();
    std::vector<std::set<Vertex>> adj(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v : g.neighbors(u)) {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    double total = 0;
    for (Vertex u = 0; u < n; ++u) {
        const std::size_t deg = adj[u].size();
        if (deg < 2) continue;
        std::size_t links = 0;
        for (Vertex a : adj[u])
            for (Vertex b : adj[u])
                if (a < b && adj[a].count(b)) ++links;
        total += 2.0 * double(links) / (double(deg) * double(deg - 1));
    }
    return total / double(n);
}

} // namespace

TEST_CASE("saturating_add basics") {
    CHECK(saturating_add(3, 4) == 7);
    CHECK(saturating_add(kInf, 5) == kInf);
    CHECK(saturating_add(5, kInf) == kInf);
    CHECK(saturating_add(kInf, kInf) == kInf);
    CHECK(saturating_add(kInf - 5, 5) == kInf); // saturation boundary hits the sentinel
    CHECK(saturating_add(kInf - 6, 5) == kInf - 1);
    CHECK(saturating_add(0, 0) == 0);
}

TEST_CASE("tropical semiring axioms on random triples") {
    Rng rng(2024);
    for (int i = 0; i < 20000; ++i) {
        const Distance a = rand_dist(rng), b = rand_dist(rng), c = rand_dist(rng);
        // (min, +) with identities kInf and 0
        CHECK(std::min(a, b) == std::min(b, a));
        CHECK(std::min(std::min(a, b), c) == std::min(a, std::min(b, c)));
        CHECK(saturating_add(a, b) == saturating_add(b, a));
        CHECK(saturating_add(saturating_add(a, b), c) == saturating_add(a, saturating_add(b, c)));
        CHECK(std::min(a, kInf) == a);
        CHECK(saturating_add(a, Distance(0)) == a);
        CHECK(saturating_add(a, kInf) == kInf);
        const Distance lhs = saturating_add(a, std::min(b, c));
        const Distance rhs = std::min(saturating_add(a, b), saturating_add(a, c));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("edge list loading") {
    SUBCASE("single edge") {
        std::istringstream in("2 1\n0 1 3\n");
        Graph g = load_edge_list(in);
        CHECK(g.num_vertices() == 2);
        CHECK(g.rowptr() == std::vector<std::uint64_t>{0, 1, 1});
        CHECK(g.col() == std::vector<Vertex>{1});
        CHECK(g.val() == std::vector<Distance>{3});
    }
    SUBCASE("duplicate collapses to min") {
        std::istringstream in("2 2\n0 1 3\n0 1 2\n");
        Graph g = load_edge_list(in);
        CHECK(g.val() == std::vector<Distance>{2});
    }
    SUBCASE("vertex id out of range") {
        std::istringstream in("2 1\n0 2 3\n");
        CHECK_THROWS_AS(load_edge_list(in), std::out_of_range);
    }
    SUBCASE("malformed line reports its number") {
        std::istringstream in("2 2\n0 1 3\n0 x 2\n");
        try {
            load_edge_list(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("self loops dropped") {
        std::istringstream in("3 2\n1 1 5\n0 1 7\n");
        Graph g = load_edge_list(in);
        CHECK(g.num_edges() == 1);
    }
    SUBCASE("missing edges") {
        std::istringstream in("3 2\n0 1 5\n");
        CHECK_THROWS_AS(load_edge_list(in), ParseError);
    }
    SUBCASE("round trip") {
        Graph g = random_graph(17, 0.3, 99);
        std::ostringstream out;
        save_edge_list(g, out);
        std::istringstream in(out.str());
        CHECK(load_edge_list(in) == g);
    }
}

TEST_CASE("csr canonical form") {
    Rng rng(5);
    for (int iter = 0; iter < 30; ++iter) {
        const Vertex n = Vertex(2 + rng.bounded(20));
        std::vector<EdgeTriple> edges;
        const std::size_t m = rng.bounded(80);
        for (std::size_t e = 0; e < m; ++e)
            edges.push_back({Vertex(rng.bounded(n)), Vertex(rng.bounded(n)),
                             Distance(rng.range(1, 50))});
        Graph g = Graph::from_edges(n, edges);
        CHECK(g.rowptr().front() == 0);
        CHECK(g.rowptr().back() == g.num_edges());
        for (Vertex u = 0; u < n; ++u) {
            auto cols = g.neighbors(u);
            for (std::size_t i = 0; i < cols.size(); ++i) {
                CHECK(cols[i] != u);
                CHECK(cols[i] < n);
                if (i > 0) CHECK(cols[i - 1] < cols[i]); // strictly increasing
            }
        }
        // Min-collapse: every kept weight is the minimum among duplicates.
        for (const auto& e : edges) {
            if (e.u == e.v) continue;
            auto cols = g.neighbors(e.u);
            auto ws = g.weights(e.u);
            bool found = false;
            for (std::size_t i = 0; i < cols.size(); ++i)
                if (cols[i] == e.v) {
                    CHECK(ws[i] <= e.w);
                    found = true;
                }
            CHECK(found);
        }
    }
}

TEST_CASE("csr_to_dense") {
    Graph g = Graph::from_edges(2, {{0, 1, 3}});
    DistanceMatrix d = csr_to_dense(g);
    CHECK(d(0, 0) == 0);
    CHECK(d(0, 1) == 3);
    CHECK(d(1, 0) == kInf);
    CHECK(d(1, 1) == 0);

    std::vector<Vertex> singleton{1};
    DistanceMatrix s = csr_to_dense(g, &singleton);
    CHECK(s.rows() == 1);
    CHECK(s(0, 0) == 0);

    std::vector<Vertex> bad{0, 7};
    CHECK_THROWS_AS(csr_to_dense(g, &bad), std::out_of_range);
    std::vector<Vertex> dup{0, 0};
    CHECK_THROWS_AS(csr_to_dense(g, &dup), std::invalid_argument);
}

TEST_CASE("dense_to_csr") {
    SUBCASE("examples") {
        DistanceMatrix d(2, 2, kInf);
        d(0, 0) = 0;
        d(1, 1) = 0;
        d(0, 1) = 3;
        Graph g = dense_to_csr(d);
        CHECK(g.num_edges() == 1);
        CHECK(g.col() == std::vector<Vertex>{1});
        CHECK(g.val() == std::vector<Distance>{3});

        Graph empty = dense_to_csr(DistanceMatrix::identity(4));
        CHECK(empty.num_edges() == 0);
    }
    SUBCASE("mutually inverse on finite structure") {
        Rng rng(77);
        for (int iter = 0; iter < 25; ++iter) {
            const std::size_t n = 1 + rng.bounded(24);
            DistanceMatrix d = DistanceMatrix::identity(n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j && rng.chance(0.4)) d(i, j) = Distance(rng.range(0, 5000));
            CHECK(csr_to_dense(dense_to_csr(d)) == d);

            Graph g = random_graph(Vertex(n), 0.35, iter * 31 + 1);
            CHECK(dense_to_csr(csr_to_dense(g)) == g);
        }
    }
}

TEST_CASE("binary csr format") {
    Graph g = random_graph(23, 0.25, 4242);
    std::ostringstream out(std::ios::binary);
    save_binary_csr(g, out);
    const std::string bytes = out.str();
    CHECK(bytes.substr(0, 6) == "RGCSR1");
    CHECK(bytes.size() == binary_csr_bytes(g.num_vertices(), g.num_edges()));
    std::istringstream in(bytes, std::ios::binary);
    CHECK(load_binary_csr(in) == g);

    std::istringstream truncated(bytes.substr(0, bytes.size() / 2), std::ios::binary);
    CHECK_THROWS_AS(load_binary_csr(truncated), IoError);
    std::istringstream junk("NOTCSR....", std::ios::binary);
    CHECK_THROWS_AS(load_binary_csr(junk), IoError);

    // Non-monotone rowptr whose endpoints still look consistent:
    // [0, 5, 1] for n=2, m=1 must be rejected before any edge is touched.
    Graph tiny = Graph::from_edges(2, {{0, 1, 3}});
    std::ostringstream bad_out(std::ios::binary);
    save_binary_csr(tiny, bad_out);
    std::string bad = bad_out.str();
    bad[30] = 5; // rowptr[1], little-endian low byte
    std::istringstream bad_in(bad, std::ios::binary);
    CHECK_THROWS_AS(load_binary_csr(bad_in), IoError);
}

TEST_CASE("assignment file round trip") {
    const std::vector<std::uint32_t> assignment{0, 1, 1, 0, 2};
    const std::string path = "assignment_test.tmp";
    save_assignment_file(assignment, path);
    CHECK(load_assignment_file(path, 5) == assignment);
    CHECK_THROWS_AS(load_assignment_file(path, 6), ParseError);
    std::remove(path.c_str());
}

TEST_CASE("gen_er") {
    SUBCASE("p=1 is complete") {
        Graph g = gen_er(4, 3.0, 7);
        CHECK(g.num_edges() == 12);
    }
    SUBCASE("deterministic") {
        CHECK(gen_er(200, 6.5, 11) == gen_er(200, 6.5, 11));
        CHECK(gen_er(200, 6.5, 11) != gen_er(200, 6.5, 12));
    }
    SUBCASE("mean degree within 5% over seeds") {
        double total = 0;
        const int seeds = 10;
        for (int s = 0; s < seeds; ++s) total += double(gen_er(1000, 25.25, 100 + s).num_edges());
        const double mean_degree = total / (seeds * 1000.0);
        CHECK(mean_degree == doctest::Approx(25.25).epsilon(0.05));
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(gen_er(10, 0.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(gen_er(10, 10.0, 1), std::invalid_argument);
    }
    SUBCASE("weights lie in [1, 1000]") {
        Graph g = gen_er(100, 8.0, 3);
        for (Distance w : g.val()) {
            CHECK(w >= 1);
            CHECK(w <= 1000);
        }
    }
}

TEST_CASE("gen_nws") {
    SUBCASE("pure ring") {
        Graph g = gen_nws(6, 2, 0.0, 9);
        CHECK(g.num_edges() == 12); // 6-cycle, both arc directions
        for (Vertex u = 0; u < 6; ++u) CHECK(g.out_degree(u) == 2);
    }
    SUBCASE("k=4 ring") {
        Graph g = gen_nws(6, 4, 0.0, 9);
        for (Vertex u = 0; u < 6; ++u) CHECK(g.out_degree(u) == 4);
    }
    SUBCASE("deterministic") {
        CHECK(gen_nws(300, 6, 0.2, 5) == gen_nws(300, 6, 0.2, 5));
    }
    SUBCASE("symmetric arcs") {
        Graph g = gen_nws(64, 4, 0.3, 21);
        DistanceMatrix d = csr_to_dense(g);
        for (Vertex u = 0; u < 64; ++u)
            for (Vertex v = 0; v < 64; ++v) CHECK(d(u, v) == d(v, u));
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(gen_nws(10, 3, 0.1, 1), std::invalid_argument);  // odd k
        CHECK_THROWS_AS(gen_nws(10, 0, 0.1, 1), std::invalid_argument);
        CHECK_THROWS_AS(gen_nws(10, 10, 0.1, 1), std::invalid_argument); // k >= n
        CHECK_THROWS_AS(gen_nws(10, 4, 1.5, 1), std::invalid_argument);
    }
    SUBCASE("clusters more than degree-matched er") {
        const double c_nws = clustering_coefficient(gen_nws(1000, 10, 0.1, 31));
        const double c_er = clustering_coefficient(gen_er(1000, 11.0, 31));
        CHECK(c_nws > c_er);
    }
}
