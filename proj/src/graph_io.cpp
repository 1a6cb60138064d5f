#include "rapid/graph_io.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "rapid/error.hpp"

namespace rapid {

namespace {

constexpr char kMagic[6] = {'R', 'G', 'C', 'S', 'R', '1'};

// Strict unsigned decimal parse; rejects sign, junk, and overflow.
bool parse_u64(const std::string& tok, std::uint64_t& out) {
    if (tok.empty()) return false;
    std::uint64_t v = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') return false;
        if (v > (std::numeric_limits<std::uint64_t>::max() - (c - '0')) / 10) return false;
        v = v * 10 + std::uint64_t(c - '0');
    }
    out = v;
    return true;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

template <typename T>
void write_le(std::ostream& out, T v) {
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = (unsigned char)((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw IoError("unexpected end of binary CSR stream");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= T(buf[i]) << (8 * i);
    return v;
}

} // namespace

Graph load_edge_list(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw ParseError(1, "missing header \"n m\"");
    ++lineno;
    auto head = split_ws(line);
    std::uint64_t n = 0, m = 0;
    if (head.size() != 2 || !parse_u64(head[0], n) || !parse_u64(head[1], m))
        throw ParseError(lineno, "malformed header, expected \"n m\"");
    if (n > 0xFFFFFFFFull) throw ParseError(lineno, "vertex count does not fit 32 bits");

    std::vector<EdgeTriple> edges;
    edges.reserve(m);
    std::uint64_t seen = 0;
    while (seen < m) {
        if (!std::getline(in, line))
            throw ParseError(lineno + 1, "expected " + std::to_string(m) + " edges, got " +
                                             std::to_string(seen));
        ++lineno;
        auto toks = split_ws(line);
        if (toks.empty()) continue; // blank line
        std::uint64_t u = 0, v = 0, w = 0;
        if (toks.size() != 3 || !parse_u64(toks[0], u) || !parse_u64(toks[1], v) ||
            !parse_u64(toks[2], w))
            throw ParseError(lineno, "malformed edge, expected \"u v w\"");
        if (u >= n || v >= n)
            throw std::out_of_range("line " + std::to_string(lineno) + ": vertex id out of range");
        if (w >= kInf)
            throw std::out_of_range("line " + std::to_string(lineno) + ": weight out of range");
        edges.push_back({Vertex(u), Vertex(v), Distance(w)});
        ++seen;
    }
    return Graph::from_edges(Vertex(n), std::move(edges));
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    return load_edge_list(f);
}

void save_edge_list(const Graph& g, std::ostream& out) {
    out << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
        auto cols = g.neighbors(u);
        auto ws = g.weights(u);
        for (std::size_t e = 0; e < cols.size(); ++e)
            out << u << ' ' << cols[e] << ' ' << ws[e] << '\n';
    }
}

void save_edge_list_file(const Graph& g, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    save_edge_list(g, f);
    if (!f) throw IoError("write failed: " + path);
}

Graph load_binary_csr(std::istream& in) {
    char magic[6];
    in.read(magic, 6);
    if (!in || std::memcmp(magic, kMagic, 6) != 0)
        throw IoError("bad magic, not a binary CSR stream");
    const std::uint64_t n = read_le<std::uint64_t>(in);
    const std::uint64_t m = read_le<std::uint64_t>(in);
    if (n > 0xFFFFFFFFull) throw IoError("vertex count does not fit 32 bits");

    std::vector<std::uint64_t> rowptr(n + 1);
    for (auto& r : rowptr) r = read_le<std::uint64_t>(in);
    std::vector<EdgeTriple> edges;
    edges.reserve(m);
    std::vector<Vertex> col(m);
    for (auto& c : col) c = read_le<std::uint32_t>(in);
    for (std::uint64_t e = 0; e < m; ++e) {
        const Distance w = read_le<std::uint32_t>(in);
        edges.push_back({0, col[e], w});
    }
    if (rowptr[0] != 0 || rowptr[n] != m) throw IoError("inconsistent rowptr");
    for (std::uint64_t u = 0; u < n; ++u)
        if (rowptr[u] > rowptr[u + 1]) throw IoError("rowptr not non-decreasing");
    for (std::uint64_t u = 0; u < n; ++u)
        for (std::uint64_t e = rowptr[u]; e < rowptr[u + 1]; ++e) edges[e].u = Vertex(u);
    // from_edges re-canonicalizes; a well-formed stream round-trips unchanged.
    return Graph::from_edges(Vertex(n), std::move(edges));
}

Graph load_binary_csr_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    return load_binary_csr(f);
}

void save_binary_csr(const Graph& g, std::ostream& out) {
    out.write(kMagic, 6);
    write_le<std::uint64_t>(out, g.num_vertices());
    write_le<std::uint64_t>(out, g.num_edges());
    for (auto r : g.rowptr()) write_le<std::uint64_t>(out, r);
    for (auto c : g.col()) write_le<std::uint32_t>(out, c);
    for (auto v : g.val()) write_le<std::uint32_t>(out, v);
}

void save_binary_csr_file(const Graph& g, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    save_binary_csr(g, f);
    if (!f) throw IoError("write failed: " + path);
}

std::uint64_t binary_csr_bytes(std::uint64_t n, std::uint64_t m) {
    return 6 + 8 + 8 + 8 * (n + 1) + 4 * m + 4 * m;
}

Graph load_graph_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    char magic[6] = {0};
    f.read(magic, 6);
    f.clear();
    f.seekg(0);
    if (f.gcount() == 6 && std::memcmp(magic, kMagic, 6) == 0) return load_binary_csr(f);
    return load_edge_list(f);
}

std::vector<std::uint32_t> load_assignment_file(const std::string& path, std::size_t n) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::vector<std::uint32_t> assignment;
    assignment.reserve(n);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        std::uint64_t part = 0;
        if (toks.size() != 1 || !parse_u64(toks[0], part))
            throw ParseError(lineno, "expected a single part id");
        assignment.push_back(std::uint32_t(part));
    }
    if (assignment.size() != n)
        throw ParseError(lineno, "assignment has " + std::to_string(assignment.size()) +
                                     " entries, graph has " + std::to_string(n) + " vertices");
    return assignment;
}

void save_assignment_file(const std::vector<std::uint32_t>& assignment, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    for (auto p : assignment) f << p << '\n';
    if (!f) throw IoError("write failed: " + path);
}

} // namespace rapid
