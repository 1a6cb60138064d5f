#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rapid/graph.hpp"

namespace rapid {

// Edge-list text format: header line "n m", then m lines "u v w"
// (ASCII decimal, LF-terminated).
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);
void save_edge_list(const Graph& g, std::ostream& out);
void save_edge_list_file(const Graph& g, const std::string& path);

// Binary CSR: magic "RGCSR1", little-endian u64 n, u64 m,
// rowptr u64 x (n+1), col u32 x m, val u32 x m.
Graph load_binary_csr(std::istream& in);
Graph load_binary_csr_file(const std::string& path);
void save_binary_csr(const Graph& g, std::ostream& out);
void save_binary_csr_file(const Graph& g, const std::string& path);

// On-disk size of a graph in the binary CSR format, from (n, m) alone.
std::uint64_t binary_csr_bytes(std::uint64_t n, std::uint64_t m);

// Loads either format, keying on the magic bytes.
Graph load_graph_file(const std::string& path);

// Partition assignment, METIS style: line i holds the part id of vertex i.
std::vector<std::uint32_t> load_assignment_file(const std::string& path, std::size_t n);
void save_assignment_file(const std::vector<std::uint32_t>& assignment, const std::string& path);

} // namespace rapid
