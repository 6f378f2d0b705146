#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qbl {

// An unweighted MaxCut instance on an Erdős–Rényi graph. Immutable once
// built; edges are unordered pairs stored as (i, j) with i < j, sorted
// lexicographically.
struct GraphInstance {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::uint64_t seed = 0;
  std::string label;

  int edge_count() const { return static_cast<int>(edges.size()); }
  double average_degree() const { return 2.0 * edge_count() / n; }

  // Neighbor lists, built on demand.
  std::vector<std::vector<int>> adjacency() const;
};

// Spin assignment z in {-1,+1}^n with a canonical integer encoding: bit i of
// the index is 0 for z_i = +1 and 1 for z_i = -1.
struct Assignment {
  std::vector<std::int8_t> spins;

  static Assignment from_index(std::uint64_t index, int n);
  std::uint64_t to_index() const;
  int size() const { return static_cast<int>(spins.size()); }
};

// Throws ErrorKind::InvalidInstance if the edge list violates the instance
// invariants (vertex range, ordering, duplicates, self-loops).
void validate(const GraphInstance& g);

// Samples each of the n(n-1)/2 candidate edges independently with probability
// edge_prob, iterating pairs in lexicographic order so the seed fully
// determines the instance. Label defaults to "er{n}_p{edge_prob}_s{seed}".
GraphInstance generate_er(int n, double edge_prob, std::uint64_t seed,
                          const std::string& label = {});

double average_degree(const GraphInstance& g);

// MaxCut cost:  C(z) = sum over edges (i,j) of z_i * z_j.
long cut_cost(const GraphInstance& g, const Assignment& z);

// Canonical instance interchange format (JSON, edges lexicographic).
std::string to_json_string(const GraphInstance& g);
GraphInstance instance_from_json_string(const std::string& text);
void write_instance(const GraphInstance& g, const std::string& path);
GraphInstance read_instance(const std::string& path);

}  // namespace qbl
