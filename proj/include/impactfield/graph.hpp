#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace impactfield {

using NodeId = std::uint32_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted simple graph. For an arc src -> dst the adjacency entry A(src, dst) is set:
/// src is influenced by dst, and dst is reachable from src in one hop.
///
/// Undirected edges are stored canonically with src <= dst and expanded symmetrically when
/// an adjacency structure is materialized. Instances are immutable once built.
class Graph {
 public:
  Graph() = default;

  /// Validates indices, self-loops, duplicates and finiteness of weights; throws
  /// ValidationError. An empty label list means labels "0" .. "n-1".
  Graph(std::size_t n, bool directed, std::vector<Edge> edges,
        std::vector<std::string> labels = {});

  std::size_t n() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(NodeId v) const { return labels_.at(v); }

  /// Nodes reachable in one hop from v, following arc direction.
  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }

  bool has_negative_weights() const noexcept;

  Eigen::SparseMatrix<double, Eigen::RowMajor> sparse_adjacency() const;
  Eigen::MatrixXd dense_adjacency() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.directed_ == b.directed_ && a.edges_ == b.edges_ &&
           a.labels_ == b.labels_;
  }

 private:
  std::size_t n_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  // Out-neighbour lists in CSR form; undirected edges appear in both directions.
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
};

/// Reads "src dst [weight]" lines. Labels are arbitrary tokens mapped to dense indices in
/// order of first appearance; blank lines and lines starting with '#' are skipped.
/// Malformed lines raise ParseError; self-loops and duplicate edges raise ValidationError.
Graph parse_edge_list(std::string_view text, bool directed);

/// Inverse of parse_edge_list for graphs without isolated nodes. Weights equal to 1 are
/// omitted.
std::string serialize_edge_list(const Graph& g);

struct Symmetrized {
  Graph graph;
  bool noop = false;  // input was already undirected
};

/// Weak (union) symmetrization. The weight of {i,j} is the max over the arcs present.
Symmetrized symmetrize_weak(const Graph& g);

/// Largest weakly connected component as an induced subgraph; labels are carried over.
/// Ties go to the component holding the smallest node index.
Graph largest_component(const Graph& g);

bool is_weakly_connected(const Graph& g);

/// G(n, p): every ordered (directed) or unordered (undirected) pair independently.
Graph generate_er(std::size_t n, double p, bool directed, std::uint64_t seed);

/// Undirected growth model. Node t attaches to min(m, t) distinct earlier nodes, drawn
/// with probability proportional to degree + 1.
Graph generate_preferential(std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace impactfield
