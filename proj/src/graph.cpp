#include "impactfield/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "impactfield/errors.hpp"
#include "random.hpp"

namespace impactfield {

namespace {

std::uint64_t pair_key(NodeId a, NodeId b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

Graph::Graph(std::size_t n, bool directed, std::vector<Edge> edges,
             std::vector<std::string> labels)
    : n_(n), directed_(directed), edges_(std::move(edges)), labels_(std::move(labels)) {
  if (n_ > std::numeric_limits<NodeId>::max()) throw ValidationError("graph too large");
  if (labels_.empty()) {
    labels_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) labels_.push_back(std::to_string(i));
  } else if (labels_.size() != n_) {
    throw ValidationError("label count " + std::to_string(labels_.size()) +
                          " does not match node count " + std::to_string(n_));
  }

  std::vector<std::uint64_t> keys;
  keys.reserve(edges_.size());
  for (auto& e : edges_) {
    if (e.src >= n_ || e.dst >= n_) {
      throw ValidationError("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) +
                            ") references a node outside [0, " + std::to_string(n_) + ")");
    }
    if (e.src == e.dst) throw ValidationError("self-loop at node " + labels_[e.src]);
    if (!std::isfinite(e.weight)) {
      throw ValidationError("non-finite weight on edge " + labels_[e.src] + " " + labels_[e.dst]);
    }
    if (!directed_ && e.src > e.dst) std::swap(e.src, e.dst);
    keys.push_back(pair_key(e.src, e.dst));
  }
  std::sort(keys.begin(), keys.end());
  if (auto it = std::adjacent_find(keys.begin(), keys.end()); it != keys.end()) {
    throw ValidationError("duplicate edge " + labels_[*it >> 32] + " " +
                          labels_[*it & 0xffffffffu]);
  }

  std::vector<std::size_t> degree(n_ + 1, 0);
  for (const auto& e : edges_) {
    ++degree[e.src];
    if (!directed_) ++degree[e.dst];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  targets_.resize(offsets_[n_]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    targets_[cursor[e.src]++] = e.dst;
    if (!directed_) targets_[cursor[e.dst]++] = e.src;
  }
  for (std::size_t v = 0; v < n_; ++v) {
    std::sort(targets_.begin() + offsets_[v], targets_.begin() + offsets_[v + 1]);
  }
}

bool Graph::has_negative_weights() const noexcept {
  return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight < 0; });
}

Eigen::SparseMatrix<double, Eigen::RowMajor> Graph::sparse_adjacency() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(directed_ ? edges_.size() : 2 * edges_.size());
  for (const auto& e : edges_) {
    triplets.emplace_back(e.src, e.dst, e.weight);
    if (!directed_) triplets.emplace_back(e.dst, e.src, e.weight);
  }
  const auto dim = static_cast<Eigen::Index>(n_);
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(dim, dim);
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Eigen::MatrixXd Graph::dense_adjacency() const {
  const auto dim = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& e : edges_) {
    a(e.src, e.dst) = e.weight;
    if (!directed_) a(e.dst, e.src) = e.weight;
  }
  return a;
}

Graph parse_edge_list(std::string_view text, bool directed) {
  std::unordered_map<std::string, NodeId> index;
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, std::size_t> first_line;

  auto intern = [&](std::string_view token) {
    auto [it, inserted] = index.try_emplace(std::string(token), static_cast<NodeId>(labels.size()));
    if (inserted) labels.emplace_back(token);
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const auto start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(line_no, "expected \"src dst [weight]\", got " +
                                    std::to_string(tokens.size()) + " tokens");
    }
    double weight = 1.0;
    if (tokens.size() == 3) {
      const auto tok = tokens[2];
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), weight);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(weight)) {
        throw ParseError(line_no, "non-numeric weight '" + std::string(tok) + "'");
      }
    }
    if (tokens[0] == tokens[1]) {
      throw ValidationError("line " + std::to_string(line_no) + ": self-loop at node " +
                            std::string(tokens[0]));
    }
    const NodeId src = intern(tokens[0]);
    const NodeId dst = intern(tokens[1]);
    const auto key = directed ? pair_key(src, dst) : pair_key(std::min(src, dst), std::max(src, dst));
    if (auto [it, inserted] = first_line.try_emplace(key, line_no); !inserted) {
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate edge " +
                            std::string(tokens[0]) + " " + std::string(tokens[1]) +
                            " (first seen on line " + std::to_string(it->second) + ")");
    }
    edges.push_back({src, dst, weight});
  }
  const auto n = labels.size();
  return Graph(n, directed, std::move(edges), std::move(labels));
}

std::string serialize_edge_list(const Graph& g) {
  std::string out;
  for (const auto& e : g.edges()) {
    out += g.label(e.src);
    out += ' ';
    out += g.label(e.dst);
    if (e.weight != 1.0) {
      out += ' ';
      out += format_double(e.weight);
    }
    out += '\n';
  }
  return out;
}

Symmetrized symmetrize_weak(const Graph& g) {
  if (!g.directed()) return {g, true};
  std::unordered_map<std::uint64_t, std::size_t> slot;
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    const NodeId lo = std::min(e.src, e.dst);
    const NodeId hi = std::max(e.src, e.dst);
    auto [it, inserted] = slot.try_emplace(pair_key(lo, hi), edges.size());
    if (inserted) {
      edges.push_back({lo, hi, e.weight});
    } else {
      edges[it->second].weight = std::max(edges[it->second].weight, e.weight);
    }
  }
  return {Graph(g.n(), false, std::move(edges), g.labels()), false};
}

namespace {

// Weak component id per node, numbered by smallest member.
std::vector<std::size_t> weak_components(const Graph& g, std::size_t& count) {
  std::vector<std::size_t> parent(g.n());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.src);
    auto b = find(e.dst);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> comp(g.n());
  std::vector<std::size_t> relabel(g.n(), SIZE_MAX);
  count = 0;
  for (std::size_t v = 0; v < g.n(); ++v) {
    auto r = find(v);
    if (relabel[r] == SIZE_MAX) relabel[r] = count++;
    comp[v] = relabel[r];
  }
  return comp;
}

}  // namespace

bool is_weakly_connected(const Graph& g) {
  std::size_t count = 0;
  weak_components(g, count);
  return count <= 1;
}

Graph largest_component(const Graph& g) {
  std::size_t count = 0;
  const auto comp = weak_components(g, count);
  if (count <= 1) return g;
  std::vector<std::size_t> size(count, 0);
  for (auto c : comp) ++size[c];
  const auto best = static_cast<std::size_t>(
      std::max_element(size.begin(), size.end()) - size.begin());

  std::vector<NodeId> remap(g.n(), 0);
  std::vector<std::string> labels;
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (comp[v] == best) {
      remap[v] = static_cast<NodeId>(labels.size());
      labels.push_back(g.label(static_cast<NodeId>(v)));
    }
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (comp[e.src] == best) edges.push_back({remap[e.src], remap[e.dst], e.weight});
  }
  const auto n = labels.size();
  return Graph(n, g.directed(), std::move(edges), std::move(labels));
}

Graph generate_er(std::size_t n, double p, bool directed, std::uint64_t seed) {
  if (n == 0) throw ValidationError("generate_er: n must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("generate_er: p must lie in [0, 1]");
  detail::Uniform rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      if (rng.next() < p) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0});
    }
  }
  return Graph(n, directed, std::move(edges));
}

Graph generate_preferential(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0) throw ValidationError("generate_preferential: n must be positive");
  if (m < 1 || m >= n) throw ValidationError("generate_preferential: need 1 <= m < n");
  detail::Uniform rng(seed);
  std::vector<double> degree(n, 0.0);
  std::vector<Edge> edges;
  std::vector<char> taken(n, 0);
  std::vector<NodeId> chosen;
  for (std::size_t t = 1; t < n; ++t) {
    chosen.clear();
    if (t <= m) {
      for (std::size_t v = 0; v < t; ++v) chosen.push_back(static_cast<NodeId>(v));
    } else {
      double total = 0.0;
      for (std::size_t v = 0; v < t; ++v) total += degree[v] + 1.0;
      while (chosen.size() < m) {
        const double target = rng.next() * total;
        double acc = 0.0;
        std::size_t pick = SIZE_MAX;
        std::size_t last = SIZE_MAX;
        for (std::size_t v = 0; v < t; ++v) {
          if (taken[v]) continue;
          last = v;
          acc += degree[v] + 1.0;
          if (target < acc) {
            pick = v;
            break;
          }
        }
        if (pick == SIZE_MAX) pick = last;  // rounding at the top of the range
        taken[pick] = 1;
        total -= degree[pick] + 1.0;
        chosen.push_back(static_cast<NodeId>(pick));
      }
      for (auto v : chosen) taken[v] = 0;
    }
    for (auto v : chosen) {
      edges.push_back({v, static_cast<NodeId>(t), 1.0});
      degree[v] += 1.0;
      degree[t] += 1.0;
    }
  }
  return Graph(n, false, std::move(edges));
}

}  // namespace impactfield
