#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "impactfield/graph.hpp"

namespace impactfield {

/// Geodesic hop count, or unreachable. The encoding is private; callers test finite().
class Hops {
 public:
  constexpr Hops() = default;
  constexpr explicit Hops(std::uint32_t hops) : raw_(hops) {}
  static constexpr Hops unreachable() { return Hops(kInfinite, 0); }

  constexpr bool finite() const { return raw_ != kInfinite; }
  /// Precondition: finite().
  constexpr std::uint32_t value() const { return raw_; }
  constexpr std::optional<std::uint32_t> get() const {
    return finite() ? std::optional<std::uint32_t>(raw_) : std::nullopt;
  }

  friend constexpr bool operator==(Hops, Hops) = default;

 private:
  static constexpr std::uint32_t kInfinite = UINT32_MAX;
  constexpr Hops(std::uint32_t raw, int) : raw_(raw) {}
  std::uint32_t raw_ = 0;
};

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), dist_(n * n, Hops::unreachable()) {
    for (std::size_t i = 0; i < n; ++i) dist_[i * n + i] = Hops(0);
  }

  std::size_t n() const noexcept { return n_; }
  Hops operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  Hops& operator()(std::size_t i, std::size_t j) { return dist_[i * n_ + j]; }

  /// Row i as a contiguous span of n entries.
  std::span<Hops> row(std::size_t i) { return {dist_.data() + i * n_, n_}; }
  std::span<const Hops> row(std::size_t i) const { return {dist_.data() + i * n_, n_}; }

  /// Largest finite distance (0 for an empty matrix).
  std::uint32_t max_finite() const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Hops> dist_;
};

/// All-pairs hop counts by per-source BFS along arc direction; weights are ignored.
/// Runs sources in parallel; the result equals the serial kernel exactly.
DistanceMatrix geodesic_distances(const Graph& g);

/// CSV with header "src,dst,dist", one row per ordered pair, "inf" when unreachable.
std::string distances_to_csv(const Graph& g, const DistanceMatrix& dist);

}  // namespace impactfield
