#pragma once

#include <cstdint>
#include <random>

namespace impactfield::detail {

// The std distributions are implementation-defined; generated graphs must be
// byte-identical across standard libraries, so uniforms are taken straight from the
// engine's bits.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace impactfield::detail
