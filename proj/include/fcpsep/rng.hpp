// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_RNG_HPP_
#define FCPSEP_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace fcpsep
{

using Rng = std::mt19937_64;

/// Derives independent generators from one root seed by stream name, so a
/// new consumer never shifts the draws of an existing one.
class SeedSplitter
{
public:
  explicit SeedSplitter(std::uint64_t root) : root_(root) {}

  std::uint64_t root() const { return root_; }
  std::uint64_t seed_for(std::string_view stream) const;
  Rng stream(std::string_view name) const { return Rng(seed_for(name)); }
  SeedSplitter child(std::string_view name) const { return SeedSplitter(seed_for(name)); }

private:
  std::uint64_t root_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace fcpsep

#endif  // FCPSEP_RNG_HPP_
