// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/rng.hpp"

namespace fcpsep
{

std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t SeedSplitter::seed_for(std::string_view stream) const
{
  // FNV-1a over the stream name, then mixed with the root.
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const char ch : stream) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ull;
  }
  return mix64(root_ ^ mix64(h));
}

}  // namespace fcpsep
