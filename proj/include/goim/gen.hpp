#pragma once

#include <cstdint>

#include "goim/term.hpp"

namespace goim {

// splitmix64; the whole artifact derives its randomness from this.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
};

// Deterministic closed pure term of the given strategy with size <= maxSize.
// Closedness is guaranteed by drawing variables from the in-scope binders
// only; binder names are distinct by construction. Falls back to \x. x when
// the budget cannot be met.
TermPtr genClosedTerm(uint64_t seed, uint64_t maxSize, Strategy strategy);

}  // namespace goim
