#include "gpquad/rng.hpp"

namespace gpquad {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_index) {
    // splitmix64 finalizer (Steele, Lea, Flood 2014)
    std::uint64_t z = master + (stream_index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace gpquad
