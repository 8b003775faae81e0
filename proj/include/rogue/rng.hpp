#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace rogue {

// Deterministic stream derivation.  Every random stream in an experiment is
// keyed by (master_seed, replication, user, policy, purpose) so that adding a
// policy or resizing the policy list never perturbs the draws of existing
// streams.  Mixing uses splitmix64, which is a bijective finalizer with good
// avalanche behavior; chaining it over the key components gives independent
// well-separated seeds without carrying std::seed_seq state around.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t id) {
    return splitmix64(seed ^ splitmix64(id + 0x632be59bd9b4e019ull));
}

template <class... Ids>
std::uint64_t derive_seed(std::uint64_t master, Ids... ids) {
    std::uint64_t s = splitmix64(master);
    ((s = mix_seed(s, static_cast<std::uint64_t>(ids))), ...);
    return s;
}

// Stable 64-bit name hash (FNV-1a) used to key streams by policy name.
inline std::uint64_t name_hash(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

using RngStream = std::mt19937_64;

inline RngStream make_stream(std::uint64_t seed) { return RngStream(seed); }

// Distributions are constructed per call: std::normal_distribution caches a
// second variate internally, and a cached value surviving across call sites
// would couple streams that are supposed to be independent.
inline double draw_normal(RngStream& rng, double mean, double sd) {
    std::normal_distribution<double> d(mean, sd);
    return d(rng);
}

inline double draw_uniform(RngStream& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

// Draws an index from a categorical distribution given by `p`.  Entries are
// assumed nonnegative; any floating residual beyond the cumulative sum falls
// through to the last index.
inline std::size_t draw_categorical(RngStream& rng, const std::vector<double>& p) {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    const double u = d(rng);
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        cum += p[i];
        if (u < cum) return i;
    }
    return p.empty() ? 0 : p.size() - 1;
}

}  // namespace rogue
