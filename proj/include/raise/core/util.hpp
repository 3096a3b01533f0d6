#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace raise::core {

using Bytes = std::vector<std::uint8_t>;

/// 64-bit finalizer of the SplitMix64 generator. Bijective on uint64.
std::uint64_t mix64(std::uint64_t z);

/// FNV-1a over a byte string.
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t fnv1a64(const Bytes& b);

/// Published seed-derivation formula:
///   seed = mix64(mix64(run_seed) XOR ((round << 32) | slot))
/// Injective over (round, slot) for a fixed run_seed because round and slot
/// occupy disjoint bit ranges and mix64 is a bijection.
std::uint64_t derive_seed64(std::uint64_t run_seed, std::uint32_t round, std::uint32_t slot);

/// Minimal counter-based PRNG stream: value k is mix64(key + GOLDEN * (k+1)).
/// Randomness is keyed, never positional state shared across callers.
class SplitMixStream {
public:
    explicit SplitMixStream(std::uint64_t key) : state_(key) {}
    std::uint64_t next();
    /// Uniform double in [0, 1).
    double next_unit();
    /// Uniform integer in [0, n). n must be > 0. Fixed algorithm
    /// (128-bit multiply-shift) so results do not depend on the stdlib.
    std::uint64_t next_below(std::uint64_t n);

private:
    std::uint64_t state_;
};

std::string base64_encode(const Bytes& data);
std::optional<Bytes> base64_decode(std::string_view text);

std::string to_hex(std::uint64_t v);

/// Reads width/height from a PNG IHDR header without decoding pixel data.
std::optional<std::pair<int, int>> png_dimensions(const Bytes& png);

}  // namespace raise::core
