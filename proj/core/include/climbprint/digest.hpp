#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace climbprint {

// FNV-1a 64-bit, used for plan digests and output manifests. Not
// cryptographic; collision resistance is not a goal, change detection is.
class Fnv1a64 {
public:
    void update(const void* data, std::size_t size);
    void update_double(double v);  // hashes the bit pattern
    void update_u64(std::uint64_t v);
    void update_i32(std::int32_t v);
    void update_string(std::string_view s);
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 14695981039346656037ull;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace climbprint
