#include "climbprint/digest.hpp"

#include <cstring>

namespace climbprint {

namespace {
constexpr std::uint64_t kPrime = 1099511628211ull;
}

void Fnv1a64::update(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        hash_ ^= bytes[i];
        hash_ *= kPrime;
    }
}

void Fnv1a64::update_double(double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    update_u64(bits);
}

void Fnv1a64::update_u64(std::uint64_t v) {
    unsigned char raw[8];
    for (int i = 0; i < 8; ++i) raw[i] = static_cast<unsigned char>(v >> (8 * i));
    update(raw, sizeof(raw));
}

void Fnv1a64::update_i32(std::int32_t v) {
    update_u64(static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)));
}

void Fnv1a64::update_string(std::string_view s) {
    update_u64(s.size());
    update(s.data(), s.size());
}

std::uint64_t fnv1a64(std::string_view bytes) {
    Fnv1a64 h;
    h.update(bytes.data(), bytes.size());
    return h.value();
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace climbprint
