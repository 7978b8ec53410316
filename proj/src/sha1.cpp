#include "chronorg/sha1.hpp"

#include <cstring>

namespace chronorg {
namespace {

inline uint32_t rotl(uint32_t value, unsigned bits) {
    return (value << bits) | (value >> (32 - bits));
}

struct Sha1State {
    uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

    void process(const uint8_t* block) {
        uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = (uint32_t(block[i * 4]) << 24) | (uint32_t(block[i * 4 + 1]) << 16) |
                   (uint32_t(block[i * 4 + 2]) << 8) | uint32_t(block[i * 4 + 3]);
        }
        for (int i = 16; i < 80; ++i)
            w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);

        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            uint32_t t = rotl(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rotl(b, 30);
            b = a;
            a = t;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }
};

} // namespace

std::array<uint8_t, 20> sha1(std::string_view data) {
    Sha1State state;
    const auto* bytes = reinterpret_cast<const uint8_t*>(data.data());
    size_t n = data.size();
    size_t full = n / 64;
    for (size_t i = 0; i < full; ++i)
        state.process(bytes + i * 64);

    // Final block(s): 0x80 pad, zeros, 64-bit big-endian bit length.
    uint8_t tail[128] = {0};
    size_t rest = n - full * 64;
    std::memcpy(tail, bytes + full * 64, rest);
    tail[rest] = 0x80;
    size_t tail_len = rest + 1 <= 56 ? 64 : 128;
    uint64_t bits = uint64_t(n) * 8;
    for (int i = 0; i < 8; ++i)
        tail[tail_len - 1 - i] = uint8_t(bits >> (8 * i));
    state.process(tail);
    if (tail_len == 128)
        state.process(tail + 64);

    std::array<uint8_t, 20> digest;
    for (int i = 0; i < 5; ++i) {
        digest[i * 4] = uint8_t(state.h[i] >> 24);
        digest[i * 4 + 1] = uint8_t(state.h[i] >> 16);
        digest[i * 4 + 2] = uint8_t(state.h[i] >> 8);
        digest[i * 4 + 3] = uint8_t(state.h[i]);
    }
    return digest;
}

std::string sha1_hex(std::string_view data) {
    static const char* hex = "0123456789abcdef";
    auto digest = sha1(data);
    std::string out;
    out.reserve(40);
    for (uint8_t byte : digest) {
        out.push_back(hex[byte >> 4]);
        out.push_back(hex[byte & 0xF]);
    }
    return out;
}

} // namespace chronorg
