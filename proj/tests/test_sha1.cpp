#include <doctest.h>

#include <string>

#include "chronorg/sha1.hpp"

using namespace chronorg;

// Published SHA-1 vectors (FIPS 180 examples and common references).
TEST_CASE("sha1 known vectors") {
    CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(sha1_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "84983e441c3bd26ebaae4aa1f95129e5e54670f1");
    CHECK(sha1_hex("The quick brown fox jumps over the lazy dog") ==
          "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
    CHECK(sha1_hex(std::string(1000000, 'a')) ==
          "34aa973cd4c4daa4f61eeb2bdbad27316534016f");
}

TEST_CASE("sha1 padding boundaries") {
    // Lengths straddling the 55/56 and 63/64 block edges; values frozen
    // from an independent implementation.
    auto repeat = [](std::size_t n) { return std::string(n, 'x'); };
    CHECK(sha1_hex(repeat(55)) == "cef734ba81a024479e09eb5a75b6ddae62e6abf1");
    CHECK(sha1_hex(repeat(56)) == "901305367c259952f4e7af8323f480d59f81335b");
    CHECK(sha1_hex(repeat(63)) == "0ddc4e0cccd9a12850deb5abb0853a4425559fec");
    CHECK(sha1_hex(repeat(64)) == "bb2fa3ee7afb9f54c6dfb5d021f14b1ffe40c163");
    CHECK(sha1_hex(repeat(65)) == "78c741ddc482e4cdf8c474a0876347a0905b6233");
}

TEST_CASE("sha1 binary safety") {
    std::string data("\x00\x01\x02\xff", 4);
    CHECK(sha1(data).size() == 20);
    CHECK(sha1_hex(data) == "c62c27924f4c967f5eddb1850c091d54c7a2ab58");
}
