#include "abcmc/rng.hpp"

#include <doctest.h>

#include <set>
#include <vector>

using namespace abcmc;

TEST_CASE("philox4x32-10 matches the reference known-answer vectors") {
    // Random123 kat_vectors, philox4x32 with 10 rounds.
    CHECK(philox4x32_10({0u, 0u, 0u, 0u}, {0u, 0u}) ==
          std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                        {0xffffffffu, 0xffffffffu}) ==
          std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                        {0xa4093822u, 0x299f31d0u}) ==
          std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("equal (seed, stream) pairs replay bit-identical sequences") {
    RngStream a(42, 0), b(42, 0);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct stream indices diverge") {
    RngStream a(42, 0), b(42, 1);
    bool any_difference = false;
    for (int i = 0; i < 10000; ++i)
        if (a.next_u64() != b.next_u64()) any_difference = true;
    CHECK(any_difference);
}

TEST_CASE("streams are independent of creation order") {
    RngStream first(7, 3);
    const std::uint64_t expected = first.next_u64();

    RngStream other(7, 123);
    (void)other.next_u64();
    RngStream second(7, 3);
    CHECK(second.next_u64() == expected);
}

TEST_CASE("golden fixture: first 100 draws of stream (42, 7)") {
    // Recorded once from this generator; any platform or refactor that
    // changes these values breaks cross-run reproducibility of every
    // seeded experiment.
    static const std::uint64_t expected[100] = {
        0xe55410cc67ee6f2cull, 0x557398d36c7eca35ull, 0x600f6196e5dde940ull, 0x2c8ed8398fcdf8f1ull,
        0xf000aacd24ecfc6eull, 0xd301a3d5571a4cf0ull, 0x7e42d578945bcadaull, 0xfcd7d3ce8747d589ull,
        0x2ae12b31d4df3421ull, 0xd389135370dbebd0ull, 0xeaac81660d09deb5ull, 0x6c98929f698984a0ull,
        0x72572bb000135acdull, 0x059b12c84cf04c73ull, 0x8ab76bcfcd241e76ull, 0x3326af1e2d047ecaull,
        0x53c2afe47a41b4bcull, 0xdc2b495a8765faf8ull, 0x0edc439441fbb9c6ull, 0x4d6e29790f56f77dull,
        0x927ae0b6efa84626ull, 0x8f70d3de6f138d69ull, 0xde90e4dd13ebc94aull, 0xc6ae8fcde15d9da2ull,
        0xb83cfeb34917b74aull, 0x3924343ed2079610ull, 0x2c1812a48f08889full, 0x226bc38a8a7f24d3ull,
        0xae815bf4e8dfad35ull, 0x7c591c5cd48d58d9ull, 0x50d44149b557a976ull, 0x788dad94369c6900ull,
        0x2ea5e004afaf41eaull, 0xd7920b25e8fc37cdull, 0x61c44c6274a2dacaull, 0x9deffa1ccc4d2f08ull,
        0x7939e7f085e696d3ull, 0x3a97f698e3b0526cull, 0xd5e66f10fcd6a201ull, 0x7caa84552d3345f3ull,
        0x719d2f58f4928e3aull, 0x3142315d9266587full, 0x89a6eccefbf984a5ull, 0xbb753d0f10652675ull,
        0x0707194a6d13ce65ull, 0x84d7c8bf507f84c4ull, 0x31d6cf0b1a7b73e9ull, 0xa1f80ea38d249af2ull,
        0x5c58d3bd7f6e22c9ull, 0x3f5b130a2889e753ull, 0xb3c2fa9b97510207ull, 0xc45779ff8f7c5bfeull,
        0x4745212db5203b4aull, 0x7aaa63d7c8da55e5ull, 0xcf1874eb0cdf1e98ull, 0x8cc02cfb353cb3bdull,
        0x93651c64973c9c33ull, 0x4e267058953d9ec7ull, 0x2c8cdd6c14d506d2ull, 0x9f1a9e9e53648ca1ull,
        0x8928aa8e780e23feull, 0xe0e6407c57974659ull, 0x1bab5ace96aca367ull, 0x622c294f96fa2512ull,
        0xfa69e9adb2669a16ull, 0x51875f73f60d436bull, 0xa9dca7830d0d936cull, 0x72f43eb8522d5613ull,
        0x28176a98af08b2a5ull, 0x1e712f552dac2a8bull, 0x5e8e7807a4f1de91ull, 0x6f6279174bf1f632ull,
        0x3081eb18989881c4ull, 0xb7b384f70633b5c7ull, 0x777e497b09360804ull, 0xc13ae10d17ce2942ull,
        0x8847aa86d5a1f690ull, 0x23b8dea928803691ull, 0xd0becb97b95b384dull, 0x4063882effcf5683ull,
        0x3bb2869f2cd920daull, 0x5bf3be0fca293bfbull, 0x7a699f39c09cb421ull, 0xd2199385d5b5d60bull,
        0x8ff0b2508311c220ull, 0xba054898b8c83b0bull, 0xd607e5ca9361c62full, 0xd3f9c844f5588c69ull,
        0x24bc388e8eb14266ull, 0xf159c10ad8cc56f4ull, 0x6ff7b03e0b45d7cdull, 0xd32615348eed4ac3ull,
        0xaff35484d9a8a715ull, 0x0110e5a2044d4046ull, 0x0dfe9ef8899f1c8aull, 0x49b486d694523d3cull,
        0x6e4b1c6cb04d1a0cull, 0xe95d0c8805964a8eull, 0x5f0a4c400e0cea34ull, 0xcf4ae0e365c710a9ull,
    };
    RngStream stream(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(stream.next_u64() == expected[i]);
}

TEST_CASE("next_double lies strictly inside (0,1)") {
    RngStream stream(987654321, 17);
    for (int i = 0; i < 100000; ++i) {
        const double u = stream.next_double();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("derive_seed separates salts") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t salt = 0; salt < 1000; ++salt) seen.insert(derive_seed(42, salt));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(42, 7) == derive_seed(42, 7));
    CHECK(derive_seed(42, 7) != derive_seed(43, 7));
}
