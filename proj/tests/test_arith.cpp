#include "doctest.h"
#include "ocmc/arith.hpp"
#include "ocmc/error.hpp"

using namespace ocmc;

namespace {

// Enumerating oracle for the closed-form parity of |{n' in [n] : 2^(i-1) | n'}|.
Parity parity_by_enumeration(int i, long long n) {
    long long step = 1LL << (i - 1);
    long long count = 0;
    for (long long v = step; v <= n; v += step) ++count;
    return count % 2 == 0 ? Parity::Even : Parity::Odd;
}

Big lcm_by_folding(int k) {
    Big acc = 1;
    for (int i = 1; i <= k; ++i) acc = boost::multiprecision::lcm(acc, Big(i));
    return acc;
}

}  // namespace

TEST_CASE("primes_first") {
    CHECK(primes_first(1) == std::vector<int>{2});
    CHECK(primes_first(3) == std::vector<int>{2, 3, 5});
    CHECK(primes_first(5) == std::vector<int>{2, 3, 5, 7, 11});
    CHECK_THROWS_AS(primes_first(0), DomainError);
}

TEST_CASE("lcm_upto") {
    CHECK(lcm_upto(1) == 1);
    CHECK(lcm_upto(4) == 12);
    CHECK(lcm_upto(13) == lcm_by_folding(13));
    CHECK(lcm_upto(13) == Big(360360));
    CHECK_THROWS_AS(lcm_upto(0), DomainError);
}

TEST_CASE("nair bounds on lcm") {
    for (int k = 9; k <= 64; ++k) {
        Big l = lcm_upto(k);
        CHECK(l >= Big(1) << k);
        CHECK(l <= boost::multiprecision::pow(Big(4), k));
    }
}

TEST_CASE("crr one-hot assignment") {
    auto a = crr({2, 3}, 3);
    CHECK(a.bit(0, 1));
    CHECK(a.bit(1, 0));
    CHECK_FALSE(a.bit(0, 0));

    auto b = crr({2}, 0);
    CHECK(b.bit(0, 0));

    auto c = crr({2, 3, 5}, 29);
    CHECK(c.residues == std::vector<int>{1, 2, 4});

    CHECK_THROWS_AS(crr({2, 3}, 6), DomainError);
    CHECK_THROWS_AS(crr({2, 3}, -1), DomainError);
}

TEST_CASE("crr round-trips through reconstruction") {
    std::vector<int> primes{2, 3, 5};
    for (int m = 0; m < 30; ++m) {
        CHECK(crr_reconstruct(crr(primes, m)) == m);
        // One-hot by construction: exactly one residue per prime.
        auto a = crr(primes, m);
        for (std::size_t i = 0; i < primes.size(); ++i) {
            int ones = 0;
            for (int r = 0; r < primes[i]; ++r) ones += a.bit(static_cast<int>(i), r) ? 1 : 0;
            CHECK(ones == 1);
        }
    }
}

TEST_CASE("bit_at") {
    CHECK(bit_at(1, 1) == 1);
    CHECK(bit_at(3, 4) == 1);
    CHECK(bit_at(2, 5) == 0);
    Big n = 0;
    for (int i = 1; i <= 9; ++i) n += Big(bit_at(i, 300)) << (i - 1);
    CHECK(n == 300);
}

TEST_CASE("parity_divisible_count") {
    CHECK(parity_divisible_count(1, 3) == Parity::Odd);
    CHECK(parity_divisible_count(2, 4) == Parity::Even);
    CHECK(parity_divisible_count(3, 12) == parity_by_enumeration(3, 12));
    CHECK(parity_divisible_count(3, 12) == Parity::Odd);
    for (int i = 1; i <= 6; ++i)
        for (long long n = 0; n <= 200; ++n)
            CHECK(parity_divisible_count(i, n) == parity_by_enumeration(i, n));
}

TEST_CASE("divisibility and bit characterizations") {
    // 2^i | n  iff  2^(i-1) | n and the divisible count up to n is even;
    // bit_i(n) = 1 iff that count is odd.
    for (int i = 1; i <= 12; ++i) {
        Big pow_i = Big(1) << i;
        Big pow_prev = Big(1) << (i - 1);
        for (long long n = 0; n <= 10000; ++n) {
            bool div_i = Big(n) % pow_i == 0;
            bool div_prev = Big(n) % pow_prev == 0;
            bool even_count = parity_divisible_count(i, n) == Parity::Even;
            CHECK(div_i == (div_prev && even_count));
            CHECK((bit_at(i, n) == 1) == !even_count);
        }
    }
}
