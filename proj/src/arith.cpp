#include "ocmc/arith.hpp"

#include <boost/integer/common_factor.hpp>

#include "ocmc/error.hpp"

namespace ocmc {

std::vector<int> primes_first(int m) {
    if (m < 1) throw DomainError("primes_first: m must be >= 1");
    std::vector<int> ps;
    ps.reserve(m);
    int candidate = 2;
    while (static_cast<int>(ps.size()) < m) {
        bool prime = true;
        for (int p : ps) {
            if (p * p > candidate) break;
            if (candidate % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) ps.push_back(candidate);
        ++candidate;
    }
    return ps;
}

Big lcm_upto(int k) {
    if (k < 1) throw DomainError("lcm_upto: defined only for k >= 1");
    Big acc = 1;
    for (int i = 2; i <= k; ++i) acc = boost::multiprecision::lcm(acc, Big(i));
    return acc;
}

CrrAssignment crr(const std::vector<int>& primes, const Big& m) {
    Big product = 1;
    for (int p : primes) product *= p;
    if (m < 0 || m >= product) throw DomainError("crr: value outside [0, product of primes)");
    CrrAssignment a;
    a.primes = primes;
    a.residues.reserve(primes.size());
    for (int p : primes) a.residues.push_back(static_cast<int>(m % p));
    return a;
}

Big crr_reconstruct(const CrrAssignment& a) {
    // Incremental CRT: maintain x mod (p_0 * .. * p_i).
    Big x = 0;
    Big mod = 1;
    for (std::size_t i = 0; i < a.primes.size(); ++i) {
        const int p = a.primes[i];
        const int r = a.residues[i];
        // Find t with (x + t*mod) % p == r by scanning; p is tiny.
        int cur = static_cast<int>(x % p);
        int step = static_cast<int>(mod % p);
        int t = 0;
        while ((cur + t * step) % p != r) ++t;
        x += t * mod;
        mod *= p;
    }
    return x;
}

int bit_at(int i, const Big& n) {
    if (i < 1) throw DomainError("bit_at: i must be >= 1");
    return boost::multiprecision::bit_test(n, static_cast<unsigned>(i - 1)) ? 1 : 0;
}

Parity parity_divisible_count(int i, const Big& n) {
    if (i < 1) throw DomainError("parity_divisible_count: i must be >= 1");
    Big q = n >> static_cast<unsigned>(i - 1);
    return boost::multiprecision::bit_test(q, 0) ? Parity::Odd : Parity::Even;
}

}  // namespace ocmc
