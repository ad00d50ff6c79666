#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

namespace ocmc {

using Big = boost::multiprecision::cpp_int;

enum class Parity { Even, Odd };

/// One-hot residue encoding of a number modulo a list of distinct primes.
/// bit(i, r) is 1 exactly when the encoded value is congruent r mod the
/// i-th prime (i is 0-based here).
struct CrrAssignment {
    std::vector<int> primes;
    std::vector<int> residues;  // residues[i] in [0, primes[i])

    bool bit(int i, int r) const { return residues[i] == r; }
};

// First m primes, ascending. m >= 1.
std::vector<int> primes_first(int m);

// LCM of {1..k}. Throws DomainError for k = 0.
Big lcm_upto(int k);

// Residue encoding of M; requires 0 <= M < product of the primes.
CrrAssignment crr(const std::vector<int>& primes, const Big& m);

// Inverse of crr (Chinese remainder reconstruction); used as a round-trip check.
Big crr_reconstruct(const CrrAssignment& a);

// i-th least significant bit of n, i >= 1.
int bit_at(int i, const Big& n);

// Parity of |{n' in [1,n] : 2^(i-1) divides n'}|, via floor(n / 2^(i-1)).
Parity parity_divisible_count(int i, const Big& n);

}  // namespace ocmc
