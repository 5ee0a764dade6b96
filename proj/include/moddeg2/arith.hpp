#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace moddeg2::arith {

/// Prime factorization of a positive integer, primes strictly increasing.
struct Factorization {
    std::uint64_t n = 1;
    std::vector<std::pair<std::uint64_t, int>> factors;

    int num_primes() const { return static_cast<int>(factors.size()); }
    int num_odd_primes() const;
    bool is_prime_power() const { return factors.size() == 1; }
    bool contains(std::uint64_t p) const;
};

/// Deterministic Miller-Rabin, valid for all n < 2^64 (fixed witness set).
bool is_prime(std::uint64_t n);

/// Trial division to 10^6 followed by Brent's rho. Deterministic.
Factorization factor(std::uint64_t n);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::int64_t gcd_i64(std::int64_t a, std::int64_t b);

/// x with x*x == n, if n is a perfect square.
std::optional<std::uint64_t> perfect_square_root(std::uint64_t n);

/// Kronecker symbol (a|n).
int kronecker(std::int64_t a, std::int64_t n);

/// The representation N = u^2 + 16 v^2 with u, v > 0, which exists and is
/// unique (up to sign) for every prime N ≡ 1 mod 8.
struct FormRepresentation {
    std::uint64_t N = 0;
    std::uint64_t u = 0;
    std::uint64_t v = 0;
};

/// Throws std::invalid_argument unless N is prime and N ≡ 1 mod 8.
FormRepresentation represent_u2_plus_16v2(std::uint64_t N);

/// True iff v ≡ (N-1)/8 mod 2 for the representation above.  For prime
/// N ≡ 1 mod 8 this detects when the 2-adic Eisenstein completion of the
/// Hecke algebra is strictly larger than Z_2.
bool merel_criterion(std::uint64_t N);

struct NeumannSetzer {
    std::uint64_t u = 0;
    bool odd_degree = false;
};

/// If N (prime) equals u^2 + 64, returns u and whether the optimal curve of
/// conductor N has odd modular degree (odd iff N ≢ 1 mod 16).
std::optional<NeumannSetzer> neumann_setzer_test(std::uint64_t N);

/// Primes in [2, bound].
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

} // namespace moddeg2::arith
