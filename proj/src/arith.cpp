#include "moddeg2/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace moddeg2::arith {

int Factorization::num_odd_primes() const {
    int k = 0;
    for (auto& [p, e] : factors)
        if (p != 2) ++k;
    return k;
}

bool Factorization::contains(std::uint64_t p) const {
    for (auto& [q, e] : factors)
        if (q == p) return true;
    return false;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
    std::uint64_t ua = a < 0 ? static_cast<std::uint64_t>(-(a + 1)) + 1 : static_cast<std::uint64_t>(a);
    std::uint64_t ub = b < 0 ? static_cast<std::uint64_t>(-(b + 1)) + 1 : static_cast<std::uint64_t>(b);
    return static_cast<std::int64_t>(gcd_u64(ua, ub));
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool witness_composite(std::uint64_t n, std::uint64_t a, std::uint64_t d, int r) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < r; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

std::uint64_t brent_rho(std::uint64_t n) {
    // n odd composite, no factor below the trial-division bound.
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t x = 2, y = 2, d = 1;
        std::uint64_t saved = 2;
        int power = 1, lam = 1;
        auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            if (power == lam) {
                saved = x;
                power *= 2;
                lam = 0;
            }
            x = f(x);
            ++lam;
            std::uint64_t diff = x > saved ? x - saved : saved - x;
            d = gcd_u64(diff, n);
        }
        if (d != n) return d;
        // cycle collapsed; retry with sequential c
        (void)y;
    }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out);

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = brent_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    // This witness set decides primality for every n < 2^64.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (witness_composite(n, a, d, r)) return false;
    return true;
}

Factorization factor(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("factor: n must be positive");
    Factorization f;
    f.n = n;
    std::vector<std::uint64_t> primes;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p <= 1000000 && p * p <= m; p += (p == 2 ? 1 : 2)) {
        while (m % p == 0) {
            primes.push_back(p);
            m /= p;
        }
    }
    if (m > 1) factor_into(m, primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        f.factors.emplace_back(primes[i], static_cast<int>(j - i));
        i = j;
    }
    return f;
}

std::optional<std::uint64_t> perfect_square_root(std::uint64_t n) {
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    for (std::uint64_t c = (r > 2 ? r - 2 : 0); c <= r + 2; ++c)
        if (c * c == n) return c;
    return std::nullopt;
}

int kronecker(std::int64_t a, std::int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v & 1) {
        std::int64_t am8 = ((a % 8) + 8) % 8;
        if (am8 == 3 || am8 == 5) sign = -sign;
        if (am8 % 2 == 0) return 0;
    }
    a %= n;
    if (a < 0) a += n;
    // Jacobi symbol on odd n > 0
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            std::int64_t nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) sign = -sign;
        }
        std::swap(a, n);
        if ((a % 4) == 3 && (n % 4) == 3) sign = -sign;
        a %= n;
    }
    return n == 1 ? sign : 0;
}

FormRepresentation represent_u2_plus_16v2(std::uint64_t N) {
    if (!is_prime(N) || N % 8 != 1)
        throw std::invalid_argument("represent_u2_plus_16v2: N must be prime ≡ 1 mod 8");
    for (std::uint64_t v = 1; 16 * v * v < N; ++v) {
        if (auto u = perfect_square_root(N - 16 * v * v))
            return FormRepresentation{N, *u, v};
    }
    throw std::logic_error("represent_u2_plus_16v2: no representation found (unreachable for valid input)");
}

bool merel_criterion(std::uint64_t N) {
    FormRepresentation rep = represent_u2_plus_16v2(N);
    return (rep.v % 2) == (((N - 1) / 8) % 2);
}

std::optional<NeumannSetzer> neumann_setzer_test(std::uint64_t N) {
    if (!is_prime(N)) throw std::invalid_argument("neumann_setzer_test: N must be prime");
    if (N <= 64) return std::nullopt;
    auto u = perfect_square_root(N - 64);
    if (!u) return std::nullopt;
    return NeumannSetzer{*u, N % 16 != 1};
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    std::vector<std::uint64_t> ps;
    if (bound < 2) return ps;
    std::vector<bool> sieve(bound + 1, true);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (sieve[i]) {
            ps.push_back(i);
            for (std::uint64_t j = i * i; j <= bound; j += i) sieve[j] = false;
        }
    }
    return ps;
}

} // namespace moddeg2::arith
