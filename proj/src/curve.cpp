#include "moddeg2/curve.hpp"
#include "moddeg2/arith.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

namespace moddeg2::curve {

namespace {

Int gcd(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Int r = a % b;
        a = b;
        b = r;
    }
    return a;
}

int sign_of(const Int& x) { return x == 0 ? 0 : (x > 0 ? 1 : -1); }

Int eval_monic_cubic(const std::array<Int, 3>& c, const Int& y) {
    return ((y + c[0]) * y + c[1]) * y + c[2];
}

} // namespace

// All integer roots of a monic integer cubic, exactly.  The real line is cut
// at the (integer neighborhoods of the) critical points, so the cubic is
// monotonic on each piece and bisection cannot skip sign-preserving root
// pairs.
std::vector<Int> monic_cubic_integer_roots(const std::array<Int, 3>& c) {
    Int M = 1;
    for (const Int& ci : c) {
        Int a = ci < 0 ? -ci : ci;
        if (a > M) M = a;
    }
    M += 1;
    auto eval = [&](const Int& y) { return ((y + c[0]) * y + c[1]) * y + c[2]; };
    std::vector<Int> breaks{-M, M};
    Int D = c[0] * c[0] - 3 * c[1]; // discriminant of the derivative / 4
    if (D >= 0) {
        Int s = boost::multiprecision::sqrt(D);
        for (Int base : {Int((-c[0] - s) / 3), Int((-c[0] + s) / 3)})
            for (Int t = base - 2; t <= base + 2; ++t)
                if (t > -M && t < M) breaks.push_back(t);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<Int> roots;
    auto record = [&](const Int& r) {
        for (const Int& x : roots)
            if (x == r) return;
        roots.push_back(r);
    };
    for (const Int& b : breaks)
        if (eval(b) == 0) record(b);
    auto sgn = [](const Int& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Int lo = breaks[i], hi = breaks[i + 1];
        Int flo = eval(lo), fhi = eval(hi);
        if (flo == 0 || fhi == 0) continue; // endpoint roots recorded above
        if (sgn(flo) == sgn(fhi)) continue; // monotonic piece, no root inside
        while (hi - lo > 1) {
            Int mid = (lo + hi) / 2;
            Int fmid = eval(mid);
            if (fmid == 0) {
                record(mid);
                break;
            }
            if (sgn(fmid) == sgn(flo)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

std::int64_t to_i64_mod(const Int& a, std::uint64_t p) {
    Int r = a % static_cast<std::int64_t>(p);
    if (r < 0) r += static_cast<std::int64_t>(p);
    return static_cast<std::int64_t>(r);
}

} // namespace

WeierstrassCurve derive_invariants(const Int& a1, const Int& a2, const Int& a3,
                                   const Int& a4, const Int& a6) {
    WeierstrassCurve E;
    E.a1 = a1;
    E.a2 = a2;
    E.a3 = a3;
    E.a4 = a4;
    E.a6 = a6;
    E.b2 = a1 * a1 + 4 * a2;
    E.b4 = 2 * a4 + a1 * a3;
    E.b6 = a3 * a3 + 4 * a6;
    E.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    E.c4 = E.b2 * E.b2 - 24 * E.b4;
    E.c6 = -E.b2 * E.b2 * E.b2 + 36 * E.b2 * E.b4 - 216 * E.b6;
    E.disc = -E.b2 * E.b2 * E.b8 - 8 * E.b4 * E.b4 * E.b4 - 27 * E.b6 * E.b6 + 9 * E.b2 * E.b4 * E.b6;
    if (E.disc == 0) throw std::invalid_argument("derive_invariants: singular model (disc = 0)");
    Int num = E.c4 * E.c4 * E.c4, den = E.disc;
    Int g = gcd(num, den);
    if (g != 0) {
        num /= g;
        den /= g;
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    E.j_num = num;
    E.j_den = den;
    return E;
}

WeierstrassCurve derive_invariants(const std::array<std::int64_t, 5>& a) {
    return derive_invariants(Int(a[0]), Int(a[1]), Int(a[2]), Int(a[3]), Int(a[4]));
}

TwoTorsionInfo two_torsion_info(const WeierstrassCurve& E) {
    TwoTorsionInfo info;
    info.cubic = {E.b2, 8 * E.b4, 16 * E.b6};
    const auto& c = info.cubic;
    info.cubic_disc = 18 * c[0] * c[1] * c[2] - 4 * c[0] * c[0] * c[0] * c[2] +
                      c[0] * c[0] * c[1] * c[1] - 4 * c[1] * c[1] * c[1] - 27 * c[2] * c[2];
    info.has_rational_root = !monic_cubic_integer_roots(info.cubic).empty();
    return info;
}

bool is_real_connected(const WeierstrassCurve& E) { return E.disc < 0; }

std::int64_t ap_point_count(const WeierstrassCurve& E, std::uint64_t p) {
    if (p < 2 || p > 100000 || !arith::is_prime(p))
        throw std::invalid_argument("ap_point_count: p must be a prime <= 1e5");
    if (E.disc % static_cast<std::int64_t>(p) == 0)
        throw std::invalid_argument("ap_point_count: bad reduction at p");
    const std::int64_t a1 = to_i64_mod(E.a1, p), a2 = to_i64_mod(E.a2, p), a3 = to_i64_mod(E.a3, p),
                       a4 = to_i64_mod(E.a4, p), a6 = to_i64_mod(E.a6, p);
    const std::int64_t sp = static_cast<std::int64_t>(p);
    if (p == 2 || p == 3) {
        std::int64_t count = 1; // point at infinity
        for (std::int64_t x = 0; x < sp; ++x)
            for (std::int64_t y = 0; y < sp; ++y) {
                std::int64_t lhs = (y * y + a1 * x * y + a3 * y) % sp;
                std::int64_t rhs = (((x + a2) * x + a4) * x + a6) % sp;
                if ((lhs - rhs) % sp == 0) ++count;
            }
        return sp + 1 - count;
    }
    // odd p: a_p = -sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6)
    const std::int64_t b2 = to_i64_mod(E.b2, p), b4 = to_i64_mod(E.b4, p), b6 = to_i64_mod(E.b6, p);
    std::vector<char> is_sq(p, 0);
    for (std::int64_t y = 0; y < sp; ++y) is_sq[static_cast<std::size_t>((y * y) % sp)] = 1;
    std::int64_t s = 0;
    for (std::int64_t x = 0; x < sp; ++x) {
        std::int64_t g = (((4 * x + b2) % sp) * x % sp + 2 * b4 % sp) % sp;
        g = (g * x + b6) % sp;
        if (g < 0) g += sp;
        if (g == 0) continue;
        s += is_sq[static_cast<std::size_t>(g)] ? 1 : -1;
    }
    return -s;
}

bool is_supersingular_at_2(const WeierstrassCurve& E) {
    return ap_point_count(E, 2) % 2 == 0;
}

std::optional<int> cm_discriminant(const WeierstrassCurve& E) {
    if (E.j_den != 1) return std::nullopt;
    static const std::pair<const char*, int> table[] = {
        {"0", -3},
        {"1728", -4},
        {"-3375", -7},
        {"8000", -8},
        {"-32768", -11},
        {"54000", -12},
        {"287496", -16},
        {"-884736", -19},
        {"-12288000", -27},
        {"16581375", -28},
        {"-884736000", -43},
        {"-147197952000", -67},
        {"-262537412640768000", -163},
    };
    for (auto& [jstr, d] : table)
        if (E.j_num == Int(jstr)) return d;
    return std::nullopt;
}

WeierstrassCurve quadratic_twist(const WeierstrassCurve& E, std::int64_t d) {
    if (d == 0) throw std::invalid_argument("quadratic_twist: d must be nonzero");
    auto f = arith::factor(static_cast<std::uint64_t>(d < 0 ? -d : d));
    for (auto& [p, e] : f.factors)
        if (e >= 2) throw std::invalid_argument("quadratic_twist: d must be squarefree");
    Int D(d);
    return derive_invariants(Int(0), Int(0), Int(0), -27 * D * D * E.c4, -54 * D * D * D * E.c6);
}

bool possibly_non_minimal(const WeierstrassCurve& E) {
    for (std::uint64_t p : arith::primes_up_to(1000)) {
        Int pw(p);
        Int p12 = 1;
        for (int i = 0; i < 12; ++i) p12 *= pw;
        Int p4 = pw * pw * pw * pw;
        if (E.disc % p12 == 0 && E.c4 % p4 == 0) return true;
    }
    return false;
}

std::optional<WeierstrassCurve> curve_from_c4c6(const Int& c4, const Int& c6) {
    for (int a1 = 0; a1 <= 1; ++a1)
        for (int a2 = -1; a2 <= 1; ++a2)
            for (int a3 = 0; a3 <= 1; ++a3) {
                Int b2 = Int(a1) * a1 + 4 * a2;
                Int num4 = b2 * b2 - c4;
                if (num4 % 24 != 0) continue;
                Int b4 = num4 / 24;
                Int num6 = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
                if (num6 % 216 != 0) continue;
                Int b6 = num6 / 216;
                Int numa4 = b4 - Int(a1) * a3;
                if (numa4 % 2 != 0) continue;
                Int a4 = numa4 / 2;
                Int numa6 = b6 - Int(a3) * a3;
                if (numa6 % 4 != 0) continue;
                Int a6 = numa6 / 4;
                try {
                    WeierstrassCurve E = derive_invariants(Int(a1), Int(a2), Int(a3), a4, a6);
                    if (E.c4 == c4 && E.c6 == c6) return E;
                } catch (const std::invalid_argument&) {
                    continue;
                }
            }
    return std::nullopt;
}

std::string ainvs_string(const WeierstrassCurve& E) {
    std::ostringstream os;
    os << "[" << E.a1 << "," << E.a2 << "," << E.a3 << "," << E.a4 << "," << E.a6 << "]";
    return os.str();
}

} // namespace moddeg2::curve
