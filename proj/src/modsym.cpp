#include "moddeg2/modsym.hpp"
#include "moddeg2/arith.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace moddeg2::modsym {

using linalg::HnfBasis;
using linalg::MatZ;
using linalg::Rat;

namespace {

std::int64_t pos_mod(std::int64_t a, std::int64_t n) {
    a %= n;
    return a < 0 ? a + n : a;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return arith::gcd_i64(a, b); }

std::int64_t to_i64(const linalg::Int& x) {
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("modsym: coordinate exceeds 64 bits");
    return static_cast<std::int64_t>(x);
}

} // namespace

// ------------------------------------------------------------------- P1

P1::P1(std::int64_t N) : N_(N) {
    if (N < 1) throw std::invalid_argument("P1: level must be positive");
    if (N == 1) {
        reps_.push_back({0, 0});
        lookup_[0] = 0;
        return;
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> set;
    for (std::int64_t c = 0; c < N; ++c) {
        if (c != 0 && N % c != 0) continue; // canonical first entries divide N
        for (std::int64_t d = 0; d < N; ++d) {
            auto [rep, ok] = normalize(c, d);
            if (ok) set.push_back(rep);
        }
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    reps_ = std::move(set);
    lookup_.reserve(reps_.size() * 2);
    for (int i = 0; i < static_cast<int>(reps_.size()); ++i)
        lookup_[reps_[i].first * N + reps_[i].second] = i;
}

std::pair<std::pair<std::int64_t, std::int64_t>, bool>
P1::normalize(std::int64_t c, std::int64_t d) const {
    if (N_ == 1) return {{0, 0}, true};
    c = pos_mod(c, N_);
    d = pos_mod(d, N_);
    if (gcd64(gcd64(c, d), N_) != 1) return {{0, 0}, false};
    if (c == 0) return {{0, 1}, true};
    std::int64_t g = gcd64(c, N_);
    // unit s with s*c ≡ g (mod N); solutions differ by multiples of N/g
    std::int64_t s;
    {
        std::int64_t r0 = c, r1 = N_, s0 = 1, s1 = 0;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::int64_t tmp = r0 - q * r1;
            r0 = r1;
            r1 = tmp;
            tmp = s0 - q * s1;
            s0 = s1;
            s1 = tmp;
        }
        s = pos_mod(s0, N_);
    }
    std::int64_t step = N_ / g;
    for (std::int64_t guard = 0; gcd64(s, N_) != 1; ++guard) {
        if (guard > N_) throw std::logic_error("P1::normalize: no unit representative");
        s = (s + step) % N_;
    }
    std::int64_t d1 = static_cast<std::int64_t>((static_cast<__int128>(s) * d) % N_);
    std::int64_t best = -1;
    for (std::int64_t k = 0; k < g; ++k) {
        std::int64_t u = (1 + k * step) % N_;
        if (gcd64(u, N_) != 1) continue;
        std::int64_t cand = static_cast<std::int64_t>((static_cast<__int128>(u) * d1) % N_);
        if (best < 0 || cand < best) best = cand;
    }
    return {{g, best}, true};
}

int P1::index(std::int64_t c, std::int64_t d) const {
    auto [rep, ok] = normalize(c, d);
    if (!ok) return -1;
    auto it = lookup_.find(rep.first * N_ + rep.second);
    return it == lookup_.end() ? -1 : it->second;
}

// --------------------------------------------------------------- formulas

std::int64_t gamma0_index(std::int64_t N) {
    auto f = arith::factor(static_cast<std::uint64_t>(N));
    std::int64_t mu = N;
    for (auto& [p, e] : f.factors)
        mu = mu / static_cast<std::int64_t>(p) * (static_cast<std::int64_t>(p) + 1);
    return mu;
}

std::int64_t cusp_number(std::int64_t N) {
    std::int64_t total = 0;
    for (std::int64_t d = 1; d <= N; ++d) {
        if (N % d) continue;
        std::int64_t g = gcd64(d, N / d);
        std::int64_t phi = g;
        auto f = arith::factor(static_cast<std::uint64_t>(g));
        for (auto& [p, e] : f.factors)
            phi = phi / static_cast<std::int64_t>(p) * (static_cast<std::int64_t>(p) - 1);
        total += phi;
    }
    return total;
}

std::int64_t genus_x0(std::int64_t N) {
    auto f = arith::factor(static_cast<std::uint64_t>(N));
    std::int64_t mu = gamma0_index(N);
    std::int64_t nu2 = 1, nu3 = 1;
    if (N % 4 == 0)
        nu2 = 0;
    else
        for (auto& [p, e] : f.factors)
            nu2 *= (p == 2) ? 1 : (1 + arith::kronecker(-1, static_cast<std::int64_t>(p)));
    if (N % 9 == 0)
        nu3 = 0;
    else
        for (auto& [p, e] : f.factors)
            nu3 *= (p == 3) ? 1 : (1 + arith::kronecker(-3, static_cast<std::int64_t>(p)));
    std::int64_t nuinf = cusp_number(N);
    std::int64_t twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * nuinf;
    if (twelve_g % 12 != 0) throw std::logic_error("genus_x0: formula inconsistency");
    return twelve_g / 12;
}

// --------------------------------------------------------------- helpers

namespace {

struct CuspClassifier {
    std::int64_t N;
    std::map<std::pair<std::int64_t, std::int64_t>, int> classes;

    std::pair<std::int64_t, std::int64_t> key(std::int64_t a, std::int64_t c) const {
        if (c == 0) return {N, 0};
        std::int64_t s = gcd64(c, N);
        std::int64_t g = gcd64(s, N / s);
        if (g == 1) return {s, 0};
        std::int64_t c1 = pos_mod(c / s, g);
        std::int64_t inv;
        {
            std::int64_t r0 = c1, r1 = g, s0 = 1, s1 = 0;
            while (r1 != 0) {
                std::int64_t q = r0 / r1;
                std::int64_t tmp = r0 - q * r1;
                r0 = r1;
                r1 = tmp;
                tmp = s0 - q * s1;
                s0 = s1;
                s1 = tmp;
            }
            inv = pos_mod(s0, g);
        }
        return {s, pos_mod(a * inv, g)};
    }

    int classify(std::int64_t a, std::int64_t c) {
        if (c < 0) {
            a = -a;
            c = -c;
        }
        auto k = key(a, c);
        auto it = classes.find(k);
        if (it != classes.end()) return it->second;
        int idx = static_cast<int>(classes.size());
        classes.emplace(k, idx);
        return idx;
    }
};

// SL2(Z) lift with bottom row ≡ (c, d) mod N.
std::array<std::int64_t, 4> sl2_lift(std::int64_t c, std::int64_t d, std::int64_t N) {
    if (N == 1) return {1, 0, 0, 1};
    c = pos_mod(c, N);
    d = pos_mod(d, N);
    if (c == 0) c = N;
    if (gcd64(c, d) != 1) {
        for (std::int64_t k = 1; k <= 2 * c + 2; ++k) {
            if (gcd64(c, d + k * N) == 1) {
                d += k * N;
                break;
            }
        }
    }
    if (gcd64(c, d) != 1) throw std::logic_error("sl2_lift: no coprime lift found");
    // a*d - b*c = 1
    std::int64_t r0 = d, r1 = c, s0 = 1, s1 = 0;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
    }
    std::int64_t a = (r0 == 1) ? s0 : -s0; // a*d ≡ 1 mod c
    std::int64_t b = (a * d - 1) / c;
    return {a, b, c, d};
}

using Row = std::vector<std::pair<int, Rat>>;

void add_term(std::map<int, Rat>& acc, int v, const Rat& c) {
    auto it = acc.find(v);
    if (it == acc.end())
        acc.emplace(v, c);
    else {
        it->second += c;
        if (it->second == 0) acc.erase(it);
    }
}

} // namespace

// --------------------------------------------------------------- builder

ManinSymbolSpace::ManinSymbolSpace(std::int64_t N) : N_(N), p1_(N) {}

ManinSymbolSpace ManinSymbolSpace::build(std::int64_t N) {
    if (N < 1 || N > 30000) throw std::invalid_argument("build_space: level out of range");
    ManinSymbolSpace sp(N);
    sp.mu_ = gamma0_index(N);
    sp.cache_mutex_ = std::make_unique<std::mutex>();
    const int n = sp.p1_.size();

    std::vector<int> sigma(n), tau(n);
    for (int i = 0; i < n; ++i) {
        auto [c, d] = sp.p1_.rep(i);
        sigma[i] = sp.p1_.index(d, -c);
        tau[i] = sp.p1_.index(d, -c - d);
    }

    // two-term relations x + x·sigma = 0
    std::vector<int> rep(n, -1);
    std::vector<int> sign(n, 1);
    std::vector<bool> dead(n, false);
    for (int i = 0; i < n; ++i) {
        if (rep[i] != -1) continue;
        int j = sigma[i];
        if (j == i) {
            dead[i] = true;
            rep[i] = i;
        } else {
            rep[i] = i;
            rep[j] = i;
            sign[i] = 1;
            sign[j] = -1;
        }
    }

    // three-term relations x + x·tau + x·tau² = 0 over the representatives
    std::vector<Row> rows;
    std::vector<bool> orbit_done(n, false);
    for (int i = 0; i < n; ++i) {
        if (orbit_done[i]) continue;
        int j = tau[i], k = tau[j];
        orbit_done[i] = orbit_done[j] = orbit_done[k] = true;
        std::map<int, Rat> acc;
        for (int idx : {i, j, k}) {
            if (dead[idx]) continue;
            add_term(acc, rep[idx], Rat(sign[idx]));
        }
        if (!acc.empty()) rows.push_back(Row(acc.begin(), acc.end()));
    }

    // sparse elimination; eliminated variables reference strictly smaller ones
    std::vector<std::optional<Row>> expr(n);
    for (int i = 0; i < n; ++i)
        if (dead[i]) expr[i] = Row{};
    for (auto& row : rows) {
        std::map<int, Rat> acc(row.begin(), row.end());
        for (;;) {
            int found = -1;
            for (auto it = acc.rbegin(); it != acc.rend(); ++it)
                if (expr[it->first]) {
                    found = it->first;
                    break;
                }
            if (found < 0) break;
            Rat c = acc[found];
            acc.erase(found);
            for (auto& [u, cu] : *expr[found]) add_term(acc, u, c * cu);
        }
        if (acc.empty()) continue;
        auto pivot_it = std::prev(acc.end());
        int pv = pivot_it->first;
        Rat pc = pivot_it->second;
        acc.erase(pivot_it);
        Row e;
        for (auto& [u, cu] : acc) e.emplace_back(u, -cu / pc);
        expr[pv] = std::move(e);
    }

    std::vector<int> var_pos(n, -1);
    std::vector<int>& free_syms = sp.free_symbol_;
    for (int i = 0; i < n; ++i)
        if (rep[i] == i && !dead[i] && !expr[i]) {
            var_pos[i] = static_cast<int>(free_syms.size());
            free_syms.push_back(i);
        }
    const int D = static_cast<int>(free_syms.size());
    sp.dim_ = D;

    // resolve representatives to combinations of free variables
    std::vector<std::vector<Rat>> resolved(n);
    for (int v = 0; v < n; ++v) {
        if (rep[v] != v) continue;
        std::vector<Rat> out(D, Rat(0));
        if (!expr[v]) {
            if (var_pos[v] >= 0) out[var_pos[v]] = 1;
        } else {
            for (auto& [u, cu] : *expr[v]) {
                const auto& ru = resolved[rep[u]];
                // u is a representative (relations are expressed on reps)
                for (int t = 0; t < D; ++t)
                    if (ru[t] != 0) out[t] += cu * ru[t];
            }
        }
        resolved[v] = std::move(out);
    }

    // global denominator and integral lattice
    Int den_all = 1;
    std::vector<std::vector<Rat>> sym_q(n);
    for (int i = 0; i < n; ++i) {
        std::vector<Rat> v(D, Rat(0));
        if (!dead[i]) {
            const auto& base = resolved[rep[i]];
            for (int t = 0; t < D; ++t)
                if (base[t] != 0) v[t] = (sign[i] > 0 ? base[t] : -base[t]);
        }
        for (int t = 0; t < D; ++t)
            if (v[t] != 0)
                den_all = boost::multiprecision::lcm(den_all, boost::multiprecision::denominator(v[t]));
        sym_q[i] = std::move(v);
    }
    sp.den_all_ = den_all;

    HnfBasis lattice(D);
    std::vector<std::vector<Int>> scaled(n, std::vector<Int>(D));
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < D; ++t) {
            Rat x = sym_q[i][t] * Rat(den_all);
            scaled[i][t] = boost::multiprecision::numerator(x);
        }
        lattice.insert(scaled[i]);
    }
    if (lattice.rank() != D) throw std::logic_error("build_space: lattice rank defect");
    sp.lattice_rows_ = lattice.rows();

    sp.symbol_coords_.resize(n);
    for (int i = 0; i < n; ++i) {
        auto coords = lattice.coordinates(scaled[i]);
        if (!coords) throw std::logic_error("build_space: symbol outside lattice");
        std::vector<std::pair<int, std::int64_t>> sparse;
        for (int t = 0; t < D; ++t)
            if ((*coords)[t] != 0) sparse.emplace_back(t, to_i64((*coords)[t]));
        sp.symbol_coords_[i] = std::move(sparse);
    }

    // boundary map on the lattice basis
    CuspClassifier cusps{N, {}};
    std::vector<std::pair<int, int>> sym_boundary(n);
    for (int i = 0; i < n; ++i) {
        auto [c, d] = sp.p1_.rep(i);
        auto m = sl2_lift(c, d, N);
        int clsinf = cusps.classify(m[0], m[2]);
        int cls0 = cusps.classify(m[1], m[3]);
        sym_boundary[i] = {clsinf, cls0};
    }
    const int nc = static_cast<int>(cusps.classes.size());
    sp.cusp_count_ = nc;
    if (nc != static_cast<int>(cusp_number(N)))
        throw std::logic_error("build_space: cusp classification does not match the cusp count formula");

    MatZ bd(nc, D);
    for (int k = 0; k < D; ++k) {
        std::vector<Int> acc(nc, Int(0));
        const auto& rowk = sp.lattice_rows_[k];
        for (int j = 0; j < D; ++j) {
            if (rowk[j] == 0) continue;
            int symbol = free_syms[j];
            acc[sym_boundary[symbol].first] += rowk[j];
            acc[sym_boundary[symbol].second] -= rowk[j];
        }
        for (int r = 0; r < nc; ++r) {
            if (acc[r] % den_all != 0) throw std::logic_error("build_space: boundary not integral");
            bd.at(r, k) = acc[r] / den_all;
        }
    }

    MatZ kern = linalg::kernel_saturated(bd);
    HnfBasis cusp_basis(D);
    for (int i = 0; i < kern.rows; ++i) {
        std::vector<Int> row(D);
        for (int j = 0; j < D; ++j) row[j] = kern.at(i, j);
        cusp_basis.insert(row);
    }
    sp.cuspidal_ = std::move(cusp_basis);

    if (sp.dim_ != 2 * genus_x0(N) + nc - 1)
        throw std::logic_error("build_space: quotient dimension does not match 2g + c - 1");
    if (sp.cuspidal_.rank() != 2 * genus_x0(N))
        throw std::logic_error("build_space: cuspidal dimension does not match 2g");
    return sp;
}

// ------------------------------------------------------------ operators

std::vector<std::int64_t> ManinSymbolSpace::symbol_column(int idx) const {
    std::vector<std::int64_t> v(dim_, 0);
    for (auto& [t, c] : symbol_coords_[idx]) v[t] = c;
    return v;
}

// The image callback provides, for a P1 index, the image in lattice
// coordinates.  Free symbols have unit coordinate vectors in the free-symbol
// system, so the operator on the lattice basis is assembled from their
// images alone:  T(b_k) = (1/den) * sum_j H_k[j] * image(free_j).
Mat64 ManinSymbolSpace::operator_on_lattice(
    const std::function<std::vector<std::int64_t>(int)>& image_of_symbol) const {
    const int D = dim_;
    std::vector<std::vector<std::int64_t>> img(D);
    for (int j = 0; j < D; ++j) img[j] = image_of_symbol(free_symbol_[j]);
    // lattice rows have small entries; accumulate in 128 bits with a guard
    std::vector<std::vector<std::int64_t>> rows64(D, std::vector<std::int64_t>(D));
    for (int k = 0; k < D; ++k)
        for (int j = 0; j < D; ++j) rows64[k][j] = to_i64(lattice_rows_[k][j]);
    const std::int64_t den = to_i64(den_all_);
    Mat64 T(D, D);
    std::vector<__int128> acc(D);
    for (int k = 0; k < D; ++k) {
        const auto& rowk = rows64[k];
        std::fill(acc.begin(), acc.end(), static_cast<__int128>(0));
        for (int j = 0; j < D; ++j) {
            if (rowk[j] == 0) continue;
            const auto& ij = img[j];
            for (int t = 0; t < D; ++t) acc[t] += static_cast<__int128>(rowk[j]) * ij[t];
        }
        for (int t = 0; t < D; ++t) {
            if (acc[t] % den != 0)
                throw std::logic_error("operator_on_lattice: image not integral on lattice");
            __int128 q = acc[t] / den;
            if (q > std::numeric_limits<std::int64_t>::max() || q < std::numeric_limits<std::int64_t>::min())
                throw std::overflow_error("operator_on_lattice: entry exceeds 64 bits");
            T.at(t, k) = static_cast<std::int64_t>(q);
        }
    }
    return T;
}

Mat64 ManinSymbolSpace::restrict_to_cuspidal(const Mat64& on_lattice) const {
    const int k = cuspidal_.rank();
    Mat64 M(k, k);
    // the cuspidal HNF rows have small entries: solve in 128-bit arithmetic
    bool fast_ok = true;
    std::vector<std::vector<std::int64_t>> rows64(k, std::vector<std::int64_t>(dim_));
    for (int i = 0; i < k && fast_ok; ++i)
        for (int j = 0; j < dim_; ++j) {
            const Int& x = cuspidal_.rows()[i][j];
            if (x > std::numeric_limits<std::int32_t>::max() || x < std::numeric_limits<std::int32_t>::min()) {
                fast_ok = false;
                break;
            }
            rows64[i][j] = static_cast<std::int64_t>(x);
        }
    const auto& pivots = cuspidal_.pivot_cols();
    for (int j = 0; j < k; ++j) {
        if (fast_ok) {
            std::vector<__int128> v(dim_, 0);
            const auto& rj = rows64[j];
            for (int t = 0; t < dim_; ++t) {
                const std::int64_t* trow = &on_lattice.a[static_cast<std::size_t>(t) * dim_];
                __int128 s = 0;
                for (int u = 0; u < dim_; ++u) s += static_cast<__int128>(trow[u]) * rj[u];
                v[t] = s;
            }
            // triangular solve through the HNF pivots
            bool solved = true;
            std::vector<__int128> coords(k, 0);
            for (int i = 0; i < k; ++i) {
                __int128 num = v[pivots[i]];
                std::int64_t h = rows64[i][pivots[i]];
                if (num % h != 0) {
                    solved = false;
                    break;
                }
                __int128 q = num / h;
                coords[i] = q;
                if (q != 0)
                    for (int u = 0; u < dim_; ++u) v[u] -= q * rows64[i][u];
            }
            for (int u = 0; u < dim_ && solved; ++u)
                if (v[u] != 0) solved = false;
            if (solved) {
                for (int i = 0; i < k; ++i) {
                    if (coords[i] > std::numeric_limits<std::int64_t>::max() ||
                        coords[i] < std::numeric_limits<std::int64_t>::min())
                        throw std::overflow_error("restrict_to_cuspidal: coordinate exceeds 64 bits");
                    M.at(i, j) = static_cast<std::int64_t>(coords[i]);
                }
                continue;
            }
        }
        // exact fallback
        std::vector<Int> v(dim_, Int(0));
        for (int t = 0; t < dim_; ++t) {
            Int s = 0;
            for (int u = 0; u < dim_; ++u) {
                std::int64_t e = on_lattice.at(t, u);
                if (e != 0 && cuspidal_.rows()[j][u] != 0) s += Int(e) * cuspidal_.rows()[j][u];
            }
            v[t] = s;
        }
        auto coords = cuspidal_.coordinates(v);
        if (!coords) throw std::logic_error("restrict_to_cuspidal: image leaves the cuspidal lattice");
        for (int i = 0; i < k; ++i) M.at(i, j) = to_i64((*coords)[i]);
    }
    return M;
}

namespace {
// Determinant-n matrices acting as T_n on Manin symbols for (n, N) = 1.
std::vector<std::array<std::int64_t, 4>> merel_matrices(std::int64_t n) {
    std::vector<std::array<std::int64_t, 4>> out;
    for (std::int64_t a = 1; a <= n; ++a)
        for (std::int64_t d = 1; d <= n; ++d) {
            std::int64_t m = a * d - n;
            if (m < 0) continue;
            if (m == 0) {
                for (std::int64_t c = 0; c < d; ++c) out.push_back({a, 0, c, d});
                for (std::int64_t b = 1; b < a; ++b) out.push_back({a, b, 0, d});
                continue;
            }
            for (std::int64_t b = 1; b < a; ++b) {
                if (m % b) continue;
                std::int64_t c = m / b;
                if (c < d) out.push_back({a, b, c, d});
            }
        }
    return out;
}
} // namespace

Mat64 ManinSymbolSpace::hecke_prime(std::int64_t p) const {
    if (N_ % p == 0) {
        auto column = [&](int idx) {
            auto [c, d] = p1_.rep(idx);
            auto g = sl2_lift(c, d, N_);
            std::vector<std::int64_t> acc(dim_, 0);
            for (std::int64_t r = 0; r < p; ++r) {
                Int e = Int(g[0]) + Int(r) * g[2];
                Int f = Int(g[1]) + Int(r) * g[3];
                Int gg = Int(p) * g[2];
                Int hh = Int(p) * g[3];
                auto part = manin_path_coords(Cusp{f, hh}, Cusp{e, gg});
                for (int t = 0; t < dim_; ++t) acc[t] += part[t];
            }
            return acc;
        };
        return restrict_to_cuspidal(operator_on_lattice(column));
    }
    auto mats = merel_matrices(p);
    auto column = [&](int idx) {
        auto [c, d] = p1_.rep(idx);
        std::vector<std::int64_t> acc(dim_, 0);
        for (const auto& m : mats) {
            std::int64_t cc = c * m[0] + d * m[2];
            std::int64_t dd = c * m[1] + d * m[3];
            int target = p1_.index(cc, dd);
            if (target < 0) continue;
            for (auto& [t, coef] : symbol_coords_[target]) acc[t] += coef;
        }
        return acc;
    };
    return restrict_to_cuspidal(operator_on_lattice(column));
}

Mat64 ManinSymbolSpace::hecke_prime_power(std::int64_t p, int e) const {
    Mat64 Tp = hecke_matrix(p);
    if (e == 1) return Tp;
    if (N_ % p == 0) {
        Mat64 acc = Tp;
        for (int i = 1; i < e; ++i) acc = linalg::mul(acc, Tp);
        return acc;
    }
    Mat64 prev = Mat64::identity(cuspidal_.rank());
    Mat64 cur = Tp;
    for (int i = 1; i < e; ++i) {
        Mat64 nxt = linalg::sub(linalg::mul(Tp, cur), linalg::scale(prev, p));
        prev = cur;
        cur = nxt;
    }
    return cur;
}

Mat64 ManinSymbolSpace::hecke_matrix(std::int64_t n) const {
    if (n < 1) throw std::invalid_argument("hecke_matrix: n must be positive");
    {
        std::lock_guard<std::mutex> lock(*cache_mutex_);
        auto it = hecke_cache_.find(n);
        if (it != hecke_cache_.end()) return it->second;
    }
    Mat64 result;
    if (n == 1)
        result = Mat64::identity(cuspidal_.rank());
    else if (arith::is_prime(static_cast<std::uint64_t>(n)))
        result = hecke_prime(n);
    else {
        auto f = arith::factor(static_cast<std::uint64_t>(n));
        bool first = true;
        for (auto& [p, e] : f.factors) {
            Mat64 part = hecke_prime_power(static_cast<std::int64_t>(p), e);
            result = first ? part : linalg::mul(result, part);
            first = false;
        }
    }
    {
        std::lock_guard<std::mutex> lock(*cache_mutex_);
        hecke_cache_.emplace(n, result);
    }
    return result;
}

std::vector<Int> ManinSymbolSpace::hecke_apply(std::int64_t n, const std::vector<Int>& v) const {
    Mat64 T = hecke_matrix(n);
    const int k = cuspidal_.rank();
    std::vector<Int> out(k, Int(0));
    for (int i = 0; i < k; ++i) {
        Int s = 0;
        for (int j = 0; j < k; ++j)
            if (T.at(i, j) != 0 && v[j] != 0) s += Int(T.at(i, j)) * v[j];
        out[i] = s;
    }
    return out;
}

Mat64 ManinSymbolSpace::star_matrix() const {
    auto column = [&](int idx) {
        auto [c, d] = p1_.rep(idx);
        int target = p1_.index(-c, d);
        if (target < 0) throw std::logic_error("star: undefined image");
        return symbol_column(target);
    };
    return restrict_to_cuspidal(operator_on_lattice(column));
}

Mat64 ManinSymbolSpace::atkin_lehner_matrix(std::int64_t Q) const {
    if (Q < 1 || N_ % Q != 0 || gcd64(Q, N_ / Q) != 1)
        throw std::invalid_argument("atkin_lehner_matrix: Q must exactly divide N");
    if (Q == 1) return Mat64::identity(cuspidal_.rank());
    std::int64_t R = N_ / Q;
    std::int64_t alpha, beta;
    {
        std::int64_t r0 = Q, r1 = R, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (r1 != 0) {
            std::int64_t q = r0 / r1;
            std::int64_t tmp = r0 - q * r1;
            r0 = r1;
            r1 = tmp;
            tmp = s0 - q * s1;
            s0 = s1;
            s1 = tmp;
            tmp = t0 - q * t1;
            t0 = t1;
            t1 = tmp;
        }
        alpha = (r0 == 1) ? s0 : -s0;
        beta = (r0 == 1) ? t0 : -t0;
    }
    // W = [Q, -1; N*beta, Q*alpha], det = Q
    Int W0(Q), W1(-1), W2(Int(N_) * beta), W3(Int(Q) * alpha);
    auto column = [&](int idx) {
        auto [c, d] = p1_.rep(idx);
        auto g = sl2_lift(c, d, N_);
        Int e = W0 * g[0] + W1 * g[2];
        Int f = W0 * g[1] + W1 * g[3];
        Int gg = W2 * g[0] + W3 * g[2];
        Int hh = W2 * g[1] + W3 * g[3];
        return manin_path_coords(Cusp{f, hh}, Cusp{e, gg});
    };
    return restrict_to_cuspidal(operator_on_lattice(column));
}

std::vector<std::int64_t> ManinSymbolSpace::manin_path_coords(const Cusp& a, const Cusp& b) const {
    auto reduce = [](Int num, Int den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        Int g = boost::multiprecision::gcd(boost::multiprecision::abs(num), den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (den == 0) num = 1;
        return std::make_pair(num, den);
    };
    // coordinates of {infinity, p/q} via continued fractions
    auto m_of = [&](Int p, Int q) {
        std::vector<std::int64_t> acc(dim_, 0);
        if (q == 0) return acc;
        Int Pprev = 1, Qprev = 0;
        Int Pcur = 0, Qcur = 0;
        Int x = p, y = q;
        bool first = true;
        int k = 0;
        for (;;) {
            Int a0 = x / y;
            if ((x % y != 0) && ((x < 0) != (y < 0))) a0 -= 1;
            Int Pnew = first ? a0 : a0 * Pcur + Pprev;
            Int Qnew = first ? Int(1) : a0 * Qcur + Qprev;
            if (!first) {
                Pprev = Pcur;
                Qprev = Qcur;
            }
            Pcur = Pnew;
            Qcur = Qnew;
            // segment {P_{k-1}/Q_{k-1}, P_k/Q_k} has Manin symbol with
            // bottom row ((-1)^(k-1) Q_k, Q_{k-1})
            Int cc = (k % 2 == 0) ? -Qcur : Qcur;
            std::int64_t c64 = static_cast<std::int64_t>(cc % N_);
            std::int64_t d64 = first ? 0 : static_cast<std::int64_t>(Qprev % N_);
            int idx = p1_.index(c64, d64);
            if (idx >= 0)
                for (auto& [t, coef] : symbol_coords_[idx]) acc[t] += coef;
            Int rem = x - a0 * y;
            x = y;
            y = rem;
            ++k;
            first = false;
            if (y == 0) break;
        }
        return acc;
    };
    auto [an, ad] = reduce(a.num, a.den);
    auto [bn, bd] = reduce(b.num, b.den);
    std::vector<std::int64_t> out = m_of(bn, bd);
    auto ma = m_of(an, ad);
    for (int t = 0; t < dim_; ++t) out[t] -= ma[t];
    return out;
}

std::vector<std::int64_t> ManinSymbolSpace::path_coords(const Cusp& a, const Cusp& b) const {
    return manin_path_coords(a, b);
}

// ------------------------------------------------------------ eigenforms

namespace {
// Coordinates of v in the row space of B (rows HNF-reduced, saturated).
std::optional<std::vector<Int>> coords_in_rows(const MatZ& B, const std::vector<Int>& v) {
    HnfBasis h(B.cols);
    for (int i = 0; i < B.rows; ++i) {
        std::vector<Int> row(B.cols);
        for (int j = 0; j < B.cols; ++j) row[j] = B.at(i, j);
        h.insert(row);
    }
    return h.coordinates(v);
}
} // namespace

EigenLine locate_eigenform(const ManinSymbolSpace& space,
                           const std::function<std::int64_t(std::int64_t)>& ap_of_prime) {
    const int k = space.cuspidal_dim();
    if (k == 0) throw std::runtime_error("locate_eigenform: no cusp forms at this level");
    Mat64 S = space.star_matrix();
    MatZ basis = linalg::kernel_saturated(linalg::sub(S, Mat64::identity(k)));

    const int sturm = space.sturm_bound();
    for (std::int64_t ell = 2; ell <= sturm && basis.rows > 1; ++ell) {
        if (!arith::is_prime(static_cast<std::uint64_t>(ell)) || space.level() % ell == 0) continue;
        std::int64_t a = ap_of_prime(ell);
        Mat64 T = space.hecke_matrix(ell);
        const int r = basis.rows;
        // rebuild an HNF view of the basis for integral coordinate solves
        HnfBasis hb(k);
        std::vector<int> row_order; // map: hb row position -> basis row
        {
            // rows of kernel_saturated are already pivot-sorted HNF rows
            for (int i = 0; i < r; ++i) {
                std::vector<Int> row(k);
                for (int j = 0; j < k; ++j) row[j] = basis.at(i, j);
                hb.insert(row);
                row_order.push_back(i);
            }
        }
        MatZ M(r, r);
        for (int i = 0; i < r; ++i) {
            std::vector<Int> img(k, Int(0));
            for (int t = 0; t < k; ++t) {
                Int s = 0;
                for (int u = 0; u < k; ++u) {
                    std::int64_t e = T.at(t, u);
                    if (e != 0 && basis.at(i, u) != 0) s += Int(e) * basis.at(i, u);
                }
                img[t] = s;
            }
            auto coords = hb.coordinates(img);
            if (!coords)
                throw std::logic_error("locate_eigenform: operator leaves the subspace lattice");
            for (int j = 0; j < r; ++j) M.at(j, i) = (*coords)[j];
        }
        MatZ MmA = M;
        for (int i = 0; i < r; ++i) MmA.at(i, i) -= a;
        MatZ kern = linalg::kernel_saturated(MmA);
        MatZ nb(kern.rows, k);
        for (int i = 0; i < kern.rows; ++i)
            for (int t = 0; t < k; ++t) {
                Int s = 0;
                for (int j = 0; j < r; ++j)
                    if (kern.at(i, j) != 0 && basis.at(j, t) != 0) s += kern.at(i, j) * basis.at(j, t);
                nb.at(i, t) = s;
            }
        basis = std::move(nb);
        if (basis.rows == 0)
            throw std::runtime_error("locate_eigenform: empty intersection (no such eigenform)");
    }
    if (basis.rows == 0)
        throw std::runtime_error("locate_eigenform: empty intersection (no such eigenform)");
    if (basis.rows > 1)
        throw std::runtime_error("locate_eigenform: intersection not 1-dimensional");

    std::vector<Int> v(k);
    for (int j = 0; j < k; ++j) v[j] = basis.at(0, j);
    for (std::int64_t ell = 2; ell <= sturm; ++ell) {
        if (!arith::is_prime(static_cast<std::uint64_t>(ell)) || space.level() % ell == 0) continue;
        auto img = space.hecke_apply(ell, v);
        Int a(ap_of_prime(ell));
        for (int j = 0; j < k; ++j)
            if (img[j] != a * v[j])
                throw std::runtime_error("locate_eigenform: eigenvalue verification failed");
    }
    Int g = 0;
    for (auto& x : v) g = boost::multiprecision::gcd(g, boost::multiprecision::abs(x));
    if (g > 1)
        for (auto& x : v) x /= g;
    return EigenLine{std::move(v)};
}

RankParity analytic_rank_parity(const ManinSymbolSpace& space, const EigenLine& line) {
    Mat64 W = space.atkin_lehner_matrix(space.level());
    const int k = space.cuspidal_dim();
    std::vector<Int> img(k, Int(0));
    for (int i = 0; i < k; ++i) {
        Int s = 0;
        for (int j = 0; j < k; ++j)
            if (W.at(i, j) != 0 && line.coords[j] != 0) s += Int(W.at(i, j)) * line.coords[j];
        img[i] = s;
    }
    bool plus = true, minus = true;
    for (int i = 0; i < k; ++i) {
        if (img[i] != line.coords[i]) plus = false;
        if (img[i] != -line.coords[i]) minus = false;
    }
    if (plus == minus)
        throw std::logic_error("analytic_rank_parity: W_N does not act as ±1 on the eigenline");
    return plus ? RankParity::Odd : RankParity::Even;
}

} // namespace moddeg2::modsym
