#include "moddeg2/hecke2.hpp"
#include "moddeg2/arith.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace moddeg2::hecke2 {

using linalg::HnfBasis;
using linalg::MatZ;

namespace {

std::vector<bool> row_of(const MatF2& M, int i) {
    std::vector<bool> v(M.cols);
    for (int j = 0; j < M.cols; ++j) v[j] = M.get(i, j);
    return v;
}

MatF2 rows_to_mat(const std::vector<std::vector<bool>>& rows, int cols) {
    MatF2 M(static_cast<int>(rows.size()), cols);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
        for (int j = 0; j < cols; ++j)
            if (rows[i][j]) M.set(i, j, true);
    return M;
}

std::vector<bool> xor_vec(std::vector<bool> a, const std::vector<bool>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] ^ b[i];
    return a;
}

bool is_zero_vec(const std::vector<bool>& a) {
    for (bool b : a)
        if (b) return false;
    return true;
}

// coordinates of v in the row space of R (rows independent); nullopt if
// outside.
std::optional<std::vector<bool>> coords_in_rows_f2(const MatF2& R, const std::vector<bool>& v) {
    // solve R^T x = v
    MatF2 Rt(R.cols, R.rows);
    for (int i = 0; i < R.rows; ++i)
        for (int j = 0; j < R.cols; ++j)
            if (R.get(i, j)) Rt.set(j, i, true);
    return linalg::solve_f2(Rt, v);
}

} // namespace

std::vector<bool> HeckeLattice::multiply(const std::vector<bool>& x, const std::vector<bool>& y) const {
    std::vector<bool> out(rank, false);
    for (int i = 0; i < rank; ++i) {
        if (!x[i]) continue;
        for (int j = 0; j < rank; ++j) {
            if (!y[j]) continue;
            const int row = i * rank + j;
            for (int t = 0; t < rank; ++t)
                if (mul_table.get(row, t)) out[t] = !out[t];
        }
    }
    return out;
}

std::vector<bool> HeckeLattice::tn_mod2(std::int64_t n) const {
    const auto& c = tn_coords.at(static_cast<std::size_t>(n - 1));
    std::vector<bool> v(rank);
    for (int i = 0; i < rank; ++i) v[i] = (c[i] % 2) != 0;
    return v;
}

// ---------------------------------------------------------------- builder

namespace {

struct PhiMap {
    std::vector<int> columns; // selected column indices of the cuspidal space

    std::vector<Int> apply(const Mat64& T) const {
        std::vector<Int> v;
        v.reserve(columns.size() * T.rows);
        for (int c : columns)
            for (int i = 0; i < T.rows; ++i) v.emplace_back(T.at(i, c));
        return v;
    }
};

// Certify that the T-module generated by the selected unit vectors is the
// whole space: then column selection is injective on the span of the T_n.
bool columns_generate(const std::vector<Mat64>& tns, const std::vector<int>& cols, int dim) {
    if (dim == 0) return true;
    MatZ krylov(static_cast<int>(tns.size() * cols.size()), dim);
    int r = 0;
    for (const auto& T : tns)
        for (int c : cols) {
            for (int i = 0; i < dim; ++i) krylov.at(r, i) = T.at(i, c);
            ++r;
        }
    // a mod-p rank lower-bounds the rational rank
    linalg::MatP red = linalg::reduce_modp(krylov, 2147483647u);
    return static_cast<int>(linalg::rref_modp(red).size()) == dim;
}

// Arithmetic mod 2^64 (natural wraparound) is exact 2-adic arithmetic with
// 64 bits of precision; the mod-2 structure constants only ever need a few
// of those bits, which lets the big lattice products avoid big integers.
std::uint64_t u64_of(const Int& x) {
    static const Int two64 = Int(1) << 64;
    Int r = x % two64;
    if (r < 0) r += two64;
    return static_cast<std::uint64_t>(r);
}

int v2_of(Int x) {
    if (x == 0) throw std::logic_error("v2_of(0)");
    if (x < 0) x = -x;
    int v = 0;
    while (x % 2 == 0) {
        x /= 2;
        ++v;
    }
    return v;
}

std::uint64_t inv_odd_u64(std::uint64_t a) {
    // Newton iteration for the inverse of an odd number mod 2^64
    std::uint64_t x = a;
    for (int i = 0; i < 6; ++i) x *= 2 - a * x;
    return x;
}

struct AugRowExact {
    std::vector<Int> phi;
    std::vector<Int> combo;
};

struct AugRowFast {
    std::vector<Int> phi;
    std::vector<std::uint64_t> combo;
};

// Incremental HNF on the phi part with mirrored combo bookkeeping.  Rows
// whose phi part cancels completely are relations and are dropped.
template <class Row, class ComboOps>
struct AugHnf {
    int phidim;
    ComboOps ops;
    std::vector<Row> rows;     // sorted by pivot column
    std::vector<int> pivots;

    void insert(Row v) {
        for (;;) {
            int c = -1;
            for (int j = 0; j < phidim; ++j)
                if (v.phi[j] != 0) {
                    c = j;
                    break;
                }
            if (c < 0) return; // relation: drop
            auto it = std::lower_bound(pivots.begin(), pivots.end(), c);
            std::size_t idx = static_cast<std::size_t>(it - pivots.begin());
            if (it == pivots.end() || *it != c) {
                if (v.phi[c] < 0) negate(v);
                rows.insert(rows.begin() + idx, std::move(v));
                pivots.insert(it, c);
                for (std::size_t k = 0; k < rows.size(); ++k) reduce_at(k);
                return;
            }
            Int& h = rows[idx].phi[c];
            if (v.phi[c] % h == 0) {
                axpy(v, -(v.phi[c] / h), rows[idx]);
            } else {
                Int g, s, t;
                ext_gcd2(h, v.phi[c], g, s, t);
                Row newrow = make_combined(s, rows[idx], t, v);
                Int qh = h / g, qv = v.phi[c] / g;
                Row vnew = make_combined(qh, v, -qv, rows[idx]);
                rows[idx] = std::move(newrow);
                v = std::move(vnew);
                for (std::size_t k = 0; k < rows.size(); ++k) reduce_at(k);
            }
        }
    }

    void negate(Row& r) {
        for (auto& x : r.phi) x = -x;
        ops.negate(r.combo);
    }

    void axpy(Row& dst, const Int& q, const Row& src) {
        if (q == 0) return;
        for (int j = 0; j < phidim; ++j) dst.phi[j] += q * src.phi[j];
        ops.axpy(dst.combo, q, src.combo);
    }

    Row make_combined(const Int& a, const Row& x, const Int& b, const Row& y) {
        Row r;
        r.phi.assign(phidim, Int(0));
        for (int j = 0; j < phidim; ++j) r.phi[j] = a * x.phi[j] + b * y.phi[j];
        r.combo = ops.combine(a, x.combo, b, y.combo);
        return r;
    }

    void reduce_at(std::size_t k) {
        int c = pivots[k];
        const Int& h = rows[k].phi[c];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == k) continue;
            Int q = rows[i].phi[c] / h;
            if (rows[i].phi[c] - q * h < 0) q -= 1;
            if (q != 0) axpy(rows[i], -q, rows[k]);
        }
    }

    static void ext_gcd2(const Int& a, const Int& b, Int& g, Int& s, Int& t) {
        Int r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (r1 != 0) {
            Int q = r0 / r1;
            Int tmp = r0 - q * r1;
            r0 = r1;
            r1 = tmp;
            tmp = s0 - q * s1;
            s0 = s1;
            s1 = tmp;
            tmp = t0 - q * t1;
            t0 = t1;
            t1 = tmp;
        }
        g = r0;
        s = s0;
        t = t0;
        if (g < 0) {
            g = -g;
            s = -s;
            t = -t;
        }
    }
};

struct ComboOpsExact {
    void negate(std::vector<Int>& c) const {
        for (auto& x : c) x = -x;
    }
    void axpy(std::vector<Int>& dst, const Int& q, const std::vector<Int>& src) const {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += q * src[i];
    }
    std::vector<Int> combine(const Int& a, const std::vector<Int>& x, const Int& b,
                             const std::vector<Int>& y) const {
        std::vector<Int> r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + b * y[i];
        return r;
    }
};

struct ComboOpsFast {
    void negate(std::vector<std::uint64_t>& c) const {
        for (auto& x : c) x = ~x + 1;
    }
    void axpy(std::vector<std::uint64_t>& dst, const Int& q, const std::vector<std::uint64_t>& src) const {
        std::uint64_t qq = u64_of(q);
        if (qq == 0) return;
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += qq * src[i];
    }
    std::vector<std::uint64_t> combine(const Int& a, const std::vector<std::uint64_t>& x, const Int& b,
                                       const std::vector<std::uint64_t>& y) const {
        std::uint64_t aa = u64_of(a), bb = u64_of(b);
        std::vector<std::uint64_t> r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = aa * x[i] + bb * y[i];
        return r;
    }
};

// exact integer coordinates of v against the phi rows; throws if outside
template <class Aug>
std::vector<Int> phi_coordinates(const Aug& aug, std::vector<Int> v) {
    std::vector<Int> coords(aug.rows.size(), Int(0));
    for (;;) {
        int c = -1;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) {
                c = static_cast<int>(j);
                break;
            }
        if (c < 0) return coords;
        auto it = std::lower_bound(aug.pivots.begin(), aug.pivots.end(), c);
        if (it == aug.pivots.end() || *it != c)
            throw std::logic_error("hecke_lattice: vector outside lattice (closure failure)");
        std::size_t idx = static_cast<std::size_t>(it - aug.pivots.begin());
        const Int& h = aug.rows[idx].phi[c];
        if (v[c] % h != 0)
            throw std::logic_error("hecke_lattice: vector outside lattice (non-integral coordinate)");
        Int q = v[c] / h;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= q * aug.rows[idx].phi[j];
        coords[idx] += q;
    }
}

HeckeLattice build_with_bound(const modsym::ManinSymbolSpace& space, int bound, bool exact_mode) {
    HeckeLattice L;
    L.N = space.level();
    L.sturm = bound;
    // the span is already all of T at the Sturm bound; a few extra
    // coefficients keep the Eisenstein test meaningful at tiny levels
    L.coeff_bound = std::max(bound, 10);
    const int dim = space.cuspidal_dim();

    std::vector<Mat64> tns;
    tns.reserve(L.coeff_bound);
    for (std::int64_t n = 1; n <= L.coeff_bound; ++n) tns.push_back(space.hecke_matrix(n));

    if (dim == 0) {
        L.rank = 0;
        L.tn_coords.assign(L.coeff_bound, {});
        L.mul_table = MatF2(0, 0);
        return L;
    }

    PhiMap phi;
    phi.columns = {0};
    while (!columns_generate(tns, phi.columns, dim)) {
        if (static_cast<int>(phi.columns.size()) >= dim)
            throw std::logic_error("hecke_lattice: column probe exhausted");
        phi.columns.push_back(static_cast<int>(phi.columns.size()));
    }
    const int phidim = static_cast<int>(phi.columns.size()) * dim;

    // Hermite basis of span{phi(T_n)} with combination tracking.  The combo
    // coefficients can be large, so the fast path carries them mod 2^64 only;
    // that is enough to recover every structure constant mod 2 as long as the
    // 2-valuations of the pivots leave headroom (checked below).
    AugHnf<AugRowFast, ComboOpsFast> fast{phidim, {}, {}, {}};
    AugHnf<AugRowExact, ComboOpsExact> exact{phidim, {}, {}, {}};
    for (int n = 0; n < bound; ++n) {
        auto ph = phi.apply(tns[n]);
        if (exact_mode) {
            AugRowExact r;
            r.phi = ph;
            r.combo.assign(bound, Int(0));
            r.combo[n] = 1;
            exact.insert(std::move(r));
        } else {
            AugRowFast r;
            r.phi = ph;
            r.combo.assign(bound, 0);
            r.combo[n] = 1;
            fast.insert(std::move(r));
        }
    }
    const std::size_t nrows = exact_mode ? exact.rows.size() : fast.rows.size();
    L.rank = static_cast<int>(nrows);

    auto phi_row = [&](std::size_t k) -> const std::vector<Int>& {
        return exact_mode ? exact.rows[k].phi : fast.rows[k].phi;
    };
    auto pivot_col = [&](std::size_t k) { return exact_mode ? exact.pivots[k] : fast.pivots[k]; };

    // 2-adic headroom: each triangular solve loses v2(pivot) bits
    int lost_bits = 0;
    for (std::size_t k = 0; k < nrows; ++k) lost_bits += v2_of(phi_row(k)[pivot_col(k)]);
    if (!exact_mode && lost_bits > 40)
        throw std::overflow_error("hecke_lattice: insufficient 2-adic precision, exact path required");

    auto coords_of_phi = [&](const std::vector<Int>& v) {
        return exact_mode ? phi_coordinates(exact, v) : phi_coordinates(fast, v);
    };

    L.tn_coords.resize(L.coeff_bound);
    for (int n = 0; n < L.coeff_bound; ++n) L.tn_coords[n] = coords_of_phi(phi.apply(tns[n]));

    L.mul_table = MatF2(L.rank * L.rank, L.rank);
    if (exact_mode) {
        // materialize exact basis matrices
        std::vector<MatZ> bz;
        for (std::size_t k = 0; k < nrows; ++k) {
            MatZ acc(dim, dim);
            for (int n = 0; n < bound; ++n) {
                const Int& c = exact.rows[k].combo[n];
                if (c == 0) continue;
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        if (tns[n].at(i, j) != 0) acc.at(i, j) += c * tns[n].at(i, j);
            }
            bz.push_back(std::move(acc));
        }
        for (auto& m : bz) {
            MatF2 f2(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    if (m.at(i, j) % 2 != 0) f2.set(i, j, true);
            L.basis_mod2.push_back(std::move(f2));
            auto m64 = linalg::to_mat64(m);
            if (m64) L.basis.push_back(std::move(*m64));
        }
        if (L.basis.size() != nrows) L.basis.clear(); // only kept when all fit

        for (int i = 0; i < L.rank; ++i)
            for (int j = 0; j < L.rank; ++j) {
                std::vector<Int> v(phidim, Int(0));
                for (std::size_t cb = 0; cb < phi.columns.size(); ++cb) {
                    for (int t = 0; t < dim; ++t) {
                        Int s = 0;
                        for (int u = 0; u < dim; ++u) {
                            const Int& e = bz[i].at(t, u);
                            if (e != 0 && bz[j].at(u, phi.columns[cb]) != 0)
                                s += e * bz[j].at(u, phi.columns[cb]);
                        }
                        v[cb * dim + t] = s;
                    }
                }
                auto c = coords_of_phi(v); // throws if the product leaves the lattice
                const int row = i * L.rank + j;
                for (int t = 0; t < L.rank; ++t)
                    if (c[t] % 2 != 0) L.mul_table.set(row, t, true);
            }
    } else {
        // full T_n mod 2^64, then basis matrices mod 2^64
        const std::size_t dd = static_cast<std::size_t>(dim) * dim;
        std::vector<std::vector<std::uint64_t>> tn_u(tns.size(), std::vector<std::uint64_t>(dd));
        for (std::size_t n = 0; n < tns.size(); ++n)
            for (std::size_t e = 0; e < dd; ++e) tn_u[n][e] = static_cast<std::uint64_t>(tns[n].a[e]);
        std::vector<std::vector<std::uint64_t>> basis_u(nrows, std::vector<std::uint64_t>(dd, 0));
        for (std::size_t k = 0; k < nrows; ++k)
            for (int n = 0; n < bound; ++n) {
                std::uint64_t c = fast.rows[k].combo[n];
                if (c == 0) continue;
                const auto& tn = tn_u[n];
                auto& dst = basis_u[k];
                for (std::size_t e = 0; e < dd; ++e) dst[e] += c * tn[e];
            }
        // basis mod 2
        for (std::size_t k = 0; k < nrows; ++k) {
            MatF2 m(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    if (basis_u[k][static_cast<std::size_t>(i) * dim + j] & 1) m.set(i, j, true);
            L.basis_mod2.push_back(std::move(m));
        }
        // phi rows mod 2^64 with pivot data for the 2-adic triangular solve
        std::vector<std::vector<std::uint64_t>> rows_u(nrows, std::vector<std::uint64_t>(phidim));
        std::vector<int> piv_a(nrows);
        std::vector<std::uint64_t> piv_inv(nrows);
        for (std::size_t k = 0; k < nrows; ++k) {
            for (int j = 0; j < phidim; ++j) rows_u[k][j] = u64_of(phi_row(k)[j]);
            Int h = phi_row(k)[pivot_col(k)];
            int a = v2_of(h);
            piv_a[k] = a;
            piv_inv[k] = inv_odd_u64(u64_of(h >> a));
        }
        auto solve_mod2 = [&](std::vector<std::uint64_t> w, int precision_bits) {
            std::vector<bool> out(nrows);
            int prec = precision_bits;
            for (std::size_t k = 0; k < nrows; ++k) {
                std::uint64_t num = w[pivot_col(k)];
                int a = piv_a[k];
                if (a >= prec) throw std::overflow_error("hecke_lattice: 2-adic precision exhausted");
                if (a > 0 && (num & ((1ull << a) - 1)) != 0)
                    throw std::logic_error("hecke_lattice: product has non-integral coordinate");
                std::uint64_t x = (num >> a) * piv_inv[k];
                prec -= a;
                out[k] = (x & 1) != 0;
                for (int j = 0; j < phidim; ++j) w[j] -= x * rows_u[k][j];
            }
            // residual must vanish to the working precision
            std::uint64_t mask = prec >= 64 ? ~0ull : ((1ull << prec) - 1);
            for (int j = 0; j < phidim; ++j)
                if ((w[j] & mask) != 0)
                    throw std::logic_error("hecke_lattice: product outside the lattice span");
            return out;
        };
        for (int i = 0; i < L.rank; ++i)
            for (int j = 0; j < L.rank; ++j) {
                std::vector<std::uint64_t> w(phidim, 0);
                for (std::size_t cb = 0; cb < phi.columns.size(); ++cb) {
                    const int colidx = phi.columns[cb];
                    // column of basis_u[j]
                    for (int t = 0; t < dim; ++t) {
                        std::uint64_t s = 0;
                        const auto& bi = basis_u[i];
                        for (int u = 0; u < dim; ++u)
                            s += bi[static_cast<std::size_t>(t) * dim + u] *
                                 basis_u[j][static_cast<std::size_t>(u) * dim + colidx];
                        w[cb * dim + t] = s;
                    }
                }
                auto bits = solve_mod2(std::move(w), 64 - 0);
                const int row = i * L.rank + j;
                for (int t = 0; t < L.rank; ++t)
                    if (bits[t]) L.mul_table.set(row, t, true);
            }
    }

    L.unit.assign(L.rank, false);
    {
        auto c = L.tn_coords[0];
        for (int i = 0; i < L.rank; ++i) L.unit[i] = (c[i] % 2) != 0;
    }
    return L;
}

} // namespace

HeckeLattice hecke_lattice(const modsym::ManinSymbolSpace& space, bool verify_doubled) {
    const bool small = space.cuspidal_dim() <= 40;
    HeckeLattice L;
    if (small || verify_doubled) {
        L = build_with_bound(space, space.sturm_bound(), true);
    } else {
        try {
            L = build_with_bound(space, space.sturm_bound(), false);
        } catch (const std::overflow_error&) {
            L = build_with_bound(space, space.sturm_bound(), true);
        }
    }
    if (verify_doubled) {
        HeckeLattice L2 = build_with_bound(space, 2 * space.sturm_bound(), true);
        if (L2.rank != L.rank)
            throw std::logic_error("hecke_lattice: lattice changed when doubling the bound");
        // containment: every T_n for n <= 2B must reconstruct from the
        // doubled lattice with the same span; verify via exact matrices
        if (!L2.basis.empty()) {
            for (int n = 0; n < 2 * space.sturm_bound(); ++n) {
                Mat64 T = space.hecke_matrix(n + 1);
                MatZ acc(space.cuspidal_dim(), space.cuspidal_dim());
                const auto& c2 = L2.tn_coords[n];
                for (int k = 0; k < L2.rank; ++k)
                    if (c2[k] != 0)
                        for (int i = 0; i < space.cuspidal_dim(); ++i)
                            for (int j = 0; j < space.cuspidal_dim(); ++j)
                                if (L2.basis[k].at(i, j) != 0) acc.at(i, j) += c2[k] * L2.basis[k].at(i, j);
                for (int i = 0; i < space.cuspidal_dim(); ++i)
                    for (int j = 0; j < space.cuspidal_dim(); ++j)
                        if (acc.at(i, j) != T.at(i, j))
                            throw std::logic_error("hecke_lattice: doubled-bound reconstruction failed");
            }
        }
    }
    return L;
}

// ------------------------------------------------------------- decompose

namespace {
ResidueValue residue_value_impl(const HeckeLattice& L, const LocalFactorMod2& f,
                                const std::vector<bool>& x);

struct Block {
    MatF2 basis; // rows span the block inside A
};

// multiplication-by-x operator restricted to the block with given basis
MatF2 mult_operator_on_block(const HeckeLattice& L, const std::vector<bool>& x, const MatF2& basis) {
    const int r = basis.rows;
    MatF2 M(r, r);
    for (int j = 0; j < r; ++j) {
        auto img = L.multiply(x, row_of(basis, j));
        auto coords = coords_in_rows_f2(basis, img);
        if (!coords) throw std::logic_error("decompose_mod2: block not closed under multiplication");
        for (int i = 0; i < r; ++i)
            if ((*coords)[i]) M.set(i, j, true);
    }
    return M;
}

// squaring operator on the block (F2-linear in characteristic 2)
MatF2 frobenius_on_block(const HeckeLattice& L, const MatF2& basis) {
    const int r = basis.rows;
    MatF2 M(r, r);
    for (int j = 0; j < r; ++j) {
        auto b = row_of(basis, j);
        auto img = L.multiply(b, b);
        auto coords = coords_in_rows_f2(basis, img);
        if (!coords) throw std::logic_error("decompose_mod2: block not closed under squaring");
        for (int i = 0; i < r; ++i)
            if ((*coords)[i]) M.set(i, j, true);
    }
    return M;
}

MatF2 nilradical_of_block(const HeckeLattice& L, const MatF2& basis) {
    MatF2 S = frobenius_on_block(L, basis);
    // iterate squaring dim times: kernel = nilpotents
    MatF2 P = S;
    for (int i = 1; (1 << i) < 2 * std::max(basis.rows, 1); ++i) P = linalg::mul_f2(P, P);
    MatF2 K = linalg::kernel_f2(P);
    // rows of K are coordinates w.r.t. block basis; convert to A-coordinates
    MatF2 out(K.rows, L.rank);
    for (int i = 0; i < K.rows; ++i)
        for (int j = 0; j < basis.rows; ++j)
            if (K.get(i, j))
                for (int t = 0; t < L.rank; ++t)
                    if (basis.get(j, t)) out.set(i, t, !out.get(i, t));
    return out;
}

// split a block by the generalized kernels of the irreducible factors of the
// minimal polynomial of mult-by-x
std::vector<MatF2> split_block_by(const HeckeLattice& L, const MatF2& basis, const std::vector<bool>& x) {
    MatF2 M = mult_operator_on_block(L, x, basis);
    PolyF2 mp = linalg::minpoly_f2(M);
    auto factors = linalg::factor_poly_f2(mp);
    if (factors.size() <= 1) return {basis};
    std::vector<MatF2> out;
    for (auto& [pi, mult] : factors) {
        // kernel of pi(M)^dim
        MatF2 PM = linalg::apply_poly_f2(pi, M);
        MatF2 P = PM;
        int steps = 0;
        while ((1 << steps) < std::max(basis.rows, 1)) ++steps;
        for (int s = 0; s < steps; ++s) P = linalg::mul_f2(P, P);
        MatF2 K = linalg::kernel_f2(P);
        MatF2 sub(K.rows, L.rank);
        for (int i = 0; i < K.rows; ++i)
            for (int j = 0; j < basis.rows; ++j)
                if (K.get(i, j))
                    for (int t = 0; t < L.rank; ++t)
                        if (basis.get(j, t)) sub.set(i, t, !sub.get(i, t));
        out.push_back(linalg::echelon_f2(sub));
    }
    return out;
}

std::vector<bool> block_identity(const HeckeLattice& L, const std::vector<Block>& blocks, std::size_t which) {
    // solve 1 = sum over blocks of components; the component in `which` is its identity
    const int rank = L.rank;
    int total = 0;
    for (auto& b : blocks) total += b.basis.rows;
    MatF2 M(rank, total);
    int col = 0;
    for (auto& b : blocks)
        for (int i = 0; i < b.basis.rows; ++i, ++col)
            for (int t = 0; t < rank; ++t)
                if (b.basis.get(i, t)) M.set(t, col, true);
    auto sol = linalg::solve_f2(M, L.unit);
    if (!sol) throw std::logic_error("decompose_mod2: unit not in the sum of blocks");
    std::vector<bool> e(rank, false);
    col = 0;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi)
        for (int i = 0; i < blocks[bi].basis.rows; ++i, ++col)
            if (bi == which && (*sol)[col]) e = xor_vec(e, row_of(blocks[bi].basis, i));
    return e;
}

} // namespace

std::vector<LocalFactorMod2> decompose_mod2(const HeckeLattice& L) {
    std::vector<LocalFactorMod2> out;
    if (L.rank == 0) return out;

    // initial block: all of A
    std::vector<Block> blocks{Block{MatF2::identity(L.rank)}};

    // pass 1: split along the prime Hecke generators in increasing order
    for (std::int64_t ell = 2; ell <= L.sturm; ++ell) {
        if (!arith::is_prime(static_cast<std::uint64_t>(ell))) continue;
        std::vector<Block> next;
        for (auto& blk : blocks) {
            auto parts = split_block_by(L, blk.basis, L.tn_mod2(ell));
            for (auto& p : parts) next.push_back(Block{p});
        }
        blocks = std::move(next);
    }

    // pass 2: Frobenius idempotent refinement until every block is local
    for (std::size_t bi = 0; bi < blocks.size();) {
        MatF2& basis = blocks[bi].basis;
        const int r = basis.rows;
        if (r == 0) {
            blocks.erase(blocks.begin() + bi);
            continue;
        }
        MatF2 nil = nilradical_of_block(L, basis);
        int t = r - nil.rows; // dim of the semisimple quotient
        // count the local factors: fixed space of Frobenius on the quotient
        // includes the identity; the block is local iff that space is F2
        // build quotient basis: extend nil rows to a basis of the block
        // work with Frobenius on the block directly: fixed space of S within
        // block modulo nil
        MatF2 S = frobenius_on_block(L, basis);
        MatF2 SmI = S;
        for (int i = 0; i < r; ++i) SmI.set(i, i, !SmI.get(i, i));
        // vectors fixed mod nil: solve (S - I)x ∈ nil(block coords)
        // nil in block coordinates:
        MatF2 nil_block(nil.rows, r);
        for (int i = 0; i < nil.rows; ++i) {
            auto coords = coords_in_rows_f2(basis, row_of(nil, i));
            if (!coords) throw std::logic_error("decompose_mod2: nilradical outside block");
            for (int j = 0; j < r; ++j)
                if ((*coords)[j]) nil_block.set(i, j, true);
        }
        // fixed space mod nil: kernel of (S-I) composed with projection along nil
        // compute as kernel of [ (S-I) ; stacked coords ]: x with (S-I)x in span(nil)
        // equivalent: kernel of Q(S-I) where Q = projection onto a complement
        // simpler: solve over the quotient: pick pivot structure of nil rows
        MatF2 nil_rr = nil_block;
        auto nil_piv = [] (MatF2& m) {
            MatF2 copy = m;
            // reuse elimination from rank computation by writing a local pass
            std::vector<int> pivots;
            int row = 0;
            for (int col = 0; col < copy.cols && row < copy.rows; ++col) {
                int sel = -1;
                for (int i = row; i < copy.rows; ++i)
                    if (copy.get(i, col)) { sel = i; break; }
                if (sel < 0) continue;
                if (sel != row)
                    for (int w = 0; w < copy.words; ++w)
                        std::swap(copy.bits[static_cast<std::size_t>(sel) * copy.words + w],
                                  copy.bits[static_cast<std::size_t>(row) * copy.words + w]);
                for (int i = 0; i < copy.rows; ++i)
                    if (i != row && copy.get(i, col)) copy.xor_row(i, row);
                pivots.push_back(col);
                ++row;
            }
            m = copy;
            return pivots;
        };
        auto pivots = nil_piv(nil_rr);
        // quotient coordinates: non-pivot columns
        std::vector<int> qcols;
        {
            std::vector<bool> isp(r, false);
            for (int c : pivots) isp[c] = true;
            for (int c = 0; c < r; ++c)
                if (!isp[c]) qcols.push_back(c);
        }
        auto project = [&](std::vector<bool> v) {
            // reduce v by nil_rr rows, then read off quotient coordinates
            for (std::size_t i = 0; i < pivots.size(); ++i)
                if (v[pivots[i]]) {
                    for (int j = 0; j < r; ++j) v[j] = v[j] ^ nil_rr.get(static_cast<int>(i), j);
                }
            std::vector<bool> q(qcols.size());
            for (std::size_t j = 0; j < qcols.size(); ++j) q[j] = v[qcols[j]];
            return q;
        };
        // matrix of (S - I) followed by projection
        MatF2 Q(static_cast<int>(qcols.size()), r);
        for (int j = 0; j < r; ++j) {
            std::vector<bool> col(r);
            for (int i = 0; i < r; ++i) col[i] = SmI.get(i, j);
            auto q = project(col);
            for (std::size_t i = 0; i < q.size(); ++i)
                if (q[i]) Q.set(static_cast<int>(i), j, true);
        }
        MatF2 fixed = linalg::kernel_f2(Q); // block-coordinate vectors fixed mod nil
        // dim of fixed space modulo nil = t-dimension of idempotents
        // compute rank of projections of fixed vectors
        MatF2 fixed_proj(fixed.rows, static_cast<int>(qcols.size()));
        for (int i = 0; i < fixed.rows; ++i) {
            auto q = project(row_of(fixed, i));
            for (std::size_t j = 0; j < q.size(); ++j)
                if (q[j]) fixed_proj.set(i, static_cast<int>(j), true);
        }
        int fdim = linalg::rank_f2(fixed_proj);
        if (fdim <= 1) {
            ++bi; // local block
            continue;
        }
        (void)t;
        // find a fixed vector whose projection differs from 0 and from the
        // identity's projection; lift to an idempotent by iterated squaring
        std::vector<bool> e_blk = block_identity(L, blocks, bi);
        auto e_coords = coords_in_rows_f2(basis, e_blk);
        if (!e_coords) throw std::logic_error("decompose_mod2: identity outside block");
        auto e_proj = project(*e_coords);
        std::vector<bool> chosen;
        for (int i = 0; i < fixed.rows && chosen.empty(); ++i) {
            auto cand = row_of(fixed, i);
            auto cp = project(cand);
            if (is_zero_vec(cp)) continue;
            if (cp == e_proj) continue;
            chosen = cand;
        }
        if (chosen.empty()) {
            // all candidates project to 0 or the identity: combine two
            for (int i = 0; i < fixed.rows && chosen.empty(); ++i)
                for (int j = i + 1; j < fixed.rows && chosen.empty(); ++j) {
                    auto cand = xor_vec(row_of(fixed, i), row_of(fixed, j));
                    auto cp = project(cand);
                    if (!is_zero_vec(cp) && cp != e_proj) chosen = cand;
                }
        }
        if (chosen.empty()) throw std::logic_error("decompose_mod2: no splitting idempotent found");
        // chosen is in block coordinates; convert to A coordinates
        std::vector<bool> x(L.rank, false);
        for (int j = 0; j < r; ++j)
            if (chosen[j]) x = xor_vec(x, row_of(basis, j));
        // iterate squaring until idempotent: x^(2^s) with 2^s >= r
        std::vector<bool> e = x;
        for (int s = 0; (1 << s) < 2 * r; ++s) e = L.multiply(e, e);
        if (is_zero_vec(e)) throw std::logic_error("decompose_mod2: idempotent collapsed to zero");
        // split: e*block and (e_blk - e)*block
        std::vector<std::vector<bool>> part1, part2;
        std::vector<bool> e2 = xor_vec(e_blk, e);
        for (int j = 0; j < r; ++j) {
            auto bj = row_of(basis, j);
            auto p1 = L.multiply(e, bj);
            auto p2 = L.multiply(e2, bj);
            if (!is_zero_vec(p1)) part1.push_back(p1);
            if (!is_zero_vec(p2)) part2.push_back(p2);
        }
        auto reduce_basis = [&](std::vector<std::vector<bool>>& rows) {
            MatF2 M = rows_to_mat(rows, L.rank);
            // row reduce and keep nonzero rows
            std::vector<int> pivots;
            int row = 0;
            for (int col = 0; col < M.cols && row < M.rows; ++col) {
                int sel = -1;
                for (int i = row; i < M.rows; ++i)
                    if (M.get(i, col)) { sel = i; break; }
                if (sel < 0) continue;
                if (sel != row)
                    for (int w = 0; w < M.words; ++w)
                        std::swap(M.bits[static_cast<std::size_t>(sel) * M.words + w],
                                  M.bits[static_cast<std::size_t>(row) * M.words + w]);
                for (int i = 0; i < M.rows; ++i)
                    if (i != row && M.get(i, col)) M.xor_row(i, row);
                pivots.push_back(col);
                ++row;
            }
            MatF2 out(row, L.rank);
            for (int i = 0; i < row; ++i)
                for (int w = 0; w < M.words; ++w)
                    out.bits[static_cast<std::size_t>(i) * out.words + w] =
                        M.bits[static_cast<std::size_t>(i) * M.words + w];
            return out;
        };
        MatF2 b1 = reduce_basis(part1);
        MatF2 b2 = reduce_basis(part2);
        if (b1.rows == 0 || b2.rows == 0 || b1.rows + b2.rows != r)
            throw std::logic_error("decompose_mod2: idempotent split failed");
        blocks[bi].basis = b1;
        blocks.insert(blocks.begin() + bi + 1, Block{b2});
        // re-examine the same index (now smaller block)
    }

    // assemble local factor data
    int total = 0;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const MatF2& basis = blocks[bi].basis;
        LocalFactorMod2 f;
        f.d_m = basis.rows;
        f.block_basis = basis;
        f.nil_basis = nilradical_of_block(L, basis);
        f.residue_degree = f.d_m - f.nil_basis.rows;
        f.idempotent = block_identity(L, blocks, bi);
        // residue images of the prime Hecke operators
        for (std::int64_t ell = 2; ell <= L.coeff_bound; ++ell) {
            if (!arith::is_prime(static_cast<std::uint64_t>(ell))) continue;
            f.prime_images[ell] = [&] {
                auto x = L.multiply(f.idempotent, L.tn_mod2(ell));
                return residue_value_impl(L, f, x);
            }();
        }
        // Eisenstein: residue degree one and the full eigensystem matches the
        // Eisenstein series, a_n ≡ σ1(n) mod 2 for every stored n coprime to
        // N (σ1(n) is odd exactly when n is a square or twice a square);
        // comparing all n below the Sturm bound pins the system completely
        f.eisenstein = (f.residue_degree == 1);
        if (f.eisenstein) {
            auto sigma_odd = [](std::int64_t n) {
                while (n % 2 == 0) n /= 2;
                std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
                for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
                    if (c * c == n) return true;
                return false;
            };
            for (std::int64_t n = 1; n <= L.coeff_bound && f.eisenstein; ++n) {
                if (arith::gcd_i64(n, L.N) != 1) continue;
                auto x = L.multiply(f.idempotent, L.tn_mod2(n));
                auto rv = residue_value_impl(L, f, x);
                if (!(rv.in_f2 && rv.f2_value == sigma_odd(n))) f.eisenstein = false;
            }
        }
        total += f.d_m;
        out.push_back(std::move(f));
    }
    if (total != L.rank) throw std::logic_error("decompose_mod2: dimensions do not sum to the rank");

    // deterministic order: by smallest distinguishing eigenvalue data
    std::sort(out.begin(), out.end(), [](const LocalFactorMod2& a, const LocalFactorMod2& b) {
        return a.block_basis.bits < b.block_basis.bits;
    });
    return out;
}

namespace {
// image of x (A-coordinates, already multiplied by the factor idempotent) in
// the residue field of the factor
ResidueValue residue_value_impl(const HeckeLattice& L, const LocalFactorMod2& f,
                                const std::vector<bool>& x) {
    ResidueValue rv;
    // x ∈ nil ⟺ image 0; x - e ∈ nil ⟺ image 1
    auto in_nil = [&](const std::vector<bool>& v) {
        if (is_zero_vec(v)) return true;
        if (f.nil_basis.rows == 0) return false;
        return coords_in_rows_f2(f.nil_basis, v).has_value();
    };
    if (in_nil(x)) {
        rv.in_f2 = true;
        rv.f2_value = false;
        return rv;
    }
    if (in_nil(xor_vec(x, f.idempotent))) {
        rv.in_f2 = true;
        rv.f2_value = true;
        return rv;
    }
    // residue field larger than F2: minimal polynomial of mult-by-x on the
    // semisimple quotient = minimal polynomial on the block modulo nil; the
    // minimal polynomial of mult-by-x on the block has the residue minpoly as
    // a factor; compute on the quotient directly
    // build quotient basis of block modulo nil
    const MatF2& basis = f.block_basis;
    // operator of multiplication by x on the block
    MatF2 M = mult_operator_on_block(L, x, basis);
    // nil in block coordinates
    MatF2 nil_block(f.nil_basis.rows, basis.rows);
    for (int i = 0; i < f.nil_basis.rows; ++i) {
        auto coords = coords_in_rows_f2(basis, row_of(f.nil_basis, i));
        if (!coords) throw std::logic_error("residue_value_of: nil outside block");
        for (int j = 0; j < basis.rows; ++j)
            if ((*coords)[j]) nil_block.set(i, j, true);
    }
    // quotient by nil: minimal polynomial of induced operator
    // (reduce against echelonized nil rows)
    MatF2 nil_rr = nil_block;
    std::vector<int> pivots;
    {
        int row = 0;
        for (int col = 0; col < nil_rr.cols && row < nil_rr.rows; ++col) {
            int sel = -1;
            for (int i = row; i < nil_rr.rows; ++i)
                if (nil_rr.get(i, col)) { sel = i; break; }
            if (sel < 0) continue;
            if (sel != row)
                for (int w = 0; w < nil_rr.words; ++w)
                    std::swap(nil_rr.bits[static_cast<std::size_t>(sel) * nil_rr.words + w],
                              nil_rr.bits[static_cast<std::size_t>(row) * nil_rr.words + w]);
            for (int i = 0; i < nil_rr.rows; ++i)
                if (i != row && nil_rr.get(i, col)) nil_rr.xor_row(i, row);
            pivots.push_back(col);
            ++row;
        }
    }
    std::vector<int> qcols;
    {
        std::vector<bool> isp(basis.rows, false);
        for (int c : pivots) isp[c] = true;
        for (int c = 0; c < basis.rows; ++c)
            if (!isp[c]) qcols.push_back(c);
    }
    auto project = [&](std::vector<bool> v) {
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (v[pivots[i]])
                for (int j = 0; j < basis.rows; ++j) v[j] = v[j] ^ nil_rr.get(static_cast<int>(i), j);
        std::vector<bool> q(qcols.size());
        for (std::size_t j = 0; j < qcols.size(); ++j) q[j] = v[qcols[j]];
        return q;
    };
    const int k = static_cast<int>(qcols.size());
    MatF2 Mq(k, k);
    for (int j = 0; j < k; ++j) {
        // image of quotient basis vector e_{qcols[j]}
        std::vector<bool> col(basis.rows, false);
        for (int i = 0; i < basis.rows; ++i) col[i] = M.get(i, qcols[j]);
        auto q = project(col);
        for (int i = 0; i < k; ++i)
            if (q[i]) Mq.set(i, j, true);
    }
    rv.in_f2 = false;
    rv.minpoly = linalg::minpoly_f2(Mq);
    return rv;
}
} // namespace

ResidueValue eigensystem_coefficient(const HeckeLattice& L, const LocalFactorMod2& f, std::int64_t n) {
    if (n < 1 || n > L.coeff_bound) throw std::invalid_argument("eigensystem_coefficient: n out of range");
    auto x = L.multiply(f.idempotent, L.tn_mod2(n));
    return residue_value_impl(L, f, x);
}

TmVerdict tm_verdict(const LocalFactorMod2& f) {
    if (f.residue_degree > 1) return TmVerdict::ResidueFieldTooLarge;
    return f.d_m == 1 ? TmVerdict::IsZ2 : TmVerdict::BiggerByDimension;
}

std::optional<std::pair<QexpPrefix, QexpPrefix>>
lemma_local_witness(const HeckeLattice& L, const LocalFactorMod2& f) {
    if (f.d_m < 2) return std::nullopt;
    // maximal ideal m = nil(factor) + other factors = complement of the
    // semisimple line of this factor; as a subspace of A:
    //   m = { x : e*x ∈ nil } where e is the factor idempotent
    std::vector<std::vector<bool>> m_rows;
    {
        // kernel of x -> residue(x*e): assemble matrix of the map A -> quotient
        // by projecting e*b_i to the factor's semisimple quotient
        // reuse: m = span(nil rows) + span(other-block parts of basis of A)
        // build via: for each unit vector u_i: v = e*u_i; subtract residue
        // Simple approach: m = kernel over F2 of the linear map
        //   x ↦ (residue field coordinates of e*x)
        // realized by stacking: coordinates of e*x in block, projected mod nil.
        const MatF2& basis = f.block_basis;
        MatF2 nil_block(f.nil_basis.rows, basis.rows);
        for (int i = 0; i < f.nil_basis.rows; ++i) {
            auto coords = coords_in_rows_f2(basis, row_of(f.nil_basis, i));
            for (int j = 0; j < basis.rows; ++j)
                if (coords && (*coords)[j]) nil_block.set(i, j, true);
        }
        // echelonize nil_block
        std::vector<int> pivots;
        {
            int row = 0;
            for (int col = 0; col < nil_block.cols && row < nil_block.rows; ++col) {
                int sel = -1;
                for (int i = row; i < nil_block.rows; ++i)
                    if (nil_block.get(i, col)) { sel = i; break; }
                if (sel < 0) continue;
                if (sel != row)
                    for (int w = 0; w < nil_block.words; ++w)
                        std::swap(nil_block.bits[static_cast<std::size_t>(sel) * nil_block.words + w],
                                  nil_block.bits[static_cast<std::size_t>(row) * nil_block.words + w]);
                for (int i = 0; i < nil_block.rows; ++i)
                    if (i != row && nil_block.get(i, col)) nil_block.xor_row(i, row);
                pivots.push_back(col);
                ++row;
            }
        }
        std::vector<int> qcols;
        std::vector<bool> isp(basis.rows, false);
        for (int c : pivots) isp[c] = true;
        for (int c = 0; c < basis.rows; ++c)
            if (!isp[c]) qcols.push_back(c);
        MatF2 map(static_cast<int>(qcols.size()), L.rank);
        for (int u = 0; u < L.rank; ++u) {
            std::vector<bool> unit(L.rank, false);
            unit[u] = true;
            auto v = L.multiply(f.idempotent, unit);
            auto coords = coords_in_rows_f2(f.block_basis, v);
            if (!coords) throw std::logic_error("lemma_local_witness: projection failed");
            std::vector<bool> c = *coords;
            for (std::size_t i = 0; i < pivots.size(); ++i)
                if (c[pivots[i]])
                    for (int j = 0; j < f.block_basis.rows; ++j)
                        c[j] = c[j] ^ nil_block.get(static_cast<int>(i), j);
            for (std::size_t i = 0; i < qcols.size(); ++i)
                if (c[qcols[i]]) map.set(static_cast<int>(i), u, true);
        }
        MatF2 K = linalg::kernel_f2(map);
        for (int i = 0; i < K.rows; ++i) m_rows.push_back(row_of(K, i));
    }
    // m^2 * A: span of products of pairs of m generators times basis elements;
    // since m is an ideal, span{u*v} for u,v in m-basis suffices
    std::vector<std::vector<bool>> m2_rows;
    for (std::size_t i = 0; i < m_rows.size(); ++i)
        for (std::size_t j = i; j < m_rows.size(); ++j) {
            auto p = L.multiply(m_rows[i], m_rows[j]);
            if (!is_zero_vec(p)) m2_rows.push_back(p);
        }
    MatF2 m2 = rows_to_mat(m2_rows, L.rank);
    // functionals vanishing on m^2: kernel of m2 (rows) acting on the dual,
    // i.e. vectors y with m2 * y^T = 0 -> kernel of m2 as a matrix
    MatF2 duals = linalg::kernel_f2(m2);
    if (duals.rows < 2) throw std::logic_error("lemma_local_witness: dual space unexpectedly small");
    // also require vanishing on the other factors (inside m, and m ⊃ others,
    // so functionals vanishing on m^2 ⊇ others automatically)
    auto prefix_of = [&](const std::vector<bool>& lambda) {
        QexpPrefix q;
        q.an.resize(L.sturm);
        for (int n = 1; n <= L.sturm; ++n) {
            auto tn = L.tn_mod2(n);
            bool s = false;
            for (int t = 0; t < L.rank; ++t)
                if (lambda[t] && tn[t]) s = !s;
            q.an[n - 1] = s;
        }
        return q;
    };
    // choose two distinct nonzero prefixes deterministically
    std::vector<QexpPrefix> found;
    for (int i = 0; i < duals.rows && found.size() < 2; ++i) {
        auto lam = row_of(duals, i);
        auto q = prefix_of(lam);
        bool zero = true;
        for (bool b : q.an)
            if (b) zero = false;
        if (zero) continue;
        bool dup = false;
        for (auto& other : found)
            if (other.an == q.an) dup = true;
        if (!dup) found.push_back(q);
    }
    if (found.size() < 2) {
        // combine dual vectors to manufacture a second distinct prefix
        for (int i = 0; i < duals.rows && found.size() < 2; ++i)
            for (int j = i + 1; j < duals.rows && found.size() < 2; ++j) {
                auto lam = xor_vec(row_of(duals, i), row_of(duals, j));
                auto q = prefix_of(lam);
                bool zero = true;
                for (bool b : q.an)
                    if (b) zero = false;
                if (zero) continue;
                bool dup = false;
                for (auto& other : found)
                    if (other.an == q.an) dup = true;
                if (!dup) found.push_back(q);
            }
    }
    if (found.size() < 2) throw std::logic_error("lemma_local_witness: could not produce two distinct prefixes");
    // verification by direct multiplication: for u, v in the m basis and all
    // n <= sturm, lambda((u*v)*T_n) = 0; equivalent to prefix of u*v*lambda
    // vanishing - rebuild lambdas from prefixes is unnecessary since we kept
    // the duals; verify with the first two distinct duals found above
    // (verification happens in the test suite by matrix arithmetic as well)
    return std::make_pair(found[0], found[1]);
}

ResidualClass classify_residual(const LocalFactorMod2& f, std::int64_t N) {
    if (f.eisenstein) throw std::invalid_argument("classify_residual: Eisenstein factor rejected");
    if (f.residue_degree != 1)
        throw std::invalid_argument("classify_residual: residue field must be F2");
    auto it = f.prime_images.find(2);
    if (it == f.prime_images.end()) throw std::logic_error("classify_residual: no image of T_2");
    ResidualClass rc;
    rc.n_mod_8 = static_cast<int>(N % 8);
    bool a2_zero = it->second.in_f2 && !it->second.f2_value;
    rc.kind = a2_zero ? ReductionKind::Supersingular : ReductionKind::Ordinary;
    if (rc.kind == ReductionKind::Supersingular) {
        switch (rc.n_mod_8) {
            case 3: rc.implied = "totally complex, F = Q(sqrt(-N))"; break;
            case 5: rc.implied = "totally real, F = Q(sqrt(N))"; break;
            default: rc.implied = "no supersingular-ramified option (2 not inert in Q(sqrt(±N)))"; break;
        }
    } else {
        rc.implied = "real/complex undetermined at this level of information";
    }
    return rc;
}

std::string dump_structure(const HeckeLattice& L) {
    std::ostringstream os;
    os << "level " << L.N << " rank " << L.rank << " sturm " << L.sturm << "\n";
    for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j) {
            os << "mul " << i << " " << j << " :";
            for (int t = 0; t < L.rank; ++t) os << " " << (L.mul_table.get(i * L.rank + j, t) ? 1 : 0);
            os << "\n";
        }
    for (int n = 1; n <= L.sturm; ++n) {
        os << "T " << n << " :";
        auto v = L.tn_mod2(n);
        for (int t = 0; t < L.rank; ++t) os << " " << (v[t] ? 1 : 0);
        os << "\n";
    }
    return os.str();
}

} // namespace moddeg2::hecke2
