#include "moddeg2/linalg.hpp"
#include "moddeg2/arith.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace moddeg2::linalg {

// ---------------------------------------------------------------- Mat64

Mat64 Mat64::identity(int n) {
    Mat64 I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

namespace {
std::int64_t narrow_128(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("Mat64: 64-bit overflow");
    return static_cast<std::int64_t>(v);
}
} // namespace

Mat64 mul(const Mat64& A, const Mat64& B) {
    if (A.cols != B.rows) throw std::invalid_argument("Mat64 mul: shape mismatch");
    // guard the 128-bit accumulators
    unsigned __int128 maxa = 0, maxb = 0;
    for (auto v : A.a) {
        unsigned __int128 m = v < 0 ? -static_cast<unsigned __int128>(v) : v;
        if (m > maxa) maxa = m;
    }
    for (auto v : B.a) {
        unsigned __int128 m = v < 0 ? -static_cast<unsigned __int128>(v) : v;
        if (m > maxb) maxb = m;
    }
    if (maxa != 0 && maxb != 0) {
        unsigned __int128 cap = (~static_cast<unsigned __int128>(0)) >> 2;
        if (maxa > cap / maxb / (A.cols ? A.cols : 1))
            throw std::overflow_error("Mat64 mul: accumulator may overflow");
    }
    Mat64 C(A.rows, B.cols);
    std::vector<__int128> acc(B.cols);
    for (int i = 0; i < A.rows; ++i) {
        std::fill(acc.begin(), acc.end(), static_cast<__int128>(0));
        for (int k = 0; k < A.cols; ++k) {
            std::int64_t aik = A.at(i, k);
            if (aik == 0) continue;
            const std::int64_t* brow = &B.a[static_cast<std::size_t>(k) * B.cols];
            for (int j = 0; j < B.cols; ++j) acc[j] += static_cast<__int128>(aik) * brow[j];
        }
        for (int j = 0; j < B.cols; ++j) C.at(i, j) = narrow_128(acc[j]);
    }
    return C;
}

Mat64 add(const Mat64& A, const Mat64& B) {
    Mat64 C(A.rows, A.cols);
    for (std::size_t i = 0; i < A.a.size(); ++i)
        C.a[i] = narrow_128(static_cast<__int128>(A.a[i]) + B.a[i]);
    return C;
}

Mat64 sub(const Mat64& A, const Mat64& B) {
    Mat64 C(A.rows, A.cols);
    for (std::size_t i = 0; i < A.a.size(); ++i)
        C.a[i] = narrow_128(static_cast<__int128>(A.a[i]) - B.a[i]);
    return C;
}

Mat64 scale(const Mat64& A, std::int64_t c) {
    Mat64 C(A.rows, A.cols);
    for (std::size_t i = 0; i < A.a.size(); ++i)
        C.a[i] = narrow_128(static_cast<__int128>(A.a[i]) * c);
    return C;
}

std::vector<std::int64_t> mulvec(const Mat64& A, const std::vector<std::int64_t>& v) {
    std::vector<std::int64_t> out(A.rows, 0);
    for (int i = 0; i < A.rows; ++i) {
        __int128 s = 0;
        for (int j = 0; j < A.cols; ++j) s += static_cast<__int128>(A.at(i, j)) * v[j];
        out[i] = narrow_128(s);
    }
    return out;
}

bool commute(const Mat64& A, const Mat64& B) { return mul(A, B) == mul(B, A); }

MatZ to_matz(const Mat64& A) {
    MatZ B(A.rows, A.cols);
    for (std::size_t i = 0; i < A.a.size(); ++i) B.a[i] = A.a[i];
    return B;
}

std::optional<Mat64> to_mat64(const MatZ& A) {
    Mat64 B(A.rows, A.cols);
    for (std::size_t i = 0; i < A.a.size(); ++i) {
        if (A.a[i] > std::numeric_limits<std::int64_t>::max() ||
            A.a[i] < std::numeric_limits<std::int64_t>::min())
            return std::nullopt;
        B.a[i] = static_cast<std::int64_t>(A.a[i]);
    }
    return B;
}

MatZ mul(const MatZ& A, const MatZ& B) {
    if (A.cols != B.rows) throw std::invalid_argument("MatZ mul: shape mismatch");
    MatZ C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const Int& aik = A.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
        }
    return C;
}

MatZ transpose(const MatZ& A) {
    MatZ B(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) B.at(j, i) = A.at(i, j);
    return B;
}

// ---------------------------------------------------------------- mod p

MatP reduce_modp(const MatZ& A, std::uint32_t p) {
    MatP B(p, A.rows, A.cols);
    const Int P(p);
    for (std::size_t i = 0; i < A.a.size(); ++i) {
        Int r = A.a[i] % P;
        if (r < 0) r += P;
        B.a[i] = static_cast<std::uint32_t>(r);
    }
    return B;
}

namespace {
std::uint32_t inv_modp(std::uint32_t a, std::uint32_t p) {
    std::int64_t t = 0, newt = 1, r = p, newr = a;
    while (newr != 0) {
        std::int64_t q = r / newr;
        std::int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (t < 0) t += p;
    return static_cast<std::uint32_t>(t);
}
} // namespace

std::vector<int> rref_modp(MatP& A) {
    const std::uint64_t p = A.p;
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < A.cols && row < A.rows; ++col) {
        int sel = -1;
        for (int i = row; i < A.rows; ++i)
            if (A.at(i, col) != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != row)
            for (int j = 0; j < A.cols; ++j) std::swap(A.at(sel, j), A.at(row, j));
        std::uint64_t inv = inv_modp(A.at(row, col), A.p);
        for (int j = col; j < A.cols; ++j)
            A.at(row, j) = static_cast<std::uint32_t>(A.at(row, j) * inv % p);
        for (int i = 0; i < A.rows; ++i) {
            if (i == row) continue;
            std::uint64_t f = A.at(i, col);
            if (f == 0) continue;
            std::uint64_t neg = p - f;
            for (int j = col; j < A.cols; ++j)
                A.at(i, j) = static_cast<std::uint32_t>((A.at(i, j) + neg * A.at(row, j)) % p);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

// ---------------------------------------------------------------- CRT etc

namespace {

const std::vector<std::uint32_t>& modular_primes() {
    static const std::vector<std::uint32_t> ps = [] {
        std::vector<std::uint32_t> v;
        for (std::uint64_t n = (1ull << 31) - 1; v.size() < 600; --n)
            if (arith::is_prime(n)) v.push_back(static_cast<std::uint32_t>(n));
        return v;
    }();
    return ps;
}

// n/d = u mod m with |n|, d <= sqrt(m/2); nullopt if no such fraction.
std::optional<Rat> rational_reconstruct(const Int& u, const Int& m) {
    Int half = m / 2;
    Int bound = boost::multiprecision::sqrt(half);
    Int r0 = m, r1 = u % m;
    if (r1 < 0) r1 += m;
    Int t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        Int t2 = t0 - q * t1;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0) return std::nullopt;
    Int n = r1, d = t1;
    if (d < 0) {
        d = -d;
        n = -n;
    }
    if (d > bound) return std::nullopt;
    Int g = boost::multiprecision::gcd(boost::multiprecision::abs(n), d);
    if (g > 1) return std::nullopt;
    return Rat(n, d);
}

} // namespace

// ---------------------------------------------------------------- HNF

namespace {
void ext_gcd(const Int& a, const Int& b, Int& g, Int& s, Int& t) {
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
}

int leading_col(const std::vector<Int>& v) {
    for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0) return static_cast<int>(j);
    return -1;
}
} // namespace

bool HnfBasis::insert(std::vector<Int> v) {
    if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("HnfBasis: wrong dimension");
    bool changed = false;
    for (;;) {
        int c = leading_col(v);
        if (c < 0) return changed;
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), c);
        std::size_t idx = static_cast<std::size_t>(it - pivots_.begin());
        if (it == pivots_.end() || *it != c) {
            // new pivot
            if (v[c] < 0)
                for (auto& x : v) x = -x;
            rows_.insert(rows_.begin() + idx, std::move(v));
            pivots_.insert(it, c);
            reduce_above(idx);
            // rows after idx may now be reducible by the new pivot; renormalize
            for (std::size_t k = 0; k < rows_.size(); ++k) reduce_above(k);
            return true;
        }
        Int& h = rows_[idx][c];
        if (v[c] % h == 0) {
            Int q = v[c] / h;
            for (int j = 0; j < dim_; ++j) v[j] -= q * rows_[idx][j];
        } else {
            Int g, s, t;
            ext_gcd(h, v[c], g, s, t);
            if (g < 0) {
                g = -g;
                s = -s;
                t = -t;
            }
            std::vector<Int> newrow(dim_);
            Int qh = h / g, qv = v[c] / g;
            for (int j = 0; j < dim_; ++j) {
                newrow[j] = s * rows_[idx][j] + t * v[j];
                Int vj = qh * v[j] - qv * rows_[idx][j];
                v[j] = vj;
            }
            rows_[idx] = std::move(newrow);
            for (std::size_t k = 0; k < rows_.size(); ++k) reduce_above(k);
            changed = true;
        }
    }
}

void HnfBasis::reduce_above(std::size_t row_index) {
    // reduce entries of all other rows at this row's pivot column into [0,h)
    int c = pivots_[row_index];
    const Int& h = rows_[row_index][c];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (i == row_index) continue;
        Int q = rows_[i][c] / h;
        if (rows_[i][c] - q * h < 0) q -= 1; // floor division
        if (q != 0)
            for (int j = 0; j < dim_; ++j) rows_[i][j] -= q * rows_[row_index][j];
    }
}

std::optional<std::vector<Int>> HnfBasis::coordinates(const std::vector<Int>& v) const {
    std::vector<Int> w = v;
    std::vector<Int> coords(rows_.size(), Int(0));
    for (;;) {
        int c = leading_col(w);
        if (c < 0) return coords;
        auto it = std::lower_bound(pivots_.begin(), pivots_.end(), c);
        if (it == pivots_.end() || *it != c) return std::nullopt;
        std::size_t idx = static_cast<std::size_t>(it - pivots_.begin());
        const Int& h = rows_[idx][c];
        if (w[c] % h != 0) return std::nullopt;
        Int q = w[c] / h;
        for (int j = 0; j < dim_; ++j) w[j] -= q * rows_[idx][j];
        coords[idx] += q;
    }
}

Int HnfBasis::pivot_product() const {
    Int p = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) p *= rows_[i][pivots_[i]];
    return p;
}

HnfBasis hnf_of_rows(const std::vector<std::vector<Int>>& rows, int dim) {
    HnfBasis h(dim);
    for (const auto& r : rows) h.insert(r);
    return h;
}

HnfBasis saturate(const std::vector<std::vector<Int>>& rows, int dim) {
    // saturation as a double kernel: the saturation of a row space S equals
    // the integer kernel of any integer matrix whose rows span the rational
    // orthogonal complement of S
    MatZ B(static_cast<int>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < dim; ++j) B.at(static_cast<int>(i), j) = rows[i][j];
    MatZ N = kernel_saturated(B);
    MatZ sat = kernel_saturated(N);
    HnfBasis h(dim);
    for (int i = 0; i < sat.rows; ++i) {
        std::vector<Int> row(dim);
        for (int j = 0; j < dim; ++j) row[j] = sat.at(i, j);
        h.insert(row);
    }
    return h;
}


namespace {

// Basis of {c in Z^k : A c ≡ 0 (mod D)}; congruences are imposed one at a
// time through a gcd chain, no factoring of D required.
std::vector<std::vector<Int>> congruence_lattice(const std::vector<std::vector<Int>>& A, const Int& D,
                                                 int k) {
    std::vector<std::vector<Int>> G(k, std::vector<Int>(k, Int(0)));
    for (int i = 0; i < k; ++i) G[i][i] = 1;
    if (D <= 1) return G;
    for (const auto& row : A) {
        std::vector<Int> v(G.size());
        for (std::size_t i = 0; i < G.size(); ++i) {
            Int s = 0;
            for (int j = 0; j < k; ++j)
                if (row[j] != 0 && G[i][j] != 0) s += row[j] * G[i][j];
            v[i] = s % D;
            if (v[i] < 0) v[i] += D;
        }
        std::vector<std::vector<Int>> H = G;
        int lead = -1;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) {
                lead = static_cast<int>(i);
                break;
            }
        if (lead < 0) continue;
        std::swap(H[0], H[lead]);
        std::swap(v[0], v[lead]);
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            Int g, s, t;
            ext_gcd(v[0], v[i], g, s, t);
            if (g < 0) {
                g = -g;
                s = -s;
                t = -t;
            }
            Int q0 = v[0] / g, qi = v[i] / g;
            std::vector<Int> h0(k), hi(k);
            for (int j = 0; j < k; ++j) {
                h0[j] = s * H[0][j] + t * H[i][j];
                hi[j] = qi * H[0][j] - q0 * H[i][j];
            }
            H[0] = std::move(h0);
            H[i] = std::move(hi);
            v[0] = g;
            v[i] = 0;
        }
        Int g0 = boost::multiprecision::gcd(v[0], D);
        Int scale = D / g0;
        for (int j = 0; j < k; ++j) H[0][j] *= scale;
        G = std::move(H);
    }
    return G;
}

} // namespace

// ---------------------------------------------------------------- kernels

MatZ kernel_saturated(const MatZ& A) {
    const int d = A.cols;
    if (d == 0) return MatZ(0, 0);
    bool all_zero = true;
    for (const auto& x : A.a)
        if (x != 0) {
            all_zero = false;
            break;
        }
    if (A.rows == 0 || all_zero) {
        MatZ I(d, d);
        for (int i = 0; i < d; ++i) I.at(i, i) = 1;
        return I;
    }

    const auto& primes = modular_primes();
    std::size_t prime_idx = 0;
    std::vector<int> pivots;
    int best_rank = -1;
    // CRT state for RREF entries at (pivot_row i, free col f)
    std::vector<std::vector<Int>> crt; // r x free entries
    Int modulus = 1;
    std::vector<int> free_cols;

    auto reset_state = [&](const std::vector<int>& piv) {
        pivots = piv;
        best_rank = static_cast<int>(piv.size());
        free_cols.clear();
        std::vector<bool> isp(d, false);
        for (int c : piv) isp[c] = true;
        for (int j = 0; j < d; ++j)
            if (!isp[j]) free_cols.push_back(j);
        crt.assign(pivots.size(), std::vector<Int>(free_cols.size(), Int(0)));
        modulus = 1;
    };

    int mismatch_streak = 0;
    while (prime_idx < primes.size()) {
        std::uint32_t p = primes[prime_idx++];
        MatP M = reduce_modp(A, p);
        auto piv = rref_modp(M);
        int r = static_cast<int>(piv.size());
        if (r > best_rank) {
            reset_state(piv);
            mismatch_streak = 0;
        } else if (r < best_rank) {
            continue; // rank-deficient prime
        } else if (piv != pivots) {
            // equal rank but different pivot columns: the reference prime may
            // have been unlucky; switch allegiance after repeated disagreement
            if (++mismatch_streak >= 3) {
                reset_state(piv);
                mismatch_streak = 0;
            }
            continue;
        } else {
            mismatch_streak = 0;
        }
        // accumulate CRT
        Int mp(p);
        Int inv_mod_p;
        {
            // inverse of modulus mod p
            Int mm = modulus % mp;
            if (mm < 0) mm += mp;
            std::uint32_t mval = static_cast<std::uint32_t>(mm);
            inv_mod_p = (modulus == 1) ? 1 : Int(inv_modp(mval == 0 ? 1 : mval, p));
            if (mval == 0) continue; // degenerate, skip
        }
        for (std::size_t i = 0; i < pivots.size(); ++i)
            for (std::size_t fj = 0; fj < free_cols.size(); ++fj) {
                std::uint32_t rp = M.at(static_cast<int>(i), free_cols[fj]);
                Int& v = crt[i][fj];
                Int diff = (Int(rp) - v) % mp;
                if (diff < 0) diff += mp;
                v += modulus * ((diff * inv_mod_p) % mp);
            }
        modulus *= mp;

        // attempt rational reconstruction of every entry
        bool ok = true;
        std::vector<std::vector<Rat>> rat(pivots.size(), std::vector<Rat>(free_cols.size()));
        for (std::size_t i = 0; i < pivots.size() && ok; ++i)
            for (std::size_t fj = 0; fj < free_cols.size() && ok; ++fj) {
                auto rr = rational_reconstruct(crt[i][fj], modulus);
                if (!rr)
                    ok = false;
                else
                    rat[i][fj] = *rr;
            }
        if (!ok) continue;

        // build and verify the rational RREF kernel vectors, then the exact
        // integer kernel: a kernel vector is determined by its free
        // coordinates c, with pivot coordinates -R c; it is integral iff
        // (D R) c ≡ 0 mod D for the common denominator D.
        const std::size_t nf = free_cols.size(), np = pivots.size();
        Int D = 1;
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t fj = 0; fj < nf; ++fj)
                D = boost::multiprecision::lcm(D, boost::multiprecision::denominator(rat[i][fj]));
        // verify the rational kernel exactly: A * v(e_f) = 0 for unit free
        // coordinates (scaled by D)
        bool ok2 = true;
        std::vector<std::vector<Int>> scaledR(np, std::vector<Int>(nf)); // D * R
        for (std::size_t i = 0; i < np && ok2; ++i)
            for (std::size_t fj = 0; fj < nf; ++fj) {
                Rat e = rat[i][fj];
                scaledR[i][fj] =
                    boost::multiprecision::numerator(e) * (D / boost::multiprecision::denominator(e));
            }
        for (std::size_t fj = 0; fj < nf && ok2; ++fj) {
            std::vector<Int> v(d, Int(0));
            v[free_cols[fj]] = D;
            for (std::size_t i = 0; i < np; ++i) v[pivots[i]] = -scaledR[i][fj];
            for (int i = 0; i < A.rows && ok2; ++i) {
                Int s = 0;
                for (int j = 0; j < d; ++j)
                    if (A.at(i, j) != 0 && v[j] != 0) s += A.at(i, j) * v[j];
                if (s != 0) ok2 = false;
            }
        }
        if (!ok2) continue;

        auto clat = congruence_lattice(scaledR, D, static_cast<int>(nf));
        HnfBasis out(d);
        for (const auto& c : clat) {
            std::vector<Int> v(d, Int(0));
            for (std::size_t fj = 0; fj < nf; ++fj) v[free_cols[fj]] = c[fj];
            for (std::size_t i = 0; i < np; ++i) {
                Int s = 0;
                for (std::size_t fj = 0; fj < nf; ++fj)
                    if (scaledR[i][fj] != 0 && c[fj] != 0) s += scaledR[i][fj] * c[fj];
                if (s % D != 0) throw std::logic_error("kernel_saturated: congruence lattice failure");
                v[pivots[i]] = -s / D;
            }
            out.insert(v);
        }
        MatZ K(out.rank(), d);
        for (int i = 0; i < out.rank(); ++i)
            for (int j = 0; j < d; ++j) K.at(i, j) = out.rows()[i][j];
        return K;
    }
    throw std::runtime_error("kernel_saturated: modulus exhausted");
}

MatZ kernel_saturated(const Mat64& A) { return kernel_saturated(to_matz(A)); }

// ---------------------------------------------------------------- F2

void MatF2::xor_row(int dst, int src) {
    for (int w = 0; w < words; ++w)
        bits[static_cast<std::size_t>(dst) * words + w] ^= bits[static_cast<std::size_t>(src) * words + w];
}

MatF2 MatF2::identity(int n) {
    MatF2 I(n, n);
    for (int i = 0; i < n; ++i) I.set(i, i, true);
    return I;
}

bool MatF2::row_zero(int i) const {
    for (int w = 0; w < words; ++w)
        if (bits[static_cast<std::size_t>(i) * words + w]) return false;
    return true;
}

MatF2 mul_f2(const MatF2& A, const MatF2& B) {
    if (A.cols != B.rows) throw std::invalid_argument("MatF2 mul: shape mismatch");
    MatF2 C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k)
            if (A.get(i, k))
                for (int w = 0; w < B.words; ++w)
                    C.bits[static_cast<std::size_t>(i) * C.words + w] ^=
                        B.bits[static_cast<std::size_t>(k) * B.words + w];
    return C;
}

namespace {
// Gaussian elimination; returns pivot columns, optionally records operations
// applied to a companion matrix.
std::vector<int> eliminate_f2(MatF2& A, MatF2* companion) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < A.cols && row < A.rows; ++col) {
        int sel = -1;
        for (int i = row; i < A.rows; ++i)
            if (A.get(i, col)) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != row) {
            for (int w = 0; w < A.words; ++w)
                std::swap(A.bits[static_cast<std::size_t>(sel) * A.words + w],
                          A.bits[static_cast<std::size_t>(row) * A.words + w]);
            if (companion)
                for (int w = 0; w < companion->words; ++w)
                    std::swap(companion->bits[static_cast<std::size_t>(sel) * companion->words + w],
                              companion->bits[static_cast<std::size_t>(row) * companion->words + w]);
        }
        for (int i = 0; i < A.rows; ++i)
            if (i != row && A.get(i, col)) {
                A.xor_row(i, row);
                if (companion) companion->xor_row(i, row);
            }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}
} // namespace

int rank_f2(MatF2 A) { return static_cast<int>(eliminate_f2(A, nullptr).size()); }

std::vector<int> rref_f2(MatF2& A) { return eliminate_f2(A, nullptr); }

MatF2 echelon_f2(const MatF2& A) {
    MatF2 M = A;
    auto pivots = eliminate_f2(M, nullptr);
    MatF2 out(static_cast<int>(pivots.size()), A.cols);
    for (int i = 0; i < out.rows; ++i)
        for (int w = 0; w < out.words; ++w)
            out.bits[static_cast<std::size_t>(i) * out.words + w] =
                M.bits[static_cast<std::size_t>(i) * M.words + w];
    return out;
}

MatF2 kernel_f2(const MatF2& A) {
    MatF2 M = A;
    auto pivots = eliminate_f2(M, nullptr);
    std::vector<int> pivot_of_col(A.cols, -1);
    for (std::size_t i = 0; i < pivots.size(); ++i) pivot_of_col[pivots[i]] = static_cast<int>(i);
    int k = A.cols - static_cast<int>(pivots.size());
    MatF2 K(k, A.cols);
    int idx = 0;
    for (int f = 0; f < A.cols; ++f) {
        if (pivot_of_col[f] >= 0) continue;
        K.set(idx, f, true);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (M.get(static_cast<int>(i), f)) K.set(idx, pivots[i], true);
        ++idx;
    }
    return K;
}

std::optional<std::vector<bool>> solve_f2(MatF2 A, std::vector<bool> b) {
    // augment
    MatF2 M(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int w = 0; w < A.words; ++w) M.bits[static_cast<std::size_t>(i) * M.words + w] = A.bits[static_cast<std::size_t>(i) * A.words + w];
        // clear any overhang bits beyond A.cols, then set the augmented column
        M.set(i, A.cols, b[i]);
    }
    auto pivots = eliminate_f2(M, nullptr);
    std::vector<bool> x(A.cols, false);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == A.cols) return std::nullopt; // inconsistent
        x[pivots[i]] = M.get(static_cast<int>(i), A.cols);
    }
    return x;
}

// ---------------------------------------------------------------- PolyF2

int PolyF2::degree() const {
    for (int w = static_cast<int>(c.size()) - 1; w >= 0; --w)
        if (c[w]) return w * 64 + 63 - __builtin_clzll(c[w]);
    return -1;
}

void PolyF2::set(int k) {
    if (k / 64 >= static_cast<int>(c.size())) c.resize(k / 64 + 1, 0);
    c[k / 64] |= 1ull << (k % 64);
}

void PolyF2::trim() {
    while (c.size() > 1 && c.back() == 0) c.pop_back();
}

bool PolyF2::operator==(const PolyF2& o) const {
    PolyF2 a = *this, b = o;
    a.trim();
    b.trim();
    return a.c == b.c;
}

PolyF2 PolyF2::x_power(int k) {
    PolyF2 f;
    f.set(k);
    return f;
}

PolyF2 PolyF2::one() { return x_power(0); }

std::string PolyF2::to_string() const {
    int d = degree();
    if (d < 0) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = d; k >= 0; --k) {
        if (!get(k)) continue;
        if (!first) os << "+";
        if (k == 0)
            os << "1";
        else if (k == 1)
            os << "x";
        else
            os << "x^" << k;
        first = false;
    }
    return os.str();
}

PolyF2 add(const PolyF2& a, const PolyF2& b) {
    PolyF2 r;
    r.c.assign(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        std::uint64_t x = i < a.c.size() ? a.c[i] : 0;
        std::uint64_t y = i < b.c.size() ? b.c[i] : 0;
        r.c[i] = x ^ y;
    }
    r.trim();
    return r;
}

PolyF2 mul(const PolyF2& a, const PolyF2& b) {
    int da = a.degree(), db = b.degree();
    PolyF2 r;
    if (da < 0 || db < 0) return r;
    r.c.assign(static_cast<std::size_t>((da + db) / 64 + 2), 0);
    for (int i = 0; i <= da; ++i) {
        if (!a.get(i)) continue;
        for (std::size_t w = 0; w < b.c.size(); ++w) {
            std::uint64_t bw = b.c[w];
            if (!bw) continue;
            int base = i + static_cast<int>(w) * 64;
            r.c[base / 64] ^= bw << (base % 64);
            if (base % 64)
                r.c[base / 64 + 1] ^= bw >> (64 - base % 64);
        }
    }
    r.trim();
    return r;
}

PolyF2 mod(const PolyF2& a, const PolyF2& m) {
    PolyF2 r = a;
    int dm = m.degree();
    if (dm < 0) throw std::invalid_argument("PolyF2 mod: zero modulus");
    for (;;) {
        int dr = r.degree();
        if (dr < dm) break;
        int shift = dr - dm;
        // r ^= m << shift
        for (std::size_t w = 0; w < m.c.size(); ++w) {
            std::uint64_t mw = m.c[w];
            if (!mw) continue;
            int base = shift + static_cast<int>(w) * 64;
            if (base / 64 >= static_cast<int>(r.c.size())) r.c.resize(base / 64 + 2, 0);
            r.c[base / 64] ^= mw << (base % 64);
            if (base % 64) {
                if (base / 64 + 1 >= static_cast<int>(r.c.size())) r.c.resize(base / 64 + 2, 0);
                r.c[base / 64 + 1] ^= mw >> (64 - base % 64);
            }
        }
    }
    r.trim();
    return r;
}

PolyF2 gcd(PolyF2 a, PolyF2 b) {
    while (!b.is_zero()) {
        PolyF2 r = mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

PolyF2 powmod(const PolyF2& a, Int e, const PolyF2& m) {
    PolyF2 r = PolyF2::one();
    PolyF2 base = mod(a, m);
    while (e > 0) {
        if (e % 2 == 1) r = mod(mul(r, base), m);
        base = mod(mul(base, base), m);
        e /= 2;
    }
    return r;
}

PolyF2 minpoly_f2(const MatF2& A) {
    if (A.rows != A.cols) throw std::invalid_argument("minpoly_f2: square matrix required");
    const int n = A.rows;
    PolyF2 m = PolyF2::one();
    // lcm of minimal polynomials of Krylov sequences of basis vectors
    for (int start = 0; start < n; ++start) {
        if (m.degree() == n) break;
        // Krylov matrix: rows v, Av, A^2 v, ...
        std::vector<std::vector<bool>> seq;
        std::vector<bool> v(n, false);
        v[start] = true;
        MatF2 krylov(n + 1, n);
        int count = 0;
        std::vector<bool> cur = v;
        for (int step = 0; step <= n; ++step) {
            for (int j = 0; j < n; ++j) krylov.set(step, j, cur[j]);
            ++count;
            // find dependence among rows 0..step
            MatF2 sub(step + 1, n);
            for (int i = 0; i <= step; ++i)
                for (int w = 0; w < sub.words; ++w)
                    sub.bits[static_cast<std::size_t>(i) * sub.words + w] =
                        krylov.bits[static_cast<std::size_t>(i) * krylov.words + w];
            if (rank_f2(sub) <= step) {
                // dependence exists: solve sub^T c = 0 restricted to first dependence
                MatF2 tr(n, step + 1);
                for (int i = 0; i <= step; ++i)
                    for (int j = 0; j < n; ++j)
                        if (krylov.get(i, j)) tr.set(j, i, true);
                MatF2 K = kernel_f2(tr);
                // pick kernel vector with highest coefficient at the last step
                for (int r = 0; r < K.rows; ++r) {
                    if (!K.get(r, step)) continue;
                    PolyF2 p;
                    for (int i = 0; i <= step; ++i)
                        if (K.get(r, i)) p.set(i);
                    // m = lcm(m, p)
                    PolyF2 g = gcd(m, p);
                    // lcm = m*p/g : polynomial division
                    PolyF2 prod = mul(m, p);
                    // divide prod by g exactly
                    PolyF2 q;
                    PolyF2 rem = prod;
                    int dg = g.degree();
                    while (rem.degree() >= dg && !rem.is_zero()) {
                        int sh = rem.degree() - dg;
                        q.set(sh);
                        PolyF2 shifted = mul(g, PolyF2::x_power(sh));
                        rem = add(rem, shifted);
                    }
                    m = q;
                    break;
                }
                break;
            }
            // advance cur = A * cur (word-packed dot products)
            std::vector<std::uint64_t> curw(A.words, 0);
            for (int j = 0; j < n; ++j)
                if (cur[j]) curw[j / 64] |= 1ull << (j % 64);
            std::vector<bool> nxt(n, false);
            for (int i = 0; i < n; ++i) {
                std::uint64_t parity = 0;
                const std::uint64_t* arow = &A.bits[static_cast<std::size_t>(i) * A.words];
                for (int w = 0; w < A.words; ++w) parity ^= arow[w] & curw[w];
                nxt[i] = __builtin_parityll(parity);
            }
            cur = nxt;
        }
        (void)count;
        (void)seq;
    }
    return m;
}

MatF2 apply_poly_f2(const PolyF2& f, const MatF2& A) {
    const int n = A.rows;
    MatF2 result(n, n);
    MatF2 power = MatF2::identity(n);
    int d = f.degree();
    for (int k = 0; k <= d; ++k) {
        if (f.get(k))
            for (std::size_t i = 0; i < result.bits.size(); ++i) result.bits[i] ^= power.bits[i];
        if (k < d) power = mul_f2(A, power);
    }
    return result;
}

std::vector<std::pair<PolyF2, int>> factor_poly_f2(const PolyF2& f) {
    std::vector<std::pair<PolyF2, int>> out;
    PolyF2 g = f;
    g.trim();
    if (g.degree() <= 0) return out;

    // peel off multiplicities via gcd with derivative; in char 2 the
    // derivative keeps odd-degree terms shifted down
    auto derivative = [](const PolyF2& p) {
        PolyF2 d;
        for (int k = 1; k <= p.degree(); k += 2)
            if (p.get(k)) d.set(k - 1);
        return d;
    };

    std::vector<std::pair<PolyF2, int>> stack{{g, 1}};
    std::vector<std::pair<PolyF2, int>> squarefree_parts;
    while (!stack.empty()) {
        auto [h, mult] = stack.back();
        stack.pop_back();
        if (h.degree() <= 0) continue;
        PolyF2 dh = derivative(h);
        if (dh.is_zero()) {
            // h = s(x^2) = s(x)^2: take square root by halving exponents
            PolyF2 s;
            for (int k = 0; k <= h.degree(); k += 2)
                if (h.get(k)) s.set(k / 2);
            stack.push_back({s, 2 * mult});
            continue;
        }
        PolyF2 gg = gcd(h, dh);
        if (gg.degree() <= 0) {
            squarefree_parts.push_back({h, mult});
            continue;
        }
        // split h = (h/gg) * gg
        // exact division h / gg
        PolyF2 q, rem = h;
        int dg = gg.degree();
        while (rem.degree() >= dg && !rem.is_zero()) {
            int sh = rem.degree() - dg;
            q.set(sh);
            rem = add(rem, mul(gg, PolyF2::x_power(sh)));
        }
        stack.push_back({q, mult});
        stack.push_back({gg, mult});
    }

    // distinct-degree + equal-degree factorization of the squarefree parts
    std::vector<std::pair<PolyF2, int>> raw;
    for (auto& [sf, mult] : squarefree_parts) {
        PolyF2 h = sf;
        PolyF2 xq = PolyF2::x_power(1);
        int d = 0;
        while (h.degree() > 0) {
            ++d;
            if (2 * d > h.degree()) {
                raw.push_back({h, mult}); // irreducible remainder
                break;
            }
            xq = mod(mul(xq, xq), h); // x^(2^d) mod h
            PolyF2 diff = add(xq, PolyF2::x_power(1));
            PolyF2 gd = gcd(h, diff);
            if (gd.degree() > 0) {
                // gd = product of irreducible factors of degree d
                std::vector<PolyF2> pieces{gd};
                std::vector<PolyF2> done;
                int counter = 1;
                while (!pieces.empty()) {
                    PolyF2 piece = pieces.back();
                    pieces.pop_back();
                    if (piece.degree() == d) {
                        done.push_back(piece);
                        continue;
                    }
                    // deterministic equal-degree splitting via trace maps
                    bool split_found = false;
                    while (!split_found) {
                        PolyF2 u;
                        int cc = counter++;
                        for (int b = 0; cc; ++b, cc >>= 1)
                            if (cc & 1) u.set(b);
                        // trace: u + u^2 + ... + u^(2^(d-1)) mod piece
                        PolyF2 t, up = mod(u, piece);
                        for (int i = 0; i < d; ++i) {
                            t = add(t, up);
                            up = mod(mul(up, up), piece);
                        }
                        PolyF2 s = gcd(piece, t);
                        if (s.degree() > 0 && s.degree() < piece.degree()) {
                            // piece = s * (piece/s)
                            PolyF2 q2, rem2 = piece;
                            int ds = s.degree();
                            while (rem2.degree() >= ds && !rem2.is_zero()) {
                                int sh = rem2.degree() - ds;
                                q2.set(sh);
                                rem2 = add(rem2, mul(s, PolyF2::x_power(sh)));
                            }
                            pieces.push_back(s);
                            pieces.push_back(q2);
                            split_found = true;
                        }
                    }
                }
                for (auto& piece : done) raw.push_back({piece, mult});
                // h /= gd
                PolyF2 q3, rem3 = h;
                int dgd = gd.degree();
                while (rem3.degree() >= dgd && !rem3.is_zero()) {
                    int sh = rem3.degree() - dgd;
                    q3.set(sh);
                    rem3 = add(rem3, mul(gd, PolyF2::x_power(sh)));
                }
                h = q3;
            }
            if (h.degree() == 0) break;
        }
    }
    // merge duplicates (a factor can appear from different squarefree parts)
    for (auto& [p, m] : raw) {
        bool found = false;
        for (auto& [q, mq] : out)
            if (q == p) {
                mq += m;
                found = true;
            }
        if (!found) out.push_back({p, m});
    }
    // deterministic order: by degree then coefficient words
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.degree() != y.first.degree()) return x.first.degree() < y.first.degree();
        return x.first.c < y.first.c;
    });
    return out;
}

} // namespace moddeg2::linalg
