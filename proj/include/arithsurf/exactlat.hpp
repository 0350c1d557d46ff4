#pragma once

// Exact linear algebra over Z, Q and prime fields.
//
// Hermite normal form convention (used everywhere a lattice is compared):
// lattice bases are stored as columns; the matrix is lower triangular in the
// echelon sense (pivot rows strictly increase from left to right), every
// pivot is positive, and the entries of a pivot row in the columns to the
// left of the pivot lie in [0, pivot).

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arithsurf/errors.hpp"
#include "arithsurf/integer.hpp"

namespace arithsurf {

class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
    IntegerMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_) throw InvalidInput("entry count does not match rows x cols");
    }
    IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        for (const auto& r : rows) {
            if (r.size() != cols_) throw InvalidInput("ragged matrix literal");
            for (long v : r) entries_.emplace_back(v);
        }
    }

    static IntegerMatrix identity(std::size_t n) {
        IntegerMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntegerMatrix diagonal(std::initializer_list<long> d) {
        IntegerMatrix m(d.size(), d.size());
        std::size_t i = 0;
        for (long v : d) {
            m(i, i) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<Integer>& entries() const noexcept { return entries_; }

    Integer& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    bool operator==(const IntegerMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }

    IntegerMatrix transposed() const {
        IntegerMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntegerMatrix column(std::size_t j) const {
        IntegerMatrix c(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
        return c;
    }

    IntegerMatrix columns(std::size_t first, std::size_t last) const {
        IntegerMatrix c(rows_, last - first);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = first; j < last; ++j) c(i, j - first) = (*this)(i, j);
        return c;
    }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (e != 0) return false;
        return true;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> entries_;
};

inline IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols() != b.rows()) throw InvalidInput("matrix product shape mismatch");
    IntegerMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Integer& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) mpz_addmul(c(i, j).get_mpz_t(), aik.get_mpz_t(), b(k, j).get_mpz_t());
        }
    return c;
}

// Side-by-side concatenation; all blocks must share the row count.
inline IntegerMatrix hstack(const std::vector<const IntegerMatrix*>& blocks, std::size_t rows) {
    std::size_t cols = 0;
    for (const auto* b : blocks) {
        if (b->rows() != rows && b->cols() != 0) throw InvalidInput("hstack row mismatch");
        cols += b->cols();
    }
    IntegerMatrix out(rows, cols);
    std::size_t offset = 0;
    for (const auto* b : blocks) {
        for (std::size_t i = 0; i < b->rows(); ++i)
            for (std::size_t j = 0; j < b->cols(); ++j) out(i, offset + j) = (*b)(i, j);
        offset += b->cols();
    }
    return out;
}

// Column basis of a sublattice of Z^ambient, always in Hermite normal form.
struct LatticeBasis {
    std::size_t ambient = 0;
    IntegerMatrix basis;  // ambient x rank

    std::size_t rank() const noexcept { return basis.cols(); }
    bool operator==(const LatticeBasis& o) const { return ambient == o.ambient && basis == o.basis; }
};

namespace detail {

inline void swap_columns(IntegerMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

inline void negate_column(IntegerMatrix& m, std::size_t a) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) = -m(i, a);
}

// col[target] -= q * col[source]
inline void column_submul(IntegerMatrix& m, std::size_t target, std::size_t source, const Integer& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i)
        mpz_submul(m(i, target).get_mpz_t(), q.get_mpz_t(), m(i, source).get_mpz_t());
}

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Column-style Hermite reduction of `m` in place; the same column operations
// are mirrored on `transform` when given. Returns the rank; the first `rank`
// columns of `m` then hold the HNF and the rest are zero.
inline std::size_t column_hermite(IntegerMatrix& m, IntegerMatrix* transform) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < m.rows() && k < m.cols(); ++i) {
        for (;;) {
            std::size_t best = m.cols();
            for (std::size_t j = k; j < m.cols(); ++j) {
                if (m(i, j) == 0) continue;
                if (best == m.cols() || cmpabs(m(i, j), m(i, best)) < 0) best = j;
            }
            if (best == m.cols()) break;
            swap_columns(m, k, best);
            if (transform) swap_columns(*transform, k, best);
            bool cleared = true;
            for (std::size_t j = k + 1; j < m.cols(); ++j) {
                if (m(i, j) == 0) continue;
                Integer q;
                mpz_tdiv_q(q.get_mpz_t(), m(i, j).get_mpz_t(), m(i, k).get_mpz_t());
                column_submul(m, j, k, q);
                if (transform) column_submul(*transform, j, k, q);
                if (m(i, j) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (k >= m.cols() || m(i, k) == 0) continue;
        if (m(i, k) < 0) {
            negate_column(m, k);
            if (transform) negate_column(*transform, k);
        }
        for (std::size_t j = 0; j < k; ++j) {
            Integer q = floor_div(m(i, j), m(i, k));
            column_submul(m, j, k, q);
            if (transform) column_submul(*transform, j, k, q);
        }
        ++k;
    }
    return k;
}

}  // namespace detail

// Canonical basis of the lattice spanned by the columns of `generators`.
inline LatticeBasis hermite_basis(IntegerMatrix generators) {
    const std::size_t rank = detail::column_hermite(generators, nullptr);
    return LatticeBasis{generators.rows(), generators.columns(0, rank)};
}

// Canonical basis of { v in Z^cols : M v = 0 }.
inline LatticeBasis kernel_lattice(const IntegerMatrix& m) {
    IntegerMatrix work = m;
    IntegerMatrix transform = IntegerMatrix::identity(m.cols());
    const std::size_t rank = detail::column_hermite(work, &transform);
    return hermite_basis(transform.columns(rank, m.cols()));
}

// Invariant factors d1 | d2 | ... of M (nonzero ones only), by the classical
// elementary-operations algorithm with a smallest-pivot heuristic.
inline std::vector<Integer> smith_invariants(const IntegerMatrix& input) {
    IntegerMatrix a = input;
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<Integer> diag;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        std::size_t pr = rows, pc = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a(i, j) != 0 && (pr == rows || cmpabs(a(i, j), a(pr, pc)) < 0)) {
                    pr = i;
                    pc = j;
                    if (a(i, j) == 1 || a(i, j) == -1) goto found;
                }
    found:
        if (pr == rows) break;
        if (pr != t)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(t, j), a(pr, j));
        detail::swap_columns(a, t, pc);
        bool done = false;
        while (!done) {
            done = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a(i, t) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
                for (std::size_t j = t; j < cols; ++j) mpz_submul(a(i, j).get_mpz_t(), q.get_mpz_t(), a(t, j).get_mpz_t());
                if (a(i, t) != 0) {
                    for (std::size_t j = 0; j < cols; ++j) std::swap(a(t, j), a(i, j));
                    done = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a(t, j) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
                detail::column_submul(a, j, t, q);
                if (a(t, j) != 0) {
                    detail::swap_columns(a, t, j);
                    done = false;
                }
            }
        }
        diag.push_back(abs_value(a(t, t)));
        ++t;
    }
    // Restore the divisibility chain: (x, y) -> (gcd, lcm) preserves the group.
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j) {
            Integer g = gcd(diag[i], diag[j]);
            if (g == diag[i]) continue;
            Integer l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    return diag;
}

// ---------------------------------------------------------------------------
// Fields

// Base ring tag shared by presentations and rank computations.
struct BaseRing {
    enum class Kind { Integers, Rationals, Prime };
    Kind kind = Kind::Integers;
    std::uint64_t p = 0;

    static BaseRing integers() { return {Kind::Integers, 0}; }
    static BaseRing rationals() { return {Kind::Rationals, 0}; }
    static BaseRing prime(const Integer& p) { return {Kind::Prime, require_word_prime(p)}; }

    bool is_prime() const noexcept { return kind == Kind::Prime; }
    bool operator==(const BaseRing&) const = default;

    std::string tag() const {
        switch (kind) {
            case Kind::Integers: return "Z";
            case Kind::Rationals: return "Q";
            case Kind::Prime: return "F" + std::to_string(p);
        }
        return "?";
    }
};

// Arithmetic in Z/pZ on machine words.
struct PrimeField {
    std::uint64_t p;

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
    }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1 % p;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }
    std::uint64_t reduce(const Integer& x) const { return residue(x, p); }
};

// Dense matrix over F_p, row-major.
struct ModMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint64_t> a;

    ModMatrix() = default;
    ModMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
    std::uint64_t& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::uint64_t operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline ModMatrix reduce_matrix(const IntegerMatrix& m, const PrimeField& f) {
    ModMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = f.reduce(m(i, j));
    return r;
}

// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(ModMatrix& m, const PrimeField& f) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t pr = r;
        while (pr < m.rows && m(pr, c) == 0) ++pr;
        if (pr == m.rows) continue;
        if (pr != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(r, j), m(pr, j));
        const std::uint64_t inv = f.inv(m(r, c));
        for (std::size_t j = c; j < m.cols; ++j) m(r, j) = f.mul(m(r, j), inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            const std::uint64_t factor = m(i, c);
            for (std::size_t j = c; j < m.cols; ++j)
                if (m(r, j) != 0) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank_mod(ModMatrix m, const PrimeField& f) {
    // forward elimination only
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t pr = r;
        while (pr < m.rows && m(pr, c) == 0) ++pr;
        if (pr == m.rows) continue;
        if (pr != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(r, j), m(pr, j));
        const std::uint64_t inv = f.inv(m(r, c));
        for (std::size_t i = r + 1; i < m.rows; ++i) {
            if (m(i, c) == 0) continue;
            const std::uint64_t factor = f.mul(m(i, c), inv);
            for (std::size_t j = c; j < m.cols; ++j)
                if (m(r, j) != 0) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
        }
        ++r;
    }
    return r;
}

// Basis of the right null space over F_p, one vector per free column.
inline std::vector<std::vector<std::uint64_t>> nullspace_mod(ModMatrix m, const PrimeField& f) {
    const auto pivots = rref(m, f);
    std::vector<bool> is_pivot(m.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<std::uint64_t>> out;
    for (std::size_t free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::uint64_t> v(m.cols, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(m(r, free));
        out.push_back(std::move(v));
    }
    return out;
}

// Rank over Q by fraction-free (Bareiss) elimination.
inline std::size_t rank_rational(const IntegerMatrix& input) {
    IntegerMatrix a = input;
    const std::size_t rows = a.rows(), cols = a.cols();
    Integer prev(1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pr = rows;
        for (std::size_t i = r; i < rows; ++i)
            if (a(i, c) != 0 && (pr == rows || cmpabs(a(i, c), a(pr, c)) < 0)) pr = i;
        if (pr == rows) continue;
        if (pr != r)
            for (std::size_t j = c; j < cols; ++j) std::swap(a(r, j), a(pr, j));
        const Integer& piv = a(r, c);
        for (std::size_t i = r + 1; i < rows; ++i) {
            Integer lead = a(i, c);
            for (std::size_t j = c + 1; j < cols; ++j) {
                Integer& x = a(i, j);
                x *= piv;
                mpz_submul(x.get_mpz_t(), lead.get_mpz_t(), a(r, j).get_mpz_t());
                mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, c) = 0;
        }
        prev = piv;
        ++r;
    }
    return r;
}

// Determinant of a square matrix (Bareiss).
inline Integer determinant(const IntegerMatrix& input) {
    if (input.rows() != input.cols()) throw InvalidInput("determinant of a non-square matrix");
    IntegerMatrix a = input;
    const std::size_t n = a.rows();
    Integer prev(1);
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = k;
        while (pr < n && a(pr, k) == 0) ++pr;
        if (pr == n) return Integer(0);
        if (pr != k) {
            for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(pr, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer& x = a(i, j);
                x *= a(k, k);
                mpz_submul(x.get_mpz_t(), a(i, k).get_mpz_t(), a(k, j).get_mpz_t());
                mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return n == 0 ? Integer(1) : Integer(sign * a(n - 1, n - 1));
}

inline std::size_t rank_over(const IntegerMatrix& m, const BaseRing& base) {
    if (base.is_prime()) {
        const PrimeField f{base.p};
        return rank_mod(reduce_matrix(m, f), f);
    }
    return rank_rational(m);
}

// Rank over F_p for a prime given as an arbitrary integer.
inline std::size_t rank_over_prime(const IntegerMatrix& m, const Integer& p) {
    return rank_over(m, BaseRing::prime(p));
}

// Primes p with rank(M mod p) < rank(M). Candidates divide the gcd of a few
// nonsingular maximal minors; each is confirmed by a rank computation mod p.
inline std::vector<Integer> rank_drop_primes(const IntegerMatrix& m) {
    const std::size_t r = rank_rational(m);
    if (r == 0) return {};
    const PrimeField big{2305843009213693951ULL};  // 2^61 - 1
    std::vector<std::size_t> rows(m.rows()), cols(m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    auto next = [&state] {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    Integer g(0);
    int stable = 0;
    for (int attempt = 0; attempt < 12 && g != 1 && stable < 3; ++attempt) {
        if (attempt > 0) {
            for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[next() % i]);
            for (std::size_t j = cols.size(); j > 1; --j) std::swap(cols[j - 1], cols[next() % j]);
        }
        ModMatrix pm(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) pm(i, j) = big.reduce(m(rows[i], cols[j]));
        const auto pc = rref(pm, big);
        if (pc.size() < r) continue;
        ModMatrix pt(m.cols() > 0 ? r : 0, m.rows());
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t i = 0; i < m.rows(); ++i) pt(k, i) = big.reduce(m(rows[i], cols[pc[k]]));
        const auto pr = rref(pt, big);
        if (pr.size() < r) continue;
        IntegerMatrix minor(r, r);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) minor(a, b) = m(rows[pr[a]], cols[pc[b]]);
        const Integer before = g;
        g = gcd(g, determinant(minor));
        stable = (g == before) ? stable + 1 : 0;
    }
    std::vector<Integer> out;
    for (const Integer& p : prime_divisors(g))
        if (rank_over_prime(m, p) < r) out.push_back(p);
    return out;
}

// Reduced row echelon form over Q; returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<std::vector<mpq_class>>& m) {
    std::vector<std::size_t> pivots;
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pr = r;
        while (pr < rows && m[pr][c] == 0) ++pr;
        if (pr == rows) continue;
        std::swap(m[r], m[pr]);
        const mpq_class inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            const mpq_class factor = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (m[r][j] != 0) m[i][j] -= factor * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// One solution of A x = b over Q, or nullopt if inconsistent.
inline std::optional<std::vector<mpq_class>> solve_rational(const IntegerMatrix& a, const std::vector<Integer>& b) {
    std::vector<std::vector<mpq_class>> aug(a.rows(), std::vector<mpq_class>(a.cols() + 1));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug[i][j] = a(i, j);
        aug[i][a.cols()] = b[i];
    }
    const auto pivots = rref(aug);
    std::vector<mpq_class> x(a.cols());
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == a.cols()) return std::nullopt;
        x[pivots[r]] = aug[r][a.cols()];
    }
    return x;
}

// Saturation Q L ∩ Z^n of the lattice spanned by the columns of `generators`
// (the double orthogonal complement).
inline LatticeBasis saturate(const IntegerMatrix& generators) {
    const LatticeBasis dual = kernel_lattice(generators.transposed());
    if (dual.rank() == 0) return hermite_basis(IntegerMatrix::identity(generators.rows()));
    return kernel_lattice(dual.basis.transposed());
}

}  // namespace arithsurf
