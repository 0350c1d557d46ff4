#pragma once

// Z-points of P^2 in general position modulo every prime, GL3(Z)
// standardization, and (-1)-classes of the blown-up Picard lattice.

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arithsurf/exactlat.hpp"

namespace arithsurf {

// Primitive integer triple, first nonzero coordinate positive.
class ProjectivePoint {
public:
    ProjectivePoint(Integer x, Integer y, Integer z) : c_{std::move(x), std::move(y), std::move(z)} {
        const Integer g = gcd(gcd(c_[0], c_[1]), c_[2]);
        if (g == 0) throw InvalidInput("the zero vector is not a point");
        for (auto& v : c_) v /= g;
        for (const auto& v : c_)
            if (v != 0) {
                if (v < 0)
                    for (auto& w : c_) w = -w;
                break;
            }
    }

    static ProjectivePoint parse(std::string_view text) {
        std::array<Integer, 3> v;
        std::size_t start = 0;
        for (int k = 0; k < 3; ++k) {
            const std::size_t colon = text.find(':', start);
            if ((k < 2) != (colon != std::string_view::npos)) throw InvalidInput("point must be a:b:c, got '" + std::string(text) + "'");
            v[static_cast<std::size_t>(k)] = parse_integer(text.substr(start, k < 2 ? colon - start : std::string_view::npos));
            start = colon + 1;
        }
        return ProjectivePoint(v[0], v[1], v[2]);
    }

    const Integer& operator[](std::size_t i) const { return c_[i]; }
    std::string text() const { return to_decimal(c_[0]) + ":" + to_decimal(c_[1]) + ":" + to_decimal(c_[2]); }
    bool operator==(const ProjectivePoint&) const = default;

private:
    std::array<Integer, 3> c_;
};

class PointConfiguration {
public:
    PointConfiguration() = default;
    explicit PointConfiguration(std::vector<ProjectivePoint> pts) : pts_(std::move(pts)) {
        if (pts_.size() > 8) throw InvalidInput("at most 8 points are supported");
    }

    // Comma-separated "a:b:c" list; empty text is the empty configuration.
    static PointConfiguration parse(std::string_view text) {
        std::vector<ProjectivePoint> pts;
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t comma = text.find(',', start);
            if (comma == std::string_view::npos) comma = text.size();
            std::string_view item = text.substr(start, comma - start);
            while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
            while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
            pts.push_back(ProjectivePoint::parse(item));
            start = comma + 1;
        }
        return PointConfiguration(std::move(pts));
    }

    std::size_t size() const noexcept { return pts_.size(); }
    const ProjectivePoint& operator[](std::size_t i) const { return pts_[i]; }
    const std::vector<ProjectivePoint>& points() const noexcept { return pts_; }
    bool operator==(const PointConfiguration&) const = default;

private:
    std::vector<ProjectivePoint> pts_;
};

// A failing subset: its indices, the integer whose prime divisors are the
// bad primes (0 means the failure holds over Q), and those primes.
struct PositionFailure {
    std::string check;  // "pairs", "triples", "conics"
    std::vector<std::size_t> indices;
    Integer value;
    std::vector<Integer> primes;

    bool generic() const { return value == 0; }
};

struct PositionVerdict {
    bool passed = true;
    std::vector<PositionFailure> failures;  // subsets in lexicographic order

    const PositionFailure* witness() const { return failures.empty() ? nullptr : &failures.front(); }
};

namespace detail {

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

inline void record(PositionVerdict& v, const char* check, const std::vector<std::size_t>& idx, Integer value) {
    if (abs_value(value) == 1) return;
    v.passed = false;
    PositionFailure f{check, idx, abs_value(value), {}};
    f.primes = prime_divisors(f.value);
    v.failures.push_back(std::move(f));
}

inline IntegerMatrix point_rows(const PointConfiguration& c, const std::vector<std::size_t>& idx) {
    IntegerMatrix m(idx.size(), 3);
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t j = 0; j < 3; ++j) m(r, j) = c[idx[r]][j];
    return m;
}

inline Integer pair_minor_gcd(const ProjectivePoint& a, const ProjectivePoint& b) {
    const Integer m01 = a[0] * b[1] - a[1] * b[0];
    const Integer m02 = a[0] * b[2] - a[2] * b[0];
    const Integer m12 = a[1] * b[2] - a[2] * b[1];
    return gcd(gcd(m01, m02), m12);
}

inline std::array<Integer, 6> veronese(const ProjectivePoint& p) {
    return {p[0] * p[0], p[1] * p[1], p[2] * p[2], p[0] * p[1], p[0] * p[2], p[1] * p[2]};
}

}  // namespace detail

// gcd of the 2x2 minors is 1 for every pair; gcd 0 means identical points.
inline PositionVerdict pairwise_distinct_everywhere(const PointConfiguration& c) {
    PositionVerdict v;
    detail::for_each_subset(c.size(), 2, [&](const std::vector<std::size_t>& idx) {
        detail::record(v, "pairs", idx, detail::pair_minor_gcd(c[idx[0]], c[idx[1]]));
    });
    return v;
}

// Every triple has determinant +-1; 0 means collinear over Q.
inline PositionVerdict no_three_collinear_everywhere(const PointConfiguration& c) {
    PositionVerdict v;
    detail::for_each_subset(c.size(), 3, [&](const std::vector<std::size_t>& idx) {
        detail::record(v, "triples", idx, determinant(detail::point_rows(c, idx)));
    });
    return v;
}

// Every six points have a unimodular conic evaluation matrix.
inline PositionVerdict no_six_on_conic_everywhere(const PointConfiguration& c) {
    PositionVerdict v;
    detail::for_each_subset(c.size(), 6, [&](const std::vector<std::size_t>& idx) {
        IntegerMatrix m(6, 6);
        for (std::size_t r = 0; r < 6; ++r) {
            const auto row = detail::veronese(c[idx[r]]);
            for (std::size_t j = 0; j < 6; ++j) m(r, j) = row[j];
        }
        detail::record(v, "conics", idx, determinant(m));
    });
    return v;
}

inline PositionVerdict general_position(const PointConfiguration& c) {
    PositionVerdict out;
    for (auto&& part : {pairwise_distinct_everywhere(c), no_three_collinear_everywhere(c), no_six_on_conic_everywhere(c)}) {
        if (!part.passed) out.passed = false;
        out.failures.insert(out.failures.end(), part.failures.begin(), part.failures.end());
    }
    return out;
}

// Five or more points always contain two that coincide or three that are
// collinear modulo 2; returns the first such subset.
inline std::optional<PositionFailure> mod2_witness(const PointConfiguration& c) {
    std::optional<PositionFailure> found;
    detail::for_each_subset(c.size(), 2, [&](const std::vector<std::size_t>& idx) {
        const Integer g = detail::pair_minor_gcd(c[idx[0]], c[idx[1]]);
        if (!found && mpz_even_p(g.get_mpz_t())) found = PositionFailure{"pairs", idx, abs_value(g), {Integer(2)}};
    });
    if (found) return found;
    detail::for_each_subset(c.size(), 3, [&](const std::vector<std::size_t>& idx) {
        const Integer d = determinant(detail::point_rows(c, idx));
        if (!found && mpz_even_p(d.get_mpz_t())) found = PositionFailure{"triples", idx, abs_value(d), {Integer(2)}};
    });
    return found;
}

using Matrix3 = std::array<std::array<Integer, 3>, 3>;

inline Matrix3 identity3() {
    Matrix3 m;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m[i][j] = i == j ? 1 : 0;
    return m;
}

inline Matrix3 multiply(const Matrix3& a, const Matrix3& b) {
    Matrix3 c;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            c[i][j] = 0;
            for (std::size_t k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

inline Integer det3(const Matrix3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Inverse of a unimodular matrix through the adjugate.
inline Matrix3 unimodular_inverse(const Matrix3& a) {
    const Integer d = det3(a);
    if (abs_value(d) != 1) throw InvalidInput("matrix is not unimodular");
    Matrix3 inv;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            inv[i][j] = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) * d;
        }
    return inv;
}

inline ProjectivePoint transform(const Matrix3& u, const ProjectivePoint& p) {
    std::array<Integer, 3> v;
    for (std::size_t i = 0; i < 3; ++i) v[i] = u[i][0] * p[0] + u[i][1] * p[1] + u[i][2] * p[2];
    return ProjectivePoint(v[0], v[1], v[2]);
}

namespace detail {

// A in GL3(Z) whose first k columns are the given points (k <= 3, the
// points must span a saturated sublattice).
inline Matrix3 unimodular_completion(const PointConfiguration& c, std::size_t k) {
    Matrix3 a = identity3();
    if (k == 0) return a;
    IntegerMatrix mt(k, 3);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t j = 0; j < 3; ++j) mt(r, j) = c[r][j];
    IntegerMatrix v = IntegerMatrix::identity(3);
    detail::column_hermite(mt, &v);
    // mt * v = [L | 0], so A = (v^T)^{-1} carries e_1..e_k to the points up to L.
    Matrix3 vt;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) vt[i][j] = v(j, i);
    a = unimodular_inverse(vt);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t i = 0; i < 3; ++i) a[i][r] = c[r][i];
    if (abs_value(det3(a)) != 1) throw NotGeneralPosition("points do not extend to a basis of Z^3");
    return a;
}

}  // namespace detail

struct Standardization {
    Matrix3 transform;               // U in GL3(Z)
    std::array<int, 3> signs{1, 1, 1};
    PointConfiguration standard;
};

inline Standardization standardize(const PointConfiguration& c) {
    if (c.size() >= 5) {
        const auto w = mod2_witness(c);
        std::string msg = std::to_string(c.size()) + " points cannot be in general position modulo 2";
        if (w) {
            msg += "; " + w->check + " {";
            for (std::size_t i = 0; i < w->indices.size(); ++i) msg += (i ? "," : "") + std::to_string(w->indices[i]);
            msg += "} degenerate mod 2";
        }
        throw TooManyPoints(msg);
    }
    const PositionVerdict v = general_position(c);
    if (!v.passed) {
        const PositionFailure& f = *v.witness();
        std::string msg = f.check + " {";
        for (std::size_t i = 0; i < f.indices.size(); ++i) msg += (i ? "," : "") + std::to_string(f.indices[i]);
        msg += "} fails " + (f.generic() ? std::string("over Q") : "at " + to_decimal(f.value));
        throw NotGeneralPosition(msg);
    }
    Standardization out;
    const Matrix3 a = detail::unimodular_completion(c, std::min<std::size_t>(c.size(), 3));
    out.transform = unimodular_inverse(a);
    if (c.size() == 4) {
        const ProjectivePoint w = transform(out.transform, c[3]);
        // transform() canonicalizes signs; recompute raw coordinates.
        std::array<Integer, 3> raw;
        for (std::size_t i = 0; i < 3; ++i)
            raw[i] = out.transform[i][0] * c[3][0] + out.transform[i][1] * c[3][1] + out.transform[i][2] * c[3][2];
        for (std::size_t i = 0; i < 3; ++i) {
            if (abs_value(raw[i]) != 1) throw NotGeneralPosition("fourth point " + w.text() + " is off the torus");
            out.signs[i] = raw[i] > 0 ? 1 : -1;
            for (auto& x : out.transform[i]) x *= out.signs[i];
        }
    }
    std::vector<ProjectivePoint> pts;
    for (const auto& p : c.points()) pts.push_back(transform(out.transform, p));
    out.standard = PointConfiguration(std::move(pts));
    return out;
}

struct Classification {
    std::string model;
    std::size_t points = 0;
    int k_squared = 9;
};

inline Classification classify(const PointConfiguration& c) {
    const Standardization s = standardize(c);
    Classification out;
    out.points = s.standard.size();
    out.k_squared = 9 - static_cast<int>(out.points);
    out.model = out.points == 0 ? "P2" : "blowup_P2_" + std::to_string(out.points) + "pts";
    return out;
}

// ---------------------------------------------------------------------------
// Picard lattice of the blow-up at r points: (d; m_1..m_r) = dH - sum m_i E_i.

struct LatticeClass {
    long d = 0;
    std::vector<long> m;

    bool operator==(const LatticeClass&) const = default;
    auto operator<=>(const LatticeClass&) const = default;
};

inline long intersect(const LatticeClass& a, const LatticeClass& b) {
    if (a.m.size() != b.m.size()) throw InvalidInput("classes live on different blow-ups");
    long s = a.d * b.d;
    for (std::size_t i = 0; i < a.m.size(); ++i) s -= a.m[i] * b.m[i];
    return s;
}

inline LatticeClass canonical_class(std::size_t r) { return LatticeClass{-3, std::vector<long>(r, -1)}; }

// Classes with C.C = -1 and K.C = -1, i.e. sum m_i^2 = d^2 + 1 and
// sum m_i = 3d - 1. Cauchy-Schwarz bounds d to [-1, 7] for r <= 8.
inline std::vector<LatticeClass> minus_one_classes(std::size_t r) {
    if (r > 8) throw InvalidInput("at most 8 points are supported");
    std::vector<LatticeClass> out;
    for (long d = -1; d <= 7; ++d) {
        const long want_sum = 3 * d - 1;
        const long want_sq = d * d + 1;
        std::vector<long> m(r);
        long bound = 0;
        while ((bound + 1) * (bound + 1) <= want_sq) ++bound;
        std::function<void(std::size_t, long, long)> rec = [&](std::size_t i, long sum, long sq) {
            const long left = static_cast<long>(r - i);
            const long rs = want_sum - sum, rq = want_sq - sq;
            if (rq < 0 || rs * rs > left * rq) return;
            if (i == r) {
                if (rs == 0 && rq == 0) out.push_back({d, m});
                return;
            }
            for (long v = -bound; v <= bound; ++v) {
                m[i] = v;
                rec(i + 1, sum + v, sq + v * v);
            }
        };
        rec(0, 0, 0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace arithsurf
