#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arithsurf/errors.hpp"

namespace arithsurf {

using Integer = mpz_class;

inline std::string to_decimal(const Integer& x) { return x.get_str(10); }

inline Integer parse_integer(std::string_view text) {
    std::string s(text);
    if (!s.empty() && s.front() == '+') s.erase(s.begin());
    if (s.empty() || s == "-") throw InvalidInput("empty integer literal");
    for (std::size_t i = (s.front() == '-') ? 1 : 0; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') throw InvalidInput("bad integer literal '" + std::string(text) + "'");
    return Integer(s, 10);
}

inline Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

// Floor-style residue in [0, m).
inline std::uint64_t residue(const Integer& x, std::uint64_t m) {
    return mpz_fdiv_ui(x.get_mpz_t(), m);
}

namespace detail {

inline bool miller_rabin_round(const Integer& n, const Integer& d, unsigned s, unsigned long witness) {
    Integer a(witness);
    a %= n;
    if (a == 0) return true;
    Integer x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    const Integer n_minus_1 = n - 1;
    if (x == 1 || x == n_minus_1) return true;
    for (unsigned r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == n_minus_1) return true;
    }
    return false;
}

}  // namespace detail

// Miller-Rabin with the first twelve primes as fixed witnesses. This is a
// proof of primality below 3.3e24 (in particular for every n < 2^64); above
// that bound it is a deterministic probable-prime test.
inline bool is_prime(const Integer& n) {
    static constexpr std::array<unsigned long, 12> witnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (unsigned long w : witnesses) {
        if (n == w) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), w)) return false;
    }
    Integer d = n - 1;
    unsigned s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }
    return std::all_of(witnesses.begin(), witnesses.end(),
                       [&](unsigned long w) { return detail::miller_rabin_round(n, d, s, w); });
}

inline void require_prime(const Integer& p) {
    if (!is_prime(p)) throw CompositeModulus(to_decimal(p) + " is not prime");
}

// Field-level modulus; every prime-field computation runs on 63-bit words.
inline std::uint64_t require_word_prime(const Integer& p) {
    require_prime(p);
    if (mpz_sizeinbase(p.get_mpz_t(), 2) > 63)
        throw InvalidInput("prime " + to_decimal(p) + " exceeds the 63-bit prime-field limit");
    return p.get_ui();
}

namespace detail {

inline Integer pollard_brent(const Integer& n, unsigned long seed) {
    if (mpz_even_p(n.get_mpz_t())) return Integer(2);
    Integer y(seed), c(seed + 1), g(1), q(1), x, ys;
    const unsigned long m = 64;
    unsigned long r = 1;
    auto f = [&](const Integer& v) { return Integer((v * v + c) % n); };
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = f(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                q = (q * abs_value(Integer(x - y))) % n;
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd(abs_value(Integer(x - ys)), n);
        } while (g == 1);
    }
    return g;
}

inline void factor_into(Integer n, std::vector<Integer>& out) {
    if (n < 2) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    for (unsigned long seed = 2;; ++seed) {
        Integer d = pollard_brent(n, seed);
        if (d != n && d != 1) {
            factor_into(d, out);
            factor_into(Integer(n / d), out);
            return;
        }
    }
}

}  // namespace detail

// Distinct prime divisors of |n|, ascending. Zero and units have none.
inline std::vector<Integer> prime_divisors(const Integer& n) {
    std::vector<Integer> out;
    Integer m = abs_value(n);
    if (m < 2) return out;
    for (unsigned long p = 2; p < 10000 && m > 1; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            out.emplace_back(p);
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) m /= p;
        }
    }
    detail::factor_into(m, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

}  // namespace arithsurf
