#pragma once

// Binary forms in x0, x1, graded free modules over the two-variable
// polynomial ring, and finite graded presentations of sheaves on P^1.
//
// Monomial order is decreasing x0-power: coefficient j of a degree-d form
// multiplies x0^(d-j) * x1^j. The free module with twist a has a degree-d
// piece of dimension max(0, a + d + 1), matching h^0(O(a + d)).

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "arithsurf/exactlat.hpp"

namespace arithsurf {

class Form {
public:
    Form() = default;

    // Zero form carrying an explicit degree tag (negative tags allowed).
    static Form zero(int degree) {
        Form f;
        f.degree_ = degree;
        if (degree >= 0) f.coeffs_.assign(static_cast<std::size_t>(degree) + 1, Integer(0));
        return f;
    }

    static Form from_coeffs(std::vector<Integer> coeffs) {
        if (coeffs.empty()) throw InvalidInput("a form needs at least one coefficient");
        Form f;
        f.degree_ = static_cast<int>(coeffs.size()) - 1;
        f.coeffs_ = std::move(coeffs);
        return f;
    }

    // c * x0^(degree - j) * x1^j
    static Form monomial(int degree, int j, const Integer& c = Integer(1)) {
        Form f = zero(degree);
        f.coeffs_.at(static_cast<std::size_t>(j)) = c;
        return f;
    }

    static Form constant(const Integer& c) { return monomial(0, 0, c); }
    static Form x0_power(int k) { return monomial(k, 0); }
    static Form x1_power(int k) { return monomial(k, k); }

    int degree() const noexcept { return degree_; }
    const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }
    const Integer& coeff(int j) const { return coeffs_.at(static_cast<std::size_t>(j)); }
    Integer& coeff(int j) { return coeffs_.at(static_cast<std::size_t>(j)); }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return c == 0; });
    }

    bool operator==(const Form& o) const = default;

    Form operator+(const Form& o) const {
        if (degree_ != o.degree_) throw DegreeMismatch("adding forms of different degrees");
        Form r = *this;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) r.coeffs_[j] += o.coeffs_[j];
        return r;
    }

    Form operator-(const Form& o) const {
        if (degree_ != o.degree_) throw DegreeMismatch("subtracting forms of different degrees");
        Form r = *this;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) r.coeffs_[j] -= o.coeffs_[j];
        return r;
    }

    Form operator*(const Form& o) const {
        if (degree_ < 0 || o.degree_ < 0) return zero(degree_ + o.degree_);
        Form r = zero(degree_ + o.degree_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
                mpz_addmul(r.coeffs_[i + j].get_mpz_t(), coeffs_[i].get_mpz_t(), o.coeffs_[j].get_mpz_t());
        }
        return r;
    }

    Form scaled(const Integer& c) const {
        Form r = *this;
        for (auto& x : r.coeffs_) x *= c;
        return r;
    }

    // Coefficients reduced into [0, p).
    Form reduced(std::uint64_t p) const {
        Form r = *this;
        for (auto& x : r.coeffs_) x = Integer(static_cast<unsigned long>(residue(x, p)));
        return r;
    }

    // Exact division of all coefficients by an integer.
    Form divided_exact(const Integer& c) const {
        Form r = *this;
        for (auto& x : r.coeffs_) {
            if (!mpz_divisible_p(x.get_mpz_t(), c.get_mpz_t())) throw InvalidInput("inexact form division");
            mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
        }
        return r;
    }

    // Value at (x0, x1) = (1, t).
    Integer evaluate_affine(const Integer& t) const {
        Integer acc(0);
        for (int j = degree_; j >= 0; --j) acc = acc * t + coeffs_[static_cast<std::size_t>(j)];
        return acc;
    }

private:
    int degree_ = 0;
    std::vector<Integer> coeffs_{Integer(0)};
};

// Monomials of degree d as (x0-exponent, x1-exponent), decreasing x0-power.
inline std::vector<std::pair<int, int>> monomial_basis(int d) {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j <= d; ++j) out.emplace_back(d - j, j);
    return out;
}

inline std::size_t piece_dim(int twist, int d) { return static_cast<std::size_t>(std::max(0, twist + d + 1)); }

// Section module of O(a_1) + ... + O(a_r).
struct FreeGraded {
    std::vector<int> twists;

    std::size_t rank() const noexcept { return twists.size(); }

    std::size_t dim(int d) const {
        std::size_t s = 0;
        for (int a : twists) s += piece_dim(a, d);
        return s;
    }

    // Start of summand i inside the degree-d piece.
    std::size_t offset(std::size_t i, int d) const {
        std::size_t s = 0;
        for (std::size_t k = 0; k < i; ++k) s += piece_dim(twists[k], d);
        return s;
    }

    bool operator==(const FreeGraded&) const = default;
};

// Degree-compatible map source -> target; entry (i, j) has degree
// target.twists[i] - source.twists[j].
class GradedMap {
public:
    GradedMap() = default;
    GradedMap(FreeGraded source, FreeGraded target)
        : source_(std::move(source)), target_(std::move(target)) {
        entries_.reserve(rows() * cols());
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) entries_.push_back(Form::zero(required_degree(i, j)));
    }
    GradedMap(FreeGraded source, FreeGraded target, std::vector<Form> entries)
        : source_(std::move(source)), target_(std::move(target)), entries_(std::move(entries)) {
        validate();
    }

    const FreeGraded& source() const noexcept { return source_; }
    const FreeGraded& target() const noexcept { return target_; }
    std::size_t rows() const noexcept { return target_.rank(); }
    std::size_t cols() const noexcept { return source_.rank(); }
    const std::vector<Form>& entries() const noexcept { return entries_; }

    int required_degree(std::size_t i, std::size_t j) const { return target_.twists[i] - source_.twists[j]; }

    const Form& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols() + j]; }

    void set(std::size_t i, std::size_t j, Form f) {
        if (f.degree() != required_degree(i, j)) {
            if (!f.is_zero())
                throw DegreeMismatch("entry (" + std::to_string(i) + "," + std::to_string(j) + ") has degree " +
                                     std::to_string(f.degree()) + ", expected " +
                                     std::to_string(required_degree(i, j)));
            f = Form::zero(required_degree(i, j));
        }
        entries_[i * cols() + j] = std::move(f);
    }

    void validate() const {
        if (entries_.size() != rows() * cols()) throw InvalidInput("graded map entry count mismatch");
        for (std::size_t i = 0; i < rows(); ++i)
            for (std::size_t j = 0; j < cols(); ++j) {
                const Form& f = (*this)(i, j);
                const int want = required_degree(i, j);
                if (f.degree() != want && !(f.is_zero() && (want < 0 || f.degree() < 0)))
                    throw DegreeMismatch("entry (" + std::to_string(i) + "," + std::to_string(j) + ") has degree " +
                                         std::to_string(f.degree()) + ", expected " + std::to_string(want));
                if (want < 0 && !f.is_zero()) throw DegreeMismatch("nonzero entry of negative required degree");
            }
    }

    bool operator==(const GradedMap&) const = default;

private:
    FreeGraded source_;
    FreeGraded target_;
    std::vector<Form> entries_;
};

// phi o psi, where psi: A -> B and phi: B -> C.
inline GradedMap compose(const GradedMap& phi, const GradedMap& psi) {
    if (!(phi.source() == psi.target())) throw DegreeMismatch("maps are not composable");
    GradedMap out(psi.source(), phi.target());
    for (std::size_t i = 0; i < phi.rows(); ++i)
        for (std::size_t j = 0; j < psi.cols(); ++j) {
            Form acc = Form::zero(out.required_degree(i, j));
            if (acc.degree() >= 0)
                for (std::size_t k = 0; k < phi.cols(); ++k) {
                    const Form& a = phi(i, k);
                    const Form& b = psi(k, j);
                    if (a.degree() < 0 || b.degree() < 0) continue;
                    acc = acc + a * b;
                }
            out.set(i, j, std::move(acc));
        }
    return out;
}

namespace detail {

// Writes the block of multiplication by f : S_{src_deg} -> S_{src_deg + deg f}.
inline void write_multiplication_block(IntegerMatrix& m, std::size_t row0, std::size_t col0, const Form& f,
                                       int src_deg) {
    if (src_deg < 0 || f.degree() < 0) return;
    for (int t = 0; t <= src_deg; ++t)
        for (int s = 0; s <= f.degree(); ++s) {
            const Integer& c = f.coeff(s);
            if (c != 0) m(row0 + static_cast<std::size_t>(t + s), col0 + static_cast<std::size_t>(t)) += c;
        }
}

}  // namespace detail

// Matrix of phi on degree-d pieces with respect to monomial_basis ordering.
inline IntegerMatrix degree_piece(const GradedMap& phi, int d) {
    const FreeGraded& src = phi.source();
    const FreeGraded& tgt = phi.target();
    IntegerMatrix m(tgt.dim(d), src.dim(d));
    std::size_t row0 = 0;
    for (std::size_t i = 0; i < tgt.rank(); ++i) {
        std::size_t col0 = 0;
        for (std::size_t j = 0; j < src.rank(); ++j) {
            if (piece_dim(tgt.twists[i], d) > 0)
                detail::write_multiplication_block(m, row0, col0, phi(i, j), src.twists[j] + d);
            col0 += piece_dim(src.twists[j], d);
        }
        row0 += piece_dim(tgt.twists[i], d);
    }
    return m;
}

// Multiplication by a single form on every summand: F_d -> F_{d + deg f}.
inline IntegerMatrix scalar_multiplication_piece(const FreeGraded& module, const Form& f, int d) {
    IntegerMatrix m(module.dim(d + f.degree()), module.dim(d));
    for (std::size_t i = 0; i < module.rank(); ++i)
        detail::write_multiplication_block(m, module.offset(i, d + f.degree()), module.offset(i, d), f,
                                           module.twists[i] + d);
    return m;
}

// Cokernel presentation of a coherent sheaf on P^1 over the base ring:
// generators are the target summands, relations the source summands.
struct GradedPresentation {
    BaseRing base = BaseRing::integers();
    GradedMap relations;

    const FreeGraded& generators() const noexcept { return relations.target(); }
    const FreeGraded& relation_twists() const noexcept { return relations.source(); }

    bool operator==(const GradedPresentation&) const = default;
};

inline GradedPresentation split_presentation(std::vector<int> twists) {
    return GradedPresentation{BaseRing::integers(), GradedMap(FreeGraded{}, FreeGraded{std::move(twists)})};
}

// Base change to the fiber over p: every coefficient reduced into [0, p).
inline GradedPresentation reduce_mod(const GradedPresentation& pres, const Integer& p) {
    if (pres.base.kind != BaseRing::Kind::Integers)
        throw InvalidInput("reduce_mod expects a presentation over the integers");
    const BaseRing base = BaseRing::prime(p);
    std::vector<Form> entries;
    entries.reserve(pres.relations.entries().size());
    for (const Form& f : pres.relations.entries()) entries.push_back(f.reduced(base.p));
    return GradedPresentation{base, GradedMap(pres.relations.source(), pres.relations.target(), std::move(entries))};
}

// E(t): every generator and relation twist shifted by t.
inline GradedPresentation twist(const GradedPresentation& pres, int t) {
    FreeGraded src = pres.relations.source(), tgt = pres.relations.target();
    for (int& a : src.twists) a += t;
    for (int& a : tgt.twists) a += t;
    return GradedPresentation{pres.base, GradedMap(std::move(src), std::move(tgt), pres.relations.entries())};
}

// ---------------------------------------------------------------------------
// Text form of binary forms: "3*x0^2 + x0*x1", "-5*x1", "0".

inline std::string monomial_text(int e0, int e1) {
    std::string s;
    auto factor = [&](const char* var, int e) {
        if (e == 0) return;
        if (!s.empty()) s += "*";
        s += var;
        if (e > 1) s += "^" + std::to_string(e);
    };
    factor("x0", e0);
    factor("x1", e1);
    return s;
}

inline std::string form_text(const Form& f) {
    std::string out;
    for (int j = 0; j <= f.degree(); ++j) {
        Integer c = f.coeff(j);
        if (c == 0) continue;
        const bool negative = c < 0;
        if (negative) c = -c;
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        const std::string mono = monomial_text(f.degree() - j, j);
        if (mono.empty())
            out += to_decimal(c);
        else if (c == 1)
            out += mono;
        else
            out += to_decimal(c) + "*" + mono;
    }
    return out.empty() ? "0" : out;
}

// Parses a homogeneous binary form of the given degree.
inline Form parse_form(std::string_view text, int degree) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw InvalidInput("empty form");
    Form f = Form::zero(degree);
    std::size_t pos = 0;
    bool any = false;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (any) {
            throw InvalidInput("expected '+' or '-' in form '" + std::string(text) + "'");
        }
        std::size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        const std::string term = s.substr(pos, end - pos);
        if (term.empty()) throw InvalidInput("empty term in form '" + std::string(text) + "'");
        Integer coeff(sign);
        int e0 = 0, e1 = 0;
        std::size_t k = 0;
        while (k < term.size()) {
            std::size_t stop = term.find('*', k);
            if (stop == std::string::npos) stop = term.size();
            const std::string factor = term.substr(k, stop - k);
            if (factor.empty()) throw InvalidInput("empty factor in '" + term + "'");
            if (factor.rfind("x0", 0) == 0 || factor.rfind("x1", 0) == 0) {
                int e = 1;
                if (factor.size() > 2) {
                    if (factor[2] != '^') throw InvalidInput("bad factor '" + factor + "'");
                    e = std::stoi(factor.substr(3));
                }
                (factor[1] == '0' ? e0 : e1) += e;
            } else {
                coeff *= parse_integer(factor);
            }
            k = stop + 1;
        }
        if (coeff != 0) {
            if (e0 + e1 != degree && degree >= 0)
                throw DegreeMismatch("term '" + term + "' has degree " + std::to_string(e0 + e1) + ", expected " +
                                     std::to_string(degree));
            if (degree < 0) throw DegreeMismatch("nonzero form of negative degree");
            f.coeff(e1) += coeff;
        }
        any = true;
        pos = end;
    }
    return f;
}

}  // namespace arithsurf
