#pragma once

// Surfaces x0^n y0 + x1^n y1 + f(x0, x1) y2 = 0 in P^1 x P^2 over Z and the
// rank-2 bundles they projectivize.

#include <optional>
#include <string>

#include "arithsurf/bundles.hpp"

namespace arithsurf {

struct NormalForm {
    int n = 0;
    Form f;

    NormalForm() = default;
    NormalForm(int n_, Form f_) : n(n_), f(std::move(f_)) {
        if (n < 0) throw InvalidInput("normal form needs n >= 0");
        if (f.degree() != n) {
            if (!f.is_zero()) throw DegreeMismatch("f must have degree " + std::to_string(n));
            f = Form::zero(n);
        }
    }

    bool operator==(const NormalForm&) const = default;
};

struct EquationRecord {
    std::string text;
    int x_degree = 0;  // bidegree (n, 1) in (x, y)
    int y_degree = 1;
    bool smooth = true;
};

namespace detail {

inline std::string y_term(const std::string& coefficient, const char* y) {
    if (coefficient.empty() || coefficient == "1") return y;
    return coefficient + "*" + y;
}

}  // namespace detail

inline EquationRecord equation(const NormalForm& nf) {
    EquationRecord rec;
    rec.x_degree = nf.n;
    const std::string x0 = nf.n == 0 ? "" : monomial_text(nf.n, 0);
    const std::string x1 = nf.n == 0 ? "" : monomial_text(0, nf.n);
    std::string text = detail::y_term(x0, "y0") + " + " + detail::y_term(x1, "y1");
    int terms = 0;
    int last = -1;
    for (int j = 0; j <= nf.n; ++j)
        if (nf.f.coeff(j) != 0) {
            ++terms;
            last = j;
        }
    if (terms == 1) {
        const Integer& c = nf.f.coeff(last);
        const Form mono = Form::monomial(nf.n, last, abs_value(c));
        text += c < 0 ? " - " : " + ";
        text += detail::y_term(form_text(mono), "y2");
    } else if (terms > 1) {
        text += " + (" + form_text(nf.f) + ")*y2";
    }
    rec.text = text + " = 0";
    return rec;
}

// Kills the x0^n and x1^n coefficients of f via y0 -> y0 + m y2, y1 -> y1 + m' y2.
inline NormalForm reduce_coefficients(const NormalForm& nf) {
    Form g = nf.f;
    g.coeff(0) = 0;
    g.coeff(nf.n) = 0;
    return NormalForm(nf.n, g);
}

// Cokernel of (x0^n, x1^n, f): O(-n) -> O^3.
inline BundleHandle bundle_from_normal_form(const NormalForm& nf) {
    GradedMap column(FreeGraded{{-nf.n}}, FreeGraded{{0, 0, 0}});
    column.set(0, 0, Form::x0_power(nf.n));
    column.set(1, 0, Form::x1_power(nf.n));
    column.set(2, 0, nf.f);
    return BundleHandle(GradedPresentation{BaseRing::integers(), std::move(column)});
}

// Hirzebruch degrees of the fibers Y_p: the fiber splitting types.
inline SplittingProfile degree_profile(const NormalForm& nf) { return type_profile(bundle_from_normal_form(nf)); }

inline std::optional<SplitCertificate> constancy_check(const NormalForm& nf) {
    const BundleHandle bundle = bundle_from_normal_form(nf);
    const SplittingProfile& profile = type_profile(bundle);
    if (!profile.is_constant() || profile.generic.type() != nf.n) return std::nullopt;
    return try_split_certificate(bundle);
}

}  // namespace arithsurf
