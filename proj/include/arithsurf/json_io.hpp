#pragma once

// JSON schemas for the public records. Integers of arbitrary size travel as
// decimal strings; small twists and degrees as JSON numbers.

#include <json.hpp>

#include "arithsurf/delpezzo.hpp"
#include "arithsurf/hirzebruch.hpp"
#include "arithsurf/transforms.hpp"

namespace arithsurf::json {

using nlohmann::json;

inline json integer(const Integer& x) { return to_decimal(x); }

inline Integer integer_from(const json& j) {
    if (j.is_string()) return parse_integer(j.get<std::string>());
    if (j.is_number_integer()) return Integer(j.get<long>());
    throw InvalidInput("expected an integer (decimal string or number)");
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidInput(std::string("field '") + key + "' has the wrong type");
    }
}

inline json form(const Form& f) {
    json coeffs = json::array();
    for (const Integer& c : f.coeffs()) coeffs.push_back(integer(c));
    if (f.degree() < 0) coeffs = json::array();
    return {{"degree", f.degree()}, {"coeffs", coeffs}};
}

inline Form form_from(const json& j) {
    const int degree = field<int>(j, "degree");
    const json& coeffs = j.at("coeffs");
    if (degree < 0) {
        if (!coeffs.empty()) throw DegreeMismatch("form of negative degree must be empty");
        return Form::zero(degree);
    }
    if (coeffs.size() != static_cast<std::size_t>(degree) + 1)
        throw DegreeMismatch("form of degree " + std::to_string(degree) + " needs " + std::to_string(degree + 1) +
                             " coefficients");
    std::vector<Integer> cs;
    for (const auto& c : coeffs) cs.push_back(integer_from(c));
    return Form::from_coeffs(std::move(cs));
}

inline json matrix(const IntegerMatrix& m) {
    json entries = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) entries.push_back(integer(m(i, j)));
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline IntegerMatrix matrix_from(const json& j) {
    const auto rows = field<std::size_t>(j, "rows"), cols = field<std::size_t>(j, "cols");
    const json& e = j.at("entries");
    if (e.size() != rows * cols) throw InvalidInput("matrix entry count mismatch");
    IntegerMatrix m(rows, cols);
    for (std::size_t k = 0; k < e.size(); ++k) m(k / cols, k % cols) = integer_from(e[k]);
    return m;
}

inline json presentation(const GradedPresentation& p) {
    json rows = json::array();
    for (std::size_t i = 0; i < p.relations.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < p.relations.cols(); ++j) row.push_back(form(p.relations(i, j)));
        rows.push_back(row);
    }
    return {{"base", p.base.tag()},
            {"generators", p.generators().twists},
            {"relations", p.relation_twists().twists},
            {"entries", rows}};
}

inline BaseRing base_from(const std::string& tag) {
    if (tag == "Z") return BaseRing::integers();
    if (tag == "Q") return BaseRing::rationals();
    if (tag.size() > 1 && tag[0] == 'F') return BaseRing::prime(parse_integer(tag.substr(1)));
    throw InvalidInput("unknown base ring '" + tag + "'");
}

inline GradedPresentation presentation_from(const json& j) {
    FreeGraded gens{field<std::vector<int>>(j, "generators")};
    FreeGraded rels{field<std::vector<int>>(j, "relations")};
    GradedMap phi(rels, gens);
    const json& rows = j.at("entries");
    if (rows.size() != gens.rank()) throw InvalidInput("entries need one row per generator");
    for (std::size_t i = 0; i < gens.rank(); ++i) {
        if (rows[i].size() != rels.rank()) throw InvalidInput("entries need one column per relation");
        for (std::size_t k = 0; k < rels.rank(); ++k) phi.set(i, k, form_from(rows[i][k]));
    }
    const std::string tag = j.contains("base") ? j.at("base").get<std::string>() : "Z";
    return GradedPresentation{base_from(tag), std::move(phi)};
}

inline json splitting(const SplittingType& t) { return json::array({t.a, t.b}); }

inline SplittingType splitting_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw InvalidInput("splitting type must be [a, b]");
    return SplittingType{j[0].get<long>(), j[1].get<long>()};
}

inline json profile(const SplittingProfile& p) {
    json jumps = json::object();
    for (const auto& [prime, t] : p.jumps) jumps[to_decimal(prime)] = splitting(t);
    return {{"generic", splitting(p.generic)}, {"jumps", jumps}};
}

inline SplittingProfile profile_from(const json& j) {
    SplittingProfile p;
    p.generic = splitting_from(j.at("generic"));
    for (const auto& [key, value] : j.at("jumps").items()) p.jumps.emplace(parse_integer(key), splitting_from(value));
    return p;
}

// Profile with the Hirzebruch types spelled out next to the splitting pairs.
inline json profile_report(const SplittingProfile& p) {
    json out = profile(p);
    out["generic_type"] = p.generic.type();
    json types = json::object();
    for (const auto& [prime, t] : p.jumps) types[to_decimal(prime)] = t.type();
    out["jump_types"] = types;
    return out;
}

inline json quotient(const FiberQuotient& q) {
    json out = {{"p", integer(q.p)}, {"m", q.m}};
    if (q.row.size() == 2) {
        out["g"] = form(q.row[0]);
        out["h"] = form(q.row[1]);
    } else {
        json row = json::array();
        for (const Form& f : q.row) row.push_back(form(f));
        out["row"] = row;
    }
    return out;
}

inline FiberQuotient quotient_from(const json& j) {
    if (j.contains("center") && j.at("center") == "horizontal")
        throw UnsupportedCenter("horizontal centers are not supported");
    FiberQuotient q;
    q.p = integer_from(j.at("p"));
    q.m = field<int>(j, "m");
    if (j.contains("row")) {
        for (const auto& f : j.at("row")) q.row.push_back(form_from(f));
    } else {
        q.row = {form_from(j.at("g")), form_from(j.at("h"))};
    }
    return q;
}

inline json center(const SectionCenter& c) {
    json q = json::array();
    for (const Form& f : c.quotient) q.push_back(form(f));
    return {{"p", integer(c.p)}, {"twist", c.twist}, {"relative_degree", c.relative_degree}, {"quotient", q}};
}

inline SectionCenter center_from(const json& j) {
    SectionCenter c;
    c.p = integer_from(j.at("p"));
    c.twist = field<long>(j, "twist");
    c.relative_degree = field<long>(j, "relative_degree");
    for (const auto& f : j.at("quotient")) c.quotient.push_back(form_from(f));
    return c;
}

inline json factorization(const BlowupFactorization& r) {
    return {{"p", integer(r.p)},
            {"m", r.m},
            {"source", r.source_id},
            {"target", r.target_id},
            {"source_profile", profile(r.source_profile)},
            {"target_profile", profile(r.target_profile)},
            {"center_V", center(r.center_V)},
            {"center_U", center(r.center_U)}};
}

inline BlowupFactorization factorization_from(const json& j) {
    BlowupFactorization r;
    r.p = integer_from(j.at("p"));
    r.m = field<int>(j, "m");
    r.source_id = field<std::string>(j, "source");
    r.target_id = field<std::string>(j, "target");
    r.source_profile = profile_from(j.at("source_profile"));
    r.target_profile = profile_from(j.at("target_profile"));
    r.center_V = center_from(j.at("center_V"));
    r.center_U = center_from(j.at("center_U"));
    if (r.center_V.p != r.p || r.center_U.p != r.p) throw InvalidInput("centers must lie over the record's prime");
    return r;
}

inline json certificate(const SplitCertificate& c) {
    json u = json::array(), v = json::array();
    for (const Form& f : c.section_x0) u.push_back(form(f));
    for (const Form& f : c.section_x1) v.push_back(form(f));
    return {{"split", splitting(c.split)},
            {"ambient_twist", c.ambient_twist},
            {"shift", c.shift},
            {"section_x0", u},
            {"section_x1", v},
            {"quotient", presentation(c.quotient)}};
}

inline json failure(const PositionFailure& f) {
    json primes = json::array();
    for (const Integer& p : f.primes) primes.push_back(integer(p));
    return {{"check", f.check}, {"indices", f.indices}, {"value", integer(f.value)}, {"generic", f.generic()},
            {"primes", primes}};
}

inline json verdict(const PositionVerdict& v) {
    json fails = json::array();
    for (const auto& f : v.failures) fails.push_back(failure(f));
    json out = {{"passed", v.passed}, {"failures", fails}};
    out["witness"] = v.witness() ? failure(*v.witness()) : json(nullptr);
    return out;
}

inline json configuration(const PointConfiguration& c) {
    json out = json::array();
    for (const auto& p : c.points()) out.push_back(p.text());
    return out;
}

inline PointConfiguration configuration_from(const json& j) {
    std::vector<ProjectivePoint> pts;
    for (const auto& s : j) pts.push_back(ProjectivePoint::parse(s.get<std::string>()));
    return PointConfiguration(std::move(pts));
}

inline json lattice_class(const LatticeClass& c) { return {{"d", c.d}, {"m", c.m}}; }

}  // namespace arithsurf::json
