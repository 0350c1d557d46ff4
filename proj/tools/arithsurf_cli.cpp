// arithsurf command-line front end. Every run prints one JSON document on
// stdout; diagnostics go to stderr.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "arithsurf/acceptance.hpp"
#include "arithsurf/json_io.hpp"

namespace {

using arithsurf::json::json;
namespace as = arithsurf;

constexpr const char* kVersion = "1.0.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json header() {
    json h = {{"tool", "arithsurf"}, {"version", kVersion}};
    const char* guard = std::getenv("ARITHSURF_WINDOW_GUARD");
    h["window_guard_override"] = guard ? json(guard) : json(nullptr);
    return h;
}

std::string read_payload(const std::string& path) {
    std::stringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read input file '" + path + "'");
        ss << in.rdbuf();
    }
    return ss.str();
}

json parse_payload(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw as::InvalidInput(std::string(what) + " is not valid JSON: " + e.what());
    }
}

// A bundle payload is a presentation object, or any object carrying one
// under "presentation" (such as the output of `bundle build`).
as::BundleHandle bundle_from(const json& j) {
    const json& p = j.contains("presentation") ? j.at("presentation") : j;
    return as::BundleHandle(as::json::presentation_from(p));
}

as::PrescribedJump parse_jump(const std::string& text, int n) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 2 && parts.size() != 4) throw UsageError("--jump expects p:n or p:n:g:h, got '" + text + "'");
    as::PrescribedJump j;
    j.p = as::parse_integer(parts[0]);
    j.n = std::stoi(parts[1]);
    if (parts.size() == 4) j.surjection = std::pair{as::parse_form(parts[2], j.n), as::parse_form(parts[3], j.n + n)};
    return j;
}

json audit(const as::BundleHandle& b, std::uint64_t bound) {
    const as::SplittingProfile& prof = as::type_profile(b);
    json types = json::object();
    bool consistent = true;
    for (std::uint64_t p : as::primes_up_to(bound)) {
        const as::Integer q(static_cast<unsigned long>(p));
        const as::SplittingType t = as::splitting_type(b, q);
        types[std::to_string(p)] = as::json::splitting(t);
        if (!(t == prof.at(q))) consistent = false;
    }
    return {{"bound", bound}, {"types", types}, {"consistent", consistent}};
}

json bundle_report(const as::BundleHandle& b, std::uint64_t primes_up_to) {
    json out = {{"presentation", as::json::presentation(b.presentation())},
                {"rank", b.rank()},
                {"degree", b.degree()},
                {"id", as::bundle_id(b)}};
    if (b.rank() == 2) out["profile"] = as::json::profile_report(as::type_profile(b));
    if (primes_up_to > 0 && b.rank() == 2) out["audit"] = audit(b, primes_up_to);
    return out;
}

as::FiberQuotient quotient_arg(const std::string& file, const std::string& inline_json) {
    if (file.empty() == inline_json.empty()) throw UsageError("give exactly one of --quotient or --quotient-json");
    const std::string text = file.empty() ? inline_json : read_payload(file);
    return as::json::quotient_from(parse_payload(text, "quotient"));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Arithmetic ruled surfaces over Z: bundles on P^1_Z, fiber transformations, del Pezzo checks"};
    app.require_subcommand(1);
    std::string output_path;
    app.add_option("-o,--output", output_path, "write the JSON document to a file instead of stdout");

    std::function<json()> action;

    // bundle
    auto* bundle = app.add_subcommand("bundle", "rank-2 bundles on P^1 over Z");
    bundle->require_subcommand(1);
    std::uint64_t primes_up_to = 0;

    auto* build = bundle->add_subcommand("build", "bundle with prescribed types, or from a normal form");
    int generic_type = -1;
    std::vector<std::string> jumps;
    int nf_n = -1;
    std::string nf_f = "0";
    build->add_option("--generic-type", generic_type, "generic Hirzebruch type n");
    build->add_option("--jump", jumps, "p:n_i or p:n_i:g:h (jump to type n + 2 n_i at p)");
    build->add_option("-n,--normal-form-n", nf_n, "build from x0^n y0 + x1^n y1 + f y2 instead");
    build->add_option("-f,--form", nf_f, "f for the normal form");
    build->add_option("--primes-up-to", primes_up_to, "also report the splitting type at every prime <= B");
    build->callback([&] {
        action = [&] {
            if ((generic_type >= 0) == (nf_n >= 0)) throw UsageError("give exactly one of --generic-type or -n");
            if (nf_n >= 0) {
                if (!jumps.empty()) throw UsageError("--jump does not apply to normal forms");
                const as::NormalForm nf(nf_n, as::parse_form(nf_f, nf_n));
                return bundle_report(as::bundle_from_normal_form(nf), primes_up_to);
            }
            std::vector<as::PrescribedJump> js;
            for (const auto& s : jumps) js.push_back(parse_jump(s, generic_type));
            return bundle_report(as::prescribed_types(generic_type, js), primes_up_to);
        };
    });

    std::string input = "-";
    auto* profile = bundle->add_subcommand("profile", "splitting profile of a presented bundle");
    profile->add_option("-i,--input", input, "bundle JSON file ('-' for stdin)");
    profile->add_option("--primes-up-to", primes_up_to, "also report the splitting type at every prime <= B");
    profile->callback([&] {
        action = [&] { return bundle_report(bundle_from(parse_payload(read_payload(input), "bundle")), primes_up_to); };
    });

    auto* check = bundle->add_subcommand("check", "parity and 2h0 identities at every jump");
    check->add_option("-i,--input", input, "bundle JSON file ('-' for stdin)");
    check->callback([&] {
        action = [&] {
            const as::BundleHandle b = bundle_from(parse_payload(read_payload(input), "bundle"));
            json parity = json::array(), h0s = json::array();
            for (const auto& e : as::check_parity(b)) parity.push_back({{"p", as::to_decimal(e.prime)}, {"delta", e.delta}});
            for (const auto& e : as::check_type_h0(b))
                h0s.push_back({{"p", as::to_decimal(e.prime)}, {"delta", e.delta}, {"h0", e.h0}});
            return json{{"profile", as::json::profile_report(as::type_profile(b))},
                        {"parity", parity},
                        {"type_h0", h0s},
                        {"passed", true}};
        };
    });

    // transform
    auto* transform = app.add_subcommand("transform", "fiber-type elementary transformations");
    transform->require_subcommand(1);
    std::string quotient_file, quotient_json;
    auto add_transform_options = [&](CLI::App* sub) {
        sub->add_option("-i,--input", input, "bundle JSON file ('-' for stdin)");
        sub->add_option("-q,--quotient", quotient_file, "fiber quotient JSON file");
        sub->add_option("--quotient-json", quotient_json, "fiber quotient JSON inline");
    };
    auto* apply = transform->add_subcommand("apply", "kernel of E -> O(m) on the fiber over p");
    add_transform_options(apply);
    apply->callback([&] {
        action = [&] {
            const as::FiberQuotient q = quotient_arg(quotient_file, quotient_json);
            const as::BundleHandle b = bundle_from(parse_payload(read_payload(input), "bundle"));
            return bundle_report(as::apply(b, q), 0);
        };
    });
    auto* factorize = transform->add_subcommand("factorize", "blow-up factorization record");
    add_transform_options(factorize);
    factorize->callback([&] {
        action = [&] {
            const as::FiberQuotient q = quotient_arg(quotient_file, quotient_json);
            const as::BundleHandle b = bundle_from(parse_payload(read_payload(input), "bundle"));
            return as::json::factorization(as::blowup_factorization(b, q));
        };
    });

    // surface
    auto* surface = app.add_subcommand("surface", "normal-form surfaces in P^1 x P^2");
    surface->require_subcommand(1);
    auto* normal_form = surface->add_subcommand("normal-form", "equation and fiber degrees of x0^n y0 + x1^n y1 + f y2");
    int sn = 0;
    std::string sf = "0";
    bool reduce = false;
    normal_form->add_option("-n", sn, "n >= 0")->required();
    normal_form->add_option("-f,--form", sf, "f, a form of degree n");
    normal_form->add_flag("--reduce", reduce, "kill the x0^n and x1^n coefficients of f first");
    normal_form->callback([&] {
        action = [&] {
            as::NormalForm nf(sn, as::parse_form(sf, sn));
            if (reduce) nf = as::reduce_coefficients(nf);
            const as::EquationRecord rec = as::equation(nf);
            const as::SplittingProfile prof = as::degree_profile(nf);
            json out = {{"equation", rec.text},
                        {"bidegree", json::array({rec.x_degree, rec.y_degree})},
                        {"smooth", rec.smooth},
                        {"profile", as::json::profile_report(prof)}};
            const auto cert = as::constancy_check(nf);
            out["certificate"] = cert ? as::json::certificate(*cert) : json(nullptr);
            return out;
        };
    });

    // delpezzo
    auto* delpezzo = app.add_subcommand("delpezzo", "points of P^2 over Z in general position");
    delpezzo->require_subcommand(1);
    std::string points;
    auto* dcheck = delpezzo->add_subcommand("check", "general position modulo every prime");
    dcheck->add_option("--points", points, "comma-separated a:b:c list")->required();
    dcheck->callback([&] {
        action = [&] {
            const auto c = as::PointConfiguration::parse(points);
            json out = as::json::verdict(as::general_position(c));
            out["points"] = as::json::configuration(c);
            return out;
        };
    });
    auto* classify = delpezzo->add_subcommand("classify", "standardize and classify the blow-up");
    classify->add_option("--points", points, "comma-separated a:b:c list")->required();
    classify->callback([&] {
        action = [&] {
            const auto c = as::PointConfiguration::parse(points);
            const as::Standardization s = as::standardize(c);
            const as::Classification k = as::classify(c);
            json u = json::array();
            for (const auto& row : s.transform) {
                json r = json::array();
                for (const auto& x : row) r.push_back(as::to_decimal(x));
                u.push_back(r);
            }
            return json{{"model", k.model},
                        {"K2", k.k_squared},
                        {"points", k.points},
                        {"transform", u},
                        {"signs", s.signs},
                        {"standard", as::json::configuration(s.standard)}};
        };
    });
    std::size_t classes_r = 0;
    auto* classes = delpezzo->add_subcommand("minus-one-classes", "(-1)-classes on the blow-up at r points");
    classes->add_option("-r", classes_r, "0 <= r <= 8")->required();
    classes->callback([&] {
        action = [&] {
            json list = json::array();
            for (const auto& c : as::minus_one_classes(classes_r)) list.push_back(as::json::lattice_class(c));
            return json{{"r", classes_r}, {"count", list.size()}, {"classes", list}};
        };
    });

    // selftest
    bool all_passed = true;
    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->callback([&] {
        action = [&] {
            json list = json::array();
            for (const auto& r : as::acceptance::run_all()) {
                std::cerr << r.line() << "\n";
                all_passed = all_passed && r.passed;
                list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}});
            }
            return json{{"criteria", list}, {"passed", all_passed}};
        };
    });

    json doc;
    int status = 0;
    try {
        app.parse(argc, argv);
        doc = action();
        if (!all_passed) status = 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        doc = {{"error", "UsageError"}, {"message", e.what()}};
        status = 1;
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        doc = {{"error", "UsageError"}, {"message", e.what()}};
        status = 1;
    } catch (const as::Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        doc = {{"error", e.name()}, {"message", e.what()}};
        if (const auto* ns = dynamic_cast<const as::NotSurjective*>(&e)) doc["witness_degree"] = ns->witness_degree();
        status = 2;
    } catch (const std::invalid_argument& e) {
        doc = {{"error", "UsageError"}, {"message", e.what()}};
        status = 1;
    }
    doc["header"] = header();
    const std::string text = doc.dump(2) + "\n";
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output_path);
        out << text;
    }
    return status;
}
