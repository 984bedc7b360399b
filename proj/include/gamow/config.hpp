#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "gamow/errors.hpp"
#include "gamow/potential.hpp"
#include "gamow/resonance.hpp"
#include "gamow/testfunction.hpp"
#include "gamow/types.hpp"

namespace gamow {

struct TestFnSpec {
    int p = 1;
    double c = 0.5;
    double sigma = 0.08;
    bool operator==(const TestFnSpec &) const = default;
};

struct OutputSpec {
    std::string path;            // empty: stdout
    std::string format = "csv";  // "csv" | "json"
    bool operator==(const OutputSpec &) const = default;
};

/// Every physics and numerics default in one place.  The CLI and the verify
/// suite read these; nothing else hard-codes a constant.
struct RunConfig {
    PhysConsts consts{};                       // hbar = 1, mass = 0.5
    PiecewiseConstantPotential potential = shell_potential(); // a=1, b=2, V0=10
    QuadratureSettings numerics{};             // 1e-12 abs, 1e-10 rel, 2000 subdiv
    Region search_region = default_search_region();
    std::vector<TestFnSpec> test_functions{TestFnSpec{}};
    OutputSpec output{};

    /// Construct (and thereby validate) the configured test functions.
    std::vector<TestFunction> build_test_functions() const {
        std::vector<TestFunction> out;
        for (const auto &spec : test_functions)
            out.push_back(make_test_function(spec.p, spec.c, spec.sigma, potential));
        return out;
    }
};

namespace detail {

using json = nlohmann::ordered_json;

inline void reject_unknown_keys(const json &obj, std::initializer_list<const char *> known,
                                const std::string &scope) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char *k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw ValidationError("unknown key \"" + (scope.empty() ? it.key() : scope + "." + it.key()) + "\"");
    }
}

inline double require_number(const json &v, const std::string &key) {
    if (!v.is_number())
        throw ValidationError("key \"" + key + "\" must be a number");
    return v.get<double>();
}

} // namespace detail

/// Parse a structured config document.  Unknown keys are rejected by name;
/// physical invariants (boundary ordering, test-function negligibility at
/// the discontinuities) are checked here so downstream code can assume them.
inline RunConfig parse_config(const std::string &text) {
    detail::json doc;
    try {
        doc = detail::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ValidationError("config root must be an object");
    detail::reject_unknown_keys(doc,
                                {"hbar", "mass", "geometry", "boundaries", "heights",
                                 "region", "quad", "testfn", "output"},
                                "");

    RunConfig cfg;
    if (doc.contains("hbar")) cfg.consts.hbar = detail::require_number(doc["hbar"], "hbar");
    if (doc.contains("mass")) cfg.consts.mass = detail::require_number(doc["mass"], "mass");
    if (!(cfg.consts.hbar > 0.0)) throw ValidationError("hbar must be positive");
    if (!(cfg.consts.mass > 0.0)) throw ValidationError("mass must be positive");

    Geometry geo = Geometry::radial;
    if (doc.contains("geometry")) {
        const std::string g = doc["geometry"].get<std::string>();
        if (g == "radial") geo = Geometry::radial;
        else if (g == "line") geo = Geometry::line;
        else throw ValidationError("geometry must be \"radial\" or \"line\"");
    }
    if (doc.contains("boundaries") != doc.contains("heights"))
        throw ValidationError("boundaries and heights must be given together");
    if (doc.contains("boundaries")) {
        std::vector<double> bounds, heights;
        for (const auto &v : doc["boundaries"]) bounds.push_back(detail::require_number(v, "boundaries"));
        for (const auto &v : doc["heights"]) heights.push_back(detail::require_number(v, "heights"));
        try {
            cfg.potential = PiecewiseConstantPotential(geo, bounds, heights);
        } catch (const DomainViolation &e) {
            throw ValidationError(e.what());
        }
    } else if (geo == Geometry::line) {
        cfg.potential = barrier_potential();
    }

    if (doc.contains("region")) {
        const auto &r = doc["region"];
        detail::reject_unknown_keys(r, {"re_min", "re_max", "im_min", "im_max"}, "region");
        for (const char *k : {"re_min", "re_max", "im_min", "im_max"})
            if (!r.contains(k)) throw ValidationError(std::string("region requires key \"") + k + "\"");
        cfg.search_region = Region{r["re_min"].get<double>(), r["re_max"].get<double>(),
                                   r["im_min"].get<double>(), r["im_max"].get<double>()};
        if (!(cfg.search_region.re_min < cfg.search_region.re_max) ||
            !(cfg.search_region.im_min < cfg.search_region.im_max))
            throw ValidationError("region must have re_min < re_max and im_min < im_max");
    }

    if (doc.contains("quad")) {
        const auto &q = doc["quad"];
        detail::reject_unknown_keys(q, {"abs_tol", "rel_tol", "max_subdiv"}, "quad");
        if (q.contains("abs_tol")) cfg.numerics.abs_tol = detail::require_number(q["abs_tol"], "quad.abs_tol");
        if (q.contains("rel_tol")) cfg.numerics.rel_tol = detail::require_number(q["rel_tol"], "quad.rel_tol");
        if (q.contains("max_subdiv")) cfg.numerics.max_subdivisions = q["max_subdiv"].get<int>();
        if (!(cfg.numerics.abs_tol > 0.0) || !(cfg.numerics.rel_tol > 0.0) ||
            cfg.numerics.max_subdivisions < 1)
            throw ValidationError("quad tolerances must be positive and max_subdiv >= 1");
    }

    if (doc.contains("testfn")) {
        cfg.test_functions.clear();
        for (const auto &t : doc["testfn"]) {
            detail::reject_unknown_keys(t, {"p", "c", "sigma"}, "testfn");
            TestFnSpec spec;
            if (t.contains("p")) spec.p = t["p"].get<int>();
            if (t.contains("c")) spec.c = detail::require_number(t["c"], "testfn.c");
            if (t.contains("sigma")) spec.sigma = detail::require_number(t["sigma"], "testfn.sigma");
            if (spec.p < 1) throw ValidationError("testfn.p must be >= 1");
            if (!(spec.sigma > 0.0)) throw ValidationError("testfn.sigma must be positive");
            cfg.test_functions.push_back(spec);
        }
    }

    if (doc.contains("output")) {
        const auto &o = doc["output"];
        detail::reject_unknown_keys(o, {"path", "format"}, "output");
        if (o.contains("path")) cfg.output.path = o["path"].get<std::string>();
        if (o.contains("format")) cfg.output.format = o["format"].get<std::string>();
        if (cfg.output.format != "csv" && cfg.output.format != "json")
            throw ValidationError("output.format must be \"csv\" or \"json\"");
    }

    // Domain membership: each test function must be negligible at every
    // potential discontinuity.  Construction runs that check and names the
    // offending radius.
    try {
        (void)cfg.build_test_functions();
    } catch (const DomainViolation &e) {
        throw ValidationError(e.what());
    } catch (const Error &e) {
        throw ValidationError(e.what());
    }
    return cfg;
}

/// Emit a document that parses back to an identical RunConfig.
inline std::string config_to_text(const RunConfig &cfg) {
    detail::json doc;
    doc["hbar"] = cfg.consts.hbar;
    doc["mass"] = cfg.consts.mass;
    doc["geometry"] = cfg.potential.geometry == Geometry::radial ? "radial" : "line";
    doc["boundaries"] = cfg.potential.boundaries;
    doc["heights"] = cfg.potential.heights;
    doc["region"] = {{"re_min", cfg.search_region.re_min},
                     {"re_max", cfg.search_region.re_max},
                     {"im_min", cfg.search_region.im_min},
                     {"im_max", cfg.search_region.im_max}};
    doc["quad"] = {{"abs_tol", cfg.numerics.abs_tol},
                   {"rel_tol", cfg.numerics.rel_tol},
                   {"max_subdiv", cfg.numerics.max_subdivisions}};
    detail::json fns = detail::json::array();
    for (const auto &t : cfg.test_functions)
        fns.push_back({{"p", t.p}, {"c", t.c}, {"sigma", t.sigma}});
    doc["testfn"] = fns;
    doc["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
    return doc.dump(2) + "\n";
}

} // namespace gamow
