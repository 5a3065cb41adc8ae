#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "waistcert/bipoly.hpp"
#include "waistcert/interval.hpp"
#include "waistcert/polynomial.hpp"
#include "waistcert/tower.hpp"

namespace waistcert {

// Minimal-distance law "centers at least 1/(w^a e^b) apart".
struct MinDistanceLaw {
    int w_pow = 0;
    int e_pow = 0;

    double value(double w, double e) const {
        return 1.0 / (std::pow(w, w_pow) * std::pow(e, e_pow));
    }
};

// One disjointness constraint: the configuration is admissible at (w,e)
// only if lhs(w,e) >= 0, whenever the constrained segment has nonzero
// length. Applicability is data, not control flow: evaluation always
// reports all eight values and callers decide which segments degenerate.
struct InequalityDef {
    std::string name;
    BiPoly lhs;
    std::optional<MinDistanceLaw> min_distance;
    std::string pair_description;
    std::string applicability;
};

// The eight constraints. The y and m entries carry the identical
// polynomial although they constrain different ball pairs (minimal
// distances 1/(w^2 e) and 1/w^3); both are kept as stated rather than
// merged.
inline const std::vector<InequalityDef>& bank() {
    static const std::vector<InequalityDef> defs = [] {
        std::vector<InequalityDef> v;
        v.push_back({"lower-e", bipoly_from_string("e*w - 1"), MinDistanceLaw{1, 0},
                     "1/w-ball against the full-sized ball it touches",
                     "segment e has nonzero length"});
        v.push_back({"upper-e", bipoly_from_string("w^4 - e^2*w^2 + 1"), std::nullopt,
                     "1/w-ball against the nearest translate of its full-sized ball",
                     "always (angle at most pi/2)"});
        v.push_back({"v",
                     bipoly_from_string("w^12 - w^8 - e^4*w^8 + e^6*w^6 - e^2*w^6 + 2*w^4 "
                                        "- 2*e^4*w^4 + 3*e^2*w^2 - 2"),
                     MinDistanceLaw{4, 1}, "1/w^3-ball against the 1/e-ball",
                     "segment v has nonzero length"});
        v.push_back({"y", bipoly_from_string("e^4*w^2 + w^6 - e^2*w^4 - w^2 - e^2"),
                     MinDistanceLaw{2, 1}, "1/e-ball against a translated 1/w-ball",
                     "segment y has nonzero length"});
        v.push_back({"s",
                     bipoly_from_string("w^14 - 2*e^2*w^12 + 2*e^4*w^10 - 2*w^10 + 2*w^6 - 1"),
                     MinDistanceLaw{6, 0}, "two 1/w^3-balls across the s segment",
                     "segment s has nonzero length"});
        v.push_back({"m", bipoly_from_string("e^4*w^2 + w^6 - e^2*w^4 - w^2 - e^2"),
                     MinDistanceLaw{3, 0}, "full-sized ball against a 1/w^3-ball",
                     "segment m has nonzero length"});
        v.push_back({"p",
                     bipoly_from_string("2*w^10 + 2*w^2 + e^4*w^6 - 2*e^2*w^4 - 2*e^2*w^8 - 1"),
                     MinDistanceLaw{4, 0}, "1/w-ball against a 1/w^3-ball",
                     "segment p has nonzero length"});
        v.push_back({"k",
                     bipoly_from_string("3*w^14 - 4*w^12*e^2 + 2*w^10*e^4 - 4*w^8*e^2 "
                                        "+ 6*w^6 - 1"),
                     MinDistanceLaw{6, 0}, "the two 1/w^3-balls flanking a 1/w-ball pair",
                     "segment k has nonzero length"});
        return v;
    }();
    return defs;
}

inline const InequalityDef& inequality(const std::string& name) {
    for (const auto& def : bank())
        if (def.name == name) return def;
    throw std::invalid_argument("unknown inequality: " + name);
}

enum class LocusClass { violated, equality, strict };

// Exact three-way sign classification of an inequality at a point.
// Throws if the point is not tower-representable for this polynomial
// (use interval evaluation instead).
inline LocusClass locus_membership(const std::string& name, const ExactPoint& pt) {
    int s = tower_sign(eval_exact(inequality(name).lhs, pt));
    return s < 0 ? LocusClass::violated : (s == 0 ? LocusClass::equality : LocusClass::strict);
}

struct ExactEntry {
    std::string name;
    std::optional<Tower> value;  // absent when not tower-representable
    std::optional<int> sign;
    std::string applicability;
};

struct IntervalEntry {
    std::string name;
    Interval value;
    // -1 strictly negative, +1 strictly positive, 0 straddles zero
    int classification = 0;
    std::string applicability;
};

inline std::vector<ExactEntry> evaluate_all(const ExactPoint& pt) {
    std::vector<ExactEntry> out;
    for (const auto& def : bank()) {
        ExactEntry entry{def.name, std::nullopt, std::nullopt, def.applicability};
        try {
            Tower v = eval_exact(def.lhs, pt);
            entry.value = v;
            entry.sign = tower_sign(v);
        } catch (const std::domain_error&) {
            // Not representable at this point; report the gap.
        }
        out.push_back(std::move(entry));
    }
    return out;
}

inline std::vector<IntervalEntry> evaluate_all(const Interval& w, const Interval& e) {
    std::vector<IntervalEntry> out;
    for (const auto& def : bank()) {
        Interval v = BoxEvaluator(def.lhs).eval(w, e);
        IntervalEntry entry{def.name, v, 0, def.applicability};
        if (v.strictly_negative()) entry.classification = -1;
        else if (v.strictly_positive()) entry.classification = 1;
        out.push_back(std::move(entry));
    }
    return out;
}

// Substitutes e = w^2 and reduces modulo w^6 - w^2 - 1: the exact value
// of an inequality along the coincident-ball parameter locus, as a
// canonical remainder of degree below six.
inline UniPoly reduce_at_coincident_parameters(const BiPoly& lhs) {
    UniPoly substituted = lhs.substitute_e_w_squared();
    UniPoly modulus = unipoly_from_string("w^6 - w^2 - 1");
    return divide(substituted, modulus).remainder;
}

// --- report rendering ------------------------------------------------------

namespace detail {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline const char* sign_word(int s) { return s < 0 ? "violated" : (s == 0 ? "equality" : "strict"); }

}  // namespace detail

inline std::string report_to_text(const std::vector<ExactEntry>& entries) {
    std::string out = "inequality  sign      exact value  (applies when)\n";
    for (const auto& e : entries) {
        std::string value = e.value ? to_string(*e.value) : "(not tower-representable)";
        std::string sign_str = e.sign ? detail::sign_word(*e.sign) : "unknown";
        char line[256];
        std::snprintf(line, sizeof line, "%-10s  %-8s  %s  (%s)\n", e.name.c_str(),
                      sign_str.c_str(), value.c_str(), e.applicability.c_str());
        out += line;
    }
    return out;
}

inline std::string report_to_text(const std::vector<IntervalEntry>& entries) {
    std::string out = "inequality  sign       enclosure  (applies when)\n";
    for (const auto& e : entries) {
        const char* cls = e.classification < 0   ? "negative"
                          : e.classification > 0 ? "positive"
                                                 : "straddles";
        char line[256];
        std::snprintf(line, sizeof line, "%-10s  %-9s  [%s, %s]  (%s)\n", e.name.c_str(), cls,
                      detail::format_double(e.value.lo).c_str(),
                      detail::format_double(e.value.hi).c_str(), e.applicability.c_str());
        out += line;
    }
    return out;
}

inline nlohmann::json report_to_json(const std::vector<ExactEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json j;
        j["name"] = e.name;
        j["mode"] = "exact";
        if (e.value) j["value"] = to_string(*e.value);
        if (e.sign) j["sign"] = detail::sign_word(*e.sign);
        j["applicability"] = e.applicability;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline nlohmann::json report_to_json(const std::vector<IntervalEntry>& entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json j;
        j["name"] = e.name;
        j["mode"] = "interval";
        j["value"] = {e.value.lo, e.value.hi};
        j["sign"] = e.classification < 0 ? "violated"
                    : e.classification > 0 ? "strict"
                                           : "straddles-zero";
        j["applicability"] = e.applicability;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace waistcert
