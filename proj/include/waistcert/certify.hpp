#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "waistcert/bipoly.hpp"
#include "waistcert/box.hpp"
#include "waistcert/interval.hpp"
#include "waistcert/rational.hpp"
#include "waistcert/tower.hpp"

namespace waistcert {

// Sound enclosure of {p(w,e) : (w,e) in b}, directed-rounding mode.
inline Interval eval_on_box(const BiPoly& p, const Box& b) {
    return BoxEvaluator(p).eval(b.w_interval(), b.e_interval());
}

// Strict mode: exact rational interval Horner, no rounding at all.
inline RatInterval eval_on_box_exact(const BiPoly& p, const Box& b) {
    return ExactBoxEvaluator(p).eval(b.w_rat_interval(), b.e_rat_interval());
}

enum class SignRequest { strictly_negative, strictly_positive };

struct BoxSignCertificate {
    Box box;
    SignRequest request;
    Interval enclosure;  // the bound that proves the sign
};

// Certificate iff the interval enclosure is strictly on the requested
// side of zero; nullopt means inconclusive (not a refutation).
inline std::optional<BoxSignCertificate> certify_sign_on_box(const BiPoly& p, const Box& b,
                                                             SignRequest request) {
    Interval iv = eval_on_box(p, b);
    bool ok = (request == SignRequest::strictly_negative) ? iv.strictly_negative()
                                                          : iv.strictly_positive();
    if (!ok) return std::nullopt;
    return BoxSignCertificate{b, request, iv};
}

// --- adaptive coverage ----------------------------------------------------

enum class LeafStatus { excluded, witness };

struct CoverageLeaf {
    Box box;
    LeafStatus status;
    int witness = -1;        // predicate index; -1 for excluded leaves
    double bound_hi = 0.0;   // upper interval bound of the witness on the box
};

enum class CoverageOutcome { complete, counterexample, budget_exceeded };

struct NamedPredicate {
    std::string name;
    BiPoly polynomial;
};

struct CoverageRequest {
    Box region;
    std::vector<NamedPredicate> predicates;
    std::vector<Disk> exclusions;
    Rational min_box = rat(1, 1048576);  // 2^-20
    std::uint64_t budget = 10000000;
    int jobs = 1;
    // Extra greedy halvings that sharpen a counterexample onto the
    // uncoverable point before it is reported.
    int counterexample_refinement = 20;
    std::optional<Rational> delta;  // carried into the certificate as metadata

    CoverageRequest(Box r, std::vector<NamedPredicate> p)
        : region(std::move(r)), predicates(std::move(p)) {}
};

struct CoverageResult {
    CoverageOutcome outcome = CoverageOutcome::complete;
    std::vector<CoverageLeaf> leaves;  // canonical depth-first order
    std::optional<Box> counterexample;
    std::uint64_t boxes_processed = 0;
    CoverageRequest request;

    explicit CoverageResult(CoverageRequest req) : request(std::move(req)) {}
    bool complete() const { return outcome == CoverageOutcome::complete; }
};

namespace detail {

struct CoverWork {
    const CoverageRequest* req;
    std::vector<BoxEvaluator> evaluators;
    std::atomic<std::uint64_t> processed{0};
    int parallel_depth = 0;

    struct Result {
        CoverageOutcome outcome = CoverageOutcome::complete;
        std::vector<CoverageLeaf> leaves;
        std::optional<Box> counterexample;
    };

    // A failing box at min_box granularity abuts a genuinely uncoverable
    // point, but need not contain it: the enclosure slack makes a whole
    // neighborhood fail. Sharpen the report in two moves. First lift the
    // candidate to an ancestor node wide enough to straddle any split
    // line separating it from the uncoverable point; then repeatedly
    // descend into the failing child whose best predicate bound is
    // farthest from certifying. At small scales the gradient signal
    // dominates the slack, so the walk homes onto the point.
    Box refine_counterexample(const Box& candidate) {
        constexpr int lift = 12;
        std::vector<Box> path;
        path.push_back(req->region);
        while (!(path.back() == candidate)) {
            auto [left, right] = path.back().split();
            bool in_left = left.w_lo <= candidate.w_lo && candidate.w_hi <= left.w_hi &&
                           left.e_lo <= candidate.e_lo && candidate.e_hi <= left.e_hi;
            path.push_back(in_left ? left : right);
        }
        std::size_t idx = path.size() > lift ? path.size() - 1 - lift : 0;
        Box box = path[idx];
        int levels = req->counterexample_refinement + lift;
        for (int level = 0; level < levels; ++level) {
            auto [left, right] = box.split();
            std::optional<Box> best;
            double best_score = 0;
            for (const Box& child : {left, right}) {
                processed.fetch_add(1, std::memory_order_relaxed);
                bool excluded = false;
                for (const Disk& d : req->exclusions) excluded = excluded || box_inside_disk(child, d);
                if (excluded) continue;
                Interval w = child.w_interval(), e = child.e_interval();
                double worst = std::numeric_limits<double>::infinity();
                bool certifies = false;
                for (const auto& ev : evaluators) {
                    Interval iv = ev.eval(w, e);
                    certifies = certifies || iv.strictly_negative();
                    worst = std::min(worst, iv.hi);
                }
                if (certifies) continue;
                if (!best || worst > best_score) {
                    best = child;
                    best_score = worst;
                }
            }
            if (!best) break;  // failure evaporated; the parent already qualifies
            box = *best;
        }
        // The walk is heuristic; the reported box must still satisfy the
        // counterexample contract. Fall back to the original candidate
        // otherwise.
        if (box.max_side() > req->min_box) return candidate;
        for (const Disk& d : req->exclusions)
            if (box_meets_disk(box, d)) return candidate;
        Interval w = box.w_interval(), e = box.e_interval();
        for (const auto& ev : evaluators)
            if (ev.eval(w, e).strictly_negative()) return candidate;
        return box;
    }

    Result process(const Box& box, int depth) {
        Result res;
        if (processed.fetch_add(1, std::memory_order_relaxed) >= req->budget) {
            res.outcome = CoverageOutcome::budget_exceeded;
            return res;
        }
        for (const Disk& d : req->exclusions) {
            if (box_inside_disk(box, d)) {
                res.leaves.push_back({box, LeafStatus::excluded, -1, 0.0});
                return res;
            }
        }
        Interval w = box.w_interval(), e = box.e_interval();
        for (std::size_t i = 0; i < evaluators.size(); ++i) {
            Interval iv = evaluators[i].eval(w, e);
            if (iv.strictly_negative()) {
                res.leaves.push_back({box, LeafStatus::witness, static_cast<int>(i), iv.hi});
                return res;
            }
        }
        if (box.max_side() <= req->min_box) {
            bool meets = false;
            for (const Disk& d : req->exclusions) meets = meets || box_meets_disk(box, d);
            if (!meets) {
                res.outcome = CoverageOutcome::counterexample;
                res.counterexample = refine_counterexample(box);
                return res;
            }
            // Box straddles an exclusion boundary: keep splitting; the
            // budget bounds the descent.
        }
        auto [left, right] = box.split();
        Result lres, rres;
        if (depth < parallel_depth) {
            auto rfut = std::async(std::launch::async,
                                   [&] { return process(right, depth + 1); });
            lres = process(left, depth + 1);
            rres = rfut.get();
        } else {
            lres = process(left, depth + 1);
            // Left-to-right short-circuit keeps the first (canonical)
            // counterexample deterministic.
            if (lres.outcome != CoverageOutcome::complete) return lres;
            rres = process(right, depth + 1);
        }
        if (lres.outcome != CoverageOutcome::complete) return lres;
        res = std::move(lres);
        res.outcome = rres.outcome;
        res.counterexample = rres.counterexample;
        res.leaves.insert(res.leaves.end(), rres.leaves.begin(), rres.leaves.end());
        return res;
    }
};

}  // namespace detail

// Recursively subdivides the region until every box is either inside an
// exclusion disk or carries a strictly-negative witness predicate. The
// leaf list, in canonical depth-first order, is the certificate; it is
// identical for any job count.
inline CoverageResult adaptive_cover(CoverageRequest req) {
    if (!(req.min_box > 0)) throw std::invalid_argument("min_box must be positive");
    for (const Disk& d : req.exclusions)
        if (!(d.radius > 0)) throw std::invalid_argument("exclusion radius must be positive");
    if (req.predicates.empty()) throw std::invalid_argument("no predicates given");

    detail::CoverWork work;
    work.req = &req;
    for (const auto& p : req.predicates) work.evaluators.emplace_back(p.polynomial);
    int depth = 0;
    for (int j = 1; j < req.jobs; j *= 2) ++depth;
    work.parallel_depth = req.jobs > 1 ? depth + 2 : 0;

    auto partial = work.process(req.region, 0);
    CoverageResult result(std::move(req));
    result.outcome = partial.outcome;
    result.leaves = std::move(partial.leaves);
    result.counterexample = partial.counterexample;
    result.boxes_processed = work.processed.load();
    return result;
}

// --- certificate serialization and replay ---------------------------------

namespace detail {

inline std::string double_to_hex(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

inline double hex_to_double(const std::string& s) {
    return std::strtod(s.c_str(), nullptr);
}

inline nlohmann::json box_to_json(const Box& b) {
    return nlohmann::json::array(
        {to_string(b.w_lo), to_string(b.w_hi), to_string(b.e_lo), to_string(b.e_hi)});
}

inline Box box_from_json(const nlohmann::json& j) {
    return Box(rat_from_string(j.at(0).get<std::string>()),
               rat_from_string(j.at(1).get<std::string>()),
               rat_from_string(j.at(2).get<std::string>()),
               rat_from_string(j.at(3).get<std::string>()));
}

}  // namespace detail

inline nlohmann::json certificate_to_json(const CoverageResult& res) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["kind"] = "coverage-certificate";
    doc["region"] = detail::box_to_json(res.request.region);
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& p : res.request.predicates)
        preds.push_back({{"name", p.name}, {"polynomial", to_string(p.polynomial)}});
    doc["predicates"] = preds;
    nlohmann::json excl = nlohmann::json::array();
    for (const auto& d : res.request.exclusions)
        excl.push_back({{"center_w", to_string(d.center_w)},
                        {"center_e", to_string(d.center_e)},
                        {"radius", to_string(d.radius)}});
    doc["exclusions"] = excl;
    if (res.request.delta) doc["delta"] = to_string(*res.request.delta);
    doc["min_box"] = to_string(res.request.min_box);
    doc["budget"] = res.request.budget;
    doc["boxes_processed"] = res.boxes_processed;
    doc["result"] = res.outcome == CoverageOutcome::complete        ? "complete"
                    : res.outcome == CoverageOutcome::counterexample ? "counterexample"
                                                                     : "budget-exceeded";
    if (res.counterexample) doc["counterexample"] = detail::box_to_json(*res.counterexample);
    nlohmann::json leaves = nlohmann::json::array();
    for (const auto& leaf : res.leaves) {
        nlohmann::json l;
        l["box"] = detail::box_to_json(leaf.box);
        if (leaf.status == LeafStatus::excluded) {
            l["status"] = "excluded";
        } else {
            l["status"] = "witness";
            l["witness"] = res.request.predicates[static_cast<std::size_t>(leaf.witness)].name;
            l["bound_hi"] = detail::double_to_hex(leaf.bound_hi);
        }
        leaves.push_back(std::move(l));
    }
    doc["leaves"] = std::move(leaves);
    return doc;
}

struct ReplayReport {
    bool ok = false;
    std::string message;
    std::size_t leaves_verified = 0;
};

namespace detail {

struct ReplayWalker {
    const std::vector<nlohmann::json>* leaves;
    const std::vector<BoxEvaluator>* evaluators;
    const std::vector<std::string>* names;
    const std::vector<Disk>* exclusions;
    std::size_t cursor = 0;
    Rational floor;  // structural safety net against runaway descent

    bool fail(ReplayReport& rep, const std::string& msg) {
        rep.ok = false;
        rep.message = msg;
        return false;
    }

    bool walk(const Box& box, ReplayReport& rep) {
        if (cursor < leaves->size()) {
            const nlohmann::json& leaf = (*leaves)[cursor];
            Box recorded = box_from_json(leaf.at("box"));
            if (recorded == box) {
                ++cursor;
                std::string status = leaf.at("status").get<std::string>();
                if (status == "excluded") {
                    for (const Disk& d : *exclusions)
                        if (box_inside_disk(box, d)) {
                            ++rep.leaves_verified;
                            return true;
                        }
                    return fail(rep, "excluded leaf is not inside any exclusion disk");
                }
                std::string witness = leaf.at("witness").get<std::string>();
                std::size_t idx = names->size();
                for (std::size_t i = 0; i < names->size(); ++i)
                    if ((*names)[i] == witness) idx = i;
                if (idx == names->size()) return fail(rep, "unknown witness " + witness);
                Interval iv = (*evaluators)[idx].eval(box.w_interval(), box.e_interval());
                if (!iv.strictly_negative())
                    return fail(rep, "witness " + witness + " fails to certify its leaf");
                double recorded_hi = hex_to_double(leaf.at("bound_hi").get<std::string>());
                if (iv.hi != recorded_hi)
                    return fail(rep, "stored bound does not match recomputation for " + witness);
                ++rep.leaves_verified;
                return true;
            }
        }
        if (box.max_side() <= floor)
            return fail(rep, "leaf structure does not tile the region");
        auto [left, right] = box.split();
        return walk(left, rep) && walk(right, rep);
    }
};

}  // namespace detail

// Re-verifies a stored certificate without searching: the canonical
// subdivision walk must reproduce the leaf sequence exactly (which
// re-proves the gap-free, overlap-free tiling), and every leaf must
// re-certify with the identical bound.
inline ReplayReport replay_certificate(const nlohmann::json& doc) {
    ReplayReport rep;
    try {
        if (doc.at("kind").get<std::string>() != "coverage-certificate") {
            rep.message = "not a coverage certificate";
            return rep;
        }
        if (doc.at("result").get<std::string>() != "complete") {
            rep.message = "certificate records a failed run (" +
                          doc.at("result").get<std::string>() + "); nothing to re-prove";
            return rep;
        }
        Box region = detail::box_from_json(doc.at("region"));
        std::vector<BoxEvaluator> evaluators;
        std::vector<std::string> names;
        for (const auto& p : doc.at("predicates")) {
            names.push_back(p.at("name").get<std::string>());
            evaluators.emplace_back(bipoly_from_string(p.at("polynomial").get<std::string>()));
        }
        std::vector<Disk> exclusions;
        for (const auto& d : doc.at("exclusions"))
            exclusions.push_back(Disk{tower_from_string(d.at("center_w").get<std::string>()),
                                      tower_from_string(d.at("center_e").get<std::string>()),
                                      rat_from_string(d.at("radius").get<std::string>())});
        std::vector<nlohmann::json> leaves;
        for (const auto& l : doc.at("leaves")) leaves.push_back(l);

        detail::ReplayWalker walker;
        walker.leaves = &leaves;
        walker.evaluators = &evaluators;
        walker.names = &names;
        walker.exclusions = &exclusions;
        walker.floor = rat_from_string(doc.at("min_box").get<std::string>()) / 1048576;
        if (!walker.walk(region, rep)) return rep;
        if (walker.cursor != leaves.size()) {
            rep.ok = false;
            rep.message = "certificate has extra leaves outside the region";
            return rep;
        }
        rep.ok = true;
        rep.message = "verified " + std::to_string(rep.leaves_verified) + " leaves";
        return rep;
    } catch (const std::exception& ex) {
        rep.ok = false;
        rep.message = std::string("malformed certificate: ") + ex.what();
        return rep;
    }
}

// --- segment certification -------------------------------------------------

enum class EndpointPolicy { exclude_radius, gradient_bound };

struct SegmentCertificate {
    bool certified = false;
    std::string detail;
    bool endpoint0_vanishes = false;
    bool endpoint1_vanishes = false;
    bool endpoint0_excluded = false;
    bool endpoint1_excluded = false;
    std::size_t pieces = 0;  // discharged parameter subintervals
};

namespace detail {

inline Interval coordinate_enclosure_w(const ExactPoint& pt) {
    return pt.w ? to_interval(*pt.w) : interval_sqrt(to_interval(pt.w2));
}
inline Interval coordinate_enclosure_e(const ExactPoint& pt) {
    return pt.e ? to_interval(*pt.e) : interval_sqrt(to_interval(pt.e2));
}

struct SegmentGeometry {
    Interval w0, e0, dw, de;

    Interval eval_piece(const BoxEvaluator& ev, const Rational& t_lo, const Rational& t_hi) const {
        Interval t = to_interval(t_lo).hull(to_interval(t_hi));
        return ev.eval(w0 + t * dw, e0 + t * de);
    }
};

// Adaptive 1-D subdivision of the parameter range [a, b].
inline bool certify_range(const SegmentGeometry& geo, const BoxEvaluator& ev, SignRequest want,
                          const Rational& a, const Rational& b, const Rational& t_floor,
                          std::size_t& pieces, std::string& why) {
    if (!(a < b)) return true;
    Interval iv = geo.eval_piece(ev, a, b);
    bool ok = (want == SignRequest::strictly_negative) ? iv.strictly_negative()
                                                       : iv.strictly_positive();
    if (ok) {
        ++pieces;
        return true;
    }
    if (b - a <= t_floor) {
        why = "sign not certifiable near t in [" + to_string(a) + ", " + to_string(b) + "]";
        return false;
    }
    Rational mid = (a + b) / 2;
    return certify_range(geo, ev, want, a, mid, t_floor, pieces, why) &&
           certify_range(geo, ev, want, mid, b, t_floor, pieces, why);
}

}  // namespace detail

// Certifies a strict sign of p on the open segment from p0 to p1.
// Endpoints at which p vanishes exactly (confirmed in the tower) are
// handled by the chosen policy: excluded within euclidean radius
// `radius`, or discharged through a certified sign of the directional
// derivative on an endpoint neighborhood.
inline SegmentCertificate certify_sign_on_segment(const BiPoly& p, const ExactPoint& p0,
                                                  const ExactPoint& p1, SignRequest want,
                                                  EndpointPolicy policy,
                                                  const Rational& radius = rat(1, 1000)) {
    SegmentCertificate cert;
    detail::SegmentGeometry geo;
    geo.w0 = detail::coordinate_enclosure_w(p0);
    geo.e0 = detail::coordinate_enclosure_e(p0);
    geo.dw = detail::coordinate_enclosure_w(p1) - geo.w0;
    geo.de = detail::coordinate_enclosure_e(p1) - geo.e0;

    Tower v0 = eval_exact(p, p0);
    Tower v1 = eval_exact(p, p1);
    cert.endpoint0_vanishes = v0.is_zero();
    cert.endpoint1_vanishes = v1.is_zero();
    int want_sign = (want == SignRequest::strictly_negative) ? -1 : 1;
    if (!v0.is_zero() && tower_sign(v0) != want_sign) {
        cert.detail = "endpoint value at " + p0.name + " has the wrong sign";
        return cert;
    }
    if (!v1.is_zero() && tower_sign(v1) != want_sign) {
        cert.detail = "endpoint value at " + p1.name + " has the wrong sign";
        return cert;
    }

    BoxEvaluator ev(p);
    const Rational t_floor = rat(1, 1048576);
    Rational ta(0), tb(1);

    if (policy == EndpointPolicy::exclude_radius && radius > 0) {
        // |segment point - endpoint| = t * |p1 - p0|; exclude t below
        // radius / |p1 - p0| (rounded down, staying inside the radius).
        Interval len_sq = geo.dw * geo.dw + geo.de * geo.de;
        double len_hi = interval_sqrt(len_sq).hi;
        double frac = rat_to_double(radius) / len_hi;
        Rational t_excl(frac * 0.999);
        t_excl.canonicalize();
        if (cert.endpoint0_vanishes) {
            ta = t_excl;
            cert.endpoint0_excluded = true;
        }
        if (cert.endpoint1_vanishes) {
            tb = 1 - t_excl;
            cert.endpoint1_excluded = true;
        }
    } else if (policy == EndpointPolicy::gradient_bound) {
        // Directional derivative along the segment.
        BoxEvaluator ev_w(p.derivative_w());
        BoxEvaluator ev_e(p.derivative_e());
        auto derivative_on = [&](const Rational& a, const Rational& b) {
            Interval t = to_interval(a).hull(to_interval(b));
            Interval w = geo.w0 + t * geo.dw;
            Interval e = geo.e0 + t * geo.de;
            return ev_w.eval(w, e) * geo.dw + ev_e.eval(w, e) * geo.de;
        };
        auto discharge_endpoint = [&](bool at_start) -> std::optional<Rational> {
            // Leaving a zero at t=0, p picks up the sign of the
            // derivative; approaching a zero at t=1, the sign of minus
            // the derivative.
            bool want_negative_deriv = at_start == (want == SignRequest::strictly_negative);
            Rational width = rat(1, 64);
            while (width >= t_floor) {
                Interval d = at_start ? derivative_on(Rational(0), width)
                                      : derivative_on(1 - width, Rational(1));
                bool ok = want_negative_deriv ? d.strictly_negative() : d.strictly_positive();
                if (ok) return width;
                width /= 2;
            }
            return std::nullopt;
        };
        if (cert.endpoint0_vanishes) {
            auto got = discharge_endpoint(true);
            if (!got) {
                cert.detail = "directional derivative not certifiable near " + p0.name;
                return cert;
            }
            ta = *got;
            cert.endpoint0_excluded = true;
        }
        if (cert.endpoint1_vanishes) {
            auto got = discharge_endpoint(false);
            if (!got) {
                cert.detail = "directional derivative not certifiable near " + p1.name;
                return cert;
            }
            tb = 1 - *got;
            cert.endpoint1_excluded = true;
        }
    }

    std::string why;
    if (!detail::certify_range(geo, ev, want, ta, tb, t_floor, cert.pieces, why)) {
        cert.detail = why;
        return cert;
    }
    cert.certified = true;
    cert.detail = "certified on t in [" + to_string(ta) + ", " + to_string(tb) + "] in " +
                  std::to_string(cert.pieces) + " pieces";
    return cert;
}

}  // namespace waistcert
