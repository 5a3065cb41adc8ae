#pragma once

#include <stdexcept>
#include <utility>

#include "waistcert/interval.hpp"
#include "waistcert/rational.hpp"
#include "waistcert/tower.hpp"

namespace waistcert {

// Axis-aligned rectangle in the (w,e)-plane with exact rational edges.
struct Box {
    Rational w_lo, w_hi, e_lo, e_hi;

    Box(Rational wl, Rational wh, Rational el, Rational eh)
        : w_lo(std::move(wl)), w_hi(std::move(wh)), e_lo(std::move(el)), e_hi(std::move(eh)) {
        if (!(w_lo <= w_hi) || !(e_lo <= e_hi)) throw std::invalid_argument("empty box");
    }

    Rational width_w() const { return w_hi - w_lo; }
    Rational width_e() const { return e_hi - e_lo; }
    Rational max_side() const { return std::max(width_w(), width_e()); }

    Interval w_interval() const { return to_interval(w_lo).hull(to_interval(w_hi)); }
    Interval e_interval() const { return to_interval(e_lo).hull(to_interval(e_hi)); }
    RatInterval w_rat_interval() const { return RatInterval(w_lo, w_hi); }
    RatInterval e_rat_interval() const { return RatInterval(e_lo, e_hi); }

    // Canonical subdivision: bisect the longer side, ties split w. The
    // replay walk re-derives the whole tree from this rule alone.
    std::pair<Box, Box> split() const {
        if (width_w() >= width_e()) {
            Rational mid = (w_lo + w_hi) / 2;
            return {Box(w_lo, mid, e_lo, e_hi), Box(mid, w_hi, e_lo, e_hi)};
        }
        Rational mid = (e_lo + e_hi) / 2;
        return {Box(w_lo, w_hi, e_lo, mid), Box(w_lo, w_hi, mid, e_hi)};
    }

    bool contains(const Rational& w, const Rational& e) const {
        return w_lo <= w && w <= w_hi && e_lo <= e && e <= e_hi;
    }

    friend bool operator==(const Box& a, const Box& b) {
        return a.w_lo == b.w_lo && a.w_hi == b.w_hi && a.e_lo == b.e_lo && a.e_hi == b.e_hi;
    }
};

// Closed disk with tower-element center (the center of interest is
// (1, sqrt2)) and rational radius. Containment tests against rational
// boxes are exact: squared distances live in the tower.
struct Disk {
    Tower center_w;
    Tower center_e;
    Rational radius;
};

namespace detail {

// max(|c - lo|, |hi - c|)^2 for a coordinate interval [lo, hi].
inline Tower axis_max_dist_sq(const Tower& c, const Rational& lo, const Rational& hi) {
    Tower a = c - Tower(lo);
    Tower b = Tower(hi) - c;
    Tower a2 = a * a, b2 = b * b;
    return tower_sign(a2 - b2) >= 0 ? a2 : b2;
}

// distance from c to [lo, hi], squared (0 if inside).
inline Tower axis_min_dist_sq(const Tower& c, const Rational& lo, const Rational& hi) {
    if (tower_sign(c - Tower(lo)) < 0) {
        Tower d = Tower(lo) - c;
        return d * d;
    }
    if (tower_sign(c - Tower(hi)) > 0) {
        Tower d = c - Tower(hi);
        return d * d;
    }
    return Tower(Rational(0));
}

}  // namespace detail

// Whole box inside the closed disk?
inline bool box_inside_disk(const Box& b, const Disk& d) {
    Tower dist_sq = detail::axis_max_dist_sq(d.center_w, b.w_lo, b.w_hi) +
                    detail::axis_max_dist_sq(d.center_e, b.e_lo, b.e_hi);
    return tower_sign(dist_sq - Tower(d.radius * d.radius)) <= 0;
}

// Box and closed disk intersect?
inline bool box_meets_disk(const Box& b, const Disk& d) {
    Tower dist_sq = detail::axis_min_dist_sq(d.center_w, b.w_lo, b.w_hi) +
                    detail::axis_min_dist_sq(d.center_e, b.e_lo, b.e_hi);
    return tower_sign(dist_sq - Tower(d.radius * d.radius)) <= 0;
}

}  // namespace waistcert
