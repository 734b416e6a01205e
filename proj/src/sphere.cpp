#include "dynamo/sphere.hpp"

#include <algorithm>

namespace dynamo {

namespace {

inline cplx coord_in(const SpherePoint& p, bool inverted) {
    if (!inverted) return p.inf ? cplx(1e300, 0) : p.z;
    if (p.inf) return cplx(0, 0);
    double m = std::abs(p.z);
    if (m < 1e-300) return cplx(1e300, 0);
    return 1.0 / p.z;
}

inline SpherePoint chart_point(cplx c, bool inverted) {
    if (!inverted) return SpherePoint(c);
    if (std::abs(c) < 1.0 / kInfThreshold) return SpherePoint::infinity();
    return SpherePoint(1.0 / c);
}

// distance via straight-in-chart projection; falls back to endpoint distance
// when no chart holds both endpoints comfortably
double seg_dist_chart(const SpherePoint& p, const SpherePoint& a, const SpherePoint& b) {
    double best = std::min(chordal(p, a), chordal(p, b));
    for (int chart = 0; chart < 2; ++chart) {
        bool inv = chart == 1;
        cplx ca = coord_in(a, inv), cb = coord_in(b, inv);
        if (std::abs(ca) > 2.6 || std::abs(cb) > 2.6) continue;
        cplx cp = coord_in(p, inv);
        if (std::abs(cp) > 1e6) continue;
        cplx ab = cb - ca;
        double len2 = std::norm(ab);
        if (len2 < 1e-300) continue;
        double t = std::clamp(((cp - ca) * std::conj(ab)).real() / len2, 0.0, 1.0);
        SpherePoint q = chart_point(ca + t * ab, inv);
        best = std::min(best, chordal(p, q));
    }
    return best;
}

}  // namespace

double point_segment_dist(const SpherePoint& p, const SpherePoint& a, const SpherePoint& b) {
    return seg_dist_chart(p, a, b);
}

double dist_to_polyline(const SpherePoint& p, const std::vector<SpherePoint>& poly) {
    if (poly.empty()) return std::numeric_limits<double>::infinity();
    if (poly.size() == 1) return chordal(p, poly[0]);
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < poly.size(); ++i)
        best = std::min(best, seg_dist_chart(p, poly[i], poly[i + 1]));
    return best;
}

double directed_hausdorff(const std::vector<SpherePoint>& from,
                          const std::vector<std::vector<SpherePoint>>& to_polylines) {
    SegmentIndex index(to_polylines);
    double worst = 0.0;
    for (const auto& p : from) worst = std::max(worst, index.distance(p));
    return worst;
}

double hausdorff_polylines(const std::vector<std::vector<SpherePoint>>& a,
                           const std::vector<std::vector<SpherePoint>>& b) {
    SegmentIndex ia(a), ib(b);
    double h = 0.0;
    for (const auto& pa : a)
        for (const auto& p : pa) h = std::max(h, ib.distance(p));
    for (const auto& pb : b)
        for (const auto& p : pb) h = std::max(h, ia.distance(p));
    return h;
}

double polyline_length(const std::vector<SpherePoint>& poly) {
    double s = 0.0;
    for (size_t i = 0; i + 1 < poly.size(); ++i) s += chordal(poly[i], poly[i + 1]);
    return s;
}

double diameter(const std::vector<SpherePoint>& pts) {
    double d = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, chordal(pts[i], pts[j]));
    return d;
}

SegmentIndex::SegmentIndex(const std::vector<std::vector<SpherePoint>>& polylines, double cell)
    : cell_(cell) {
    ncell_ = static_cast<int>(std::ceil(2 * extent_ / cell_));
    grid_[0].assign(static_cast<size_t>(ncell_) * ncell_, {});
    grid_[1].assign(static_cast<size_t>(ncell_) * ncell_, {});
    for (const auto& poly : polylines) add_polyline(poly);
}

int SegmentIndex::cell_of(double x) const {
    int c = static_cast<int>(std::floor((x + extent_) / cell_));
    return std::clamp(c, 0, ncell_ - 1);
}

void SegmentIndex::insert(int seg_id) {
    const Seg& s = segs_[static_cast<size_t>(seg_id)];
    for (int chart = 0; chart < 2; ++chart) {
        bool inv = chart == 1;
        cplx ca = coord_in(s.a, inv), cb = coord_in(s.b, inv);
        if (std::abs(ca) > extent_ || std::abs(cb) > extent_) continue;
        int i0 = cell_of(std::min(ca.imag(), cb.imag()));
        int i1 = cell_of(std::max(ca.imag(), cb.imag()));
        int j0 = cell_of(std::min(ca.real(), cb.real()));
        int j1 = cell_of(std::max(ca.real(), cb.real()));
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                grid_[chart][static_cast<size_t>(i) * ncell_ + j].push_back(seg_id);
    }
}

void SegmentIndex::add_polyline(const std::vector<SpherePoint>& poly) {
    if (grid_[0].empty()) {
        ncell_ = static_cast<int>(std::ceil(2 * extent_ / cell_));
        grid_[0].assign(static_cast<size_t>(ncell_) * ncell_, {});
        grid_[1].assign(static_cast<size_t>(ncell_) * ncell_, {});
    }
    if (poly.empty()) return;
    if (poly.size() == 1) {
        segs_.push_back({poly[0], poly[0]});
        insert(static_cast<int>(segs_.size()) - 1);
        return;
    }
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        segs_.push_back({poly[i], poly[i + 1]});
        insert(static_cast<int>(segs_.size()) - 1);
    }
}

double SegmentIndex::distance(const SpherePoint& p) const {
    if (segs_.empty()) return std::numeric_limits<double>::infinity();
    bool inv = p.inf || std::abs(p.z) > 1.0;
    int chart = inv ? 1 : 0;
    cplx cp = coord_in(p, inv);
    int pi = cell_of(cp.imag()), pj = cell_of(cp.real());
    // metric factor: chordal length per chart unit near p (upper bound 2)
    double factor = 2.0 / (1.0 + std::norm(cp));

    double best = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring < ncell_; ++ring) {
        // cells at Chebyshev ring distance `ring`
        bool any = false;
        for (int i = pi - ring; i <= pi + ring; ++i) {
            if (i < 0 || i >= ncell_) continue;
            for (int j = pj - ring; j <= pj + ring; ++j) {
                if (j < 0 || j >= ncell_) continue;
                if (std::max(std::abs(i - pi), std::abs(j - pj)) != ring) continue;
                any = true;
                for (int sid : grid_[chart][static_cast<size_t>(i) * ncell_ + j]) {
                    const Seg& s = segs_[static_cast<size_t>(sid)];
                    best = std::min(best, seg_dist_chart(p, s.a, s.b));
                }
            }
        }
        // safe cutoff: segments in farther rings are at least (ring-1) cells
        // away in chart units, and the chart-to-chordal factor is >= 0.34
        // everywhere on the [-2.2, 2.2] square
        (void)factor;
        if (ring >= 2 && best < (ring - 1) * cell_ * 0.34) break;
        if (!any && ring > 2 * ncell_) break;
    }
    // fall back to a full scan when the grid missed (point far outside)
    if (!(best < std::numeric_limits<double>::infinity())) {
        for (const auto& s : segs_) best = std::min(best, seg_dist_chart(p, s.a, s.b));
    }
    return best;
}

}  // namespace dynamo
