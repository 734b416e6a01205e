#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace dynamo {

using cplx = std::complex<double>;

constexpr double kInfThreshold = 1e8;

// A point on the Riemann sphere. Canonical form: finite value with
// |z| <= kInfThreshold, or the infinity marker. All metric quantities are
// chordal distances on the unit sphere (diameter 2).
struct SpherePoint {
    cplx z{0.0, 0.0};
    bool inf = false;

    SpherePoint() = default;
    SpherePoint(cplx v) : z(v) { normalize(); }
    SpherePoint(double re, double im) : z(re, im) { normalize(); }

    static SpherePoint infinity() {
        SpherePoint p;
        p.inf = true;
        return p;
    }

    void normalize() {
        if (inf) {
            z = cplx(0, 0);
            return;
        }
        double m = std::abs(z);
        if (!std::isfinite(m) || m > kInfThreshold) {
            inf = true;
            z = cplx(0, 0);
        }
    }

    bool is_inf() const { return inf; }

    // Embedding into the unit 2-sphere in R^3 (stereographic inverse).
    std::array<double, 3> embed() const {
        if (inf) return {0.0, 0.0, 1.0};
        double n2 = std::norm(z);
        double d = 1.0 + n2;
        return {2.0 * z.real() / d, 2.0 * z.imag() / d, (n2 - 1.0) / d};
    }

    // Coordinate in the inverted chart w = 1/z.
    cplx inv_coord() const {
        if (inf) return cplx(0, 0);
        return 1.0 / z;
    }
};

inline double chordal(const SpherePoint& a, const SpherePoint& b) {
    if (a.inf && b.inf) return 0.0;
    if (a.inf) return 2.0 / std::sqrt(1.0 + std::norm(b.z));
    if (b.inf) return 2.0 / std::sqrt(1.0 + std::norm(a.z));
    return 2.0 * std::abs(a.z - b.z) /
           std::sqrt((1.0 + std::norm(a.z)) * (1.0 + std::norm(b.z)));
}

inline double chordal(cplx a, cplx b) {
    return 2.0 * std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

// Chordal distance from p to the segment [a,b], where the segment is taken
// straight in a chart containing both endpoints. Exact for curves that are
// straight in a chart (rays on lines, real arcs), O(len^2 . curvature) else.
double point_segment_dist(const SpherePoint& p, const SpherePoint& a, const SpherePoint& b);

// Directed and symmetric Hausdorff distances between polyline sample sets,
// with segment projection on the target side.
double directed_hausdorff(const std::vector<SpherePoint>& from,
                          const std::vector<std::vector<SpherePoint>>& to_polylines);
double hausdorff_polylines(const std::vector<std::vector<SpherePoint>>& a,
                           const std::vector<std::vector<SpherePoint>>& b);

// Minimum distance from p to a polyline (with segment projection).
double dist_to_polyline(const SpherePoint& p, const std::vector<SpherePoint>& poly);

double polyline_length(const std::vector<SpherePoint>& poly);

double diameter(const std::vector<SpherePoint>& pts);

// Bucketed nearest-segment index over polyline sets, one uniform grid per
// chart. Makes Hausdorff and tube queries near-linear.
class SegmentIndex {
  public:
    SegmentIndex() = default;
    explicit SegmentIndex(const std::vector<std::vector<SpherePoint>>& polylines,
                          double cell = 0.02);
    void add_polyline(const std::vector<SpherePoint>& poly);
    double distance(const SpherePoint& p) const;  // +inf when empty
    bool empty() const { return segs_.empty(); }

  private:
    struct Seg {
        SpherePoint a, b;
    };
    std::vector<Seg> segs_;
    double cell_ = 0.02;
    double extent_ = 2.2;
    int ncell_ = 0;
    std::vector<std::vector<int>> grid_[2];  // per chart: cell -> segment ids
    void insert(int seg_id);
    int cell_of(double x) const;
};

}  // namespace dynamo
