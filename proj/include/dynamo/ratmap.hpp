#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynamo/poly.hpp"
#include "dynamo/polyroots.hpp"

namespace dynamo {

struct NotPCF : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Home chart of a sphere point: plain chart z for |z| <= 1.5, inverted chart
// w = 1/z otherwise. Raster and series code agree on this split.
inline bool home_inverted(const SpherePoint& p) { return p.inf || std::abs(p.z) > 1.5; }
inline cplx chart_coord(const SpherePoint& p, bool inverted) {
    return inverted ? p.inv_coord() : p.z;
}
inline SpherePoint from_chart(cplx c, bool inverted) {
    if (!inverted) return SpherePoint(c);
    if (std::abs(c) < 1.0 / kInfThreshold) return SpherePoint::infinity();
    return SpherePoint(1.0 / c);
}

// Taylor data of the map at a point, expressed in explicit charts:
// out_coord(f(in_chart^-1(c0 + t))) = s[0] + s[1] t + ...
struct LocalSeries {
    bool in_inverted = false;
    bool out_inverted = false;
    Poly s;
};

// Degree-d rational map N/D with projective evaluation. Coefficients ascend.
class RationalMap {
  public:
    RationalMap(Poly num, Poly den);

    int deg() const { return d_; }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    SpherePoint evaluate(const SpherePoint& z) const;
    SpherePoint iterate(SpherePoint z, int n) const;

    // Norm of the derivative in the chordal metric on both sides.
    double spherical_derivative(const SpherePoint& z) const;

    // All critical points with local degrees; Sum(local_degree - 1) = 2d - 2.
    std::vector<std::pair<SpherePoint, int>> critical_points() const;

    // All d solutions of f(z) = w with multiplicity.
    std::vector<std::pair<SpherePoint, int>> preimages(const SpherePoint& w) const;

    // One map application in charts, with the complex derivative of the
    // output coordinate with respect to the input coordinate.
    void apply_chart(cplx in, bool in_inverted, cplx& out, bool& out_inverted, cplx& deriv) const;

    // Newton solve f^m(z) = target from the given seed. Works in the seed's
    // home chart. Returns nullopt when Newton fails to reach tol.
    std::optional<SpherePoint> newton_preimage(const SpherePoint& target, int m,
                                               const SpherePoint& seed, double tol = 1e-12,
                                               int max_iter = 40) const;

    // Taylor series of f at `center` to K terms in the stated charts. The
    // output chart defaults to the image's home chart and can be forced.
    LocalSeries local_series(const SpherePoint& center, int K,
                             std::optional<bool> force_out_inverted = std::nullopt) const;

  private:
    Poly num_, den_;     // padded to degree d_
    Poly rnum_, rden_;   // reversed (inverted input chart)
    Poly wr_, rwr_;      // dehomogenized Wronskian and its reversal
    int d_ = 0;
};

struct OrbitRecord {
    SpherePoint critical_value;
    std::vector<SpherePoint> orbit;  // starts at the critical value
    int preperiod = 0;
    int period = 0;
};

struct PostcriticalData {
    std::vector<std::pair<SpherePoint, int>> critical_points;
    std::vector<SpherePoint> postcritical_set;
    std::vector<OrbitRecord> orbit_table;
    std::vector<SpherePoint> marked_set_P;  // f(P) in P; postcritical set plus catalog anchors

    // All distinct cycles reachable from critical values that contain a
    // critical point (the superattracting cycles).
    std::vector<std::vector<SpherePoint>> superattracting_cycles() const;
    bool in_postcritical(const SpherePoint& p, double tol = 1e-7) const;
};

PostcriticalData postcritical_orbit(const RationalMap& map, double tol = 1e-9, int max_depth = 256);

// Newton refinement of c in z^2 + c toward a superattracting cycle of the
// given period; residual |f^period(0)| < 1e-12 on success.
cplx refine_cycle_parameter(const std::string& family, cplx guess, int period);

}  // namespace dynamo
