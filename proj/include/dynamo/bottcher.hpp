#pragma once

#include "dynamo/atlas.hpp"

namespace dynamo {

struct BranchLost : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutsideComponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotCertified : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation data of one component's Bottcher coordinate phi_U : U -> D,
// normalized by the principal-branch choice of the leading jet coefficient
// (documented per map; not canonical across Bottcher systems).
struct ComponentChart {
    int component_id = -1;
    int delta = 1;          // deg(f|_U), equals the local degree of f at the center
    bool inverted = false;  // home chart of the center
    cplx c0;                // center coordinate in that chart
    Poly jet;               // phi series at the center (jet[0] = 0)
    Poly inv_jet;           // phi^{-1} series
    double r_jet = 0.0;     // validated |t| radius for jet evaluation
    double r_jet_w = 0.0;   // validated |w| radius for inv_jet
    int anchor_id = -1;     // anchor component of the cycle this U routes to
    int route_len = 0;      // s with f^s(U) = anchor
    int route_deg = 1;      // deg(f^s|_U)
    int cycle_period = 0;   // q of the anchor cycle
    int cycle_deg = 1;      // Delta = deg(f^q |_anchor)
    bool usable = false;
};

struct InternalRay {
    int component_id = -1;
    double angle = 0.0;                // in [0,1)
    std::vector<SpherePoint> polyline; // center outward
    std::vector<double> radii;         // |phi| per sample
    SpherePoint landing_point;
    bool landing_certified = false;
};

// Bottcher coordinate system over all materialized components.
class BottcherSystem {
  public:
    BottcherSystem(const FatouAtlas& atlas, int series_terms = 28);

    const FatouAtlas& atlas() const { return *atlas_; }
    const ComponentChart& chart(int component_id) const;

    // phi_U(z). Throws OutsideComponent / BranchLost.
    cplx value(int component_id, const SpherePoint& z) const;

    // phi_U^{-1}(w) for |w| < 1, solved by digging the target down to the jet
    // disk and Newton-lifting. A seed near the answer makes it fast and
    // branch-stable; without one, the point is approached by marching from
    // the center.
    SpherePoint inverse(int component_id, cplx w) const;
    SpherePoint inverse_seeded(int component_id, cplx w, const SpherePoint& seed) const;

    InternalRay trace_ray(int component_id, double angle, double r_max, double ray_step = 2e-3) const;
    // Landing via Richardson-style extrapolation of tail samples at radii
    // 1 - 2^-k; certifies against land_tol and the Julia raster.
    SpherePoint land_ray(InternalRay& ray, double land_tol = 1e-7) const;
    InternalRay traced_landed_ray(int component_id, double angle, double land_tol = 1e-7,
                                  double ray_step = 2e-3) const;

    std::vector<SpherePoint> equipotential(int component_id, double r, int samples) const;

    // |phi_U(z)| alone (no angle resolution; cheap and branch-free).
    double modulus(int component_id, const SpherePoint& z) const;

  private:
    const FatouAtlas* atlas_;
    int K_;
    std::vector<ComponentChart> charts_;

    static constexpr int kRingSamples = 192;
    struct RefRing {
        double r = 0.45;
        std::vector<SpherePoint> points;
    };
    mutable std::map<int, RefRing> rings_;
    const RefRing& ref_ring(int component_id) const;
    SpherePoint marched_point(int component_id, double r, double theta) const;
    SpherePoint radial_march(int component_id, double theta, double s0, double s1, SpherePoint z,
                             double max_step, std::vector<SpherePoint>* sink = nullptr,
                             std::vector<double>* sink_radii = nullptr) const;

    cplx jet_eval(const ComponentChart& ch, const SpherePoint& z) const;  // phi via jet, |t|<=r_jet
    SpherePoint inv_jet_eval(const ComponentChart& ch, cplx w) const;
    // Walks z forward to the anchor's jet disk; returns |phi_anchor(f^s z)|
    // and the number of return-map steps taken.
    double anchor_modulus(const ComponentChart& anchor, SpherePoint z, int* steps = nullptr) const;
    SpherePoint anchor_inverse_seeded(const ComponentChart& anchor, cplx w,
                                      const SpherePoint& seed) const;
};

}  // namespace dynamo
