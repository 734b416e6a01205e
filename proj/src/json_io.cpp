#include "dynamo/json_io.hpp"

#include <cinttypes>
#include <cstdio>

namespace dynamo {

namespace {

// shortest round-trip formatting for doubles keeps exports byte-stable
std::string fmt(double x) {
    char buf[40];
    snprintf(buf, sizeof buf, "%.17g", x);
    double back;
    sscanf(buf, "%lf", &back);
    if (back == x) {
        for (int prec = 1; prec < 17; ++prec) {
            char b2[40];
            snprintf(b2, sizeof b2, "%.*g", prec, x);
            double r2;
            sscanf(b2, "%lf", &r2);
            if (r2 == x) return b2;
        }
    }
    return buf;
}

}  // namespace

json point_to_json(const SpherePoint& p) {
    if (p.inf) return json{{"inf", true}};
    return json{{"re", p.z.real()}, {"im", p.z.imag()}};
}

SpherePoint point_from_json(const json& j) {
    if (j.contains("inf") && j["inf"].get<bool>()) return SpherePoint::infinity();
    return SpherePoint(j["re"].get<double>(), j["im"].get<double>());
}

json graph_to_json(const PlanarGraph& G) {
    json j;
    j["schema"] = "dynamo/1";
    j["vertices"] = json::array();
    for (const auto& v : G.vertices) {
        json jv;
        jv["id"] = v.id;
        jv["pos"] = point_to_json(v.pos);
        jv["kind"] = v.kind == VertexKind::FatouCenter ? "fatou_center" : "julia_point";
        j["vertices"].push_back(jv);
    }
    j["edges"] = json::array();
    for (const auto& e : G.edges) {
        json je;
        je["id"] = e.id;
        je["v0"] = e.v0;
        je["v1"] = e.v1;
        json pl = json::array();
        for (const auto& p : e.polyline) pl.push_back(point_to_json(p));
        je["polyline"] = pl;
        json rays = json::array();
        for (const auto& r : e.rays) {
            rays.push_back(json{{"component", r.component_id},
                                {"angle", r.angle},
                                {"from_index", r.from_index},
                                {"to_index", r.to_index},
                                {"outward", r.outward}});
        }
        je["rays"] = rays;
        j["edges"].push_back(je);
    }
    j["marked_P"] = G.marked_P;
    return j;
}

PlanarGraph graph_from_json(const json& j) {
    if (!j.contains("schema") || j["schema"] != "dynamo/1")
        throw std::invalid_argument("graph JSON: missing or unknown schema");
    PlanarGraph G;
    for (const auto& jv : j.at("vertices")) {
        Vertex v;
        v.id = jv.at("id").get<int>();
        v.pos = point_from_json(jv.at("pos"));
        v.kind = jv.at("kind") == "fatou_center" ? VertexKind::FatouCenter : VertexKind::JuliaPoint;
        G.vertices.push_back(v);
    }
    for (const auto& je : j.at("edges")) {
        Edge e;
        e.id = je.at("id").get<int>();
        e.v0 = je.at("v0").get<int>();
        e.v1 = je.at("v1").get<int>();
        for (const auto& jp : je.at("polyline")) e.polyline.push_back(point_from_json(jp));
        if (je.contains("rays")) {
            for (const auto& jr : je["rays"]) {
                RaySegment r;
                r.component_id = jr.at("component").get<int>();
                r.angle = jr.at("angle").get<double>();
                r.from_index = jr.at("from_index").get<int>();
                r.to_index = jr.at("to_index").get<int>();
                r.outward = jr.value("outward", true);
                e.rays.push_back(r);
            }
        }
        G.edges.push_back(std::move(e));
    }
    if (j.contains("marked_P")) G.marked_P = j["marked_P"].get<std::vector<int>>();
    return G;
}

json atlas_to_json(const FatouAtlas& atlas) {
    json j;
    j["schema"] = "dynamo/1";
    j["resolution"] = atlas.grid.resolution;
    j["min_diameter"] = atlas.min_diameter;
    j["components"] = json::array();
    for (const auto& c : atlas.components) {
        j["components"].push_back(json{{"id", c.id},
                                       {"center", point_to_json(c.center)},
                                       {"period", c.period},
                                       {"preperiod", c.preperiod},
                                       {"delta", c.degree_on_component},
                                       {"image", c.image_id},
                                       {"diameter", c.diameter}});
    }
    return j;
}

json map_spec_to_json(const RationalMap& map) {
    json j;
    j["schema"] = "dynamo/1";
    json num = json::array(), den = json::array();
    for (const auto& c : map.num()) num.push_back(json::array({c.real(), c.imag()}));
    for (const auto& c : map.den()) den.push_back(json::array({c.real(), c.imag()}));
    j["num"] = num;
    j["den"] = den;
    return j;
}

RationalMap map_spec_from_json(const json& j) {
    Poly num, den;
    for (const auto& c : j.at("num")) num.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    for (const auto& c : j.at("den")) den.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    return RationalMap(num, den);
}

json run_report_to_json(const PullbackRun& run, const RateFit* fit, const json& config_echo) {
    json j;
    j["schema"] = "dynamo/1";
    j["config"] = config_echo;
    j["n"] = run.n;
    j["steps"] = run.step_distances.size();
    j["converged"] = run.converged;
    j["final_residual"] = run.final_residual;
    j["step_distances"] = run.step_distances;
    j["residuals"] = run.residuals;
    if (fit) {
        j["rate_fit"] =
            json{{"C", fit->C}, {"lambda_est", fit->lambda_est}, {"r_squared", fit->r_squared}};
    }
    return j;
}

std::string run_step_csv(const PullbackRun& run) {
    std::string out = "k,step_distance,residual\n";
    for (size_t k = 0; k < run.step_distances.size(); ++k) {
        char line[96];
        snprintf(line, sizeof line, "%zu,%s,%s\n", k, fmt(run.step_distances[k]).c_str(),
                 k < run.residuals.size() ? fmt(run.residuals[k]).c_str() : "");
        out += line;
    }
    return out;
}

json pullback_to_json(const PullbackGraph& H) {
    json j = graph_to_json(H.graph);
    json prov;
    for (const auto& [eid, p] : H.provenance)
        prov[std::to_string(eid)] = json{{"source_edge", p.source_edge}, {"branch", p.branch}};
    j["provenance"] = prov;
    return j;
}

}  // namespace dynamo
