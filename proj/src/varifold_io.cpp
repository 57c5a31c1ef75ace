#include "vfl/varifold.hpp"

#include <json.hpp>

namespace vfl {

namespace {

using nlohmann::json;

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
    return a;
}

Vec vec_from_json(const json& a) {
    Vec v(static_cast<int>(a.size()));
    for (int i = 0; i < v.dim(); ++i) v[i] = a.at(i).get<double>();
    return v;
}

} // namespace

std::string to_json(const DiscreteVarifold& v) {
    json doc;
    doc["n"] = v.n();
    doc["m"] = v.m();
    doc["p"] = v.p();
    json samples = json::array();
    for (const auto& s : v.samples()) {
        json e;
        e["x"] = vec_to_json(s.position);
        if (s.plane.is_hyperplane()) {
            e["plane"] = {{"normal", vec_to_json(s.plane.normal())}};
        } else {
            json basis = json::array();
            for (const auto& b : s.plane.basis()) basis.push_back(vec_to_json(b));
            e["plane"] = {{"basis", basis}};
        }
        e["w"] = s.weight;
        e["H"] = vec_to_json(s.mean_curvature);
        e["density"] = s.density;
        samples.push_back(std::move(e));
    }
    doc["samples"] = std::move(samples);
    json boundary = json::array();
    for (const auto& b : v.boundary()) {
        boundary.push_back(
            {{"x", vec_to_json(b.position)}, {"w", b.weight}, {"conormal", vec_to_json(b.conormal)}});
    }
    doc["boundary"] = std::move(boundary);
    json patches = json::array();
    for (const auto& p : v.patches()) {
        patches.push_back({{"tau", p.tau}, {"n", p.n}, {"smoothing", p.smoothing},
                           {"center", vec_to_json(p.center)}, {"scale", p.scale}});
    }
    doc["patches"] = std::move(patches);
    return doc.dump(2);
}

DiscreteVarifold varifold_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw io_error(std::string("varifold_from_json: ") + e.what());
    }
    DiscreteVarifold v(doc.at("n").get<int>(), doc.at("m").get<int>(),
                       doc.at("p").get<double>());
    for (const auto& e : doc.at("samples")) {
        VarifoldSample s;
        s.position = vec_from_json(e.at("x"));
        const auto& plane = e.at("plane");
        if (plane.contains("normal")) {
            s.plane = TangentPlane::hyperplane(vec_from_json(plane.at("normal")));
        } else {
            std::vector<Vec> basis;
            for (const auto& b : plane.at("basis")) basis.push_back(vec_from_json(b));
            s.plane = TangentPlane::span(std::move(basis), s.position.dim());
        }
        s.weight = e.at("w").get<double>();
        s.mean_curvature = vec_from_json(e.at("H"));
        s.density = e.at("density").get<double>();
        v.add_sample(std::move(s));
    }
    for (const auto& e : doc.at("boundary")) {
        BoundarySample b;
        b.position = vec_from_json(e.at("x"));
        b.weight = e.at("w").get<double>();
        b.conormal = vec_from_json(e.at("conormal"));
        v.add_boundary(std::move(b));
    }
    if (doc.contains("patches")) {
        for (const auto& e : doc.at("patches")) {
            PatchDescriptor p;
            p.tau = e.at("tau").get<double>();
            p.n = e.at("n").get<int>();
            p.smoothing = e.at("smoothing").get<double>();
            p.center = vec_from_json(e.at("center"));
            p.scale = e.at("scale").get<double>();
            v.add_patch(std::move(p));
        }
    }
    v.finalize();
    return v;
}

} // namespace vfl
