#pragma once

/// JSON/CSV serialization of the report types. Complex values are emitted as
/// {"re":..., "im":...} objects; the schema carries an explicit version.

#include <json.hpp>

#include "odeim/psi_system.hpp"
#include "odeim/qfunctions.hpp"

namespace odeim {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

inline Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json to_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
    return a;
}

inline Json make_report(const std::string& command, Json inputs, Json results) {
    return Json{{"schema_version", kSchemaVersion},
                {"command", command},
                {"inputs", std::move(inputs)},
                {"results", std::move(results)}};
}

inline Json to_json(const SolutionTrace& tr) {
    Json samples = Json::array();
    for (const auto& [x, v] : tr.samples)
        samples.push_back(Json{{"x", to_json(x)}, {"value", to_json(v)}});
    return Json{{"rep", tr.rep_label},
                {"ray_angle", tr.ray_angle},
                {"k", to_json(tr.k)},
                {"x_match", tr.x_match},
                {"tol", tr.tol},
                {"samples", std::move(samples)}};
}

inline Json to_json(const PsiSystemReport& r) {
    return Json{{"node", r.node},
                {"E", to_json(r.E)},
                {"x_grid", r.x_grid},
                {"residuals", r.residuals},
                {"max_residual", r.max_residual}};
}

inline Json to_json(const QTable& t) {
    Json samples = Json::array();
    for (const auto& [E, qp] : t.samples)
        samples.push_back(Json{{"E", to_json(E)}, {"Q", to_json(qp.Q)}, {"Qt", to_json(qp.Qt)}});
    Json zeros = Json::array();
    for (Complex z : t.zeros) zeros.push_back(to_json(z));
    return Json{{"node", t.node},
                {"samples", std::move(samples)},
                {"zeros", std::move(zeros)},
                {"bethe_residuals", t.bethe_residuals}};
}

inline std::string trace_csv(const SolutionTrace& tr) {
    std::string out = "re_x,im_x";
    const Eigen::Index dim = tr.samples.empty() ? 0 : tr.samples.front().second.size();
    for (Eigen::Index i = 0; i < dim; ++i)
        out += ",re_" + std::to_string(i) + ",im_" + std::to_string(i);
    out += "\n";
    char buf[64];
    for (const auto& [x, v] : tr.samples) {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e", x.real(), x.imag());
        out += buf;
        for (Eigen::Index i = 0; i < dim; ++i) {
            std::snprintf(buf, sizeof buf, ",%.16e,%.16e", v[i].real(), v[i].imag());
            out += buf;
        }
        out += "\n";
    }
    return out;
}

inline std::string qtable_csv(const QTable& t) {
    std::string out = "re_E,im_E,re_Q,im_Q,re_Qt,im_Qt\n";
    char buf[160];
    for (const auto& [E, qp] : t.samples) {
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e\n", E.real(), E.imag(),
                      qp.Q.real(), qp.Q.imag(), qp.Qt.real(), qp.Qt.imag());
        out += buf;
    }
    return out;
}

}  // namespace odeim
