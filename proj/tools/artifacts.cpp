#include "artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace msqg::cli {
namespace {

using json = nlohmann::ordered_json;

std::string g17(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* sweep_name(SweepKind kind) {
    switch (kind) {
    case SweepKind::BetaSweep: return "beta";
    case SweepKind::EpsilonSweep: return "epsilon";
    case SweepKind::GridRefine: return "grid";
    case SweepKind::SplitStepHausdorff: return "hausdorff";
    }
    return "?";
}

} // namespace

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records, int n_patches) {
    std::string out = "t,h3,c2,delta_inv,F,triple";
    for (int k = 1; k <= n_patches; ++k) out += ",area_" + std::to_string(k);
    out += ",min_gap";
    for (int k = 1; k <= n_patches; ++k) out += ",arclen_" + std::to_string(k);
    out += "\n";
    for (const DiagnosticsRecord& rec : records) {
        out += g17(rec.t) + "," + g17(rec.norms.h3) + "," + g17(rec.norms.c2) + "," +
               g17(rec.norms.delta_inv) + "," + g17(rec.norms.f_functional) + "," +
               g17(rec.norms.triple);
        for (double area : rec.areas) out += "," + g17(area);
        out += "," + g17(rec.min_gap);
        for (double len : rec.arclens) out += "," + g17(len);
        out += "\n";
    }
    return out;
}

std::string tracers_csv(const std::vector<TracerPath>& paths) {
    std::string out = "tracer,t,x,y,u1,u2,dist,jac\n";
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const TracerPath& path = paths[i];
        for (std::size_t j = 0; j < path.times.size(); ++j) {
            out += std::to_string(i) + "," + g17(path.times[j]) + "," +
                   g17(path.positions[j].x) + "," + g17(path.positions[j].y) + "," +
                   g17(path.velocities[j].x) + "," + g17(path.velocities[j].y) + "," +
                   g17(path.dist_to_boundary[j]) + ",";
            if (j < path.jacobian_estimate.size()) out += g17(path.jacobian_estimate[j]);
            out += "\n";
        }
    }
    return out;
}

std::string convergence_csv(const ConvergenceTable& table) {
    // Grid refinement stores one distance per successive pair, so the last
    // parameter row carries no distance; runs excluded by a tripped monitor
    // leave the cell empty too (flagged in the JSON report).
    std::string out = "parameter,distance,slope\n";
    for (std::size_t i = 0; i < table.parameters.size(); ++i) {
        out += g17(table.parameters[i]) + ",";
        if (i < table.distances.size() && !std::isnan(table.distances[i]))
            out += g17(table.distances[i]);
        out += "," + g17(table.fitted_slope) + "\n";
    }
    return out;
}

std::string convergence_json(const ConvergenceTable& table) {
    json doc;
    doc["kind"] = sweep_name(table.kind);
    doc["parameters"] = table.parameters;
    json distances = json::array();
    for (double d : table.distances) {
        if (std::isnan(d))
            distances.push_back(nullptr);
        else
            distances.push_back(d);
    }
    doc["distances"] = std::move(distances);
    doc["fitted_slope"] = table.fitted_slope;
    doc["target_slope"] = table.target_slope;
    doc["excluded"] = table.excluded;
    return doc.dump(2) + "\n";
}

std::string summary_json(const std::string& command, const RunConfig& config,
                         const RunResult& result, int snapshots_written, int exit_code) {
    json doc;
    doc["command"] = command;
    doc["verdict"] = {{"kind", to_string(result.verdict.kind)},
                      {"time", result.verdict.time},
                      {"detail", result.verdict.detail}};
    doc["steps_taken"] = result.steps_taken;
    doc["final_time"] = result.snapshots.empty() ? 0.0 : result.snapshots.back().time;
    doc["snapshots_written"] = snapshots_written;
    doc["exit_code"] = exit_code;
    doc["config"] = json::parse(serialize_run_config(config));
    return doc.dump(2) + "\n";
}

std::string frame_svg(const ContourState& state, const PatchFamily& family,
                      const std::vector<ContourState>& trajectory) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const ContourState& snap : trajectory)
        for (const Curve& curve : snap.curves)
            for (Vec2 v : curve.samples) {
                xmin = std::min(xmin, v.x);
                xmax = std::max(xmax, v.x);
                ymin = std::min(ymin, v.y);
                ymax = std::max(ymax, v.y);
            }
    if (state.domain == Domain::HalfPlane) ymin = std::min(ymin, 0.0);
    const double pad = 0.1 * std::max({xmax - xmin, ymax - ymin, 1e-6});
    xmin -= pad;
    xmax += pad;
    ymin -= pad;
    ymax += pad;

    char buf[256];
    std::string out;
    // y flipped by the group transform so the math orientation reads upward.
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" "
                  "viewBox=\"%.6g %.6g %.6g %.6g\">\n<g transform=\"scale(1,-1)\">\n",
                  xmin, -ymax, xmax - xmin, ymax - ymin);
    out += buf;
    const double stroke = 0.004 * std::max(xmax - xmin, ymax - ymin);
    if (state.domain == Domain::HalfPlane) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.6g\" y1=\"0\" x2=\"%.6g\" y2=\"0\" stroke=\"#444444\" "
                      "stroke-width=\"%.6g\"/>\n",
                      xmin, xmax, stroke);
        out += buf;
    }
    for (std::size_t k = 0; k < state.curves.size(); ++k) {
        const Curve& curve = state.curves[k];
        const bool positive = family.strengths[k] > 0.0;
        std::string d = "M";
        for (std::size_t j = 0; j < curve.samples.size(); ++j) {
            std::snprintf(buf, sizeof buf, " %.8g,%.8g", curve.samples[j].x,
                          curve.samples[j].y);
            d += buf;
            if (j == 0) d += " L";
        }
        d += " Z";
        std::snprintf(buf, sizeof buf,
                      "\" fill=\"%s\" fill-opacity=\"0.65\" stroke=\"#202020\" "
                      "stroke-width=\"%.6g\"/>\n",
                      positive ? "#c0392b" : "#2980b9", stroke);
        out += "<path d=\"" + d + buf;
    }
    out += "</g>\n</svg>\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw validation_error("failed writing " + path);
}

} // namespace msqg::cli
