#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

namespace msqg::cli {
namespace {

using json = nlohmann::ordered_json;

// Collects every schema violation with its JSON path before giving up, so a
// bad config is reported in one round trip.
struct Parser {
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& message) {
        errors.push_back(path + ": " + message);
    }

    bool object(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool known = false;
            for (const char* key : allowed)
                if (it.key() == key) known = true;
            if (!known) fail(path + "." + it.key(), "unknown key");
        }
        return true;
    }

    bool number(const json& j, const char* key, const std::string& path, bool required,
                double& out) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "required");
            return false;
        }
        const json& v = j.at(key);
        if (!v.is_number()) {
            fail(path + "." + key, "expected a number");
            return false;
        }
        out = v.get<double>();
        if (!std::isfinite(out)) {
            fail(path + "." + key, "must be finite");
            return false;
        }
        return true;
    }

    bool integer(const json& j, const char* key, const std::string& path, bool required,
                 long long& out) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "required");
            return false;
        }
        const json& v = j.at(key);
        if (!v.is_number_integer()) {
            fail(path + "." + key, "expected an integer");
            return false;
        }
        out = v.get<long long>();
        return true;
    }

    bool boolean(const json& j, const char* key, const std::string& path, bool& out) {
        if (!j.contains(key)) return false;
        const json& v = j.at(key);
        if (!v.is_boolean()) {
            fail(path + "." + key, "expected a boolean");
            return false;
        }
        out = v.get<bool>();
        return true;
    }

    bool string(const json& j, const char* key, const std::string& path, bool required,
                std::string& out) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "required");
            return false;
        }
        const json& v = j.at(key);
        if (!v.is_string()) {
            fail(path + "." + key, "expected a string");
            return false;
        }
        out = v.get<std::string>();
        return true;
    }

    bool vec2(const json& v, const std::string& path, Vec2& out) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            fail(path, "expected [x, y]");
            return false;
        }
        out = {v[0].get<double>(), v[1].get<double>()};
        if (!std::isfinite(out.x) || !std::isfinite(out.y)) {
            fail(path, "coordinates must be finite");
            return false;
        }
        return true;
    }
};

ShapeSpec parse_shape(Parser& p, const json& j, const std::string& path,
                      const std::string& base_dir) {
    ShapeSpec shape;
    std::string kind;
    if (!j.is_object() || !p.string(j, "kind", path, true, kind)) {
        p.object(j, path, {"kind"});
        return shape;
    }
    if (kind == "circle") {
        shape.kind = ShapeSpec::Kind::Circle;
        if (!p.object(j, path, {"kind", "center", "radius"})) return shape;
        if (j.contains("center")) p.vec2(j.at("center"), path + ".center", shape.center);
        p.number(j, "radius", path, true, shape.radius);
        if (shape.radius <= 0.0) p.fail(path + ".radius", "must be positive");
    } else if (kind == "ellipse") {
        shape.kind = ShapeSpec::Kind::Ellipse;
        if (!p.object(j, path, {"kind", "center", "a", "b", "rotation"})) return shape;
        if (j.contains("center")) p.vec2(j.at("center"), path + ".center", shape.center);
        p.number(j, "a", path, true, shape.a);
        p.number(j, "b", path, true, shape.b);
        p.number(j, "rotation", path, false, shape.rotation);
        if (shape.a <= 0.0) p.fail(path + ".a", "must be positive");
        if (shape.b <= 0.0) p.fail(path + ".b", "must be positive");
    } else if (kind == "samples-file") {
        shape.kind = ShapeSpec::Kind::SamplesFile;
        if (!p.object(j, path, {"kind", "path"})) return shape;
        if (p.string(j, "path", path, true, shape.path)) {
            if (shape.path.empty()) {
                p.fail(path + ".path", "must be nonempty");
            } else {
                std::filesystem::path file(shape.path);
                if (file.is_relative() && !base_dir.empty())
                    shape.path = (std::filesystem::path(base_dir) / file).lexically_normal()
                                     .string();
            }
        }
    } else {
        p.fail(path + ".kind", "expected \"circle\", \"ellipse\", or \"samples-file\"");
    }
    return shape;
}

RegularizationSpec parse_regularization(Parser& p, const json& j, const std::string& path) {
    RegularizationSpec reg = RegularizationSpec::plain();
    std::string kind;
    if (!j.is_object() || !p.string(j, "kind", path, true, kind)) {
        p.object(j, path, {"kind"});
        return reg;
    }
    if (kind == "plain") {
        p.object(j, path, {"kind"});
    } else if (kind == "beta") {
        reg.kind = RegularizationSpec::Kind::BetaKernel;
        if (!p.object(j, path, {"kind", "beta"})) return reg;
        p.number(j, "beta", path, true, reg.beta);
        if (reg.beta <= 0.0) p.fail(path + ".beta", "must be positive");
    } else if (kind == "mollified") {
        reg.kind = RegularizationSpec::Kind::Mollified;
        if (!p.object(j, path, {"kind", "epsilon", "drift_const", "ref_norm_M", "c0"}))
            return reg;
        p.number(j, "epsilon", path, true, reg.epsilon);
        p.number(j, "drift_const", path, false, reg.drift_const);
        p.number(j, "ref_norm_M", path, false, reg.ref_norm_M);
        p.number(j, "c0", path, false, reg.c0);
        if (reg.epsilon <= 0.0) p.fail(path + ".epsilon", "must be positive");
        if (reg.drift_const <= 0.0) p.fail(path + ".drift_const", "must be positive");
        if (reg.ref_norm_M < 2.0) p.fail(path + ".ref_norm_M", "must be >= 2");
        if (reg.c0 <= 0.0) p.fail(path + ".c0", "must be positive");
    } else {
        p.fail(path + ".kind", "expected \"plain\", \"beta\", or \"mollified\"");
    }
    return reg;
}

void parse_evolve(Parser& p, const json& j, const std::string& path, RunConfig& config) {
    if (!p.object(j, path, {"dt", "scheme", "t_end", "resample_every", "monitors"})) return;
    std::string scheme;
    if (p.string(j, "scheme", path, false, scheme)) {
        if (scheme == "rk4")
            config.evolve.scheme = Scheme::RK4;
        else if (scheme == "rk45")
            config.evolve.scheme = Scheme::RK45;
        else
            p.fail(path + ".scheme", "expected \"rk4\" or \"rk45\"");
    }
    if (j.contains("dt")) {
        const json& dt = j.at("dt");
        if (dt.is_string()) {
            if (dt.get<std::string>() != "auto")
                p.fail(path + ".dt", "expected \"auto\" or a positive number");
            else
                config.dt_auto = true;
        } else if (dt.is_number()) {
            config.dt_auto = false;
            config.evolve.dt = dt.get<double>();
            if (!(config.evolve.dt > 0.0) || !std::isfinite(config.evolve.dt))
                p.fail(path + ".dt", "must be positive");
        } else {
            p.fail(path + ".dt", "expected \"auto\" or a positive number");
        }
    }
    if (config.evolve.scheme == Scheme::RK45 && config.dt_auto)
        p.fail(path + ".dt", "rk45 needs a numeric step tolerance, not \"auto\"");
    if (p.number(j, "t_end", path, false, config.evolve.t_end))
        if (config.evolve.t_end <= 0.0) p.fail(path + ".t_end", "must be positive");
    long long resample = config.evolve.resample_every;
    if (p.integer(j, "resample_every", path, false, resample)) {
        if (resample < 0)
            p.fail(path + ".resample_every", "must be >= 0");
        else
            config.evolve.resample_every = static_cast<int>(resample);
    }
    if (j.contains("monitors")) {
        const json& m = j.at("monitors");
        const std::string mpath = path + ".monitors";
        if (p.object(m, mpath, {"f_max", "delta_min", "h3_max", "min_seg_frac"})) {
            MonitorThresholds& t = config.evolve.monitors;
            p.number(m, "f_max", mpath, false, t.f_max);
            p.number(m, "delta_min", mpath, false, t.delta_min);
            p.number(m, "h3_max", mpath, false, t.h3_max);
            p.number(m, "min_seg_frac", mpath, false, t.min_seg_frac);
            if (t.f_max <= 0.0) p.fail(mpath + ".f_max", "must be positive");
            if (t.delta_min <= 0.0) p.fail(mpath + ".delta_min", "must be positive");
            if (t.h3_max <= 0.0) p.fail(mpath + ".h3_max", "must be positive");
            if (t.min_seg_frac <= 0.0) p.fail(mpath + ".min_seg_frac", "must be positive");
        }
    }
}

json shape_to_json(const ShapeSpec& shape) {
    json j;
    switch (shape.kind) {
    case ShapeSpec::Kind::Circle:
        j["kind"] = "circle";
        j["center"] = {shape.center.x, shape.center.y};
        j["radius"] = shape.radius;
        break;
    case ShapeSpec::Kind::Ellipse:
        j["kind"] = "ellipse";
        j["center"] = {shape.center.x, shape.center.y};
        j["a"] = shape.a;
        j["b"] = shape.b;
        j["rotation"] = shape.rotation;
        break;
    case ShapeSpec::Kind::SamplesFile:
        j["kind"] = "samples-file";
        j["path"] = shape.path;
        break;
    }
    return j;
}

Curve shape_to_curve(const ShapeSpec& shape, int grid_size, const std::string& name) {
    switch (shape.kind) {
    case ShapeSpec::Kind::Circle:
        return make_circle(shape.center, shape.radius, grid_size);
    case ShapeSpec::Kind::Ellipse:
        return make_ellipse(shape.center, shape.a, shape.b, shape.rotation, grid_size);
    case ShapeSpec::Kind::SamplesFile:
        break;
    }
    std::ifstream in(shape.path);
    if (!in)
        throw validation_error("patch \"" + name + "\": cannot open samples file " +
                               shape.path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw validation_error("patch \"" + name + "\": samples file " + shape.path +
                               " is not valid JSON: " + e.what());
    }
    if (!doc.is_array())
        throw validation_error("patch \"" + name + "\": samples file must hold an array of "
                               "[x, y] pairs");
    if (static_cast<int>(doc.size()) != grid_size)
        throw validation_error("patch \"" + name + "\": samples file has " +
                               std::to_string(doc.size()) + " points, expected grid_size = " +
                               std::to_string(grid_size));
    Curve curve;
    curve.samples.reserve(doc.size());
    for (const json& v : doc) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw validation_error("patch \"" + name + "\": samples file entries must be "
                                   "[x, y] pairs");
        curve.samples.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return curve;
}

} // namespace

RunConfig parse_run_config(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw validation_error(std::string("config is not valid JSON: ") + e.what());
    }

    Parser p;
    RunConfig config;
    const std::string root = "$";
    if (!p.object(doc, root,
                  {"alpha", "domain", "grid_size", "patches", "regularization", "evolve",
                   "output", "rng_seed", "converge", "trace"})) {
        throw validation_error("config: " + p.errors.front());
    }

    if (p.number(doc, "alpha", root, true, config.alpha)) {
        if (!(config.alpha > 0.0 && config.alpha < 0.5))
            p.fail("$.alpha", "out of (0, 0.5)");
    }
    std::string domain;
    if (p.string(doc, "domain", root, false, domain)) {
        if (domain == "plane")
            config.domain = Domain::WholePlane;
        else if (domain == "half-plane")
            config.domain = Domain::HalfPlane;
        else
            p.fail("$.domain", "expected \"plane\" or \"half-plane\"");
    }
    long long grid = config.grid_size;
    if (p.integer(doc, "grid_size", root, false, grid)) {
        try {
            check_grid_size(static_cast<int>(grid));
            config.grid_size = static_cast<int>(grid);
        } catch (const validation_error&) {
            p.fail("$.grid_size", "must be a power of two >= 16");
        }
    }

    if (!doc.contains("patches")) {
        p.fail("$.patches", "required");
    } else if (!doc.at("patches").is_array() || doc.at("patches").empty()) {
        p.fail("$.patches", "expected a nonempty array");
    } else {
        const json& patches = doc.at("patches");
        for (std::size_t i = 0; i < patches.size(); ++i) {
            const std::string path = "$.patches[" + std::to_string(i) + "]";
            PatchConfig patch;
            patch.name = "patch_" + std::to_string(i + 1);
            const json& pj = patches[i];
            if (!p.object(pj, path, {"name", "theta", "shape"})) continue;
            p.string(pj, "name", path, false, patch.name);
            if (patch.name.empty()) p.fail(path + ".name", "must be nonempty");
            if (p.number(pj, "theta", path, true, patch.theta))
                if (patch.theta == 0.0) p.fail(path + ".theta", "must be nonzero");
            if (pj.contains("shape"))
                patch.shape = parse_shape(p, pj.at("shape"), path + ".shape", base_dir);
            else
                p.fail(path + ".shape", "required");
            for (const PatchConfig& seen : config.patches)
                if (seen.name == patch.name)
                    p.fail(path + ".name", "duplicate patch name \"" + patch.name + "\"");
            config.patches.push_back(std::move(patch));
        }
    }

    if (doc.contains("regularization"))
        config.regularization =
            parse_regularization(p, doc.at("regularization"), "$.regularization");
    if (doc.contains("evolve")) parse_evolve(p, doc.at("evolve"), "$.evolve", config);

    if (doc.contains("output")) {
        const json& out = doc.at("output");
        if (p.object(out, "$.output", {"dir", "cadence", "emit_svg"})) {
            p.string(out, "dir", "$.output", false, config.output.dir);
            if (config.output.dir.empty()) p.fail("$.output.dir", "must be nonempty");
            if (p.number(out, "cadence", "$.output", false, config.output.cadence))
                if (config.output.cadence < 0.0)
                    p.fail("$.output.cadence", "must be >= 0");
            p.boolean(out, "emit_svg", "$.output", config.output.emit_svg);
        }
    }

    if (doc.contains("rng_seed")) {
        const json& seed = doc.at("rng_seed");
        if (!seed.is_number_integer() || seed.get<long long>() < 0 ||
            seed.get<long long>() > 0xffffffffll)
            p.fail("$.rng_seed", "expected an integer in [0, 2^32)");
        else
            config.rng_seed = static_cast<std::uint32_t>(seed.get<long long>());
    }

    if (doc.contains("converge")) {
        const json& conv = doc.at("converge");
        if (p.object(conv, "$.converge", {"values"})) {
            if (!conv.contains("values") || !conv.at("values").is_array()) {
                p.fail("$.converge.values", "expected an array of numbers");
            } else {
                const json& values = conv.at("values");
                for (std::size_t i = 0; i < values.size(); ++i) {
                    const std::string path = "$.converge.values[" + std::to_string(i) + "]";
                    if (!values[i].is_number()) {
                        p.fail(path, "expected a number");
                        continue;
                    }
                    const double v = values[i].get<double>();
                    if (!(v > 0.0) || !std::isfinite(v))
                        p.fail(path, "must be positive");
                    else
                        config.converge_values.push_back(v);
                }
            }
        }
    }

    if (doc.contains("trace")) {
        const json& trace = doc.at("trace");
        if (p.object(trace, "$.trace", {"seeds", "jacobian", "substeps"})) {
            if (trace.contains("seeds")) {
                const json& seeds = trace.at("seeds");
                if (!seeds.is_array()) {
                    p.fail("$.trace.seeds", "expected an array of [x, y] pairs");
                } else {
                    for (std::size_t i = 0; i < seeds.size(); ++i) {
                        Vec2 seed;
                        if (p.vec2(seeds[i], "$.trace.seeds[" + std::to_string(i) + "]", seed))
                            config.trace.seeds.push_back(seed);
                    }
                }
            }
            p.boolean(trace, "jacobian", "$.trace", config.trace.jacobian);
            long long substeps = config.trace.substeps;
            if (p.integer(trace, "substeps", "$.trace", false, substeps)) {
                if (substeps < 1)
                    p.fail("$.trace.substeps", "must be >= 1");
                else
                    config.trace.substeps = static_cast<int>(substeps);
            }
        }
    }

    if (!p.errors.empty()) {
        std::string joined = "config: " + p.errors.front();
        for (std::size_t i = 1; i < p.errors.size(); ++i) joined += "; " + p.errors[i];
        throw validation_error(joined);
    }
    return config;
}

std::string serialize_run_config(const RunConfig& config) {
    json doc;
    doc["alpha"] = config.alpha;
    doc["domain"] = config.domain == Domain::HalfPlane ? "half-plane" : "plane";
    doc["grid_size"] = config.grid_size;
    doc["patches"] = json::array();
    for (const PatchConfig& patch : config.patches) {
        json pj;
        pj["name"] = patch.name;
        pj["theta"] = patch.theta;
        pj["shape"] = shape_to_json(patch.shape);
        doc["patches"].push_back(std::move(pj));
    }
    json reg;
    switch (config.regularization.kind) {
    case RegularizationSpec::Kind::Plain:
        reg["kind"] = "plain";
        break;
    case RegularizationSpec::Kind::BetaKernel:
        reg["kind"] = "beta";
        reg["beta"] = config.regularization.beta;
        break;
    case RegularizationSpec::Kind::Mollified:
        reg["kind"] = "mollified";
        reg["epsilon"] = config.regularization.epsilon;
        reg["drift_const"] = config.regularization.drift_const;
        reg["ref_norm_M"] = config.regularization.ref_norm_M;
        reg["c0"] = config.regularization.c0;
        break;
    }
    doc["regularization"] = std::move(reg);
    json evolve;
    if (config.dt_auto)
        evolve["dt"] = "auto";
    else
        evolve["dt"] = config.evolve.dt;
    evolve["scheme"] = config.evolve.scheme == Scheme::RK45 ? "rk45" : "rk4";
    evolve["t_end"] = config.evolve.t_end;
    evolve["resample_every"] = config.evolve.resample_every;
    evolve["monitors"] = {{"f_max", config.evolve.monitors.f_max},
                          {"delta_min", config.evolve.monitors.delta_min},
                          {"h3_max", config.evolve.monitors.h3_max},
                          {"min_seg_frac", config.evolve.monitors.min_seg_frac}};
    doc["evolve"] = std::move(evolve);
    doc["output"] = {{"dir", config.output.dir},
                     {"cadence", config.output.cadence},
                     {"emit_svg", config.output.emit_svg}};
    doc["rng_seed"] = config.rng_seed;
    json values = json::array();
    for (double v : config.converge_values) values.push_back(v);
    doc["converge"] = {{"values", std::move(values)}};
    json seeds = json::array();
    for (Vec2 seed : config.trace.seeds) seeds.push_back({seed.x, seed.y});
    doc["trace"] = {{"seeds", std::move(seeds)},
                    {"jacobian", config.trace.jacobian},
                    {"substeps", config.trace.substeps}};
    return doc.dump(2) + "\n";
}

ContourState build_initial_state(const RunConfig& config) {
    ContourState state;
    state.domain = config.domain;
    state.time = 0.0;
    for (const PatchConfig& patch : config.patches)
        state.curves.push_back(shape_to_curve(patch.shape, config.grid_size, patch.name));
    state.check();
    return state;
}

PatchFamily build_family(const RunConfig& config) {
    PatchFamily family;
    family.domain = config.domain;
    for (const PatchConfig& patch : config.patches) family.strengths.push_back(patch.theta);
    family.check();
    return family;
}

} // namespace msqg::cli
