#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msqg/contour.hpp"
#include "msqg/curve.hpp"
#include "msqg/evolve.hpp"

namespace msqg::cli {

struct ShapeSpec {
    enum class Kind { Circle, Ellipse, SamplesFile };
    Kind kind = Kind::Circle;
    Vec2 center{0.0, 0.0};
    double radius = 1.0;        // circle
    double a = 1.0, b = 1.0;    // ellipse semi-axes
    double rotation = 0.0;      // ellipse rotation (radians)
    std::string path;           // samples-file, relative to the config file
};

struct PatchConfig {
    std::string name;
    double theta = 1.0;
    ShapeSpec shape;
};

struct OutputConfig {
    std::string dir = "out";
    double cadence = 0.0; // 0 = endpoints only
    bool emit_svg = false;
};

struct TraceConfig {
    std::vector<Vec2> seeds;
    bool jacobian = false;
    int substeps = 4;
};

struct RunConfig {
    double alpha = 0.0;
    Domain domain = Domain::WholePlane;
    int grid_size = 256;
    std::vector<PatchConfig> patches;
    RegularizationSpec regularization = RegularizationSpec::plain();
    bool dt_auto = true; // evolve.dt carries the value when not auto
    EvolveConfig evolve;
    OutputConfig output;
    std::uint32_t rng_seed = 0;
    std::vector<double> converge_values;
    TraceConfig trace;
};

// Strict parse: unknown keys, wrong types, and invariant breaches are all
// collected and thrown as one validation_error listing JSON paths.
RunConfig parse_run_config(const std::string& text, const std::string& base_dir);

// Canonical serialization; parse_run_config(serialize_run_config(c)) == c.
std::string serialize_run_config(const RunConfig& config);

// Instantiate the initial contour state and patch family.
ContourState build_initial_state(const RunConfig& config);
PatchFamily build_family(const RunConfig& config);

} // namespace msqg::cli
