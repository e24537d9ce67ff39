#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msqg/contour.hpp"
#include "msqg/curve.hpp"

namespace msqg {

struct MonitorThresholds {
    double f_max = 50.0;
    double delta_min = 1e-3;
    double h3_max = 100.0;
    double min_seg_frac = 0.05; // min segment / mean segment per curve

    void check() const; // all thresholds positive
};

enum class BlowupKind { None, BoundariesTouch, SelfTouch, H3Blowup, NodeDegeneracy };

struct BlowupVerdict {
    BlowupKind kind = BlowupKind::None;
    double time = 0.0;
    std::string detail;
};

const char* to_string(BlowupKind kind);

enum class Scheme { RK4, RK45 };

struct EvolveConfig {
    // RK4: fixed step, or <= 0 for the automatic guard-limited step.
    // RK45: interpreted as the relative error tolerance per step.
    double dt = 0.0;
    Scheme scheme = Scheme::RK4;
    double t_end = 1.0;
    int resample_every = 0; // constant-speed resampling period in steps; 0 = never
    MonitorThresholds monitors;
    double cadence = 0.0;   // diagnostics/snapshot spacing; 0 = endpoints only
    RhsOptions rhs_options;
};

struct DiagnosticsRecord {
    double t = 0.0;
    NormReport norms;
    std::vector<double> areas;
    std::vector<double> arclens;
    double min_gap = 0.0; // +inf for a single patch
};

struct RunResult {
    std::vector<ContourState> snapshots; // t = 0, each cadence point, final time
    std::vector<DiagnosticsRecord> diagnostics;
    BlowupVerdict verdict;
    long steps_taken = 0;
};

// Map threshold breaches to the termination taxonomy: low inter-boundary gap
// -> BoundariesTouch; high chord-arc F -> SelfTouch; collapsed nodes ->
// NodeDegeneracy; large H3 -> H3Blowup.
BlowupVerdict monitor(const ContourState& state, const MonitorThresholds& thresholds);

// One composed RK step of size dt; enforces dt * ||rhs||_inf <= 0.5 * (min
// segment length) and the half-plane positivity invariant.  dt = 0 returns
// the state unchanged.
ContourState step(const ContourState& state, const PatchFamily& family, double alpha,
                  const RegularizationSpec& reg, double dt, Scheme scheme,
                  const RhsOptions& options = {});

// Integrate to t_end or the first tripped monitor.
RunResult run(const ContourState& initial, const PatchFamily& family, double alpha,
              const RegularizationSpec& reg, const EvolveConfig& config);

DiagnosticsRecord diagnostics_for(const ContourState& state);

struct TracerOptions {
    int substeps_per_interval = 4; // RK4 substeps between stored snapshots
    bool jacobian = false;
    double jacobian_delta = 1e-4; // half-width of the 4-point cluster
    bool use_oracle = false;      // area-quadrature velocity instead of the boundary form
};

struct TracerPath {
    Vec2 seed;
    std::vector<double> times;
    std::vector<Vec2> positions;           // positions[0] = seed
    std::vector<double> dist_to_boundary;
    std::vector<double> jacobian_estimate; // empty unless requested
    std::vector<Vec2> velocities;          // velocity at each recorded position
    bool crossed_boundary = false;         // within grid tolerance (diagnostic flag)
};

// RK4 advection through the stored trajectory, velocity linear in time
// between snapshots.  Seeds must lie off the initial boundaries.
std::vector<TracerPath> advect_tracers(const std::vector<Vec2>& seeds,
                                       const std::vector<ContourState>& trajectory,
                                       const PatchFamily& family, double alpha,
                                       const TracerOptions& options = {});

} // namespace msqg
