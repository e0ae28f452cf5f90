#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wanewave/dynamics.hpp"

namespace wanewave {

enum class SweepDirection { up, down };

inline const char* sweep_name(SweepDirection s) { return s == SweepDirection::up ? "up" : "down"; }

struct DiagramRow {
    double tau = 0.0;
    SweepDirection sweep = SweepDirection::up;
    OrbitSummary summary;
    std::string error; // non-empty when this row failed (kind stays undetermined)
};

struct SweepOptions {
    double transient = 300.0;
    double window = 60.0;
    /// Rows that classify as undetermined get their transient doubled and are
    /// re-examined, up to this many times.  Near a Hopf point the attracting
    /// or repelling rates vanish, so a fixed budget cannot resolve the edge
    /// rows; extensions sharpen the diagram where it matters.
    int max_extensions = 3;
    /// Relative kick applied to the I history of each row's warm start.  It
    /// seeds escape from weakly unstable equilibria; on stable rows it decays.
    double kick = 0.01;
    int history_samples = 4097;
    IntegrateOptions integrate;
    ClassifyOptions classify;
};

/// Brute-force one-parameter bifurcation diagram over tau.  Rows are visited
/// in sweep order (reversed grid for direction down) and each row's initial
/// history is the trailing segment of the previous row's trajectory.
std::vector<DiagramRow> sweep_diagram(const ModelParams& p_base, double tau_lo, double tau_hi,
                                      int steps, SweepDirection direction,
                                      const SweepOptions& opt = {});

/// (tau, period) pairs for the cycle rows.
std::vector<std::pair<double, double>> period_profile(const std::vector<DiagramRow>& rows);

} // namespace wanewave
