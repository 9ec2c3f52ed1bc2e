#pragma once

#include "jla/sim.hpp"

#include <vector>

namespace jla {

/// Column-major batches: column j holds one point (n rows).
struct StateBatch {
    Mat a;  // q or zeta
    Mat b;  // dq or psi
};

// Serial references. The _omp versions split columns across threads and
// must agree bit for bit.
StateBatch batch_forward_map(const StateBatch& transformed, const LimitSet& lim);
StateBatch batch_backward_map(const StateBatch& joints, const LimitSet& lim, double eps = kDefaultEpsilonSat);
StateBatch batch_forward_map_omp(const StateBatch& transformed, const LimitSet& lim);
StateBatch batch_backward_map_omp(const StateBatch& joints, const LimitSet& lim,
                                  double eps = kDefaultEpsilonSat);

/// Same rows as sweep_timestep, one simulation per thread.
std::vector<SweepRow> sweep_timestep_omp(const PlanarChainModel& model, const LimitSet& lim,
                                         const ControllerConfig& ctrl, const TrajectorySpec& spec,
                                         const SimConfig& base, const std::vector<double>& dt_controls,
                                         double settle_band = std::numbers::pi / 180.0);

/// Threads OpenMP will use (1 without OpenMP).
int max_threads();

}  // namespace jla
