#include "jla/parallel.hpp"

#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jla {

namespace {

void check_batch(const StateBatch& s, const LimitSet& lim) {
    if (s.a.rows() != lim.size() || s.b.rows() != lim.size() || s.a.cols() != s.b.cols()) {
        throw std::invalid_argument("batch: shape does not match the limit set");
    }
}

void forward_column(const StateBatch& in, StateBatch& out, const LimitSet& lim, Eigen::Index j) {
    const JointState js = forward_map({in.a.col(j), in.b.col(j)}, lim);
    out.a.col(j) = js.q;
    out.b.col(j) = js.dq;
}

void backward_column(const StateBatch& in, StateBatch& out, const LimitSet& lim, double eps, Eigen::Index j) {
    const TransformedState ts = backward_map({in.a.col(j), in.b.col(j)}, lim, InverseMode::saturated, eps);
    out.a.col(j) = ts.zeta;
    out.b.col(j) = ts.psi;
}

StateBatch like(const StateBatch& s) { return {Mat(s.a.rows(), s.a.cols()), Mat(s.b.rows(), s.b.cols())}; }

}  // namespace

StateBatch batch_forward_map(const StateBatch& transformed, const LimitSet& lim) {
    check_batch(transformed, lim);
    StateBatch out = like(transformed);
    for (Eigen::Index j = 0; j < transformed.a.cols(); ++j) forward_column(transformed, out, lim, j);
    return out;
}

StateBatch batch_backward_map(const StateBatch& joints, const LimitSet& lim, double eps) {
    check_batch(joints, lim);
    StateBatch out = like(joints);
    for (Eigen::Index j = 0; j < joints.a.cols(); ++j) backward_column(joints, out, lim, eps, j);
    return out;
}

StateBatch batch_forward_map_omp(const StateBatch& transformed, const LimitSet& lim) {
    check_batch(transformed, lim);
    StateBatch out = like(transformed);
    const Eigen::Index cols = transformed.a.cols();
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < cols; ++j) forward_column(transformed, out, lim, j);
    return out;
}

StateBatch batch_backward_map_omp(const StateBatch& joints, const LimitSet& lim, double eps) {
    check_batch(joints, lim);
    StateBatch out = like(joints);
    const Eigen::Index cols = joints.a.cols();
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < cols; ++j) backward_column(joints, out, lim, eps, j);
    return out;
}

std::vector<SweepRow> sweep_timestep_omp(const PlanarChainModel& model, const LimitSet& lim,
                                         const ControllerConfig& ctrl, const TrajectorySpec& spec,
                                         const SimConfig& base, const std::vector<double>& dt_controls,
                                         double settle_band) {
    if (dt_controls.empty()) throw std::invalid_argument("sweep: dt list must not be empty");
    const long count = static_cast<long>(dt_controls.size());
    std::vector<SweepRow> rows(dt_controls.size());
    std::vector<std::exception_ptr> errors(dt_controls.size());
    // Long and short runs mix freely, hence dynamic scheduling.
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
        try {
            SimConfig cfg = base;
            cfg.dt_control = dt_controls[i];
            cfg.dt_physics = std::min(base.dt_physics, dt_controls[i]);
            rows[i] = summarize_sweep_run(dt_controls[i], simulate(model, lim, ctrl, spec, cfg), lim, settle_band);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace jla
