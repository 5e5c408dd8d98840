#include "copyro/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copyro/errors.hpp"
#include "copyro/rng.hpp"

namespace copyro {

void check_bounds(const Bounds& bounds) {
    if (bounds.lo.size() != bounds.hi.size() || bounds.lo.size() == 0)
        throw InvalidBounds("bounds must be non-empty with matching lo/hi lengths");
    for (Eigen::Index i = 0; i < bounds.lo.size(); ++i) {
        if (!(std::isfinite(bounds.lo[i]) && std::isfinite(bounds.hi[i])) ||
            bounds.lo[i] > bounds.hi[i])
            throw InvalidBounds("bounds dimension " + std::to_string(i) +
                                " has lo > hi or non-finite edges");
    }
}

PsoResult pso_minimize(const Objective& objective, const Bounds& bounds,
                       const PsoConfig& config) {
    check_bounds(bounds);
    if (config.swarm_size < 2) throw InvalidBounds("PSO swarm size must be >= 2");
    if (config.iterations < 1) throw InvalidBounds("PSO iterations must be >= 1");
    const int d = bounds.dim();
    const Eigen::VectorXd range = bounds.hi - bounds.lo;
    const Eigen::VectorXd vmax = config.velocity_cap * range;

    Rng rng = Rng(config.seed).substream("pso");
    std::vector<Eigen::VectorXd> position(config.swarm_size), velocity(config.swarm_size),
        best_position(config.swarm_size);
    std::vector<double> best_value(config.swarm_size);

    PsoResult result;
    result.best_value = std::numeric_limits<double>::infinity();
    for (int p = 0; p < config.swarm_size; ++p) {
        position[p].resize(d);
        for (int j = 0; j < d; ++j) position[p][j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
        velocity[p] = Eigen::VectorXd::Zero(d);
        best_position[p] = position[p];
        best_value[p] = objective(position[p]);
        ++result.evaluations;
        if (best_value[p] < result.best_value) {
            result.best_value = best_value[p];
            result.best_position = position[p];
        }
    }

    for (int iter = 0; iter < config.iterations; ++iter) {
        for (int p = 0; p < config.swarm_size; ++p) {
            for (int j = 0; j < d; ++j) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                double v = config.inertia * velocity[p][j] +
                           config.cognitive * r1 * (best_position[p][j] - position[p][j]) +
                           config.social * r2 * (result.best_position[j] - position[p][j]);
                v = std::clamp(v, -vmax[j], vmax[j]);
                double x = position[p][j] + v;
                if (x < bounds.lo[j]) {  // clamp and kill the wall-normal velocity
                    x = bounds.lo[j];
                    v = 0.0;
                } else if (x > bounds.hi[j]) {
                    x = bounds.hi[j];
                    v = 0.0;
                }
                velocity[p][j] = v;
                position[p][j] = x;
            }
            const double value = objective(position[p]);
            ++result.evaluations;
            if (value < best_value[p]) {
                best_value[p] = value;
                best_position[p] = position[p];
            }
            if (value < result.best_value) {
                result.best_value = value;
                result.best_position = position[p];
            }
        }
        result.trace.push_back(result.best_value);
    }
    return result;
}

bool dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("objective vectors differ in length");
    bool strictly_better = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

std::vector<double> crowding_distance(const std::vector<Eigen::VectorXd>& objectives) {
    const std::size_t n = objectives.size();
    std::vector<double> distance(n, 0.0);
    if (n == 0) return distance;
    const auto k = objectives.front().size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> order(n);
    for (Eigen::Index obj = 0; obj < k; ++obj) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objectives[a][obj] < objectives[b][obj];
        });
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        const double span = objectives[order.back()][obj] - objectives[order.front()][obj];
        if (span <= 0.0) continue;
        for (std::size_t r = 1; r + 1 < n; ++r) {
            if (distance[order[r]] == inf) continue;
            distance[order[r]] +=
                (objectives[order[r + 1]][obj] - objectives[order[r - 1]][obj]) / span;
        }
    }
    return distance;
}

void ParetoArchive::refresh_crowding() {
    std::vector<Eigen::VectorXd> objs;
    objs.reserve(members_.size());
    for (const auto& m : members_) objs.push_back(m.objectives);
    const auto dist = crowding_distance(objs);
    for (std::size_t i = 0; i < members_.size(); ++i) members_[i].crowding = dist[i];
}

bool ParetoArchive::insert(const Eigen::VectorXd& position, const Eigen::VectorXd& objectives) {
    if (!objectives.allFinite()) return false;
    for (const auto& m : members_) {
        if (dominates(m.objectives, objectives)) return false;
        const bool same_obj = m.objectives.size() == objectives.size() &&
                              (m.objectives.array() == objectives.array()).all();
        if (same_obj && m.position.size() == position.size() &&
            (m.position.array() == position.array()).all())
            return false;  // exact duplicate
    }
    members_.erase(std::remove_if(members_.begin(), members_.end(),
                                  [&](const ArchiveMember& m) {
                                      return dominates(objectives, m.objectives);
                                  }),
                   members_.end());
    members_.push_back({position, objectives, 0.0});
    refresh_crowding();
    while (members_.size() > capacity_) {
        std::size_t victim = members_.size();
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (members_[i].crowding < smallest) {
                smallest = members_[i].crowding;
                victim = i;
            }
        }
        if (victim == members_.size()) victim = members_.size() - 1;  // all boundary: drop newest
        members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(victim));
        refresh_crowding();
    }
    return true;
}

namespace {

// scale a coordinate group (non-negative domain) to sum exactly to `target`,
// pinning coordinates at the box edge they hit and rescaling the rest; when
// the box itself forbids the target sum, saturates at the nearest box face
void scale_group_to_sum(Eigen::VectorXd& x, const Bounds& bounds, const std::vector<int>& idx,
                        double target) {
    std::vector<int> free(idx.begin(), idx.end());
    double pinned_sum = 0.0;
    for (int round = 0; round <= static_cast<int>(idx.size()) + 1; ++round) {
        double free_sum = 0.0;
        for (int i : free) free_sum += x[i];
        const double want = target - pinned_sum;
        if (free.empty() || std::abs(free_sum - want) < 1e-12) return;
        if (free_sum <= 0.0) {
            if (want <= 0.0) return;
            for (int i : free) x[i] = want / static_cast<double>(free.size());
            free_sum = want;  // equal shares; next rounds pin out-of-box ones
        }
        const double factor = want / free_sum;
        bool pinned_any = false;
        std::vector<int> still_free;
        for (int i : free) {
            double v = x[i] * factor;
            if (v < bounds.lo[i]) {
                v = bounds.lo[i];
                pinned_sum += v;
                pinned_any = true;
            } else if (v > bounds.hi[i]) {
                v = bounds.hi[i];
                pinned_sum += v;
                pinned_any = true;
            } else {
                still_free.push_back(i);
            }
            x[i] = v;
        }
        if (!pinned_any) return;
        free = std::move(still_free);
    }
}

}  // namespace

Eigen::VectorXd repair(Eigen::VectorXd position, const ConstraintSpec& constraints) {
    check_bounds(constraints.bounds);
    if (position.size() != constraints.bounds.lo.size())
        throw DimensionMismatch("position length does not match constraint bounds");
    for (Eigen::Index i = 0; i < position.size(); ++i)
        position[i] = std::clamp(position[i], constraints.bounds.lo[i], constraints.bounds.hi[i]);
    for (const auto& rule : constraints.renormalize_groups)
        scale_group_to_sum(position, constraints.bounds, rule.indices, rule.target);
    for (const auto& rule : constraints.cap_groups) {
        double sum = 0.0;
        for (int i : rule.indices) sum += position[i];
        if (sum > rule.target)
            scale_group_to_sum(position, constraints.bounds, rule.indices, rule.target);
    }
    return position;
}

ParetoArchive mopso_minimize(const VectorObjective& objectives, int objective_count,
                             const Bounds& bounds, const ConstraintSpec& constraints,
                             const MopsoConfig& config) {
    check_bounds(bounds);
    if (objective_count < 2) throw InvalidBounds("MOPSO needs at least two objectives");
    if (config.swarm_size < 2) throw InvalidBounds("MOPSO swarm size must be >= 2");
    const int d = bounds.dim();
    const Eigen::VectorXd range = bounds.hi - bounds.lo;
    const Eigen::VectorXd vmax = config.velocity_cap * range;

    Rng rng = Rng(config.seed).substream("mopso");
    ParetoArchive archive(config.archive_capacity);

    std::vector<Eigen::VectorXd> position(config.swarm_size), velocity(config.swarm_size),
        pbest_pos(config.swarm_size), pbest_obj(config.swarm_size);

    for (int p = 0; p < config.swarm_size; ++p) {
        position[p].resize(d);
        for (int j = 0; j < d; ++j) position[p][j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
        position[p] = repair(position[p], constraints);
        velocity[p] = Eigen::VectorXd::Zero(d);
        pbest_pos[p] = position[p];
        pbest_obj[p] = objectives(position[p]);
        if (pbest_obj[p].size() != objective_count)
            throw DimensionMismatch("objective function returned a wrong-length vector");
        archive.insert(position[p], pbest_obj[p]);
    }

    for (int iter = 0; iter < config.iterations; ++iter) {
        for (int p = 0; p < config.swarm_size; ++p) {
            // binary tournament on crowding distance: prefer the less crowded leader
            const auto& pool = archive.members();
            const std::size_t a = pool.empty() ? 0 : rng.below(pool.size());
            const std::size_t b = pool.empty() ? 0 : rng.below(pool.size());
            const Eigen::VectorXd leader_pos =
                pool.empty() ? pbest_pos[p]
                             : (pool[a].crowding >= pool[b].crowding ? pool[a].position
                                                                     : pool[b].position);

            for (int j = 0; j < d; ++j) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                double v = config.inertia * velocity[p][j] +
                           config.cognitive * r1 * (pbest_pos[p][j] - position[p][j]) +
                           config.social * r2 * (leader_pos[j] - position[p][j]);
                v = std::clamp(v, -vmax[j], vmax[j]);
                double x = position[p][j] + v;
                if (x < bounds.lo[j]) {
                    x = bounds.lo[j];
                    v = 0.0;
                } else if (x > bounds.hi[j]) {
                    x = bounds.hi[j];
                    v = 0.0;
                }
                velocity[p][j] = v;
                position[p][j] = x;
            }
            if (rng.uniform() < config.turbulence_prob) {
                const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
                position[p][j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
            }
            position[p] = repair(position[p], constraints);

            const Eigen::VectorXd obj = objectives(position[p]);
            archive.insert(position[p], obj);
            if (dominates(obj, pbest_obj[p])) {
                pbest_obj[p] = obj;
                pbest_pos[p] = position[p];
            } else if (!dominates(pbest_obj[p], obj) && rng.uniform() < 0.5) {
                pbest_obj[p] = obj;  // mutually non-dominated: coin flip
                pbest_pos[p] = position[p];
            }
        }
    }
    return archive;
}

ConstraintSpec copyrolysis_constraints(const Bounds& bounds) {
    ConstraintSpec spec;
    spec.bounds = bounds;
    spec.renormalize_groups.push_back({{5, 6, 7}, 100.0});     // biomass VM/FC/ash
    spec.renormalize_groups.push_back({{13, 14, 15}, 100.0});  // polymer VM/FC/ash
    spec.cap_groups.push_back({{0, 1, 2, 3, 4}, 100.0});       // biomass CHNSO
    spec.cap_groups.push_back({{8, 9, 10, 11, 12}, 100.0});    // polymer CHNSO
    return spec;
}

OptimizationReport optimize_copyrolysis(const GprModel& oil_model, const GprModel& char_model,
                                        const GprModel& syngas_model,
                                        const FeaturePipeline& pipeline,
                                        const MopsoConfig& config,
                                        const Bounds* bounds_override) {
    const std::uint64_t fp = pipeline.fingerprint();
    for (const GprModel* m : {&oil_model, &char_model, &syngas_model}) {
        if (m->pipeline_fingerprint != 0 && m->pipeline_fingerprint != fp)
            throw PipelineMismatch("model was trained against a different pipeline");
        if (m->train_x.cols() != pipeline.score_dim())
            throw PipelineMismatch("model input dimension does not match the pipeline");
    }

    Bounds bounds;
    if (bounds_override) {
        bounds = *bounds_override;
        if (bounds.dim() != kInputCount)
            throw InvalidBounds("co-pyrolysis bounds must cover all 20 raw inputs");
    } else {
        bounds.lo = pipeline.raw_input_lo;
        bounds.hi = pipeline.raw_input_hi;
    }
    check_bounds(bounds);
    const ConstraintSpec constraints = copyrolysis_constraints(bounds);

    std::size_t evaluations = 0;
    auto predict_yields = [&](const Eigen::VectorXd& x) {
        std::vector<double> raw(x.data(), x.data() + x.size());
        const CoPyrolysisRecord rec = record_from_inputs(raw, "candidate");
        const Eigen::VectorXd scores = transform_input_vector(pipeline, rec);
        const Eigen::MatrixXd q = scores.transpose();
        Eigen::Vector3d normalized;
        normalized[0] = gpr_predict_mean(oil_model, q)[0];
        normalized[1] = gpr_predict_mean(char_model, q)[0];
        normalized[2] = gpr_predict_mean(syngas_model, q)[0];
        return invert_targets(pipeline, normalized);
    };

    auto objective = [&](const Eigen::VectorXd& x) {
        ++evaluations;
        const Eigen::Vector3d yields = predict_yields(x);
        Eigen::VectorXd obj(3);
        obj[0] = -yields[0];  // maximize oil
        obj[1] = yields[1];
        obj[2] = yields[2];
        return obj;
    };

    OptimizationReport report;
    report.archive = mopso_minimize(objective, 3, bounds, constraints, config);
    report.evaluations = evaluations;
    for (const auto& member : report.archive.members()) {
        ParetoPoint pt;
        pt.inputs.assign(member.position.data(), member.position.data() + member.position.size());
        pt.oil = -member.objectives[0];
        pt.char_ = member.objectives[1];
        pt.syngas = member.objectives[2];
        report.points.push_back(std::move(pt));
    }
    return report;
}

}  // namespace copyro
