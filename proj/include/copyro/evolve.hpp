#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "copyro/featurize.hpp"
#include "copyro/gpr.hpp"

namespace copyro {

struct Bounds {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    int dim() const { return static_cast<int>(lo.size()); }
};

void check_bounds(const Bounds& bounds);  // InvalidBounds

// Constriction-style defaults; the velocity cap is a fraction of each
// dimension's range.
struct PsoConfig {
    int swarm_size = 30;
    int iterations = 100;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    double velocity_cap = 0.2;
    std::uint64_t seed = 0;
};

struct PsoResult {
    Eigen::VectorXd best_position;
    double best_value = 0.0;
    std::vector<double> trace;  // best value after each iteration, non-increasing
    std::size_t evaluations = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

PsoResult pso_minimize(const Objective& objective, const Bounds& bounds,
                       const PsoConfig& config);

// Pareto dominance for minimization: a <= b everywhere and a < b somewhere.
bool dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct ArchiveMember {
    Eigen::VectorXd position;
    Eigen::VectorXd objectives;
    double crowding = 0.0;
};

// Sum over objectives of normalized neighbor gaps; per-objective extreme
// members get +infinity.
std::vector<double> crowding_distance(const std::vector<Eigen::VectorXd>& objectives);

// Capacity-bounded mutually non-dominated set. Inserting evicts dominated
// members; over capacity, the member with the smallest crowding distance
// (never a boundary member) goes first.
class ParetoArchive {
  public:
    explicit ParetoArchive(std::size_t capacity = 100) : capacity_(capacity) {}

    bool insert(const Eigen::VectorXd& position, const Eigen::VectorXd& objectives);
    const std::vector<ArchiveMember>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    std::size_t capacity() const { return capacity_; }

  private:
    void refresh_crowding();

    std::size_t capacity_;
    std::vector<ArchiveMember> members_;
};

// Groups of decision-vector indices kept feasible by repair: renormalize
// groups are scaled (respecting bounds) to sum exactly to the target; cap
// groups are scaled down when their sum exceeds the limit.
struct SumRule {
    std::vector<int> indices;
    double target = 100.0;
};

struct ConstraintSpec {
    Bounds bounds;
    std::vector<SumRule> renormalize_groups;
    std::vector<SumRule> cap_groups;
};

// Clamp to bounds, then apply the group rules exactly (box-constrained
// proportional scaling, pinning coordinates that hit a bound). Idempotent.
Eigen::VectorXd repair(Eigen::VectorXd position, const ConstraintSpec& constraints);

struct MopsoConfig {
    int swarm_size = 30;
    int iterations = 100;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    double velocity_cap = 0.2;
    std::size_t archive_capacity = 100;
    double turbulence_prob = 0.1;  // one coordinate resampled uniformly
    std::uint64_t seed = 0;
};

using VectorObjective = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Leaders are picked per particle by binary tournament on archive crowding
// distance (less crowded wins); positions are repaired after every move.
ParetoArchive mopso_minimize(const VectorObjective& objectives, int objective_count,
                             const Bounds& bounds, const ConstraintSpec& constraints,
                             const MopsoConfig& config);

struct ParetoPoint {
    std::vector<double> inputs;  // 20 raw inputs
    double oil = 0.0;
    double char_ = 0.0;
    double syngas = 0.0;
};

struct OptimizationReport {
    ParetoArchive archive{100};
    std::vector<ParetoPoint> points;  // denormalized, same order as archive
    std::size_t evaluations = 0;
};

// Constraints for the 20-column co-pyrolysis decision vector: both proximate
// triples renormalize to 100, both CHNSO quintuples cap at 100.
ConstraintSpec copyrolysis_constraints(const Bounds& bounds);

// Maximize oil, minimize char and syngas through the surrogate chain
// repair -> construct -> standardize -> project -> min-max -> GPR x3 ->
// invert target scaling. Bounds default to the pipeline's raw-input ranges.
// Models whose pipeline fingerprint is set must match (PipelineMismatch).
OptimizationReport optimize_copyrolysis(const GprModel& oil_model, const GprModel& char_model,
                                        const GprModel& syngas_model,
                                        const FeaturePipeline& pipeline, const MopsoConfig& config,
                                        const Bounds* bounds_override = nullptr);

}  // namespace copyro
