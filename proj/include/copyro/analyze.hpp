#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "copyro/evolve.hpp"
#include "copyro/featurize.hpp"
#include "copyro/gpr.hpp"
#include "copyro/types.hpp"

namespace copyro {

// Average ranks on ties, then Pearson on the ranks.
double spearman(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> average_ranks(const std::vector<double>& values);

struct CorrelationMatrix {
    std::vector<std::string> labels;  // 20 inputs + 3 yields
    Eigen::MatrixXd values;           // symmetric, unit diagonal
    std::vector<std::vector<bool>> defined;  // false marks a constant-column entry
};

// Pairwise Spearman over the raw inputs and yields. Constant columns yield
// flagged undefined entries (NaN) instead of an error; the diagonal stays 1.
CorrelationMatrix correlation_matrix(const std::vector<CoPyrolysisRecord>& records);

struct VanKrevelenPoint {
    double o_c = 0.0;
    double n_c = 0.0;
    double h_c_eff = 0.0;
};

// Molar ratios from mass percent with atomic masses C 12.011, H 1.008,
// N 14.007, S 32.06, O 15.999;
// h_c_eff = (H - 2*O - 3*N - 2*S) / C over moles.
VanKrevelenPoint molar_ratios(const FeedstockComposition& comp);

struct AxisSpec {
    std::string name;  // raw input column name
    int column = 0;
    double lo = 0.0;
    double hi = 0.0;
    int steps = 0;
};

struct ContourGrid {
    AxisSpec x_axis;
    AxisSpec y_axis;
    CoPyrolysisRecord fixed;
    Eigen::MatrixXd oil, char_, syngas;  // steps x steps, rows follow the y axis
};

// Full-pipeline response surface over a two-variable lattice. The fixed
// record must be feasible (InfeasibleFixedPoint); lattice points are fed to
// the surrogate as-is.
ContourGrid contour_grid(const GprModel& oil_model, const GprModel& char_model,
                         const GprModel& syngas_model, const FeaturePipeline& pipeline,
                         const std::string& x_var, const std::string& y_var,
                         const CoPyrolysisRecord& fixed, int steps);

}  // namespace copyro
