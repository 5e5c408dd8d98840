#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "copyro/types.hpp"

namespace copyro {

inline constexpr int kFeatureCount = 35;

// Labels for the 35 constructed columns: four 8-column blocks
// (lin_biomass_*, lin_polymer_*, crosssq_biomass_*, crosssq_polymer_*)
// followed by temp_c, heat_rate_c_min, time_min.
const std::vector<std::string>& feature_column_labels();

struct ConstructedFeatures {
    Eigen::MatrixXd matrix;  // n x 35
    std::vector<std::string> column_labels;
};

// Nonlinear feature construction. With A the blending percentage, X/Y the
// 8-column biomass/polymer composition vectors:
//   cols  1..8  = A*X            (elementwise)
//   cols  9..16 = (100-A)*Y
//   cols 17..24 = (A*X)^2 * ((100-A)*Y)
//   cols 25..32 = (A*X) * ((100-A)*Y)^2
//   cols 33..35 = temperature, heating rate, reaction time
Eigen::VectorXd construct_features(const CoPyrolysisRecord& rec);
ConstructedFeatures construct_feature_matrix(const std::vector<CoPyrolysisRecord>& records);

// Columnwise z-scoring (population sd). Columns with sd < 1e-12 are treated
// as constant and map to 0.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;  // 0 marks a constant column

    bool is_constant(int col) const { return sd[col] == 0.0; }
};

Standardizer fit_standardizer(const Eigen::MatrixXd& matrix);  // TooFewRows if rows < 2
Eigen::MatrixXd apply_standardizer(const Standardizer& st, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd invert_standardizer(const Standardizer& st, const Eigen::MatrixXd& matrix);

struct PcaModel {
    Eigen::VectorXd column_mean;               // p
    Eigen::MatrixXd loadings;                  // p x m, orthonormal columns
    Eigen::VectorXd explained_variance_ratio;  // m, non-increasing
    Eigen::VectorXd eigenvalues;               // m, for diagnostics

    int retained() const { return static_cast<int>(loadings.cols()); }
};

// Symmetric eigendecomposition of the sample covariance; retains the
// smallest m whose cumulative explained variance reaches the threshold.
// Sign convention: the largest-magnitude entry of each loading is positive.
PcaModel fit_pca(const Eigen::MatrixXd& matrix, double variance_threshold);

Eigen::VectorXd project(const PcaModel& pca, const Eigen::VectorXd& v);
Eigen::MatrixXd project_rows(const PcaModel& pca, const Eigen::MatrixXd& matrix);
Eigen::VectorXd reconstruct(const PcaModel& pca, const Eigen::VectorXd& scores);

// Min-max to [0,1] on the fitting set; out-of-range values are not clamped;
// constant columns map to 0.5.
struct MinMaxScaler {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

MinMaxScaler fit_minmax(const Eigen::MatrixXd& matrix);
Eigen::MatrixXd apply_minmax(const MinMaxScaler& sc, const Eigen::MatrixXd& matrix);
Eigen::MatrixXd invert_minmax(const MinMaxScaler& sc, const Eigen::MatrixXd& matrix);
Eigen::VectorXd apply_minmax_row(const MinMaxScaler& sc, const Eigen::VectorXd& row);
Eigen::VectorXd invert_minmax_row(const MinMaxScaler& sc, const Eigen::VectorXd& row);

struct PipelineOptions {
    double variance_threshold = 0.995;
    bool standardize = true;  // z-score before PCA (disable to feed raw columns)
};

// Fitted construct -> standardize -> PCA -> min-max chain, plus the target
// scaler and the raw-input ranges of the fitting set (used as default
// optimization bounds).
struct FeaturePipeline {
    PipelineOptions options;
    Standardizer standardizer;
    PcaModel pca;
    MinMaxScaler score_scaler;
    MinMaxScaler target_scaler;
    Eigen::VectorXd raw_input_lo;  // 20
    Eigen::VectorXd raw_input_hi;  // 20

    int score_dim() const { return pca.retained(); }
    std::uint64_t fingerprint() const;
};

// Training records must carry yields (MissingYields otherwise).
FeaturePipeline fit_pipeline(const std::vector<CoPyrolysisRecord>& records,
                             const PipelineOptions& options = {});

// n x m normalized score matrix for arbitrary records.
Eigen::MatrixXd transform_inputs(const FeaturePipeline& p,
                                 const std::vector<CoPyrolysisRecord>& records);
Eigen::VectorXd transform_input_vector(const FeaturePipeline& p, const CoPyrolysisRecord& rec);

// n x 3 normalized target matrix; records must carry yields.
Eigen::MatrixXd transform_targets(const FeaturePipeline& p,
                                  const std::vector<CoPyrolysisRecord>& records);
// Maps normalized (oil, char, syngas) predictions back to mass percent.
Eigen::Vector3d invert_targets(const FeaturePipeline& p, const Eigen::Vector3d& normalized);

}  // namespace copyro
