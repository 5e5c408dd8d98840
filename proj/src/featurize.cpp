#include "copyro/featurize.hpp"

#include <cmath>
#include <cstring>

#include "copyro/errors.hpp"

namespace copyro {

namespace {
constexpr double kConstantSdTol = 1e-12;

const char* kCompositionFields[8] = {"c", "h", "n", "s", "o", "vm", "fc", "ash"};
}  // namespace

const std::vector<std::string>& feature_column_labels() {
    static const std::vector<std::string> labels = [] {
        std::vector<std::string> v;
        v.reserve(kFeatureCount);
        for (const char* f : kCompositionFields) v.push_back(std::string("lin_biomass_") + f);
        for (const char* f : kCompositionFields) v.push_back(std::string("lin_polymer_") + f);
        for (const char* f : kCompositionFields) v.push_back(std::string("crosssq_biomass_") + f);
        for (const char* f : kCompositionFields) v.push_back(std::string("crosssq_polymer_") + f);
        v.push_back("temp_c");
        v.push_back("heat_rate_c_min");
        v.push_back("time_min");
        return v;
    }();
    return labels;
}

Eigen::VectorXd construct_features(const CoPyrolysisRecord& rec) {
    const double a = rec.conditions.blending_pct;
    const double comp_b[8] = {rec.biomass.c,
                              rec.biomass.h,
                              rec.biomass.n,
                              rec.biomass.s,
                              rec.biomass.o,
                              rec.biomass.volatile_matter,
                              rec.biomass.fixed_carbon,
                              rec.biomass.ash};
    const double comp_p[8] = {rec.polymer.c,
                              rec.polymer.h,
                              rec.polymer.n,
                              rec.polymer.s,
                              rec.polymer.o,
                              rec.polymer.volatile_matter,
                              rec.polymer.fixed_carbon,
                              rec.polymer.ash};
    Eigen::VectorXd z(kFeatureCount);
    for (int j = 0; j < 8; ++j) {
        const double ax = a * comp_b[j];
        const double ay = (100.0 - a) * comp_p[j];
        z[j] = ax;
        z[8 + j] = ay;
        z[16 + j] = ax * ax * ay;
        z[24 + j] = ax * ay * ay;
    }
    z[32] = rec.conditions.temperature;
    z[33] = rec.conditions.heating_rate;
    z[34] = rec.conditions.reaction_time;
    return z;
}

ConstructedFeatures construct_feature_matrix(const std::vector<CoPyrolysisRecord>& records) {
    ConstructedFeatures cf;
    cf.column_labels = feature_column_labels();
    cf.matrix.resize(static_cast<Eigen::Index>(records.size()), kFeatureCount);
    for (std::size_t i = 0; i < records.size(); ++i)
        cf.matrix.row(static_cast<Eigen::Index>(i)) = construct_features(records[i]).transpose();
    return cf;
}

Standardizer fit_standardizer(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() < 2) throw TooFewRows("standardizer needs at least 2 rows");
    Standardizer st;
    const auto n = static_cast<double>(matrix.rows());
    st.mean = matrix.colwise().mean();
    st.sd.resize(matrix.cols());
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        const double var = (matrix.col(j).array() - st.mean[j]).square().sum() / n;
        const double sd = std::sqrt(std::max(var, 0.0));
        st.sd[j] = sd < kConstantSdTol ? 0.0 : sd;
    }
    return st;
}

Eigen::MatrixXd apply_standardizer(const Standardizer& st, const Eigen::MatrixXd& matrix) {
    if (matrix.cols() != st.mean.size())
        throw DimensionMismatch("standardizer fitted on different column count");
    Eigen::MatrixXd out(matrix.rows(), matrix.cols());
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        if (st.is_constant(static_cast<int>(j)))
            out.col(j).setZero();
        else
            out.col(j) = (matrix.col(j).array() - st.mean[j]) / st.sd[j];
    }
    return out;
}

Eigen::MatrixXd invert_standardizer(const Standardizer& st, const Eigen::MatrixXd& matrix) {
    if (matrix.cols() != st.mean.size())
        throw DimensionMismatch("standardizer fitted on different column count");
    Eigen::MatrixXd out(matrix.rows(), matrix.cols());
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
        if (st.is_constant(static_cast<int>(j)))
            out.col(j).setConstant(st.mean[j]);
        else
            out.col(j) = matrix.col(j).array() * st.sd[j] + st.mean[j];
    }
    return out;
}

PcaModel fit_pca(const Eigen::MatrixXd& matrix, double variance_threshold) {
    if (matrix.rows() < 2) throw TooFewRows("PCA needs at least 2 rows");
    const Eigen::Index p = matrix.cols();
    PcaModel model;
    model.column_mean = matrix.colwise().mean();
    Eigen::MatrixXd centered = matrix.rowwise() - model.column_mean.transpose();
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(matrix.rows() - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw DegenerateMatrix("eigendecomposition of the covariance failed");
    // ascending from Eigen; reorder descending and clamp numerical negatives
    Eigen::VectorXd eigenvalues(p);
    Eigen::MatrixXd vectors(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        eigenvalues[j] = std::max(solver.eigenvalues()[p - 1 - j], 0.0);
        vectors.col(j) = solver.eigenvectors().col(p - 1 - j);
    }
    const double total = eigenvalues.sum();
    if (total <= 0.0) throw DegenerateMatrix("all columns have zero variance");

    // deterministic sign: largest-magnitude loading entry positive
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::Index imax = 0;
        vectors.col(j).cwiseAbs().maxCoeff(&imax);
        if (vectors(imax, j) < 0.0) vectors.col(j) = -vectors.col(j);
    }

    Eigen::Index m = p;
    double cumulative = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        cumulative += eigenvalues[j] / total;
        if (cumulative >= variance_threshold - 1e-12) {
            m = j + 1;
            break;
        }
    }

    model.loadings = vectors.leftCols(m);
    model.eigenvalues = eigenvalues.head(m);
    model.explained_variance_ratio = eigenvalues.head(m) / total;
    return model;
}

Eigen::VectorXd project(const PcaModel& pca, const Eigen::VectorXd& v) {
    if (v.size() != pca.column_mean.size())
        throw DimensionMismatch("vector length does not match the fitted PCA");
    return pca.loadings.transpose() * (v - pca.column_mean);
}

Eigen::MatrixXd project_rows(const PcaModel& pca, const Eigen::MatrixXd& matrix) {
    if (matrix.cols() != pca.column_mean.size())
        throw DimensionMismatch("matrix width does not match the fitted PCA");
    return (matrix.rowwise() - pca.column_mean.transpose()) * pca.loadings;
}

Eigen::VectorXd reconstruct(const PcaModel& pca, const Eigen::VectorXd& scores) {
    if (scores.size() != pca.retained())
        throw DimensionMismatch("score length does not match retained components");
    return pca.column_mean + pca.loadings * scores;
}

MinMaxScaler fit_minmax(const Eigen::MatrixXd& matrix) {
    MinMaxScaler sc;
    sc.lo = matrix.colwise().minCoeff();
    sc.hi = matrix.colwise().maxCoeff();
    return sc;
}

namespace {

double minmax_apply_one(const MinMaxScaler& sc, Eigen::Index j, double v) {
    const double range = sc.hi[j] - sc.lo[j];
    if (range <= 0.0) return 0.5;
    return (v - sc.lo[j]) / range;
}

double minmax_invert_one(const MinMaxScaler& sc, Eigen::Index j, double v) {
    const double range = sc.hi[j] - sc.lo[j];
    if (range <= 0.0) return sc.lo[j];
    return sc.lo[j] + v * range;
}

}  // namespace

Eigen::MatrixXd apply_minmax(const MinMaxScaler& sc, const Eigen::MatrixXd& matrix) {
    if (matrix.cols() != sc.lo.size())
        throw DimensionMismatch("min-max scaler fitted on different column count");
    Eigen::MatrixXd out(matrix.rows(), matrix.cols());
    for (Eigen::Index j = 0; j < matrix.cols(); ++j)
        for (Eigen::Index i = 0; i < matrix.rows(); ++i)
            out(i, j) = minmax_apply_one(sc, j, matrix(i, j));
    return out;
}

Eigen::MatrixXd invert_minmax(const MinMaxScaler& sc, const Eigen::MatrixXd& matrix) {
    if (matrix.cols() != sc.lo.size())
        throw DimensionMismatch("min-max scaler fitted on different column count");
    Eigen::MatrixXd out(matrix.rows(), matrix.cols());
    for (Eigen::Index j = 0; j < matrix.cols(); ++j)
        for (Eigen::Index i = 0; i < matrix.rows(); ++i)
            out(i, j) = minmax_invert_one(sc, j, matrix(i, j));
    return out;
}

Eigen::VectorXd apply_minmax_row(const MinMaxScaler& sc, const Eigen::VectorXd& row) {
    if (row.size() != sc.lo.size())
        throw DimensionMismatch("min-max scaler fitted on different column count");
    Eigen::VectorXd out(row.size());
    for (Eigen::Index j = 0; j < row.size(); ++j) out[j] = minmax_apply_one(sc, j, row[j]);
    return out;
}

Eigen::VectorXd invert_minmax_row(const MinMaxScaler& sc, const Eigen::VectorXd& row) {
    if (row.size() != sc.lo.size())
        throw DimensionMismatch("min-max scaler fitted on different column count");
    Eigen::VectorXd out(row.size());
    for (Eigen::Index j = 0; j < row.size(); ++j) out[j] = minmax_invert_one(sc, j, row[j]);
    return out;
}

std::uint64_t FeaturePipeline::fingerprint() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix_double = [&h](double v) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h = (h ^ (bits & 0xFF)) * 0x100000001B3ULL;
            bits >>= 8;
        }
    };
    auto mix_matrix = [&](const Eigen::MatrixXd& m) {
        mix_double(static_cast<double>(m.rows()));
        mix_double(static_cast<double>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) mix_double(m(i, j));
    };
    mix_double(options.variance_threshold);
    mix_double(options.standardize ? 1.0 : 0.0);
    mix_matrix(standardizer.mean);
    mix_matrix(standardizer.sd);
    mix_matrix(pca.column_mean);
    mix_matrix(pca.loadings);
    mix_matrix(score_scaler.lo);
    mix_matrix(score_scaler.hi);
    mix_matrix(target_scaler.lo);
    mix_matrix(target_scaler.hi);
    mix_matrix(raw_input_lo);
    mix_matrix(raw_input_hi);
    return h;
}

namespace {

Eigen::MatrixXd yields_matrix(const std::vector<CoPyrolysisRecord>& records) {
    Eigen::MatrixXd t(static_cast<Eigen::Index>(records.size()), 3);
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].yields)
            throw MissingYields("record '" + records[i].id + "' lacks yields");
        t(static_cast<Eigen::Index>(i), 0) = records[i].yields->oil;
        t(static_cast<Eigen::Index>(i), 1) = records[i].yields->char_;
        t(static_cast<Eigen::Index>(i), 2) = records[i].yields->syngas;
    }
    return t;
}

}  // namespace

FeaturePipeline fit_pipeline(const std::vector<CoPyrolysisRecord>& records,
                             const PipelineOptions& options) {
    if (records.empty()) throw EmptyDataset("cannot fit pipeline on empty record list");
    const Eigen::MatrixXd targets = yields_matrix(records);
    const ConstructedFeatures cf = construct_feature_matrix(records);

    FeaturePipeline p;
    p.options = options;
    Eigen::MatrixXd staged;
    if (options.standardize) {
        p.standardizer = fit_standardizer(cf.matrix);
        staged = apply_standardizer(p.standardizer, cf.matrix);
    } else {
        p.standardizer.mean = Eigen::VectorXd::Zero(kFeatureCount);
        p.standardizer.sd = Eigen::VectorXd::Ones(kFeatureCount);
        staged = cf.matrix;
    }
    p.pca = fit_pca(staged, options.variance_threshold);
    const Eigen::MatrixXd scores = project_rows(p.pca, staged);
    p.score_scaler = fit_minmax(scores);
    p.target_scaler = fit_minmax(targets);

    p.raw_input_lo.resize(kInputCount);
    p.raw_input_hi.resize(kInputCount);
    for (int c = 0; c < kInputCount; ++c) {
        double lo = input_value(records[0], c);
        double hi = lo;
        for (const auto& rec : records) {
            const double v = input_value(rec, c);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        p.raw_input_lo[c] = lo;
        p.raw_input_hi[c] = hi;
    }
    return p;
}

Eigen::MatrixXd transform_inputs(const FeaturePipeline& p,
                                 const std::vector<CoPyrolysisRecord>& records) {
    const ConstructedFeatures cf = construct_feature_matrix(records);
    Eigen::MatrixXd staged =
        p.options.standardize ? apply_standardizer(p.standardizer, cf.matrix) : cf.matrix;
    return apply_minmax(p.score_scaler, project_rows(p.pca, staged));
}

Eigen::VectorXd transform_input_vector(const FeaturePipeline& p, const CoPyrolysisRecord& rec) {
    Eigen::MatrixXd z = construct_features(rec).transpose();
    if (p.options.standardize) z = apply_standardizer(p.standardizer, z);
    return apply_minmax_row(p.score_scaler, (project_rows(p.pca, z)).row(0).transpose());
}

Eigen::MatrixXd transform_targets(const FeaturePipeline& p,
                                  const std::vector<CoPyrolysisRecord>& records) {
    return apply_minmax(p.target_scaler, yields_matrix(records));
}

Eigen::Vector3d invert_targets(const FeaturePipeline& p, const Eigen::Vector3d& normalized) {
    return invert_minmax_row(p.target_scaler, normalized);
}

}  // namespace copyro
