#include "copyro/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copyro/errors.hpp"

namespace copyro {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // ranks are 1-based
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

bool all_equal(const std::vector<double>& v) {
    for (double x : v)
        if (x != v.front()) return false;
    return true;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw LengthMismatch("spearman needs two equal-length vectors with n >= 2");
    if (all_equal(x) || all_equal(y))
        throw ConstantInput("spearman is undefined for constant input");
    return pearson(average_ranks(x), average_ranks(y));
}

CorrelationMatrix correlation_matrix(const std::vector<CoPyrolysisRecord>& records) {
    std::vector<const CoPyrolysisRecord*> labeled;
    for (const auto& rec : records)
        if (rec.yields) labeled.push_back(&rec);
    if (labeled.size() < 3)
        throw EmptyDataset("correlation matrix needs at least 3 records with yields");

    const int total = kInputCount + kYieldCount;
    CorrelationMatrix cm;
    for (const auto& name : input_column_names()) cm.labels.push_back(name);
    for (const auto& name : yield_column_names()) cm.labels.push_back(name);

    std::vector<std::vector<double>> columns(static_cast<std::size_t>(total));
    for (int c = 0; c < kInputCount; ++c)
        for (const auto* rec : labeled) columns[c].push_back(input_value(*rec, c));
    for (int c = 0; c < kYieldCount; ++c)
        for (const auto* rec : labeled)
            columns[kInputCount + c].push_back(yield_value(*rec->yields, c));

    cm.values = Eigen::MatrixXd::Zero(total, total);
    cm.defined.assign(static_cast<std::size_t>(total),
                      std::vector<bool>(static_cast<std::size_t>(total), true));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int a = 0; a < total; ++a) {
        cm.values(a, a) = 1.0;
        for (int b = a + 1; b < total; ++b) {
            if (all_equal(columns[a]) || all_equal(columns[b])) {
                cm.values(a, b) = cm.values(b, a) = nan;
                cm.defined[a][b] = cm.defined[b][a] = false;
                continue;
            }
            const double rho = spearman(columns[a], columns[b]);
            cm.values(a, b) = cm.values(b, a) = rho;
        }
    }
    return cm;
}

VanKrevelenPoint molar_ratios(const FeedstockComposition& comp) {
    if (!(comp.c > 0.0)) throw ZeroCarbon("molar ratios need carbon > 0");
    const double mc = comp.c / 12.011;
    const double mh = comp.h / 1.008;
    const double mn = comp.n / 14.007;
    const double ms = comp.s / 32.06;
    const double mo = comp.o / 15.999;
    VanKrevelenPoint pt;
    pt.o_c = mo / mc;
    pt.n_c = mn / mc;
    pt.h_c_eff = (mh - 2.0 * mo - 3.0 * mn - 2.0 * ms) / mc;
    return pt;
}

ContourGrid contour_grid(const GprModel& oil_model, const GprModel& char_model,
                         const GprModel& syngas_model, const FeaturePipeline& pipeline,
                         const std::string& x_var, const std::string& y_var,
                         const CoPyrolysisRecord& fixed, int steps) {
    if (x_var == y_var) throw InvalidAxis("contour axes must differ");
    if (steps < 2) throw InvalidAxis("contour needs steps >= 2");
    const auto& names = input_column_names();
    auto find_column = [&](const std::string& name) {
        for (int c = 0; c < kInputCount; ++c)
            if (names[c] == name) return c;
        throw InvalidAxis("unknown input column '" + name + "'");
    };
    const int xc = find_column(x_var);
    const int yc = find_column(y_var);
    try {
        validate_record(fixed, "fixed point");
    } catch (const RangeViolation& e) {
        throw InfeasibleFixedPoint(e.what());
    }

    ContourGrid grid;
    grid.fixed = fixed;
    grid.x_axis = {x_var, xc, pipeline.raw_input_lo[xc], pipeline.raw_input_hi[xc], steps};
    grid.y_axis = {y_var, yc, pipeline.raw_input_lo[yc], pipeline.raw_input_hi[yc], steps};
    grid.oil.resize(steps, steps);
    grid.char_.resize(steps, steps);
    grid.syngas.resize(steps, steps);

    for (int iy = 0; iy < steps; ++iy) {
        const double yv = grid.y_axis.lo +
                          (grid.y_axis.hi - grid.y_axis.lo) * iy / static_cast<double>(steps - 1);
        for (int ix = 0; ix < steps; ++ix) {
            const double xv =
                grid.x_axis.lo +
                (grid.x_axis.hi - grid.x_axis.lo) * ix / static_cast<double>(steps - 1);
            CoPyrolysisRecord rec = fixed;
            set_input_value(rec, xc, xv);
            set_input_value(rec, yc, yv);
            const Eigen::VectorXd scores = transform_input_vector(pipeline, rec);
            const Eigen::MatrixXd q = scores.transpose();
            Eigen::Vector3d normalized;
            normalized[0] = gpr_predict_mean(oil_model, q)[0];
            normalized[1] = gpr_predict_mean(char_model, q)[0];
            normalized[2] = gpr_predict_mean(syngas_model, q)[0];
            const Eigen::Vector3d yields = invert_targets(pipeline, normalized);
            grid.oil(iy, ix) = yields[0];
            grid.char_(iy, ix) = yields[1];
            grid.syngas(iy, ix) = yields[2];
        }
    }
    return grid;
}

}  // namespace copyro
