#include <cmath>

#include "copyro/analyze.hpp"
#include "copyro/dataset.hpp"
#include "copyro/errors.hpp"
#include "copyro/model_io.hpp"
#include "copyro/rng.hpp"
#include "doctest.h"

using namespace copyro;

namespace {

// independent reference: brute-force O(n^2) fractional ranks, then Pearson
double spearman_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    auto rankify = [n](const std::vector<double>& v) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t less = 0, equal = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (v[j] < v[i]) ++less;
                if (v[j] == v[i]) ++equal;
            }
            r[i] = static_cast<double>(less) + 0.5 * static_cast<double>(equal - 1) + 1.0;
        }
        return r;
    };
    const auto rx = rankify(x);
    const auto ry = rankify(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("spearman of monotone sequences") {
    CHECK(spearman({1, 2, 3}, {10, 20, 30}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
}

TEST_CASE("spearman matches the brute-force rank oracle on tie-heavy vectors") {
    Rng rng(71);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 5 + rng.below(20);
        std::vector<double> x(n), y(n);
        bool x_const = true, y_const = true;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.below(6));  // small alphabet forces ties
            y[i] = static_cast<double>(rng.below(6));
            if (x[i] != x[0]) x_const = false;
            if (y[i] != y[0]) y_const = false;
        }
        if (x_const || y_const) continue;
        CHECK(spearman(x, y) == doctest::Approx(spearman_oracle(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("spearman is symmetric and rank-invariant under increasing transforms") {
    Rng rng(72);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 10 + rng.below(15);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.uniform(-5, 5);
            y[i] = rng.uniform(-5, 5);
        }
        const double base = spearman(x, y);
        CHECK(spearman(y, x) == doctest::Approx(base).epsilon(1e-12));
        std::vector<double> tx(n), ty(n);
        for (std::size_t i = 0; i < n; ++i) {
            tx[i] = std::exp(0.7 * x[i]);            // strictly increasing
            ty[i] = y[i] * y[i] * y[i] + 2.0 * y[i];  // strictly increasing
        }
        CHECK(spearman(tx, ty) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("spearman rejects constant input") {
    CHECK_THROWS_AS(spearman({1, 1, 1}, {1, 2, 3}), ConstantInput);
    CHECK_THROWS_AS(spearman({1, 2, 3}, {4, 4, 4}), ConstantInput);
}

TEST_CASE("correlation matrix flags a planted monotone relation") {
    auto records = synthesize_dataset(40, 81, 0.0);
    for (auto& rec : records) {
        ProductYields y = *rec.yields;
        y.oil = 100.0 - rec.conditions.temperature / 11.0 - 2.0;  // strictly decreasing in temp
        rec.yields = y;
    }
    const CorrelationMatrix cm = correlation_matrix(records);
    // temp_c is input column 17, oil is row 20
    CHECK(cm.values(17, 20) == doctest::Approx(-1.0));
    for (int i = 0; i < 23; ++i) CHECK(cm.values(i, i) == 1.0);
    for (int a = 0; a < 23; ++a)
        for (int b = 0; b < 23; ++b) {
            if (!cm.defined[a][b]) continue;
            CHECK(cm.values(a, b) == cm.values(b, a));
            CHECK(cm.values(a, b) >= -1.0 - 1e-12);
            CHECK(cm.values(a, b) <= 1.0 + 1e-12);
        }
}

TEST_CASE("correlation matrix flags constant columns instead of failing") {
    auto records = synthesize_dataset(20, 82, 0.0);
    for (auto& rec : records) rec.conditions.reaction_time = 30.0;  // time_min is column 19
    const CorrelationMatrix cm = correlation_matrix(records);
    CHECK_FALSE(cm.defined[19][0]);
    CHECK(std::isnan(cm.values(19, 0)));
    CHECK(cm.values(19, 19) == 1.0);
}

TEST_CASE("molar ratios of polyethylene, pure carbon and cellulose") {
    FeedstockComposition pe{85.63, 14.37, 0, 0, 0, 99, 1, 0};
    const auto pe_pt = molar_ratios(pe);
    CHECK(pe_pt.h_c_eff == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(pe_pt.o_c == doctest::Approx(0.0));

    FeedstockComposition carbon{100, 0, 0, 0, 0, 0, 95, 5};
    const auto c_pt = molar_ratios(carbon);
    CHECK(c_pt.o_c == 0.0);
    CHECK(c_pt.n_c == 0.0);
    CHECK(c_pt.h_c_eff == 0.0);

    FeedstockComposition cellulose{44.45, 6.22, 0, 0, 49.34, 90, 9, 1};
    const auto cel_pt = molar_ratios(cellulose);
    CHECK(cel_pt.o_c == doctest::Approx(0.833).epsilon(2e-3));
    CHECK(std::abs(cel_pt.h_c_eff) <= 0.01);
}

TEST_CASE("molar ratios are invariant under uniform scaling") {
    FeedstockComposition comp{48.0, 6.0, 1.0, 0.5, 44.5, 75, 20, 5};
    const auto base = molar_ratios(comp);
    FeedstockComposition scaled = comp;
    scaled.c *= 0.5;
    scaled.h *= 0.5;
    scaled.n *= 0.5;
    scaled.s *= 0.5;
    scaled.o *= 0.5;
    const auto half = molar_ratios(scaled);
    CHECK(half.o_c == doctest::Approx(base.o_c).epsilon(1e-12));
    CHECK(half.h_c_eff == doctest::Approx(base.h_c_eff).epsilon(1e-12));
}

TEST_CASE("molar ratios reject zero carbon") {
    FeedstockComposition none{0, 10, 0, 0, 80, 90, 9, 1};
    CHECK_THROWS_AS(molar_ratios(none), ZeroCarbon);
}

TEST_CASE("contour grid corners agree with direct predictions") {
    const auto records = synthesize_dataset(60, 55, 0.0);
    const TrainedBundle bundle =
        train_bundle(RegressorKind::Gpr, default_spec(RegressorKind::Gpr, 12), records);

    CoPyrolysisRecord fixed = records[0];
    const ContourGrid grid = contour_grid(bundle.gpr[0], bundle.gpr[1], bundle.gpr[2],
                                          bundle.pipeline, "temp_c", "blend_pct", fixed, 2);
    CHECK(grid.oil.rows() == 2);
    CoPyrolysisRecord corner = fixed;
    set_input_value(corner, 17, grid.x_axis.lo);
    set_input_value(corner, 16, grid.y_axis.lo);
    const Eigen::Vector3d direct = bundle.predict_yields(corner);
    CHECK(grid.oil(0, 0) == doctest::Approx(direct[0]).epsilon(1e-10));
    CHECK(grid.char_(0, 0) == doctest::Approx(direct[1]).epsilon(1e-10));
    CHECK(grid.syngas(0, 0) == doctest::Approx(direct[2]).epsilon(1e-10));
}

TEST_CASE("contour grid rejects equal axes and infeasible fixed points") {
    const auto records = synthesize_dataset(30, 56, 0.0);
    const TrainedBundle bundle =
        train_bundle(RegressorKind::Gpr, default_spec(RegressorKind::Gpr, 12), records);
    CHECK_THROWS_AS(contour_grid(bundle.gpr[0], bundle.gpr[1], bundle.gpr[2], bundle.pipeline,
                                 "temp_c", "temp_c", records[0], 5),
                    InvalidAxis);
    CoPyrolysisRecord bad = records[0];
    bad.biomass.c = 200.0;
    CHECK_THROWS_AS(contour_grid(bundle.gpr[0], bundle.gpr[1], bundle.gpr[2], bundle.pipeline,
                                 "temp_c", "blend_pct", bad, 5),
                    InfeasibleFixedPoint);
}
