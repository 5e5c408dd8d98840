// Acceptance suite: one criterion per check, every tolerance pinned in
// code, one PASS/FAIL line per criterion. Exits nonzero if any criterion
// fails. Criterion 13 drives the CLI binary, whose path arrives as argv[1].
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "copyro/analyze.hpp"
#include "copyro/dataset.hpp"
#include "copyro/evaluate.hpp"
#include "copyro/evolve.hpp"
#include "copyro/featurize.hpp"
#include "copyro/gpr.hpp"
#include "copyro/mlp.hpp"
#include "copyro/model_io.hpp"
#include "copyro/rng.hpp"
#include "copyro/tune.hpp"
#include "support/gp_oracle.hpp"

using namespace copyro;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] %2d. %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

// ---- criterion 1 + 2: shared synthetic benchmark ----

struct BenchmarkState {
    std::vector<CoPyrolysisRecord> records;
    CvReport gpr_report;
    bool gpr_ready = false;
};

std::array<RegressorSpec, 3> tune_per_output(RegressorKind kind,
                                             const std::vector<CoPyrolysisRecord>& records,
                                             int swarm, int iters) {
    std::array<RegressorSpec, 3> specs;
    for (int output = 0; output < 3; ++output) {
        TuneConfig tc;
        tc.pso.swarm_size = swarm;
        tc.pso.iterations = iters;
        tc.pso.seed = Rng(11).substream("tune", static_cast<std::uint64_t>(output)).next_u64();
        tc.cv_k = 5;
        tc.cv_seed = 17;
        specs[static_cast<std::size_t>(output)] =
            tune_hyperparameters(kind, records, tc, nullptr, output).spec;
        // seed 0 matches the seed the tuning objective ran under, so the
        // final cross-validation reproduces the tuned numbers exactly
        specs[static_cast<std::size_t>(output)].seed = 0;
    }
    return specs;
}

void criterion_1(BenchmarkState& bench) {
    const auto t0 = std::chrono::steady_clock::now();
    bench.records = synthesize_dataset(300, 2024, 0.02);
    const auto specs = tune_per_output(RegressorKind::Gpr, bench.records, 24, 40);
    bench.gpr_report = cross_validate(specs, bench.records, 5, 17);
    bench.gpr_ready = true;
    const double elapsed = seconds_since(t0);

    bool pass = elapsed <= 300.0;
    std::ostringstream detail;
    detail << "end-to-end synthetic benchmark:";
    const char* names[3] = {"oil", "char", "syngas"};
    for (int o = 0; o < 3; ++o) {
        const MetricSet& m = bench.gpr_report.mean_test[o];
        pass = pass && m.r2 >= 0.90 && m.mae <= 0.05 && m.rmse <= 0.08;
        detail << ' ' << names[o] << " R2=" << fmt(m.r2) << " MAE=" << fmt(m.mae)
               << " RMSE=" << fmt(m.rmse);
    }
    detail << " (" << fmt(elapsed, 1) << " s; needs R2>=0.90, MAE<=0.05, RMSE<=0.08, <=300 s)";
    report(1, pass, detail.str());
}

void criterion_2(BenchmarkState& bench) {
    if (!bench.gpr_ready) {
        report(2, false, "model ordering: skipped, benchmark unavailable");
        return;
    }
    std::vector<CvReport> reports = {bench.gpr_report};
    for (RegressorKind kind : {RegressorKind::Elm, RegressorKind::Mlp}) {
        const auto specs = tune_per_output(kind, bench.records, 24, 40);
        reports.push_back(cross_validate(specs, bench.records, 5, 17));
    }
    const SelectionResult sel = select_best(reports);
    std::ostringstream detail;
    detail << "model ordering at equal tuning budget:";
    for (const auto& entry : sel.ranking)
        detail << ' ' << to_string(entry.kind) << "(R2=" << fmt(entry.mean_test_r2) << ")";
    report(2, sel.best == RegressorKind::Gpr, detail.str() + " (GPR must rank first)");
}

// ---- criterion 3: GPR oracle equivalence ----

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(4242);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const bool basis = trial % 2 == 0;
        const int n = basis ? 3 + static_cast<int>(rng.below(3))
                            : 1 + static_cast<int>(rng.below(5));
        const int d_max = basis ? std::min(3, n - 2) : 3;
        const int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d_max)));
        Eigen::MatrixXd x(n, d);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            y[i] = rng.uniform(-1, 1);
            for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(0, 1);
        }
        GprHyper hp;
        hp.alpha = rng.uniform(0.3, 3.0);
        hp.sigma_f = rng.uniform(0.5, 2.0);
        hp.sigma_n = rng.uniform(0.1, 0.5);
        hp.lengthscales.resize(d);
        for (int j = 0; j < d; ++j) hp.lengthscales[j] = rng.uniform(0.3, 2.0);
        hp.linear_basis = basis;

        const GprModel model = gpr_fit(x, y, hp);
        const auto oracle = oracles::DenseGpOracle::fit(x, y, hp);
        Eigen::MatrixXd q(5, d);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < d; ++j) q(i, j) = rng.uniform(-0.5, 1.5);
        Eigen::VectorXd mean, variance;
        gpr_predict(model, q, mean, variance);
        for (int i = 0; i < 5; ++i) {
            double om = 0.0, ov = 0.0;
            oracle.predict(q.row(i).transpose(), om, ov);
            worst = std::max(worst, std::abs(mean[i] - om));
            worst = std::max(worst, std::abs(variance[i] - std::max(ov, 0.0)));
        }
        worst = std::max(worst, std::abs(gpr_nlml(x, y, hp) - oracle.nlml));
    }
    const double elapsed = seconds_since(t0);
    report(3, worst < 1e-8 && elapsed < 10.0,
           "GPR oracle equivalence: max |difference| = " + fmt(worst, 12) + " over 50 instances (" +
               fmt(elapsed, 2) + " s; needs <1e-8, <10 s)");
}

// ---- criterion 4: noise-free interpolation ----

void criterion_4() {
    // Instances sit on a jittered lattice (pairwise separation >= 0.15) with
    // lengthscales <= 0.8: many points per lengthscale make a noise-free
    // kernel numerically singular in double precision, where exact
    // interpolation is impossible for any solver.
    Rng rng(99);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int n = 3 + static_cast<int>(rng.below(d == 1 ? 4 : 8));
        const int per_axis = d == 1 ? 6 : (d == 2 ? 5 : 4);
        const double spacing = 1.0 / (per_axis - 1);
        int total = 1;
        for (int j = 0; j < d; ++j) total *= per_axis;
        std::vector<int> cells(static_cast<std::size_t>(total));
        std::iota(cells.begin(), cells.end(), 0);
        rng.shuffle(cells.begin(), cells.end());
        Eigen::MatrixXd x(n, d);
        for (int i = 0; i < n; ++i) {
            int cell = cells[static_cast<std::size_t>(i)];
            for (int j = 0; j < d; ++j) {
                const int coord = cell % per_axis;
                cell /= per_axis;
                x(i, j) = std::clamp(
                    coord * spacing + rng.uniform(-0.1 * spacing, 0.1 * spacing), 0.0, 1.0);
            }
        }
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y[i] = rng.uniform(-2, 2);
        GprHyper hp;
        hp.alpha = rng.uniform(0.3, 3.0);
        hp.sigma_f = rng.uniform(0.5, 2.0);
        hp.sigma_n = 0.0;
        hp.linear_basis = false;
        hp.lengthscales.resize(d);
        for (int j = 0; j < d; ++j) hp.lengthscales[j] = rng.uniform(0.2, 0.8);
        const GprModel model = gpr_fit(x, y, hp);
        worst = std::max(worst,
                         (gpr_predict_mean(model, x) - y).cwiseAbs().maxCoeff());
    }
    report(4, worst <= 1e-5,
           "GPR noise-free interpolation: max residual = " + fmt(worst, 9) +
               " over 100 instances (needs <=1e-5)");
}

// ---- criterion 5: feature-construction borderline property ----

void criterion_5() {
    Rng rng(2025);
    bool pass = true;
    for (int trial = 0; trial < 1000; ++trial) {
        auto records = synthesize_dataset(1, rng.next_u64(), 0.0);
        records[0].conditions.blending_pct = (trial % 2 == 0) ? 0.0 : 100.0;
        const Eigen::VectorXd z = construct_features(records[0]);
        if (trial % 2 == 0)
            pass = pass && (z.segment(0, 8).array() == 0.0).all();
        else
            pass = pass && (z.segment(8, 8).array() == 0.0).all();
        pass = pass && (z.segment(16, 16).array() == 0.0).all();
    }
    report(5, pass,
           "feature-construction borderline property: biomass/polymer and cross blocks exactly "
           "zero at A=0/A=100 over 1000 records");
}

// ---- criterion 6: PCA ----

void criterion_6() {
    Rng rng(77);
    double ortho_dev = 0.0, roundtrip = 0.0, eig_dev = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::MatrixXd m(50, 35);
        for (int i = 0; i < 50; ++i)
            for (int j = 0; j < 35; ++j) m(i, j) = rng.normal();
        const PcaModel pca = fit_pca(m, 1.0);
        const Eigen::MatrixXd gram = pca.loadings.transpose() * pca.loadings;
        ortho_dev = std::max(
            ortho_dev, (gram - Eigen::MatrixXd::Identity(pca.retained(), pca.retained()))
                           .cwiseAbs()
                           .maxCoeff());
        for (int i = 0; i < 50; ++i) {
            const Eigen::VectorXd x = m.row(i).transpose();
            roundtrip = std::max(
                roundtrip, (reconstruct(pca, project(pca, x)) - x).cwiseAbs().maxCoeff());
        }
        const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
        const auto oracle =
            oracles::jacobi_eigenvalues(centered.transpose() * centered / 49.0);
        for (Eigen::Index i = 0; i < pca.eigenvalues.size(); ++i)
            eig_dev = std::max(eig_dev, std::abs(pca.eigenvalues[i] -
                                                 oracle[static_cast<std::size_t>(i)]));
    }
    report(6, ortho_dev <= 1e-10 && roundtrip <= 1e-8 && eig_dev <= 1e-8,
           "PCA: orthonormality dev = " + fmt(ortho_dev, 12) + " (<=1e-10), round-trip = " +
               fmt(roundtrip, 10) + " (<=1e-8), eigenvalue dev vs Jacobi oracle = " +
               fmt(eig_dev, 10) + " (<=1e-8)");
}

// ---- criterion 7: PSO sphere ----

void criterion_7() {
    const auto sphere = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    Bounds bounds;
    bounds.lo = Eigen::VectorXd::Constant(10, -5.0);
    bounds.hi = Eigen::VectorXd::Constant(10, 5.0);
    int hits = 0;
    bool monotone = true;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        PsoConfig config;
        config.swarm_size = 30;
        config.iterations = 200;
        config.seed = seed;
        const PsoResult result = pso_minimize(sphere, bounds, config);
        if (result.best_value <= 1e-4) ++hits;
        for (std::size_t i = 1; i < result.trace.size(); ++i)
            if (result.trace[i] > result.trace[i - 1]) monotone = false;
    }
    report(7, hits >= 95 && monotone,
           "PSO 10-D sphere: " + std::to_string(hits) +
               "/100 seeded runs reached 1e-4 (needs >=95); traces monotone: " +
               (monotone ? "yes" : "no"));
}

// ---- criterion 8: MOPSO Schaffer ----

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto schaffer = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd f(2);
        f[0] = x[0] * x[0];
        f[1] = (x[0] - 2.0) * (x[0] - 2.0);
        return f;
    };
    Bounds bounds;
    bounds.lo = Eigen::VectorXd::Constant(1, -5.0);
    bounds.hi = Eigen::VectorXd::Constant(1, 10.0);
    ConstraintSpec constraints;
    constraints.bounds = bounds;
    MopsoConfig config;
    config.seed = 3;
    const ParetoArchive archive = mopso_minimize(schaffer, 2, bounds, constraints, config);

    bool nondominated = true;
    const auto& members = archive.members();
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j)
            if (i != j && dominates(members[i].objectives, members[j].objectives))
                nondominated = false;

    bool in_range = true;
    for (const auto& m : members)
        in_range = in_range && m.position[0] >= -0.05 && m.position[0] <= 2.05;

    double worst_gap = 0.0;
    for (double target = 0.0; target <= 2.0 + 1e-9; target += 0.25) {
        double closest = 1e300;
        for (const auto& m : members)
            closest = std::min(closest, std::abs(m.position[0] - target));
        worst_gap = std::max(worst_gap, closest);
    }

    // staircase hypervolume with reference point (5, 5)
    auto staircase = [](std::vector<std::pair<double, double>> pts) {
        const double rx = 5.0, ry = 5.0;
        std::sort(pts.begin(), pts.end());
        double hv = 0.0, prev_f2 = ry;
        for (const auto& [f1, f2] : pts) {
            if (f1 >= rx) break;
            if (f2 >= prev_f2) continue;
            hv += (rx - f1) * (prev_f2 - f2);
            prev_f2 = f2;
        }
        return hv;
    };
    std::vector<std::pair<double, double>> archive_front;
    for (const auto& m : members)
        archive_front.push_back({m.objectives[0], m.objectives[1]});
    // dense-scan oracle front over 10^4 lattice points
    std::vector<std::pair<double, double>> oracle_front;
    for (int i = 0; i < 10000; ++i) {
        const double x = -5.0 + 15.0 * i / 9999.0;
        oracle_front.push_back({x * x, (x - 2.0) * (x - 2.0)});
    }
    const double hv_archive = staircase(archive_front);
    const double hv_oracle = staircase(oracle_front);
    const double elapsed = seconds_since(t0);

    const bool pass = nondominated && in_range && worst_gap <= 0.1 &&
                      hv_archive >= 0.95 * hv_oracle && elapsed < 30.0;
    report(8, pass,
           "MOPSO Schaffer: non-dominated=" + std::string(nondominated ? "yes" : "no") +
               ", x in [-0.05, 2.05]=" + (in_range ? "yes" : "no") + ", coverage gap = " +
               fmt(worst_gap) + " (<=0.1), hypervolume = " + fmt(hv_archive, 4) + " vs oracle " +
               fmt(hv_oracle, 4) + " (needs >=95%), " + fmt(elapsed, 1) + " s (<30)");
}

// ---- criterion 9: planted optimum ----

void criterion_9() {
    const auto records = synthesize_dataset(250, 321, 0.0);
    RegressorSpec spec = default_spec(RegressorKind::Gpr, 12);
    spec.params["alpha"] = 0.25;
    spec.params["ell"] = 2.5;
    spec.params["sigma_f"] = 0.06;
    spec.params["sigma_n"] = 0.003;
    const TrainedBundle bundle = train_bundle(RegressorKind::Gpr, spec, records);
    MopsoConfig config;
    config.swarm_size = 60;
    config.iterations = 80;
    config.seed = 7;
    const OptimizationReport result = optimize_copyrolysis(
        bundle.gpr[0], bundle.gpr[1], bundle.gpr[2], bundle.pipeline, config);
    double closest = 1e300;
    for (const auto& pt : result.points)
        closest = std::min(closest, std::abs(pt.oil - kSyntheticOilMax));
    report(9, closest <= 2.0,
           "planted-optimum optimization: closest Pareto oil prediction within " + fmt(closest) +
               " points of the planted maximum " + fmt(kSyntheticOilMax, 1) + " (needs <=2)");
}

// ---- criterion 10: MLP gradient check ----

void criterion_10() {
    Rng rng(42);
    double worst = 0.0;
    int nets = 0;
    for (MlpActivation act :
         {MlpActivation::Relu, MlpActivation::Sigmoid, MlpActivation::Tanh}) {
        for (int trial = 0; trial < 7 && nets < 20; ++trial, ++nets) {
            const int n = 6;
            const int d = 2;
            Eigen::MatrixXd x(n, d);
            Eigen::VectorXd y(n);
            for (int i = 0; i < n; ++i) {
                y[i] = rng.uniform(-1, 1);
                for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(-1, 1);
            }
            MlpSpec spec;
            spec.hidden_sizes = {4};
            spec.activation = act;
            spec.seed = 300 + static_cast<std::uint64_t>(nets);
            MlpModel model = mlp_init(d, spec);
            Eigen::VectorXd params = mlp_get_parameters(model);
            for (Eigen::Index i = 0; i < params.size(); ++i) params[i] += rng.uniform(-0.3, 0.3);
            mlp_set_parameters(model, params);
            const Eigen::VectorXd grad = mlp_loss_gradient(model, x, y);
            const double h = 1e-5;
            for (Eigen::Index p = 0; p < params.size(); ++p) {
                Eigen::VectorXd plus = params, minus = params;
                plus[p] += h;
                minus[p] -= h;
                MlpModel mp = model, mm = model;
                mlp_set_parameters(mp, plus);
                mlp_set_parameters(mm, minus);
                const double numeric = (mlp_loss(mp, x, y) - mlp_loss(mm, x, y)) / (2.0 * h);
                const double scale = std::max({std::abs(numeric), std::abs(grad[p]), 1e-6});
                worst = std::max(worst, std::abs(numeric - grad[p]) / scale);
            }
        }
    }
    report(10, worst <= 1e-4,
           "MLP gradient check: max relative error = " + fmt(worst, 8) +
               " over 20 networks, all activations (needs <=1e-4)");
}

// ---- criterion 11: Spearman ----

void criterion_11() {
    Rng rng(71);
    bool exact = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 5 + rng.below(20);
        std::vector<double> x(n), y(n);
        bool x_const = true, y_const = true;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.below(6));
            y[i] = static_cast<double>(rng.below(6));
            if (x[i] != x[0]) x_const = false;
            if (y[i] != y[0]) y_const = false;
        }
        if (x_const || y_const) continue;
        // brute-force fractional-rank oracle
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
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sxy += (rx[i] - mx) * (ry[i] - my);
            sxx += (rx[i] - mx) * (rx[i] - mx);
            syy += (ry[i] - my) * (ry[i] - my);
        }
        const double oracle = sxy / std::sqrt(sxx * syy);
        if (std::abs(spearman(x, y) - oracle) > 1e-12) exact = false;

        // strictly increasing transforms leave the statistic unchanged
        std::vector<double> tx(n), ty(n);
        for (std::size_t i = 0; i < n; ++i) {
            tx[i] = std::exp(0.5 * x[i]);
            ty[i] = y[i] * y[i] * y[i] + 2.0 * y[i];
        }
        if (std::abs(spearman(tx, ty) - spearman(x, y)) > 1e-12) exact = false;
    }
    report(11, exact,
           "Spearman: brute-force rank-oracle agreement and rank invariance over 1000 "
           "tie-containing vectors");
}

// ---- criterion 12: stoichiometry ----

void criterion_12() {
    const FeedstockComposition pe{85.63, 14.37, 0, 0, 0, 99, 1, 0};
    const FeedstockComposition cellulose{44.45, 6.22, 0, 0, 49.34, 90, 9, 1};
    const auto pe_pt = molar_ratios(pe);
    const auto cel_pt = molar_ratios(cellulose);
    const bool pass = std::abs(pe_pt.h_c_eff - 2.0) <= 1e-3 &&
                      std::abs(cel_pt.h_c_eff) <= 0.01 &&
                      std::abs(cel_pt.o_c - 0.833) <= 1e-3;
    report(12, pass,
           "stoichiometry: polyethylene H/C_eff = " + fmt(pe_pt.h_c_eff, 4) +
               " (2.00 +/- 1e-3), cellulose H/C_eff = " + fmt(cel_pt.h_c_eff, 4) +
               " (0.00 +/- 0.01), O/C = " + fmt(cel_pt.o_c, 4) + " (0.833 +/- 1e-3)");
}

// ---- criterion 13: CLI determinism ----

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<missing:" + path + ">";
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i)
            h = (h ^ static_cast<unsigned char>(chunk[i])) * 0x100000001B3ULL;
        if (!in) break;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void criterion_13(const std::string& cli) {
    namespace fs = std::filesystem;
    if (cli.empty() || !fs::exists(cli)) {
        report(13, false, "determinism: CLI binary path not provided (argv[1])");
        return;
    }
    const fs::path dir = fs::temp_directory_path() / "copyro_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string d = dir.string();
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };

    bool ok = true;
    ok = ok && run("synth --n 120 --seed 9 --noise-sd 0.02 --out " + d + "/a.csv");
    ok = ok && run("synth --n 120 --seed 9 --noise-sd 0.02 --out " + d + "/b.csv");
    ok = ok && run("validate --input " + d + "/a.csv");
    ok = ok && run("--threads 1 cv --input " + d + "/a.csv --model gam --k 5 --seed 42 --out " +
                   d + "/cv1.json --out-folds " + d + "/folds1.csv");
    ok = ok && run("--threads 4 cv --input " + d + "/a.csv --model gam --k 5 --seed 42 --out " +
                   d + "/cv2.json --out-folds " + d + "/folds2.csv");
    ok = ok && run("train --input " + d + "/a.csv --model gpr --seed 3 --out " + d + "/m1.json");
    ok = ok && run("train --input " + d + "/a.csv --model gpr --seed 3 --out " + d + "/m2.json");
    ok = ok && run("optimize --model " + d + "/m1.json --seed 6 --swarm 20 --iters 15 --out " +
                   d + "/p1.csv");
    ok = ok && run("optimize --model " + d + "/m1.json --seed 6 --swarm 20 --iters 15 --out " +
                   d + "/p2.csv");

    const bool synth_same = file_hash(d + "/a.csv") == file_hash(d + "/b.csv");
    const bool cv_same = file_hash(d + "/cv1.json") == file_hash(d + "/cv2.json") &&
                         file_hash(d + "/folds1.csv") == file_hash(d + "/folds2.csv");
    const bool train_same = file_hash(d + "/m1.json") == file_hash(d + "/m2.json");
    const bool opt_same = file_hash(d + "/p1.csv") == file_hash(d + "/p2.csv");
    report(13, ok && synth_same && cv_same && train_same && opt_same,
           std::string("determinism: reruns hash-identical - synth=") +
               (synth_same ? "yes" : "no") + ", cv(threads 1 vs 4)=" + (cv_same ? "yes" : "no") +
               ", train=" + (train_same ? "yes" : "no") + ", optimize=" +
               (opt_same ? "yes" : "no"));
}

}  // namespace

void guarded(int criterion, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(criterion, false, std::string("unhandled error: ") + e.what());
    }
}

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    BenchmarkState bench;
    guarded(1, [&] { criterion_1(bench); });
    guarded(2, [&] { criterion_2(bench); });
    guarded(3, [] { criterion_3(); });
    guarded(4, [] { criterion_4(); });
    guarded(5, [] { criterion_5(); });
    guarded(6, [] { criterion_6(); });
    guarded(7, [] { criterion_7(); });
    guarded(8, [] { criterion_8(); });
    guarded(9, [] { criterion_9(); });
    guarded(10, [] { criterion_10(); });
    guarded(11, [] { criterion_11(); });
    guarded(12, [] { criterion_12(); });
    guarded(13, [&] { criterion_13(cli); });
    if (failures == 0) {
        std::printf("all 13 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
