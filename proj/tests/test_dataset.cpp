#include <algorithm>
#include <sstream>

#include "copyro/dataset.hpp"
#include "copyro/errors.hpp"
#include "doctest.h"

using namespace copyro;

namespace {

std::string sample_row(const std::string& id, double blend, double temp,
                       const std::string& yields = "42.5,30.1,27.4") {
    std::ostringstream os;
    os << id << ",48.2,6.1,1.2,0.3,44.2,75,20,5,85.6,14.1,0.1,0.1,0.1,97,2,1," << blend << ','
       << temp << ",15,30," << yields;
    return os.str();
}

std::string sample_csv(const std::string& rows) { return csv_header() + "\n" + rows + "\n"; }

}  // namespace

TEST_CASE("load_csv parses a well-formed row") {
    std::istringstream in(sample_csv(sample_row("exp1", 50, 500)));
    const auto records = load_csv(in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].id == "exp1");
    CHECK(records[0].conditions.blending_pct == doctest::Approx(50.0));
    CHECK(records[0].biomass.c == doctest::Approx(48.2));
    CHECK(records[0].polymer.volatile_matter == doctest::Approx(97.0));
    REQUIRE(records[0].yields.has_value());
    CHECK(records[0].yields->oil == doctest::Approx(42.5));
}

TEST_CASE("load_csv accepts empty yield columns as prediction rows") {
    std::istringstream in(sample_csv(sample_row("p1", 40, 450, ",,")));
    const auto records = load_csv(in);
    REQUIRE(records.size() == 1);
    CHECK_FALSE(records[0].yields.has_value());
}

TEST_CASE("load_csv rejects out-of-range composition") {
    // biomass_c = 120
    std::ostringstream os;
    os << "bad,120,6.1,1.2,0.3,44.2,75,20,5,85.6,14.1,0.1,0.1,0.1,97,2,1,50,500,15,30,"
       << "42.5,30.1,27.4";
    std::istringstream in(sample_csv(os.str()));
    CHECK_THROWS_AS(load_csv(in), RangeViolation);
}

TEST_CASE("load_csv rejects malformed numbers naming row and column") {
    std::ostringstream os;
    os << "bad,48.2,6.1,1.2,0.3,44.2,75,20,5,85.6,14.1,0.1,0.1,0.1,97,2,1,50,abc,15,30,"
       << "42.5,30.1,27.4";
    std::istringstream in(sample_csv(os.str()));
    try {
        load_csv(in);
        FAIL("expected MalformedNumber");
    } catch (const MalformedNumber& e) {
        const std::string msg = e.what();
        CHECK(msg.find("temp_c") != std::string::npos);
        CHECK(msg.find("row 1") != std::string::npos);
    }
}

TEST_CASE("load_csv requires the exact header") {
    std::istringstream in("id,biomass_c\nx,1\n");
    CHECK_THROWS_AS(load_csv(in), MissingColumn);
}

TEST_CASE("load_csv rejects an empty dataset") {
    std::istringstream in(csv_header() + "\n");
    CHECK_THROWS_AS(load_csv(in), EmptyDataset);
}

TEST_CASE("write then load is the identity") {
    const auto records = synthesize_dataset(25, 99, 0.05);
    std::istringstream in(write_csv_string(records));
    const auto reloaded = load_csv(in);
    REQUIRE(reloaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(reloaded[i].id == records[i].id);
        for (int c = 0; c < kInputCount; ++c)
            CHECK(input_value(reloaded[i], c) ==
                  doctest::Approx(input_value(records[i], c)).epsilon(1e-12));
        REQUIRE(reloaded[i].yields.has_value());
        CHECK(reloaded[i].yields->oil == doctest::Approx(records[i].yields->oil).epsilon(1e-12));
        CHECK(reloaded[i].yields->char_ ==
              doctest::Approx(records[i].yields->char_).epsilon(1e-12));
        CHECK(reloaded[i].yields->syngas ==
              doctest::Approx(records[i].yields->syngas).epsilon(1e-12));
    }
}

TEST_CASE("summarize basic order statistics") {
    CHECK(summarize_values({1, 2, 3}).median == doctest::Approx(2.0));
    CHECK(summarize_values({1, 2, 3}).min == doctest::Approx(1.0));
    CHECK(summarize_values({1, 2, 3}).max == doctest::Approx(3.0));
    const auto s = summarize_values({5, 5, 5, 5});
    CHECK(s.q1 == doctest::Approx(5.0));
    CHECK(s.median == doctest::Approx(5.0));
    CHECK(s.q3 == doctest::Approx(5.0));
    CHECK(s.count == 4);
}

TEST_CASE("summarize median of i/1000 grid matches the sort oracle") {
    std::vector<double> values;
    for (int i = 0; i <= 1000; ++i) values.push_back(i / 1000.0);
    // the grid is already a permutation-invariant set; shuffle a copy
    std::vector<double> shuffled = values;
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[(i * 2654435761u) % i]);
    const auto s = summarize_values(shuffled);
    CHECK(s.median == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.q1 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.q3 == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("summarize is permutation invariant") {
    const auto records = synthesize_dataset(40, 3, 0.1);
    auto reversed = records;
    std::reverse(reversed.begin(), reversed.end());
    for (int c : {0, 5, 16, 17}) {
        const auto a = summarize(records, input_selector(c));
        const auto b = summarize(reversed, input_selector(c));
        CHECK(a.median == b.median);
        CHECK(a.q1 == b.q1);
        CHECK(a.q3 == b.q3);
        CHECK(a.mean == b.mean);
    }
}

TEST_CASE("summarize of empty input throws") {
    CHECK_THROWS_AS(summarize({}, input_selector(0)), EmptyDataset);
}

TEST_CASE("synthesize_dataset is deterministic in (n, seed, noise_sd)") {
    const auto a = synthesize_dataset(10, 7, 0.0);
    const auto b = synthesize_dataset(10, 7, 0.0);
    CHECK(write_csv_string(a) == write_csv_string(b));
    const auto c = synthesize_dataset(10, 8, 0.0);
    CHECK(write_csv_string(a) != write_csv_string(c));
}

TEST_CASE("zero-noise synthesis reproduces the ground-truth function") {
    const auto records = synthesize_dataset(50, 11, 0.0);
    for (const auto& rec : records) {
        const ProductYields truth = synthetic_ground_truth(rec);
        const double total =
            std::clamp(truth.oil, 0.0, 100.0) + std::clamp(truth.char_, 0.0, 100.0) +
            std::clamp(truth.syngas, 0.0, 100.0);
        CHECK(rec.yields->oil ==
              doctest::Approx(std::clamp(truth.oil, 0.0, 100.0) * 100.0 / total).epsilon(1e-9));
    }
}

TEST_CASE("synthesized yields sum to 100") {
    for (double noise : {0.0, 0.02, 0.3}) {
        const auto records = synthesize_dataset(60, 5, noise);
        for (const auto& rec : records) {
            REQUIRE(rec.yields.has_value());
            const double sum = rec.yields->oil + rec.yields->char_ + rec.yields->syngas;
            CHECK(sum == doctest::Approx(100.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("synthesized compositions stay in the documented ranges") {
    const auto records = synthesize_dataset(200, 123, 0.02);
    for (const auto& rec : records) {
        CHECK(rec.biomass.c >= 34.1);
        CHECK(rec.biomass.c <= 79.8);
        CHECK(rec.polymer.c >= 38.3);
        CHECK(rec.polymer.c <= 92.4);
        CHECK(rec.conditions.temperature >= 350.0);
        CHECK(rec.conditions.temperature <= 1100.0);
        CHECK(rec.biomass.volatile_matter + rec.biomass.fixed_carbon + rec.biomass.ash ==
              doctest::Approx(100.0).epsilon(1e-9));
    }
}
