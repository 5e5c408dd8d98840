#include "copyro/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "copyro/errors.hpp"
#include "copyro/featurize.hpp"
#include "copyro/rng.hpp"

namespace copyro {

const std::string& csv_header() {
    static const std::string header =
        "id,biomass_c,biomass_h,biomass_n,biomass_s,biomass_o,biomass_vm,biomass_fc,"
        "biomass_ash,polymer_c,polymer_h,polymer_n,polymer_s,polymer_o,polymer_vm,"
        "polymer_fc,polymer_ash,blend_pct,temp_c,heat_rate_c_min,time_min,"
        "oil_yield,char_yield,syngas_yield";
    return header;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_number(const std::string& field, const std::string& column, std::size_t row) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw MalformedNumber("row " + std::to_string(row) + ", column " + column +
                              ": cannot parse '" + field + "'");
    return value;
}

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

std::vector<CoPyrolysisRecord> load_csv(std::istream& source) {
    std::string line;
    if (!std::getline(source, line)) throw EmptyDataset("input stream has no header row");
    const auto header_fields = split_csv_line(strip_cr(line));
    const auto expected_fields = split_csv_line(csv_header());
    if (header_fields.size() != expected_fields.size() ||
        !std::equal(header_fields.begin(), header_fields.end(), expected_fields.begin())) {
        for (const auto& want : expected_fields) {
            if (std::find(header_fields.begin(), header_fields.end(), want) ==
                header_fields.end())
                throw MissingColumn("missing column '" + want + "' in header");
        }
        throw MissingColumn("header does not match the documented schema exactly");
    }

    std::vector<CoPyrolysisRecord> records;
    std::size_t row = 1;  // 1-based data row number
    const auto& names = input_column_names();
    const auto& ynames = yield_column_names();
    while (std::getline(source, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 24)
            throw MalformedNumber("row " + std::to_string(row) + ": expected 24 fields, got " +
                                  std::to_string(fields.size()));
        CoPyrolysisRecord rec;
        rec.id = fields[0];
        for (int c = 0; c < kInputCount; ++c)
            set_input_value(rec, c, parse_number(fields[1 + c], names[c], row));
        const bool no_yields = fields[21].empty() && fields[22].empty() && fields[23].empty();
        if (!no_yields) {
            ProductYields y;
            y.oil = parse_number(fields[21], ynames[0], row);
            y.char_ = parse_number(fields[22], ynames[1], row);
            y.syngas = parse_number(fields[23], ynames[2], row);
            rec.yields = y;
        }
        validate_record(rec, "row " + std::to_string(row));
        records.push_back(std::move(rec));
        ++row;
    }
    if (records.empty()) throw EmptyDataset("no data rows");
    return records;
}

std::vector<CoPyrolysisRecord> load_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EmptyDataset("cannot open " + path);
    return load_csv(in);
}

void write_csv(const std::vector<CoPyrolysisRecord>& records, std::ostream& out) {
    out << csv_header() << '\n';
    for (const auto& rec : records) {
        out << rec.id;
        for (int c = 0; c < kInputCount; ++c) out << ',' << format_number(input_value(rec, c));
        if (rec.yields) {
            out << ',' << format_number(rec.yields->oil) << ',' << format_number(rec.yields->char_)
                << ',' << format_number(rec.yields->syngas);
        } else {
            out << ",,,";
        }
        out << '\n';
    }
}

std::string write_csv_string(const std::vector<CoPyrolysisRecord>& records) {
    std::ostringstream os;
    write_csv(records, os);
    return os.str();
}

FieldSelector input_selector(int column) {
    return [column](const CoPyrolysisRecord& rec) { return input_value(rec, column); };
}

FieldSelector yield_selector(int column) {
    return [column](const CoPyrolysisRecord& rec) {
        return rec.yields ? yield_value(*rec.yields, column)
                          : std::numeric_limits<double>::quiet_NaN();
    };
}

namespace {

// type 7: linear interpolation between closest ranks
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

QuantileSummary summarize_values(std::vector<double> values) {
    values.erase(std::remove_if(values.begin(), values.end(),
                                [](double v) { return std::isnan(v); }),
                 values.end());
    if (values.empty()) throw EmptyDataset("no values to summarize");
    std::sort(values.begin(), values.end());
    QuantileSummary s;
    s.count = values.size();
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.50);
    s.q3 = quantile_sorted(values, 0.75);
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    return s;
}

QuantileSummary summarize(const std::vector<CoPyrolysisRecord>& records,
                          const FieldSelector& field) {
    if (records.empty()) throw EmptyDataset("no records to summarize");
    std::vector<double> values;
    values.reserve(records.size());
    for (const auto& rec : records) values.push_back(field(rec));
    return summarize_values(std::move(values));
}

ProductYields synthetic_ground_truth(const CoPyrolysisRecord& rec) {
    const Eigen::VectorXd z = construct_features(rec);
    const double t1 = (z[0] + z[8]) / 100.0;    // blended carbon
    const double t2 = (z[5] + z[13]) / 100.0;   // blended volatile matter
    const double temp = z[32];
    const double u1 = (t1 - 65.0) / 30.0;
    const double u2 = (t2 - 70.0) / 45.0;
    const double u3 = (temp - 600.0) / 375.0;
    ProductYields y;
    y.oil = 75.0 - 18.0 * u1 * u1 - 14.0 * u2 * u2 - 22.0 * u3 * u3;
    y.char_ = 18.0 + 25.0 * u1 * u1 + 6.0 * u2 - 10.0 * u3;
    y.syngas = 100.0 - y.oil - y.char_;
    return y;
}

namespace {

ProductYields clip_and_renormalize(ProductYields y) {
    y.oil = std::clamp(y.oil, 0.0, 100.0);
    y.char_ = std::clamp(y.char_, 0.0, 100.0);
    y.syngas = std::clamp(y.syngas, 0.0, 100.0);
    double total = y.oil + y.char_ + y.syngas;
    if (total < 1e-9) return ProductYields{100.0 / 3.0, 100.0 / 3.0, 100.0 / 3.0};
    // the second clamp only absorbs rounding from the rescale
    y.oil = std::clamp(y.oil * 100.0 / total, 0.0, 100.0);
    y.char_ = std::clamp(y.char_ * 100.0 / total, 0.0, 100.0);
    y.syngas = std::clamp(y.syngas * 100.0 / total, 0.0, 100.0);
    return y;
}

}  // namespace

std::vector<CoPyrolysisRecord> synthesize_dataset(std::size_t n, std::uint64_t seed,
                                                  double noise_sd) {
    if (n < 1) throw EmptyDataset("synthesize_dataset requires n >= 1");
    if (noise_sd < 0.0) throw RangeViolation("noise_sd must be non-negative");
    Rng rng = Rng(seed).substream("synth");
    std::vector<CoPyrolysisRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        CoPyrolysisRecord rec;
        char idbuf[24];
        std::snprintf(idbuf, sizeof(idbuf), "synth-%06zu", i + 1);
        rec.id = idbuf;

        // Compositions follow a one-latent family per feedstock plus small
        // independent jitters, mimicking the strong correlations of real
        // ultimate/proximate analyses (high-carbon biomass is H-poor and
        // VM-poor; carbon-rich polymers are H-rich and heteroatom-free).
        // Carbon stays exactly uniform over the observed literature ranges.

        // biomass: latent q = carbonization degree; CHNSO sums to 100
        auto& b = rec.biomass;
        const double q = rng.uniform(0.0, 1.0);
        b.c = 34.1 + 45.7 * q;
        b.h = 3.0 + 5.0 * (0.75 * (1.0 - q) + 0.25 * rng.uniform(0.0, 1.0));
        b.n = 4.0 * (0.6 * q + 0.4 * rng.uniform(0.0, 1.0));
        b.s = 2.0 * (0.5 * q + 0.5 * rng.uniform(0.0, 1.0));
        b.o = 100.0 - b.c - b.h - b.n - b.s;
        b.volatile_matter =
            9.6 + 87.4 * (0.7 * (1.0 - q) + 0.3 * rng.uniform(0.0, 1.0));
        b.ash = rng.uniform(0.0, 1.0) *
                std::min(25.0 * (0.3 + 0.7 * q), 100.0 - b.volatile_matter);
        b.fixed_carbon = 100.0 - b.volatile_matter - b.ash;

        // polymer: latent p = hydrocarbon character (polyolefin at p = 1)
        auto& pc = rec.polymer;
        const double p = rng.uniform(0.0, 1.0);
        pc.c = 38.3 + 54.1 * p;
        pc.h = std::min(4.0 + 10.0 * (0.7 * p + 0.3 * rng.uniform(0.0, 1.0)),
                        0.9 * (100.0 - pc.c));
        const double rem = 100.0 - pc.c - pc.h;
        pc.n = std::min(2.0 * (1.0 - p) * rng.uniform(0.0, 1.0), 0.5 * rem);
        pc.s = std::min(1.0 * (1.0 - p) * rng.uniform(0.0, 1.0), 0.25 * rem);
        pc.o = 100.0 - pc.c - pc.h - pc.n - pc.s;
        pc.volatile_matter =
            60.7 + 39.3 * (0.7 * p + 0.3 * rng.uniform(0.0, 1.0));
        pc.ash = rng.uniform(0.0, 1.0) *
                 std::min(10.0 * (1.0 - p), 100.0 - pc.volatile_matter);
        pc.fixed_carbon = 100.0 - pc.volatile_matter - pc.ash;

        rec.conditions.blending_pct = rng.uniform(0.0, 100.0);
        rec.conditions.temperature = rng.uniform(350.0, 1100.0);
        rec.conditions.heating_rate = rng.uniform(2.0, 100.0);
        rec.conditions.reaction_time = rng.uniform(5.0, 120.0);

        ProductYields y = synthetic_ground_truth(rec);
        // the noise triple is always drawn so the record stream does not
        // depend on noise_sd
        const double e_oil = rng.normal();
        const double e_char = rng.normal();
        const double e_syngas = rng.normal();
        y.oil += 100.0 * noise_sd * e_oil;
        y.char_ += 100.0 * noise_sd * e_char;
        y.syngas += 100.0 * noise_sd * e_syngas;
        rec.yields = clip_and_renormalize(y);

        validate_record(rec, "synthesized record " + std::to_string(i + 1));
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace copyro
