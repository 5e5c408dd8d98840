#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace copyro {

// Ultimate (CHNSO) plus proximate analysis of one feedstock, mass percent.
struct FeedstockComposition {
    double c = 0.0;
    double h = 0.0;
    double n = 0.0;
    double s = 0.0;
    double o = 0.0;
    double volatile_matter = 0.0;
    double fixed_carbon = 0.0;
    double ash = 0.0;
};

struct OperatingConditions {
    double blending_pct = 0.0;  // percent of biomass in the blend
    double temperature = 0.0;   // degC
    double heating_rate = 0.0;  // degC/min
    double reaction_time = 0.0; // min
};

struct ProductYields {
    double oil = 0.0;
    double char_ = 0.0;
    double syngas = 0.0;
};

// One experiment row. Yields are absent for prediction-only rows.
struct CoPyrolysisRecord {
    std::string id;
    FeedstockComposition biomass;
    FeedstockComposition polymer;
    OperatingConditions conditions;
    std::optional<ProductYields> yields;
};

struct QuantileSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
};

inline constexpr int kInputCount = 20;
inline constexpr int kYieldCount = 3;

// The 20 raw input columns in CSV/order used throughout (decision vectors,
// bounds files, correlation matrices).
const std::array<std::string, kInputCount>& input_column_names();

// The three yield columns, in order oil/char/syngas.
const std::array<std::string, kYieldCount>& yield_column_names();

double input_value(const CoPyrolysisRecord& rec, int column);
void set_input_value(CoPyrolysisRecord& rec, int column, double value);
double yield_value(const ProductYields& y, int column);

// Builds a record from a 20-element raw input vector (no yields).
CoPyrolysisRecord record_from_inputs(const std::vector<double>& inputs, std::string id = "point");

// Throws RangeViolation naming the offending field. `where` prefixes the
// message (typically "row N").
void validate_composition(const FeedstockComposition& comp, const std::string& role,
                          const std::string& where);
void validate_conditions(const OperatingConditions& cond, const std::string& where);
void validate_yields(const ProductYields& yields, const std::string& where);
void validate_record(const CoPyrolysisRecord& rec, const std::string& where);

}  // namespace copyro
