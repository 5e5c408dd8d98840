#include "copyro/types.hpp"

#include <cmath>

#include "copyro/errors.hpp"

namespace copyro {

const std::array<std::string, kInputCount>& input_column_names() {
    static const std::array<std::string, kInputCount> names = {
        "biomass_c",  "biomass_h",  "biomass_n",  "biomass_s",  "biomass_o",
        "biomass_vm", "biomass_fc", "biomass_ash",
        "polymer_c",  "polymer_h",  "polymer_n",  "polymer_s",  "polymer_o",
        "polymer_vm", "polymer_fc", "polymer_ash",
        "blend_pct",  "temp_c",     "heat_rate_c_min", "time_min"};
    return names;
}

const std::array<std::string, kYieldCount>& yield_column_names() {
    static const std::array<std::string, kYieldCount> names = {"oil_yield", "char_yield",
                                                               "syngas_yield"};
    return names;
}

namespace {

double* composition_field(FeedstockComposition& c, int idx) {
    switch (idx) {
        case 0: return &c.c;
        case 1: return &c.h;
        case 2: return &c.n;
        case 3: return &c.s;
        case 4: return &c.o;
        case 5: return &c.volatile_matter;
        case 6: return &c.fixed_carbon;
        case 7: return &c.ash;
    }
    return nullptr;
}

}  // namespace

double input_value(const CoPyrolysisRecord& rec, int column) {
    auto& r = const_cast<CoPyrolysisRecord&>(rec);
    if (column >= 0 && column < 8) return *composition_field(r.biomass, column);
    if (column >= 8 && column < 16) return *composition_field(r.polymer, column - 8);
    switch (column) {
        case 16: return rec.conditions.blending_pct;
        case 17: return rec.conditions.temperature;
        case 18: return rec.conditions.heating_rate;
        case 19: return rec.conditions.reaction_time;
    }
    throw DimensionMismatch("input column index out of range: " + std::to_string(column));
}

void set_input_value(CoPyrolysisRecord& rec, int column, double value) {
    if (column >= 0 && column < 8) {
        *composition_field(rec.biomass, column) = value;
        return;
    }
    if (column >= 8 && column < 16) {
        *composition_field(rec.polymer, column - 8) = value;
        return;
    }
    switch (column) {
        case 16: rec.conditions.blending_pct = value; return;
        case 17: rec.conditions.temperature = value; return;
        case 18: rec.conditions.heating_rate = value; return;
        case 19: rec.conditions.reaction_time = value; return;
    }
    throw DimensionMismatch("input column index out of range: " + std::to_string(column));
}

double yield_value(const ProductYields& y, int column) {
    switch (column) {
        case 0: return y.oil;
        case 1: return y.char_;
        case 2: return y.syngas;
    }
    throw DimensionMismatch("yield column index out of range: " + std::to_string(column));
}

CoPyrolysisRecord record_from_inputs(const std::vector<double>& inputs, std::string id) {
    if (inputs.size() != static_cast<std::size_t>(kInputCount))
        throw DimensionMismatch("expected 20 raw inputs, got " + std::to_string(inputs.size()));
    CoPyrolysisRecord rec;
    rec.id = std::move(id);
    for (int i = 0; i < kInputCount; ++i) set_input_value(rec, i, inputs[i]);
    return rec;
}

namespace {

void check_range(double v, double lo, double hi, const std::string& field,
                 const std::string& where) {
    if (!(std::isfinite(v) && v >= lo && v <= hi))
        throw RangeViolation(where + ": " + field + " = " + std::to_string(v) +
                             " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void check_positive(double v, const std::string& field, const std::string& where) {
    if (!(std::isfinite(v) && v > 0.0))
        throw RangeViolation(where + ": " + field + " = " + std::to_string(v) +
                             " must be positive");
}

}  // namespace

void validate_composition(const FeedstockComposition& comp, const std::string& role,
                          const std::string& where) {
    check_range(comp.c, 0.0, 100.0, role + "_c", where);
    check_range(comp.h, 0.0, 100.0, role + "_h", where);
    check_range(comp.n, 0.0, 100.0, role + "_n", where);
    check_range(comp.s, 0.0, 100.0, role + "_s", where);
    check_range(comp.o, 0.0, 100.0, role + "_o", where);
    check_range(comp.volatile_matter, 0.0, 100.0, role + "_vm", where);
    check_range(comp.fixed_carbon, 0.0, 100.0, role + "_fc", where);
    check_range(comp.ash, 0.0, 100.0, role + "_ash", where);
    const double elemental = comp.c + comp.h + comp.n + comp.s + comp.o;
    if (!(elemental > 0.0 && elemental <= 105.0))
        throw RangeViolation(where + ": " + role + " CHNSO sum = " + std::to_string(elemental) +
                             " outside (0, 105]");
    const double proximate = comp.volatile_matter + comp.fixed_carbon + comp.ash;
    if (!(proximate >= 90.0 && proximate <= 105.0))
        throw RangeViolation(where + ": " + role + " proximate sum = " + std::to_string(proximate) +
                             " outside [90, 105]");
}

void validate_conditions(const OperatingConditions& cond, const std::string& where) {
    check_range(cond.blending_pct, 0.0, 100.0, "blend_pct", where);
    check_positive(cond.temperature, "temp_c", where);
    check_positive(cond.heating_rate, "heat_rate_c_min", where);
    check_positive(cond.reaction_time, "time_min", where);
}

void validate_yields(const ProductYields& yields, const std::string& where) {
    check_range(yields.oil, 0.0, 100.0, "oil_yield", where);
    check_range(yields.char_, 0.0, 100.0, "char_yield", where);
    check_range(yields.syngas, 0.0, 100.0, "syngas_yield", where);
    const double total = yields.oil + yields.char_ + yields.syngas;
    if (total > 105.0)
        throw RangeViolation(where + ": yield sum = " + std::to_string(total) + " exceeds 105");
}

void validate_record(const CoPyrolysisRecord& rec, const std::string& where) {
    validate_composition(rec.biomass, "biomass", where);
    validate_composition(rec.polymer, "polymer", where);
    validate_conditions(rec.conditions, where);
    if (rec.yields) validate_yields(*rec.yields, where);
}

}  // namespace copyro
