#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "copyro/types.hpp"

namespace copyro {

// Exact CSV header (24 columns). The three yield columns may be empty for
// prediction-only rows; everything else is mandatory.
const std::string& csv_header();

// Parses and validates UTF-8 CSV. Row order is preserved. Throws
// MissingColumn / MalformedNumber / RangeViolation / EmptyDataset.
std::vector<CoPyrolysisRecord> load_csv(std::istream& source);
std::vector<CoPyrolysisRecord> load_csv_file(const std::string& path);

// Full-precision writer; load_csv(write_csv(records)) reproduces the records.
void write_csv(const std::vector<CoPyrolysisRecord>& records, std::ostream& out);
std::string write_csv_string(const std::vector<CoPyrolysisRecord>& records);

// Field selector for summaries.
using FieldSelector = std::function<double(const CoPyrolysisRecord&)>;
FieldSelector input_selector(int column);
FieldSelector yield_selector(int column);  // skips records without yields

// Quartiles via linear interpolation between closest ranks (type 7).
QuantileSummary summarize(const std::vector<CoPyrolysisRecord>& records,
                          const FieldSelector& field);
QuantileSummary summarize_values(std::vector<double> values);

// Deterministic synthetic dataset. Compositions are drawn uniformly within
// the ranges documented in synthesize_dataset's implementation (biomass
// carbon 34.1-79.8%, polymer carbon 38.3-92.4%, temperature 350-1100 degC,
// ...). Yields come from a fixed smooth ground-truth function of the
// constructed feature vector (see kSyntheticOilMax below) plus Gaussian
// noise with standard deviation noise_sd * 100 yield-points, then are
// clipped to [0, 100] and renormalized to sum exactly 100.
std::vector<CoPyrolysisRecord> synthesize_dataset(std::size_t n, std::uint64_t seed,
                                                  double noise_sd);

// Noise-free ground truth used by the generator: with
//   t1 = blended carbon  = (A*X_c + (100-A)*Y_c) / 100
//   t2 = blended volatile matter, T = temperature,
//   u1 = (t1-65)/30, u2 = (t2-70)/45, u3 = (T-600)/375,
//   oil    = 75 - 18*u1^2 - 14*u2^2 - 22*u3^2
//   char   = 18 + 25*u1^2 +  6*u2   - 10*u3
//   syngas = 100 - oil - char
// followed by the same clip + renormalize step as the noisy path. The global
// oil maximum is kSyntheticOilMax at blended carbon 65%, blended volatile
// matter 70%, temperature 600 degC.
ProductYields synthetic_ground_truth(const CoPyrolysisRecord& rec);
inline constexpr double kSyntheticOilMax = 75.0;

}  // namespace copyro
