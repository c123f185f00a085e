#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbhd/decomposition.hpp"
#include "mbhd/error.hpp"
#include "mbhd/estimation.hpp"
#include "mbhd/model.hpp"
#include "mbhd/pmf.hpp"
#include "mbhd/sensitivity.hpp"

namespace mbhd::io {

using Json = nlohmann::ordered_json;

std::string library_version();

// pmf JSON: {"d": int, "probs": [2^d reals], "order": "mask-ascending"}.
// Cell index bit i-1 holds x_i.
JointPmf pmf_from_json(const Json& j);
Json pmf_to_json(const JointPmf& pmf);

// Model JSON: {"kind": "truth_table"|"linear_threshold"|"bool_expr", ...}.
Model model_from_json(const Json& j);
Json model_to_json(const Model& m);

// Samples CSV: header naming x1..xd, optionally a trailing "y" column.
SampleSet read_samples_csv(std::istream& in);
SampleSet read_samples_csv(const std::filesystem::path& path);
void write_samples_csv(std::ostream& out, const SampleSet& s);

Json decomposition_to_json(const Decomposition& dec);
Json sensitivity_to_json(const SensitivityReport& r,
                         const std::optional<std::string>& matrix_csv = std::nullopt);
Json estimate_to_json(const EstimationResult& est);
Json error_to_json(const Error& e);

// Square matrix with subset labels on the first row and column.
void write_matrix_csv(std::ostream& out, const Matrix& m, const SubsetOrder& order);

Json read_json(const std::filesystem::path& path);
/// Pretty-printed, newline-terminated; doubles use shortest round-trip form.
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Fixed-format double for CSV output, independent of the C locale.
std::string format_double(double v);

}  // namespace mbhd::io
