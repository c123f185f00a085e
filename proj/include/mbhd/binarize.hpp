#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbhd/pmf.hpp"

namespace mbhd {

/// One rule turns a source column into a {0,1} indicator. Set ops compare
/// strings; threshold ops parse the cell as a number.
struct BinarizationRule {
  enum class Op { In, NotIn, Eq, Ne, Le, Lt, Ge, Gt };
  std::string name;
  std::string column;
  Op op = Op::In;
  std::vector<std::string> values;  // set ops, eq/ne use values[0]
  double threshold = 0.0;           // le/lt/ge/gt
};

struct LabelSpec {
  std::string column;
  std::map<std::string, double> mapping;  // explicit, no coercion
};

struct BinarizationSpec {
  std::vector<BinarizationRule> rules;
  std::optional<LabelSpec> label;
  std::optional<std::vector<std::string>> header;  // for header-less CSV
  double quasi_constant_eps = 0.005;

  static BinarizationSpec from_json(const nlohmann::ordered_json& j);
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads comma-separated text. With `header` given the first line is data,
/// unless it repeats the header verbatim.
CsvTable read_csv(std::istream& in, const std::optional<std::vector<std::string>>& header);

struct BinarizedData {
  SampleSet samples;
  std::vector<std::string> rule_names;
  std::vector<double> marginals;          // empirical P(X_i = 1)
  std::vector<std::string> quasi_constant;  // names of flagged rules
};

BinarizedData binarize(const CsvTable& table, const BinarizationSpec& spec);

}  // namespace mbhd
