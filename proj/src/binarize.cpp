#include "mbhd/binarize.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <set>

#include "mbhd/error.hpp"

namespace mbhd {

namespace {

using Json = nlohmann::ordered_json;
using Op = BinarizationRule::Op;

Op parse_op(const std::string& s) {
  static const std::map<std::string, Op> ops = {{"in", Op::In}, {"not_in", Op::NotIn},
                                                {"eq", Op::Eq}, {"ne", Op::Ne},
                                                {"le", Op::Le}, {"lt", Op::Lt},
                                                {"ge", Op::Ge}, {"gt", Op::Gt}};
  const auto it = ops.find(s);
  if (it == ops.end()) throw Error(ErrorCode::ParseError, "unknown rule op \"" + s + "\"");
  return it->second;
}

bool is_threshold(Op op) { return op == Op::Le || op == Op::Lt || op == Op::Ge || op == Op::Gt; }

std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '"'; };
  while (!s.empty() && ws(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::size_t column_index(const CsvTable& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) throw Error(ErrorCode::MissingColumn, "column \"" + name + "\" not found");
  return static_cast<std::size_t>(it - t.header.begin());
}

}  // namespace

BinarizationSpec BinarizationSpec::from_json(const Json& j) {
  BinarizationSpec spec;
  try {
    std::set<std::string> names;
    for (const auto& r : j.at("rules")) {
      BinarizationRule rule;
      rule.column = r.at("column").get<std::string>();
      rule.name = r.value("name", rule.column);
      rule.op = parse_op(r.at("op").get<std::string>());
      if (is_threshold(rule.op)) {
        rule.threshold = r.at("threshold").get<double>();
      } else if (rule.op == Op::Eq || rule.op == Op::Ne) {
        rule.values = {r.at("value").get<std::string>()};
      } else {
        rule.values = r.at("values").get<std::vector<std::string>>();
      }
      if (!names.insert(rule.name).second)
        throw Error(ErrorCode::ParseError, "duplicate rule name \"" + rule.name + "\"");
      spec.rules.push_back(std::move(rule));
    }
    if (j.contains("label")) {
      LabelSpec label;
      label.column = j.at("label").at("column").get<std::string>();
      for (const auto& [k, v] : j.at("label").at("mapping").items()) label.mapping[k] = v.get<double>();
      spec.label = std::move(label);
    }
    if (j.contains("header")) spec.header = j.at("header").get<std::vector<std::string>>();
    spec.quasi_constant_eps = j.value("quasi_constant_eps", 0.005);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("binarization spec: ") + e.what());
  }
  if (spec.rules.empty() || spec.rules.size() > static_cast<std::size_t>(kMaxDimension))
    throw Error(ErrorCode::InvalidArgument, "binarization spec needs between 1 and 30 rules");
  return spec;
}

CsvTable read_csv(std::istream& in, const std::optional<std::vector<std::string>>& header) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split(line);
    if (first) {
      first = false;
      if (!header || cells == *header) {
        t.header = std::move(cells);
        continue;
      }
      t.header = *header;
    }
    if (cells.size() != t.header.size())
      throw Error(ErrorCode::ParseError, "CSV row with " + std::to_string(cells.size()) +
                                             " cells, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  if (first && header) t.header = *header;
  return t;
}

BinarizedData binarize(const CsvTable& table, const BinarizationSpec& spec) {
  BinarizedData out;
  const std::size_t d = spec.rules.size();
  out.samples.d = static_cast<int>(d);
  out.samples.rows.assign(table.rows.size(), 0);
  std::vector<std::size_t> ones(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& rule = spec.rules[i];
    out.rule_names.push_back(rule.name);
    const auto col = column_index(table, rule.column);
    const std::set<std::string> values(rule.values.begin(), rule.values.end());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& cell = table.rows[r][col];
      bool bit = false;
      switch (rule.op) {
        case Op::In:
        case Op::Eq: bit = values.count(cell) > 0; break;
        case Op::NotIn:
        case Op::Ne: bit = values.count(cell) == 0; break;
        default: {
          double v = 0.0;
          const auto* end = cell.data() + cell.size();
          auto [p, ec] = std::from_chars(cell.data(), end, v);
          if (ec != std::errc() || p != end || cell.empty())
            throw Error(ErrorCode::NonBinaryPredicateResult,
                        "rule \"" + rule.name + "\": non-numeric cell \"" + cell + "\" in threshold rule");
          bit = rule.op == Op::Le ? v <= rule.threshold
              : rule.op == Op::Lt ? v < rule.threshold
              : rule.op == Op::Ge ? v >= rule.threshold
                                  : v > rule.threshold;
        }
      }
      if (bit) {
        out.samples.rows[r] |= Mask{1} << i;
        ++ones[i];
      }
    }
  }
  const double n = static_cast<double>(table.rows.size());
  for (std::size_t i = 0; i < d; ++i) {
    const double q = n > 0 ? static_cast<double>(ones[i]) / n : 0.0;
    out.marginals.push_back(q);
    if (q < spec.quasi_constant_eps || q > 1.0 - spec.quasi_constant_eps)
      out.quasi_constant.push_back(spec.rules[i].name);
  }
  if (spec.label) {
    const auto col = column_index(table, spec.label->column);
    std::vector<double> y;
    y.reserve(table.rows.size());
    for (const auto& row : table.rows) {
      const auto it = spec.label->mapping.find(row[col]);
      if (it == spec.label->mapping.end())
        throw Error(ErrorCode::NonBinaryPredicateResult,
                    "label value \"" + row[col] + "\" has no declared mapping");
      y.push_back(it->second);
    }
    out.samples.outputs = std::move(y);
  }
  return out;
}

}  // namespace mbhd
