#include "mbhd/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mbhd/error.hpp"

namespace mbhd::io {

std::string library_version() { return MBHD_VERSION; }

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    parse_fail(std::string("field \"") + key + "\": " + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r' && c != ' ' && c != '\t') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) parse_fail("not a number: \"" + s + "\"");
  return v;
}

}  // namespace

JointPmf pmf_from_json(const Json& j) {
  const auto d = field<int>(j, "d");
  auto probs = field<std::vector<double>>(j, "probs");
  if (j.contains("order") && j.at("order") != "mask-ascending")
    parse_fail("only \"mask-ascending\" cell order is supported");
  if (d < 1 || d > 24) throw Error(ErrorCode::DimensionTooLarge, "pmf dimension must be in [1, 24]");
  if (probs.size() != (std::size_t{1} << d))
    parse_fail("probs must have 2^d entries");
  return JointPmf::from_table(std::move(probs));
}

Json pmf_to_json(const JointPmf& pmf) {
  Json j;
  j["d"] = pmf.dimension();
  j["probs"] = std::vector<double>(pmf.probs().begin(), pmf.probs().end());
  j["order"] = "mask-ascending";
  Json sc;
  sc["kind"] = std::string(to_string(pmf.support().kind));
  sc["zero_cells"] = pmf.support().zero_cells;
  j["support_class"] = sc;
  return j;
}

Model model_from_json(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "truth_table") return Model::truth_table(field<std::vector<double>>(j, "values"));
  if (kind == "linear_threshold")
    return Model::linear_threshold(field<std::vector<double>>(j, "w"), field<double>(j, "b"));
  if (kind == "bool_expr") {
    std::optional<int> d;
    if (j.contains("d")) d = field<int>(j, "d");
    return Model::bool_expr(field<std::string>(j, "expr"), d);
  }
  parse_fail("unknown model kind \"" + kind + "\"");
}

Json model_to_json(const Model& m) {
  Json j;
  j["kind"] = std::string(m.kind_name());
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, TruthTable>) {
          j["values"] = k.values;
        } else if constexpr (std::is_same_v<K, LinearThreshold>) {
          j["w"] = k.w;
          j["b"] = k.b;
        } else {
          j["expr"] = k.source();
          j["d"] = m.arity();
        }
      },
      m.kind());
  return j;
}

SampleSet read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) parse_fail("samples CSV is empty");
  const auto header = split_csv_line(line);
  SampleSet s;
  bool has_y = false;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& h = header[c];
    if (h == "y" && c + 1 == header.size()) {
      has_y = true;
    } else if (h != "x" + std::to_string(c + 1)) {
      parse_fail("samples CSV header must read x1,...,xd[,y]; got \"" + h + "\"");
    }
  }
  s.d = static_cast<int>(header.size()) - (has_y ? 1 : 0);
  if (s.d < 1 || s.d > kMaxDimension) throw Error(ErrorCode::DimensionTooLarge, "bad sample dimension");
  if (has_y) s.outputs.emplace();
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      parse_fail("samples CSV line " + std::to_string(lineno) + " has the wrong column count");
    Mask x = 0;
    for (int i = 0; i < s.d; ++i) {
      const auto& v = cells[static_cast<std::size_t>(i)];
      if (v == "1") {
        x |= Mask{1} << i;
      } else if (v != "0") {
        parse_fail("samples CSV line " + std::to_string(lineno) + ": inputs must be 0 or 1");
      }
    }
    s.rows.push_back(x);
    if (has_y) s.outputs->push_back(parse_number(cells.back()));
  }
  return s;
}

SampleSet read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_samples_csv(in);
}

void write_samples_csv(std::ostream& out, const SampleSet& s) {
  for (int i = 1; i <= s.d; ++i) out << (i > 1 ? "," : "") << 'x' << i;
  if (s.outputs) out << ",y";
  out << '\n';
  for (std::size_t r = 0; r < s.size(); ++r) {
    for (int i = 0; i < s.d; ++i) out << (i > 0 ? "," : "") << ((s.rows[r] >> i) & 1u);
    if (s.outputs) out << ',' << format_double((*s.outputs)[r]);
    out << '\n';
  }
}

Json decomposition_to_json(const Decomposition& dec) {
  Json j;
  j["mode"] = std::string(to_string(dec.mode));
  if (dec.cap()) j["c"] = *dec.cap();
  Json subsets = Json::array();
  Json beta = Json::array();
  Json unident = Json::array();
  for (std::size_t k = 0; k < dec.order.size(); ++k) {
    const auto label = format_subset(dec.order[k]);
    if (dec.identifiable[k]) {
      subsets.push_back(label);
      beta.push_back(dec.beta[k]);
    } else {
      unident.push_back(label);
    }
  }
  j["subsets"] = subsets;
  j["beta"] = beta;
  j["unidentifiable"] = unident;
  j["residual"] = dec.residual;
  return j;
}

Json sensitivity_to_json(const SensitivityReport& r, const std::optional<std::string>& matrix_csv) {
  Json j;
  j["variance"] = r.variance;
  Json sobol = Json::array();
  for (std::size_t k = 0; k < r.order.size(); ++k) {
    Json e;
    e["subset"] = format_subset(r.order[k]);
    e["S"] = r.sobol[k];
    e["S_var"] = r.sobol_var[k];
    e["S_cov"] = r.sobol_cov[k];
    sobol.push_back(e);
  }
  j["sobol"] = sobol;
  j["sobol_matrix"] = matrix_csv ? Json(*matrix_csv) : Json(nullptr);
  j["shapley"] = r.shapley;
  j["sobol_sum"] = r.sobol_sum;
  j["flags"] = r.flags;
  return j;
}

Json estimate_to_json(const EstimationResult& est) {
  Json j;
  j["n"] = est.n;
  j["c"] = est.cap() ? Json(*est.cap()) : Json(nullptr);
  Json subsets = Json::array();
  for (auto a : est.order) subsets.push_back(format_subset(a));
  j["subsets"] = subsets;
  j["beta_hat"] = est.beta_hat;
  j["mu_hat"] = est.mu_hat;
  j["flags"] = est.flags;
  return j;
}

Json error_to_json(const Error& e) {
  Json j;
  Json inner;
  inner["code"] = std::string(to_string(e.code()));
  inner["message"] = e.what();
  j["error"] = inner;
  return j;
}

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

void write_matrix_csv(std::ostream& out, const Matrix& m, const SubsetOrder& order) {
  out << "subset";
  for (auto a : order) out << ",\"" << format_subset(a) << '"';
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << '"' << format_subset(order[r]) << '"';
    for (std::size_t c = 0; c < m.cols(); ++c) out << ',' << format_double(m(r, c));
    out << '\n';
  }
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace mbhd::io
