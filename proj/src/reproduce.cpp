#include "mbhd/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mbhd/error.hpp"

namespace mbhd::reproduce {

namespace {

SensitivityReport perceptron_indices(double rho, int nodes) {
  auto pmf = std::make_shared<const JointPmf>(gaussian_equicorrelated(10, rho, nodes));
  const auto gs = GramSystem::assemble(pmf, enumerate_subsets(10), false);
  return sensitivity(decompose(gs, benchmark_perceptron()));
}

double abs_sum(const Matrix& m) {
  double s = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (double v : m.row(r)) s += std::abs(v);
  return s;
}

double max_col_abs_sum(const Matrix& m) {
  std::vector<double> col(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) col[c] += std::abs(m(r, c));
  return col.empty() ? 0.0 : *std::max_element(col.begin(), col.end());
}

double l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void write_csv(const std::filesystem::path& path, const std::string& text) { io::write_text(path, text); }

io::Json envelope(const char* which, const io::Json& config) {
  io::Json j;
  j["experiment"] = which;
  j["version"] = io::library_version();
  j["config"] = config;
  return j;
}

}  // namespace

SobolErrorMetrics sobol_error_metrics(const SensitivityReport& dep, const SensitivityReport& indep) {
  if (dep.order.size() != indep.order.size())
    throw Error(ErrorCode::InvalidArgument, "reports use different orders");
  const double scale = indep.variance / dep.variance;
  const std::size_t m = dep.order.size();
  Matrix diff(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      diff(a, b) = dep.sobol_matrix(a, b) - scale * indep.sobol_matrix(a, b);
  std::vector<double> dv(m);
  for (std::size_t a = 0; a < m; ++a) dv[a] = dep.sobol[a] - scale * indep.sobol[a];

  SobolErrorMetrics e;
  e.matrix_l1 = abs_sum(diff);
  e.matrix_l1_rel = e.matrix_l1 / abs_sum(dep.sobol_matrix);
  e.matrix_spectral = symmetric_spectral_norm(diff);
  e.matrix_spectral_rel = e.matrix_spectral / symmetric_spectral_norm(dep.sobol_matrix);
  e.vector_l1 = l1(dv);
  e.vector_l1_rel = e.vector_l1 / l1(dep.sobol);
  e.vector_l2 = l2(dv);
  e.vector_l2_rel = e.vector_l2 / l2(dep.sobol);
  e.matrix_induced_l1 = max_col_abs_sum(diff);
  e.matrix_induced_l1_rel = e.matrix_induced_l1 / max_col_abs_sum(dep.sobol_matrix);
  return e;
}

PerceptronReport perceptron(int nodes, const std::vector<double>& rhos) {
  PerceptronReport rep;
  rep.nodes = nodes;
  const auto base = perceptron_indices(0.0, nodes);
  rep.shapley_independent = base.shapley;
  for (double rho : rhos) {
    const auto r = perceptron_indices(rho, nodes);
    PerceptronCase c;
    c.rho = rho;
    c.variance = r.variance;
    c.variance_independent = base.variance;
    c.abs_diff = r.variance - base.variance;
    c.rel_diff = c.abs_diff / r.variance;
    c.metrics = sobol_error_metrics(r, base);
    c.shapley = r.shapley;
    for (std::size_t k = 0; k < r.order.size(); ++k)
      if (r.order[k].size() == 1) c.sobol_first_order.push_back(r.sobol[k]);
    rep.cases.push_back(std::move(c));
  }
  return rep;
}

std::vector<FgmPoint> fgm_curves(int steps) {
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "need at least two grid steps");
  const auto model = Model::bool_expr("x1*x2", 2);
  std::vector<FgmPoint> out;
  for (int s = 0; s <= steps; ++s) {
    FgmPoint p;
    p.rho = 0.5 * s / steps;
    const double theta = 16.0 * p.rho - 4.0;
    p.in_fgm_range = theta >= -1.0 && theta <= 1.0;
    p.s1_closed = 1.0 / (4.0 * (1.0 - p.rho));
    p.s12_closed = (0.5 - p.rho) / (1.0 - p.rho);
    p.variance_closed = p.rho * (1.0 - p.rho);
    p.cov_g1_closed = p.rho / 4.0;
    p.cov_g12_closed = p.rho * (0.5 - p.rho);
    const auto pmf = symmetric_binary_pair(p.rho);
    if (pmf.full_support()) {
      const auto r = sensitivity(decompose(pmf, model));
      const auto i1 = *r.order.index_of(SubsetId{1});
      const auto i2 = *r.order.index_of(SubsetId{2});
      const auto i12 = *r.order.index_of(SubsetId{3});
      p.computed = true;
      p.s1 = r.sobol[i1];
      p.s2 = r.sobol[i2];
      p.s12 = r.sobol[i12];
      p.variance = r.variance;
      p.cov_g1 = r.sobol[i1] * r.variance;
      p.cov_g12 = r.sobol[i12] * r.variance;
    }
    out.push_back(p);
  }
  return out;
}

BinarizationSpec mushroom_rules() {
  // Attribute codes follow the UCI agaricus-lepiota file; the long names are
  // accepted too so either encoding of the data binarizes the same way.
  static const char* kSpec = R"({
    "header": ["class","cap-shape","cap-surface","cap-color","bruises","odor",
               "gill-attachment","gill-spacing","gill-size","gill-color","stalk-shape",
               "stalk-root","stalk-surface-above-ring","stalk-surface-below-ring",
               "stalk-color-above-ring","stalk-color-below-ring","veil-type","veil-color",
               "ring-number","ring-type","spore-print-color","population","habitat"],
    "rules": [
      {"name": "odor_not_none", "column": "odor", "op": "not_in", "values": ["n", "none"]},
      {"name": "stalk_root_not_club_rooted", "column": "stalk-root", "op": "not_in",
       "values": ["c", "r", "club", "rooted"]},
      {"name": "gill_spacing_not_crowded", "column": "gill-spacing", "op": "not_in",
       "values": ["w", "crowded"]},
      {"name": "bruises_not_true", "column": "bruises", "op": "not_in",
       "values": ["t", "true", "bruises"]},
      {"name": "spore_print_not_green", "column": "spore-print-color", "op": "not_in",
       "values": ["r", "green"]}
    ],
    "label": {"column": "class", "mapping": {"p": 1, "e": 0, "poisonous": 1, "edible": 0}},
    "quasi_constant_eps": 0.005
  })";
  return BinarizationSpec::from_json(io::Json::parse(kSpec));
}

MushroomReport mushroom(const std::optional<std::filesystem::path>& data,
                        const BinarizationSpec& spec, double smoothing) {
  if (!data)
    throw Error(ErrorCode::DatasetMissing,
                "the mushroom experiment needs --data pointing at a local agaricus-lepiota CSV");
  std::ifstream in(*data);
  if (!in) throw Error(ErrorCode::DatasetMissing, "cannot open dataset " + data->string());
  const auto table = read_csv(in, spec.header);

  MushroomReport rep;
  rep.smoothing = smoothing;
  rep.data = binarize(table, spec);
  if (rep.data.samples.d != 5) throw Error(ErrorCode::ArityMismatch, "the rule model needs exactly 5 rules");
  const auto pmf = empirical(rep.data.samples, smoothing);
  rep.support = pmf.support();
  const auto model = mushroom_rule_model();
  Decomposition dec = pmf.full_support() ? decompose(pmf, model) : degenerate_decompose(pmf, model);
  rep.mode = dec.mode;
  rep.indices = sensitivity(dec);
  rep.flags.push_back("informational");
  for (const auto& f : rep.indices.flags) rep.flags.push_back(f);
  for (const auto& name : rep.data.quasi_constant) rep.flags.push_back("quasi-constant:" + name);

  const auto& sh = rep.indices.shapley;
  double max_other = 0.0;
  std::size_t argmax = 0;
  for (std::size_t k = 0; k < rep.indices.order.size(); ++k)
    if (rep.indices.sobol[k] > rep.indices.sobol[argmax]) argmax = k;
  max_other = std::max({sh[2], sh[3], sh[4]});
  rep.hierarchy_holds = rep.indices.order[argmax] == SubsetId{1} && sh[0] > sh[1] && sh[1] > max_other;
  return rep;
}

void write_perceptron(const PerceptronReport& r, const std::filesystem::path& dir,
                      const io::Json& config) {
  std::filesystem::create_directories(dir);
  std::ostringstream t2;
  t2 << "rho,var_rho,var_0,abs_diff,rel_diff\n";
  for (const auto& c : r.cases)
    t2 << io::format_double(c.rho) << ',' << io::format_double(c.variance) << ','
       << io::format_double(c.variance_independent) << ',' << io::format_double(c.abs_diff) << ','
       << io::format_double(c.rel_diff) << '\n';
  write_csv(dir / "perceptron_variance.csv", t2.str());

  std::ostringstream t3;
  t3 << "rho,matrix_l1,matrix_l1_rel,matrix_spectral,matrix_spectral_rel,vector_l1,vector_l1_rel,"
        "vector_l2,vector_l2_rel,matrix_induced_l1,matrix_induced_l1_rel\n";
  for (const auto& c : r.cases) {
    const auto& m = c.metrics;
    t3 << io::format_double(c.rho);
    for (double v : {m.matrix_l1, m.matrix_l1_rel, m.matrix_spectral, m.matrix_spectral_rel,
                     m.vector_l1, m.vector_l1_rel, m.vector_l2, m.vector_l2_rel,
                     m.matrix_induced_l1, m.matrix_induced_l1_rel})
      t3 << ',' << io::format_double(v);
    t3 << '\n';
  }
  write_csv(dir / "perceptron_norms.csv", t3.str());

  std::ostringstream sh;
  sh << "input,independent";
  for (const auto& c : r.cases) sh << ",rho_" << io::format_double(c.rho);
  sh << '\n';
  for (std::size_t i = 0; i < r.shapley_independent.size(); ++i) {
    sh << (i + 1) << ',' << io::format_double(r.shapley_independent[i]);
    for (const auto& c : r.cases) sh << ',' << io::format_double(c.shapley[i]);
    sh << '\n';
  }
  write_csv(dir / "perceptron_shapley.csv", sh.str());

  auto j = envelope("perceptron", config);
  j["quadrature_nodes"] = r.nodes;
  j["shapley_independent"] = r.shapley_independent;
  io::Json cases = io::Json::array();
  for (const auto& c : r.cases) {
    io::Json cj;
    cj["rho"] = c.rho;
    cj["variance"] = c.variance;
    cj["variance_independent"] = c.variance_independent;
    cj["abs_diff"] = c.abs_diff;
    cj["rel_diff"] = c.rel_diff;
    const auto& m = c.metrics;
    cj["metrics"] = {{"matrix_l1", m.matrix_l1},
                     {"matrix_l1_rel", m.matrix_l1_rel},
                     {"matrix_spectral", m.matrix_spectral},
                     {"matrix_spectral_rel", m.matrix_spectral_rel},
                     {"vector_l1", m.vector_l1},
                     {"vector_l1_rel", m.vector_l1_rel},
                     {"vector_l2", m.vector_l2},
                     {"vector_l2_rel", m.vector_l2_rel},
                     {"matrix_induced_l1", m.matrix_induced_l1},
                     {"matrix_induced_l1_rel", m.matrix_induced_l1_rel}};
    cj["shapley"] = c.shapley;
    cj["sobol_first_order"] = c.sobol_first_order;
    cases.push_back(cj);
  }
  j["cases"] = cases;
  j["files"] = {"perceptron_variance.csv", "perceptron_norms.csv", "perceptron_shapley.csv"};
  io::write_json(dir / "perceptron.json", j);
}

void write_fgm(const std::vector<FgmPoint>& pts, const std::filesystem::path& dir,
               const io::Json& config) {
  std::filesystem::create_directories(dir);
  std::ostringstream os;
  os << "rho,in_fgm_range,computed,S1,S2,S12,var,cov_g1,cov_g12,S1_closed,S12_closed,var_closed,"
        "cov_g1_closed,cov_g12_closed\n";
  const auto cell = [](bool ok, double v) { return ok ? io::format_double(v) : std::string(); };
  for (const auto& p : pts) {
    os << io::format_double(p.rho) << ',' << (p.in_fgm_range ? 1 : 0) << ',' << (p.computed ? 1 : 0);
    for (double v : {p.s1, p.s2, p.s12, p.variance, p.cov_g1, p.cov_g12}) os << ',' << cell(p.computed, v);
    for (double v : {p.s1_closed, p.s12_closed, p.variance_closed, p.cov_g1_closed, p.cov_g12_closed})
      os << ',' << io::format_double(v);
    os << '\n';
  }
  write_csv(dir / "fgm_curves.csv", os.str());

  auto j = envelope("fgm", config);
  double max_err = 0.0;
  std::size_t collapsed = 0;
  for (const auto& p : pts) {
    if (!p.computed) {
      ++collapsed;
      continue;
    }
    for (double e : {p.s1 - p.s1_closed, p.s2 - p.s1_closed, p.s12 - p.s12_closed,
                     p.variance - p.variance_closed, p.cov_g1 - p.cov_g1_closed,
                     p.cov_g12 - p.cov_g12_closed})
      max_err = std::max(max_err, std::abs(e));
  }
  j["grid_points"] = pts.size();
  j["collapsed_points"] = collapsed;
  j["max_abs_error_vs_closed_form"] = max_err;
  j["files"] = {"fgm_curves.csv"};
  io::write_json(dir / "fgm.json", j);
}

void write_mushroom(const MushroomReport& r, const std::filesystem::path& dir,
                    const io::Json& config) {
  std::filesystem::create_directories(dir);
  std::ostringstream ind;
  ind << "subset,S,S_var,S_cov\n";
  for (std::size_t k = 0; k < r.indices.order.size(); ++k) {
    if (r.indices.order[k].empty()) continue;
    ind << '"' << format_subset(r.indices.order[k]) << "\"," << io::format_double(r.indices.sobol[k])
        << ',' << io::format_double(r.indices.sobol_var[k]) << ','
        << io::format_double(r.indices.sobol_cov[k]) << '\n';
  }
  write_csv(dir / "mushroom_indices.csv", ind.str());
  std::ostringstream sh;
  sh << "rule,name,marginal,shapley\n";
  for (std::size_t i = 0; i < r.indices.shapley.size(); ++i)
    sh << (i + 1) << ',' << r.data.rule_names[i] << ',' << io::format_double(r.data.marginals[i]) << ','
       << io::format_double(r.indices.shapley[i]) << '\n';
  write_csv(dir / "mushroom_shapley.csv", sh.str());

  auto j = envelope("mushroom", config);
  j["n"] = r.data.samples.size();
  j["rules"] = r.data.rule_names;
  j["marginals"] = r.data.marginals;
  j["support"] = {{"kind", std::string(to_string(r.support.kind))}, {"zero_cells", r.support.zero_cells}};
  j["mode"] = std::string(to_string(r.mode));
  j["smoothing"] = r.smoothing;
  j["report"] = io::sensitivity_to_json(r.indices);
  j["hierarchy_holds"] = r.hierarchy_holds;
  j["flags"] = r.flags;
  j["files"] = {"mushroom_indices.csv", "mushroom_shapley.csv"};
  io::write_json(dir / "mushroom.json", j);
}

}  // namespace mbhd::reproduce
