// Command-line front end: decompose, indices, estimate, sample, reproduce.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mbhd/decomposition.hpp"
#include "mbhd/error.hpp"
#include "mbhd/estimation.hpp"
#include "mbhd/io.hpp"
#include "mbhd/kernels.hpp"
#include "mbhd/reproduce.hpp"
#include "mbhd/sensitivity.hpp"

namespace fs = std::filesystem;
using mbhd::io::Json;

namespace {

struct Options {
  std::string command;
  std::string pmf_path;
  std::string model_path;
  std::string samples_path;
  std::string data_path;
  std::string rules_path;
  std::string out_dir = "out";
  std::string experiment;
  std::optional<int> cap;
  double level = 0.95;
  std::uint64_t seed = 20240601;
  std::size_t n = 1000;
  int nodes = mbhd::kDefaultQuadratureNodes;
  int steps = 50;
  double smoothing = 0.0;
  bool export_gram = false;
  std::vector<std::string> points;
};

Json resolved_config(const Options& o) {
  Json c;
  c["command"] = o.command;
  if (!o.pmf_path.empty()) c["pmf"] = o.pmf_path;
  if (!o.model_path.empty()) c["model"] = o.model_path;
  if (!o.samples_path.empty()) c["samples"] = o.samples_path;
  if (!o.experiment.empty()) c["experiment"] = o.experiment;
  if (!o.data_path.empty()) c["data"] = o.data_path;
  if (!o.rules_path.empty()) c["rules"] = o.rules_path;
  c["out"] = o.out_dir;
  c["cap"] = o.cap ? Json(*o.cap) : Json(nullptr);
  c["level"] = o.level;
  c["seed"] = o.seed;
  c["n"] = o.n;
  c["quadrature_nodes"] = o.nodes;
  c["fgm_steps"] = o.steps;
  c["smoothing"] = o.smoothing;
  c["max_exact_d"] = mbhd::exact_dimension_limit();
  return c;
}

Json with_envelope(Json body, const Options& o) {
  Json j;
  j["version"] = mbhd::io::library_version();
  j["config"] = resolved_config(o);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

mbhd::Mask parse_point(const std::string& bits, int d) {
  if (static_cast<int>(bits.size()) != d)
    throw mbhd::Error(mbhd::ErrorCode::ArityMismatch, "point \"" + bits + "\" needs " + std::to_string(d) + " bits");
  mbhd::Mask x = 0;
  for (int i = 0; i < d; ++i) {
    const char c = bits[static_cast<std::size_t>(i)];
    if (c != '0' && c != '1') throw mbhd::Error(mbhd::ErrorCode::ParseError, "point bits must be 0/1");
    if (c == '1') x |= mbhd::Mask{1} << i;
  }
  return x;
}

// Exact on full support, truncated when capped, degenerate when cells vanish.
mbhd::Decomposition decompose_auto(const mbhd::JointPmf& pmf, const mbhd::Model& model,
                                   std::optional<int> cap) {
  if (!pmf.full_support()) {
    if (cap) throw mbhd::Error(mbhd::ErrorCode::NotFullSupport, "truncation needs full support");
    return mbhd::degenerate_decompose(pmf, model);
  }
  if (cap) return mbhd::decompose_truncated(pmf, model, *cap);
  return mbhd::decompose(pmf, model);
}

std::vector<std::string> run_decompose(const Options& o, bool with_indices) {
  const auto pmf = mbhd::io::pmf_from_json(mbhd::io::read_json(o.pmf_path));
  const auto model = mbhd::io::model_from_json(mbhd::io::read_json(o.model_path));
  const auto dec = decompose_auto(pmf, model, o.cap);
  fs::create_directories(o.out_dir);
  std::vector<std::string> files;
  mbhd::io::write_json(fs::path(o.out_dir) / "decomposition.json",
                       with_envelope(mbhd::io::decomposition_to_json(dec), o));
  files.push_back("decomposition.json");
  if (o.export_gram) {
    std::ofstream g(fs::path(o.out_dir) / "gamma.csv");
    mbhd::SubsetOrder active_order(dec.order.dimension(), [&] {
      std::vector<mbhd::SubsetId> s;
      for (auto k : dec.active) s.push_back(dec.order[k]);
      return s;
    }(), dec.order.cap());
    mbhd::io::write_matrix_csv(g, dec.gram.gamma(), active_order);
    files.push_back("gamma.csv");
  }
  if (with_indices) {
    const auto rep = mbhd::sensitivity(dec);
    {
      std::ofstream m(fs::path(o.out_dir) / "sobol_matrix.csv");
      mbhd::io::write_matrix_csv(m, rep.sobol_matrix, rep.order);
    }
    mbhd::io::write_json(fs::path(o.out_dir) / "report.json",
                         with_envelope(mbhd::io::sensitivity_to_json(rep, "sobol_matrix.csv"), o));
    files.push_back("sobol_matrix.csv");
    files.push_back("report.json");
  }
  return files;
}

std::vector<std::string> run_estimate(const Options& o) {
  auto samples = mbhd::io::read_samples_csv(fs::path(o.samples_path));
  std::optional<mbhd::Model> model;
  if (!o.model_path.empty()) model = mbhd::io::model_from_json(mbhd::io::read_json(o.model_path));
  if (!model && !samples.outputs)
    throw mbhd::Error(mbhd::ErrorCode::InvalidArgument, "need --model or a y column in the samples");
  mbhd::EstimationResult est;
  if (!o.pmf_path.empty()) {
    auto pmf = std::make_shared<const mbhd::JointPmf>(
        mbhd::io::pmf_from_json(mbhd::io::read_json(o.pmf_path)));
    auto gs = mbhd::GramSystem::assemble(pmf, mbhd::enumerate_subsets(pmf->dimension(), o.cap), false);
    est = model ? mbhd::estimate(samples, *model, gs) : mbhd::estimate(samples, gs);
  } else {
    est = mbhd::estimate_empirical(samples, o.cap, model ? &*model : nullptr);
  }
  auto body = mbhd::io::estimate_to_json(est);
  Json preds = Json::array();
  for (const auto& p : o.points) {
    const auto ci = mbhd::predict_with_ci(est, parse_point(p, samples.d), o.level);
    preds.push_back({{"x", p}, {"g_hat", ci.g_hat}, {"delta_n", ci.delta_n},
                     {"level", ci.level}, {"lower", ci.lower}, {"upper", ci.upper}});
  }
  body["predictions"] = preds;
  fs::create_directories(o.out_dir);
  mbhd::io::write_json(fs::path(o.out_dir) / "estimate.json", with_envelope(body, o));
  return {"estimate.json"};
}

std::vector<std::string> run_sample(const Options& o) {
  const auto pmf = mbhd::io::pmf_from_json(mbhd::io::read_json(o.pmf_path));
  auto s = mbhd::sample(pmf, o.n, o.seed);
  if (!o.model_path.empty()) {
    const auto model = mbhd::io::model_from_json(mbhd::io::read_json(o.model_path));
    mbhd::require_arity(model, s.d);
    std::vector<double> y;
    for (auto x : s.rows) y.push_back(model(x));
    s.outputs = std::move(y);
  }
  fs::create_directories(o.out_dir);
  std::ofstream out(fs::path(o.out_dir) / "samples.csv", std::ios::binary);
  mbhd::io::write_samples_csv(out, s);
  return {"samples.csv"};
}

std::vector<std::string> run_reproduce(const Options& o) {
  const auto cfg = resolved_config(o);
  const fs::path dir(o.out_dir);
  if (o.experiment == "perceptron") {
    mbhd::reproduce::write_perceptron(mbhd::reproduce::perceptron(o.nodes), dir, cfg);
    return {"perceptron.json", "perceptron_variance.csv", "perceptron_norms.csv", "perceptron_shapley.csv"};
  }
  if (o.experiment == "fgm") {
    mbhd::reproduce::write_fgm(mbhd::reproduce::fgm_curves(o.steps), dir, cfg);
    return {"fgm.json", "fgm_curves.csv"};
  }
  std::optional<fs::path> data;
  if (!o.data_path.empty()) data = o.data_path;
  const auto rules = o.rules_path.empty()
                         ? mbhd::reproduce::mushroom_rules()
                         : mbhd::BinarizationSpec::from_json(mbhd::io::read_json(o.rules_path));
  const auto rep = mbhd::reproduce::mushroom(data, rules, o.smoothing);
  mbhd::reproduce::write_mushroom(rep, dir, cfg);
  return {"mushroom.json", "mushroom_indices.csv", "mushroom_shapley.csv"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Hoeffding decomposition and sensitivity analysis for dependent binary inputs"};
  app.set_version_flag("--version", mbhd::io::library_version());
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--out", o.out_dir, "Output directory");
  };
  auto* dec = app.add_subcommand("decompose", "Solve for the coefficients beta");
  auto* ind = app.add_subcommand("indices", "Sobol' indices, Sobol' matrix and Shapley effects");
  for (auto* sub : {dec, ind}) {
    sub->add_option("--pmf", o.pmf_path, "pmf JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--model", o.model_path, "model JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--cap", o.cap, "Cardinality cap c (truncated mode)");
    sub->add_flag("--export-gram", o.export_gram, "Also write the Gram matrix as CSV");
    add_common(sub);
  }
  auto* est = app.add_subcommand("estimate", "Monte Carlo estimation from samples");
  est->add_option("--samples", o.samples_path, "samples CSV (x1..xd[,y])")->required()->check(CLI::ExistingFile);
  est->add_option("--pmf", o.pmf_path, "pmf JSON; omitted means empirical Gram")->check(CLI::ExistingFile);
  est->add_option("--model", o.model_path, "model JSON; omitted means the y column")->check(CLI::ExistingFile);
  est->add_option("--n-cap,--cap", o.cap, "Cardinality cap c");
  est->add_option("--level", o.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
  est->add_option("--x", o.points, "Points for intervals, as bit strings x1..xd");
  add_common(est);
  auto* smp = app.add_subcommand("sample", "Draw i.i.d. samples from a pmf");
  smp->add_option("--pmf", o.pmf_path, "pmf JSON")->required()->check(CLI::ExistingFile);
  smp->add_option("--model", o.model_path, "model JSON for a y column")->check(CLI::ExistingFile);
  smp->add_option("-n,--n", o.n, "Sample count");
  smp->add_option("--seed", o.seed, "Seed");
  add_common(smp);
  auto* rep = app.add_subcommand("reproduce", "Rerun the reference experiments");
  rep->add_option("experiment", o.experiment, "perceptron | fgm | mushroom")
      ->required()
      ->check(CLI::IsMember({"perceptron", "fgm", "mushroom"}));
  rep->add_option("--data", o.data_path, "Local agaricus-lepiota CSV (mushroom only)");
  rep->add_option("--rules", o.rules_path, "Binarization rules JSON (mushroom only)")
      ->check(CLI::ExistingFile);
  rep->add_option("--nodes", o.nodes, "Gauss-Hermite nodes")->check(CLI::Range(1, 1024));
  rep->add_option("--steps", o.steps, "FGM grid steps over [0, 1/2]")->check(CLI::Range(2, 100000));
  rep->add_option("--smoothing", o.smoothing, "Pseudo-count for the empirical pmf")->check(CLI::NonNegativeNumber);
  add_common(rep);

  CLI11_PARSE(app, argc, argv);
  o.command = app.get_subcommands().front()->get_name();

  try {
    std::vector<std::string> files;
    if (o.command == "decompose") files = run_decompose(o, false);
    else if (o.command == "indices") files = run_decompose(o, true);
    else if (o.command == "estimate") files = run_estimate(o);
    else if (o.command == "sample") files = run_sample(o);
    else files = run_reproduce(o);
    Json ok;
    ok["status"] = "ok";
    ok["out"] = o.out_dir;
    ok["files"] = files;
    ok["kernels"] = mbhd::kernels::isa_name(mbhd::kernels::active_isa());
    std::cout << ok.dump() << '\n';
    return 0;
  } catch (const mbhd::Error& e) {
    std::cout << mbhd::io::error_to_json(e).dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cout << mbhd::io::error_to_json(mbhd::Error(mbhd::ErrorCode::IoError, e.what())).dump() << '\n';
    return 2;
  }
}
