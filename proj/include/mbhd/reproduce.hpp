#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mbhd/binarize.hpp"
#include "mbhd/io.hpp"
#include "mbhd/sensitivity.hpp"

namespace mbhd::reproduce {

/// Errors of the independence approximation S_perp = (Var_0 / Var_rho) S^0
/// for one correlation level.
struct SobolErrorMetrics {
  double matrix_l1 = 0.0;        // entrywise sum of |S - S_perp|
  double matrix_l1_rel = 0.0;
  double matrix_spectral = 0.0;  // max |eigenvalue|
  double matrix_spectral_rel = 0.0;
  double vector_l1 = 0.0;
  double vector_l1_rel = 0.0;
  double vector_l2 = 0.0;
  double vector_l2_rel = 0.0;
  double matrix_induced_l1 = 0.0;  // max column abs sum, informational
  double matrix_induced_l1_rel = 0.0;
};

struct PerceptronCase {
  double rho = 0.0;
  double variance = 0.0;
  double variance_independent = 0.0;
  double abs_diff = 0.0;  // Var_rho - Var_0
  double rel_diff = 0.0;  // (Var_rho - Var_0) / Var_rho
  SobolErrorMetrics metrics;
  std::vector<double> shapley;
  std::vector<double> sobol_first_order;
};

struct PerceptronReport {
  int nodes = 0;
  std::vector<double> shapley_independent;
  std::vector<PerceptronCase> cases;
};

PerceptronReport perceptron(int nodes = kDefaultQuadratureNodes,
                            const std::vector<double>& rhos = {0.9, 0.5, 0.1});

SobolErrorMetrics sobol_error_metrics(const SensitivityReport& dep, const SensitivityReport& indep);

struct FgmPoint {
  double rho = 0.0;
  bool in_fgm_range = false;  // 16 rho - 4 within [-1, 1]
  bool computed = false;      // false where the support collapses
  double s1 = 0.0, s2 = 0.0, s12 = 0.0;
  double variance = 0.0, cov_g1 = 0.0, cov_g12 = 0.0;
  double s1_closed = 0.0, s12_closed = 0.0;
  double variance_closed = 0.0, cov_g1_closed = 0.0, cov_g12_closed = 0.0;
};

/// G = X1 X2 on the symmetric two-cell law (rho, 1/2 - rho, 1/2 - rho, rho).
std::vector<FgmPoint> fgm_curves(int steps = 50);

struct MushroomReport {
  BinarizedData data;
  SupportClass support;
  DecompositionMode mode = DecompositionMode::Exact;
  SensitivityReport indices;
  double smoothing = 0.0;
  bool hierarchy_holds = false;  // S1 largest, Sh1 > Sh2 > max(Sh3..Sh5)
  std::vector<std::string> flags;
};

BinarizationSpec mushroom_rules();
MushroomReport mushroom(const std::optional<std::filesystem::path>& data,
                        const BinarizationSpec& spec, double smoothing = 0.0);

// Bundle writers: every JSON report embeds `config` and the library version.
void write_perceptron(const PerceptronReport& r, const std::filesystem::path& dir,
                      const io::Json& config);
void write_fgm(const std::vector<FgmPoint>& pts, const std::filesystem::path& dir,
               const io::Json& config);
void write_mushroom(const MushroomReport& r, const std::filesystem::path& dir,
                    const io::Json& config);

}  // namespace mbhd::reproduce
