#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgd/model.hpp"
#include "dgd/tensor.hpp"

namespace dgd {

struct F1Result {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  /// Empty when the metrics are well defined; otherwise explains which ratio
  /// had a zero denominator (that ratio is reported as 0).
  std::string diagnostic;
};

struct EvalReport {
  std::optional<double> re;  // empty when the unobserved truth has zero norm
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::vector<std::optional<double>> per_component_re;
  std::vector<double> per_component_f1;
  std::optional<double> combined_re;
  std::vector<std::string> diagnostics;
};

/// Entrywise 1 - m.
MaskTensor complement_mask(const MaskTensor& m);

/// ||M_un o (est - truth)||^2 / ||M_un o truth||^2, or nullopt when the
/// denominator is zero.
std::optional<double> relative_error(const DynTensor& est, const DynTensor& truth, const MaskTensor& m_un);

/// Edges are entries above `edge_threshold` (prediction) or above zero
/// (truth), restricted to m_un.
F1Result f1_score(const DynTensor& est, const DynTensor& truth, const MaskTensor& m_un, double edge_threshold);

/// Half the mean of the positive truth entries at observed positions
/// (where m_un is zero). Falls back to 0.5 when there are none.
double default_edge_threshold(const DynTensor& truth, const MaskTensor& m_un);

EvalReport evaluate(const DynTensor& est, const DynTensor& truth, const MaskTensor& m_un, double edge_threshold);

/// Scores each rank-one term A_r o c_r on its own and the full sum.
EvalReport component_analysis(const Decomposition& d, const DynTensor& truth, const MaskTensor& m_un,
                              double edge_threshold);

/// Restricts a mask to time steps [begin, end).
MaskTensor restrict_steps(const MaskTensor& m, std::size_t begin, std::size_t end);

}  // namespace dgd
