#include "dgd/evaluation.hpp"

#include <stdexcept>

namespace dgd {

MaskTensor complement_mask(const MaskTensor& m) {
  std::vector<Matrix> out;
  out.reserve(m.n_steps());
  for (std::size_t t = 0; t < m.n_steps(); ++t) out.push_back((1.0 - m[t].array()).matrix());
  if (out.empty()) return m;
  return MaskTensor(DynTensor(std::move(out)));
}

std::optional<double> relative_error(const DynTensor& est, const DynTensor& truth, const MaskTensor& m_un) {
  if (!est.same_shape(truth) || !truth.same_shape(m_un.values())) {
    throw std::invalid_argument("relative_error: shape mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < truth.n_steps(); ++t) {
    num += m_un[t].cwiseProduct(est[t] - truth[t]).squaredNorm();
    den += m_un[t].cwiseProduct(truth[t]).squaredNorm();
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

F1Result f1_score(const DynTensor& est, const DynTensor& truth, const MaskTensor& m_un, double edge_threshold) {
  if (!(edge_threshold > 0.0)) throw std::invalid_argument("f1_score: threshold must be positive");
  if (!est.same_shape(truth) || !truth.same_shape(m_un.values())) {
    throw std::invalid_argument("f1_score: shape mismatch");
  }
  double tp = 0.0, predicted = 0.0, actual = 0.0;
  for (std::size_t t = 0; t < truth.n_steps(); ++t) {
    const auto un = m_un[t].array() != 0.0;
    const auto pred = un && (est[t].array() > edge_threshold);
    const auto real = un && (truth[t].array() > 0.0);
    tp += static_cast<double>((pred && real).count());
    predicted += static_cast<double>(pred.count());
    actual += static_cast<double>(real.count());
  }
  F1Result out;
  if (predicted > 0.0) out.precision = tp / predicted;
  if (actual > 0.0) {
    out.recall = tp / actual;
  } else {
    out.diagnostic = "no true edges in the unobserved set; recall undefined";
  }
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

double default_edge_threshold(const DynTensor& truth, const MaskTensor& m_un) {
  double sum = 0.0;
  double count = 0.0;
  for (std::size_t t = 0; t < truth.n_steps(); ++t) {
    const auto pos = (m_un[t].array() == 0.0) && (truth[t].array() > 0.0);
    sum += pos.select(truth[t].array(), 0.0).sum();
    count += static_cast<double>(pos.count());
  }
  return count > 0.0 ? 0.5 * sum / count : 0.5;
}

EvalReport evaluate(const DynTensor& est, const DynTensor& truth, const MaskTensor& m_un, double edge_threshold) {
  EvalReport rep;
  rep.re = relative_error(est, truth, m_un);
  if (!rep.re) rep.diagnostics.push_back("relative error undefined: unobserved truth has zero norm");
  const auto f1 = f1_score(est, truth, m_un, edge_threshold);
  rep.f1 = f1.f1;
  rep.precision = f1.precision;
  rep.recall = f1.recall;
  if (!f1.diagnostic.empty()) rep.diagnostics.push_back(f1.diagnostic);
  rep.combined_re = rep.re;
  return rep;
}

EvalReport component_analysis(const Decomposition& d, const DynTensor& truth, const MaskTensor& m_un,
                              double edge_threshold) {
  d.check_shape();
  EvalReport rep = evaluate(reconstruct(d), truth, m_un, edge_threshold);
  for (std::size_t r = 0; r < d.rank(); ++r) {
    Decomposition single;
    single.latents = {d.latents[r]};
    single.signatures = d.signatures.col(static_cast<Eigen::Index>(r));
    const DynTensor part = reconstruct(single);
    rep.per_component_re.push_back(relative_error(part, truth, m_un));
    rep.per_component_f1.push_back(f1_score(part, truth, m_un, edge_threshold).f1);
  }
  return rep;
}

MaskTensor restrict_steps(const MaskTensor& m, std::size_t begin, std::size_t end) {
  std::vector<Matrix> out;
  out.reserve(m.n_steps());
  for (std::size_t t = 0; t < m.n_steps(); ++t) {
    out.push_back(t >= begin && t < end ? m[t] : Matrix::Zero(m[t].rows(), m[t].cols()));
  }
  if (out.empty()) return m;
  return MaskTensor(DynTensor(std::move(out)));
}

}  // namespace dgd
