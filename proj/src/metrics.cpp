#include "edd/metrics.hpp"

namespace edd {

namespace {

// Index into the (DISTRACTED, FOCUSED) matrix order.
int class_index(State s) { return s == State::DISTRACTED ? 0 : 1; }

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

ConfusionMatrix ConfusionMatrix::from_predictions(
    const std::vector<State>& truth, const std::vector<State>& pred) {
  if (truth.empty()) throw DataError("metrics: empty prediction set");
  if (truth.size() != pred.size())
    throw DataError("metrics: truth/prediction length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++cm.counts[std::size_t(class_index(truth[i]))]
                [std::size_t(class_index(pred[i]))];
  return cm;
}

Metrics metrics_from_confusion(const ConfusionMatrix& cm) {
  const double tp_d = double(cm.counts[0][0]);
  const double fn_d = double(cm.counts[0][1]);
  const double fp_d = double(cm.counts[1][0]);
  const double tp_f = double(cm.counts[1][1]);

  Metrics m;
  m.accuracy = safe_div(tp_d + tp_f, double(cm.total()));
  m.precision_distracted = safe_div(tp_d, tp_d + fp_d);
  m.recall_distracted = safe_div(tp_d, tp_d + fn_d);
  m.f1_distracted =
      safe_div(2.0 * m.precision_distracted * m.recall_distracted,
               m.precision_distracted + m.recall_distracted);
  // For the FOCUSED ("driving") class the roles of the off-diagonals swap.
  m.precision_driving = safe_div(tp_f, tp_f + fn_d);
  m.recall_driving = safe_div(tp_f, tp_f + fp_d);
  m.f1_driving = safe_div(2.0 * m.precision_driving * m.recall_driving,
                          m.precision_driving + m.recall_driving);
  return m;
}

Metrics compute_metrics(const std::vector<State>& truth,
                        const std::vector<State>& pred) {
  return metrics_from_confusion(ConfusionMatrix::from_predictions(truth, pred));
}

}  // namespace edd
