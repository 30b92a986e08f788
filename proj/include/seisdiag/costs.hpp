#ifndef SEISDIAG_COSTS_HPP
#define SEISDIAG_COSTS_HPP

#include <functional>
#include <string>
#include <vector>

namespace seisdiag {

/// Class labels ordered from least to most severe.
struct ClassCatalog {
  std::vector<std::string> classes;
  std::vector<bool> present_in_training; // same length as classes

  std::size_t size() const { return classes.size(); }
  void validate() const;

  /// Index of a label; throws ClassError when unknown.
  std::size_t index_of(const std::string& label) const;
};

/// Probability-weighted confusion scores. Rows are ground truth, columns are
/// predictions; cell (i, j) accumulates the occurrence probabilities of
/// observations with truth i predicted as j.
struct ScoreMatrix {
  ClassCatalog catalog;
  std::vector<double> cells; // p*p, row-major

  double& at(std::size_t truth, std::size_t pred) { return cells[truth * catalog.size() + pred]; }
  double at(std::size_t truth, std::size_t pred) const {
    return cells[truth * catalog.size() + pred];
  }
  double total_mass() const;
  double diagonal_mass() const;

  /// Mass below the diagonal: truth more severe than prediction.
  double underestimation_mass() const;
  /// Mass above the diagonal: prediction more severe than truth.
  double conservative_mass() const;

  ScoreMatrix& operator+=(const ScoreMatrix& other);
};

ScoreMatrix score_matrix(const std::vector<std::size_t>& truths,
                         const std::vector<std::size_t>& preds,
                         const std::vector<double>& probs,
                         const ClassCatalog& catalog);

struct CostWeights {
  double w1 = 1.0;
  double w2 = 1.0;
  double w3 = 1.0;

  void validate() const;
};

/// Misclassification penalty lambda(truth, pred) and per-class correction
/// omega indexed by the predicted class. lambda defaults to squared severity
/// distance; omega defaults to 1 for classes seen in training, omega_absent
/// for the rest.
struct PenaltyConfig {
  std::function<double(std::size_t, std::size_t)> lambda = squared_distance;
  std::vector<double> omega; // per class; empty means all ones

  static double squared_distance(std::size_t truth, std::size_t pred) {
    double d = static_cast<double>(truth) - static_cast<double>(pred);
    return d * d;
  }

  static PenaltyConfig for_catalog(const ClassCatalog& catalog, double omega_absent);

  double omega_at(std::size_t pred) const { return omega.empty() ? 1.0 : omega[pred]; }
};

/// Asymmetric cost objective: rewards the diagonal, charges underestimation
/// (below diagonal) with w2 and conservative misclassification (above
/// diagonal) with w3. Omega is indexed by the predicted class in both sums.
double cost(const ScoreMatrix& matrix, const CostWeights& weights, const PenaltyConfig& penalty);

struct ConfusionReport {
  ScoreMatrix matrix;
  std::vector<double> row_percent; // p*p, row-major, 0 for zero-mass rows
  double global_accuracy_percent = 0.0;
  double underestimation_mass = 0.0;
  double conservative_mass = 0.0;
  bool underestimation_within_conservative = false;

  /// Aligned plain-text table: raw score and row percentage per cell, global
  /// accuracy footer.
  std::string render_text() const;

  /// Raw scores as CSV rows (class column + one column per predicted class).
  std::string to_csv(const std::string& provenance) const;
};

/// Builds the row-normalized report. Throws EmptyReport for zero total mass.
ConfusionReport report(const ScoreMatrix& matrix);

/// Score matrix CSV round trip (schema shared with the CLI `report` command).
std::string score_matrix_to_csv(const ScoreMatrix& matrix, const std::string& provenance);
ScoreMatrix score_matrix_from_csv(const std::string& text);

} // namespace seisdiag

#endif
