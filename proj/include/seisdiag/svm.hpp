#ifndef SEISDIAG_SVM_HPP
#define SEISDIAG_SVM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace seisdiag {

inline constexpr int kLabelDamaged = +1;
inline constexpr int kLabelNominal = -1;

struct SvmHyperParams {
  double theta1 = 1.0; // emphasis on the damaged class
  double theta2 = 1.0; // global penalty scale
  double theta3 = 1.0; // RBF width

  void validate() const;
};

/// Labeled, weighted observations. Labels are +1 (damaged) / -1 (nominal);
/// weights are positive with mean 1 over the set.
struct TrainingSet {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  std::vector<double> weights;

  std::size_t size() const { return labels.size(); }
  void validate() const;
};

/// Rescales occurrence probabilities to mean-1 observation weights.
std::vector<double> normalize_weights(const std::vector<double>& probabilities);

/// Per-sample box bound C_r: theta1*theta2*B_r for damaged rows,
/// theta2*B_r for nominal rows.
std::vector<double> sample_box_bounds(const std::vector<int>& labels,
                                      const std::vector<double>& weights,
                                      const SvmHyperParams& hp);

/// exp(-theta3 * ||x - y||^2)
double rbf_kernel(std::span<const double> x, std::span<const double> y, double theta3);

/// Per-feature affine map fitted on training data: z = (x - mean) / scale.
/// Constant columns keep scale 1.
struct Standardization {
  std::vector<double> means;
  std::vector<double> scales;

  static Standardization fit(const std::vector<std::vector<double>>& rows);
  std::vector<double> apply(std::span<const double> x) const;
};

struct SmoOptions {
  double kkt_tolerance = 1e-3;
  std::uint64_t max_pair_updates = 10'000'000;
  std::size_t kernel_cache_bytes = 256ull << 20;
};

struct SmoDiagnostics {
  std::uint64_t pair_updates = 0;
  double final_gap = 0.0;
  double dual_objective = 0.0;
};

/// Trained weighted soft-margin RBF classifier. Immutable after training.
/// A training set with a single class yields a constant model that always
/// predicts that class.
class SvmModel {
public:
  /// Solves the dual problem by sequential minimal optimization with
  /// maximal-violating-pair selection.
  static SvmModel train(const TrainingSet& data, const SvmHyperParams& hp,
                        const SmoOptions& options = {}, SmoDiagnostics* diag = nullptr);

  /// Kernel expansion plus bias on the standardized input. Constant models
  /// return +/- infinity.
  double decision_value(std::span<const double> x) const;

  /// +1 if the decision value is strictly positive, else -1.
  int predict(std::span<const double> x) const;

  bool is_constant() const { return constant_class_ != 0; }
  int constant_class() const { return constant_class_; }
  double bias() const { return bias_; }
  double theta3() const { return theta3_; }
  std::size_t feature_count() const { return standardization_.means.size(); }
  std::size_t support_vector_count() const { return support_vectors_.size(); }
  const std::vector<std::vector<double>>& support_vectors() const { return support_vectors_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const Standardization& standardization() const { return standardization_; }

  nlohmann::json to_json() const;
  static SvmModel from_json(const nlohmann::json& doc);

  std::string serialize() const;
  static SvmModel deserialize(const std::string& text);

private:
  std::vector<std::vector<double>> support_vectors_; // standardized
  std::vector<double> coefficients_;                 // alpha_r * y_r
  double bias_ = 0.0;
  double theta3_ = 1.0;
  Standardization standardization_;
  int constant_class_ = 0; // 0: regular model, else +1/-1
};

} // namespace seisdiag

#endif
