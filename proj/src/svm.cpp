#include "seisdiag/svm.hpp"
#include "seisdiag/errors.hpp"
#include "seisdiag/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace seisdiag {

namespace {
constexpr int kModelFormatVersion = 1;
constexpr double kCurvatureFloor = 1e-12;
} // namespace

void SvmHyperParams::validate() const {
  if (!(theta1 > 0.0) || !std::isfinite(theta1)) raise(ErrorKind::InvalidInput, "theta1 must be finite and > 0");
  if (!(theta2 > 0.0) || !std::isfinite(theta2)) raise(ErrorKind::InvalidInput, "theta2 must be finite and > 0");
  if (!(theta3 > 0.0) || !std::isfinite(theta3)) raise(ErrorKind::InvalidInput, "theta3 must be finite and > 0");
}

void TrainingSet::validate() const {
  if (features.size() != labels.size() || features.size() != weights.size())
    raise(ErrorKind::InvalidInput, "features, labels and weights must have equal length");
  if (features.empty()) raise(ErrorKind::InvalidInput, "training set is empty");
  const std::size_t d = features.front().size();
  double weight_sum = 0.0;
  for (std::size_t r = 0; r < features.size(); ++r) {
    if (features[r].size() != d)
      raise(ErrorKind::InvalidInput, "feature vectors differ in length");
    for (double v : features[r])
      if (!std::isfinite(v)) raise(ErrorKind::InvalidInput, "non-finite feature value");
    if (labels[r] != kLabelDamaged && labels[r] != kLabelNominal)
      raise(ErrorKind::InvalidInput, "labels must be +1 or -1");
    if (!(weights[r] > 0.0)) raise(ErrorKind::InvalidInput, "observation weights must be > 0");
    weight_sum += weights[r];
  }
  double mean = weight_sum / static_cast<double>(features.size());
  if (std::fabs(mean - 1.0) > 1e-9)
    raise(ErrorKind::InvalidInput, "observation weights must have mean 1");
}

std::vector<double> normalize_weights(const std::vector<double>& probabilities) {
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p > 0.0)) raise(ErrorKind::InvalidInput, "occurrence probabilities must be > 0");
    sum += p;
  }
  std::vector<double> out(probabilities.size());
  double scale = static_cast<double>(probabilities.size()) / sum;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = probabilities[i] * scale;
  return out;
}

std::vector<double> sample_box_bounds(const std::vector<int>& labels,
                                      const std::vector<double>& weights,
                                      const SvmHyperParams& hp) {
  hp.validate();
  if (labels.size() != weights.size())
    raise(ErrorKind::InvalidInput, "labels and weights must have equal length");
  std::vector<double> bounds(labels.size());
  for (std::size_t r = 0; r < labels.size(); ++r) {
    double c = hp.theta2 * weights[r];
    if (labels[r] == kLabelDamaged) c *= hp.theta1;
    bounds[r] = c;
  }
  return bounds;
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double theta3) {
  if (x.size() != y.size())
    raise(ErrorKind::DimensionError, "kernel arguments differ in length (" +
                                         std::to_string(x.size()) + " vs " +
                                         std::to_string(y.size()) + ")");
  if (!(theta3 > 0.0)) raise(ErrorKind::InvalidInput, "theta3 must be > 0");
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    dist2 += d * d;
  }
  return std::exp(-theta3 * dist2);
}

Standardization Standardization::fit(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) raise(ErrorKind::InvalidInput, "cannot fit standardization on empty data");
  const std::size_t d = rows.front().size();
  const double n = static_cast<double>(rows.size());
  Standardization s;
  s.means.assign(d, 0.0);
  s.scales.assign(d, 1.0);
  for (const auto& row : rows)
    for (std::size_t j = 0; j < d; ++j) s.means[j] += row[j];
  for (double& m : s.means) m /= n;
  for (std::size_t j = 0; j < d; ++j) {
    double ss = 0.0;
    for (const auto& row : rows) {
      double c = row[j] - s.means[j];
      ss += c * c;
    }
    double sd = std::sqrt(ss / n);
    // Constant columns keep scale 1 so they standardize to exactly 0.
    if (sd > 1e-12 * std::max(1.0, std::fabs(s.means[j]))) s.scales[j] = sd;
  }
  return s;
}

std::vector<double> Standardization::apply(std::span<const double> x) const {
  if (x.size() != means.size())
    raise(ErrorKind::DimensionError, "input length " + std::to_string(x.size()) +
                                         " does not match model feature count " +
                                         std::to_string(means.size()));
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - means[j]) / scales[j];
  return z;
}

namespace {

// Kernel matrix access with a byte-budgeted cache. Small problems get the
// full dense matrix; larger ones fall back to an LRU row cache.
class KernelCache {
public:
  KernelCache(const std::vector<std::vector<double>>& rows, double theta3, std::size_t budget_bytes)
      : rows_(rows), theta3_(theta3), n_(rows.size()) {
    dense_ = n_ * n_ * sizeof(double) <= budget_bytes;
    if (dense_) {
      matrix_.assign(n_ * n_, 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        matrix_[i * n_ + i] = 1.0;
        for (std::size_t j = i + 1; j < n_; ++j) {
          double k = rbf_kernel(rows_[i], rows_[j], theta3_);
          matrix_[i * n_ + j] = k;
          matrix_[j * n_ + i] = k;
        }
      }
    } else {
      max_rows_ = std::max<std::size_t>(2, budget_bytes / (n_ * sizeof(double)));
    }
  }

  const double* row(std::size_t i) {
    if (dense_) return matrix_.data() + i * n_;
    auto it = index_.find(i);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.first);
      return it->second.second.data();
    }
    if (index_.size() >= max_rows_) {
      index_.erase(lru_.back());
      lru_.pop_back();
    }
    std::vector<double> r(n_);
    for (std::size_t j = 0; j < n_; ++j)
      r[j] = (j == i) ? 1.0 : rbf_kernel(rows_[i], rows_[j], theta3_);
    lru_.push_front(i);
    auto [pos, inserted] = index_.emplace(i, std::make_pair(lru_.begin(), std::move(r)));
    return pos->second.second.data();
  }

private:
  const std::vector<std::vector<double>>& rows_;
  double theta3_;
  std::size_t n_;
  bool dense_ = false;
  std::vector<double> matrix_;
  std::size_t max_rows_ = 0;
  std::list<std::size_t> lru_;
  std::unordered_map<std::size_t, std::pair<std::list<std::size_t>::iterator, std::vector<double>>> index_;
};

struct SmoState {
  std::vector<double> alpha;
  std::vector<double> gradient; // dW/dalpha_r = 1 - y_r * sum_s alpha_s y_s K_rs
  std::vector<double> box;      // per-sample upper bound C_r
};

} // namespace

SvmModel SvmModel::train(const TrainingSet& data, const SvmHyperParams& hp,
                         const SmoOptions& options, SmoDiagnostics* diag) {
  data.validate();
  hp.validate();

  SvmModel model;
  model.theta3_ = hp.theta3;
  model.standardization_ = Standardization::fit(data.features);

  bool has_pos = false, has_neg = false;
  for (int y : data.labels) (y == kLabelDamaged ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) {
    model.constant_class_ = has_pos ? kLabelDamaged : kLabelNominal;
    return model;
  }

  const std::size_t n = data.size();
  std::vector<std::vector<double>> z(n);
  for (std::size_t r = 0; r < n; ++r) z[r] = model.standardization_.apply(data.features[r]);

  SmoState st;
  st.alpha.assign(n, 0.0);
  st.gradient.assign(n, 1.0);
  st.box = sample_box_bounds(data.labels, data.weights, hp);

  KernelCache cache(z, hp.theta3, options.kernel_cache_bytes);
  const auto& y = data.labels;

  std::uint64_t updates = 0;
  double gap = std::numeric_limits<double>::infinity();
  while (true) {
    // Maximal violating pair over F_r = y_r * gradient_r.
    double up_max = -std::numeric_limits<double>::infinity();
    double low_min = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t r = 0; r < n; ++r) {
      double f = y[r] * st.gradient[r];
      bool in_up = (y[r] > 0) ? st.alpha[r] < st.box[r] : st.alpha[r] > 0.0;
      bool in_low = (y[r] > 0) ? st.alpha[r] > 0.0 : st.alpha[r] < st.box[r];
      if (in_up && f > up_max) {
        up_max = f;
        i = r;
      }
      if (in_low && f < low_min) {
        low_min = f;
        j = r;
      }
    }
    gap = up_max - low_min;
    if (!(gap > options.kkt_tolerance) || i == n || j == n) break;
    if (updates >= options.max_pair_updates)
      raise(ErrorKind::NonConvergence,
            "SMO exceeded " + std::to_string(options.max_pair_updates) + " pair updates (n=" +
                std::to_string(n) + ", gap=" + format_double(gap) + ", tol=" +
                format_double(options.kkt_tolerance) + ")");

    const double* ki = cache.row(i);
    const double kjj = cache.row(j)[j];
    double curvature = ki[i] + kjj - 2.0 * ki[j];
    if (curvature < kCurvatureFloor) curvature = kCurvatureFloor;

    // Step t moves alpha_i along +y_i and alpha_j along -y_j, preserving the
    // equality constraint.
    double t = gap / curvature;
    t = std::min(t, (y[i] > 0) ? st.box[i] - st.alpha[i] : st.alpha[i]);
    t = std::min(t, (y[j] > 0) ? st.alpha[j] : st.box[j] - st.alpha[j]);

    st.alpha[i] += y[i] > 0 ? t : -t;
    st.alpha[j] -= y[j] > 0 ? t : -t;
    // Clamp away accumulated roundoff at the box faces.
    st.alpha[i] = std::clamp(st.alpha[i], 0.0, st.box[i]);
    st.alpha[j] = std::clamp(st.alpha[j], 0.0, st.box[j]);

    const double* kj = cache.row(j);
    const double* ki2 = cache.row(i);
    for (std::size_t r = 0; r < n; ++r)
      st.gradient[r] -= y[r] * t * (ki2[r] - kj[r]);
    ++updates;
  }

  // Bias from free support vectors; midpoint of the KKT interval otherwise.
  double bias_sum = 0.0;
  std::size_t free_count = 0;
  double up_max = -std::numeric_limits<double>::infinity();
  double low_min = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < n; ++r) {
    double f = y[r] * st.gradient[r];
    double margin = 1e-8 * st.box[r];
    if (st.alpha[r] > margin && st.alpha[r] < st.box[r] - margin) {
      bias_sum += f;
      ++free_count;
    }
    bool in_up = (y[r] > 0) ? st.alpha[r] < st.box[r] : st.alpha[r] > 0.0;
    bool in_low = (y[r] > 0) ? st.alpha[r] > 0.0 : st.alpha[r] < st.box[r];
    if (in_up) up_max = std::max(up_max, f);
    if (in_low) low_min = std::min(low_min, f);
  }
  model.bias_ = free_count > 0 ? bias_sum / static_cast<double>(free_count)
                               : 0.5 * (up_max + low_min);

  for (std::size_t r = 0; r < n; ++r) {
    if (st.alpha[r] > 0.0) {
      model.support_vectors_.push_back(z[r]);
      model.coefficients_.push_back(st.alpha[r] * y[r]);
    }
  }

  if (diag) {
    diag->pair_updates = updates;
    diag->final_gap = gap;
    double linear = 0.0, quad = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      linear += st.alpha[r];
      // gradient_r = 1 - y_r (Q alpha)_r, so y_r(1 - gradient_r)/... recover
      // alpha' Q alpha from the maintained gradient instead of re-touching K.
      quad += st.alpha[r] * (1.0 - st.gradient[r]);
    }
    diag->dual_objective = linear - 0.5 * quad;
  }
  return model;
}

double SvmModel::decision_value(std::span<const double> x) const {
  if (constant_class_ != 0)
    return constant_class_ == kLabelDamaged ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity();
  std::vector<double> z = standardization_.apply(x);
  double sum = bias_;
  for (std::size_t s = 0; s < support_vectors_.size(); ++s)
    sum += coefficients_[s] * rbf_kernel(z, support_vectors_[s], theta3_);
  return sum;
}

int SvmModel::predict(std::span<const double> x) const {
  if (constant_class_ != 0) return constant_class_;
  return decision_value(x) > 0.0 ? kLabelDamaged : kLabelNominal;
}

nlohmann::json SvmModel::to_json() const {
  nlohmann::json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["theta3"] = theta3_;
  doc["bias"] = bias_;
  doc["standardization"] = {{"means", standardization_.means}, {"scales", standardization_.scales}};
  doc["support_vectors"] = support_vectors_;
  doc["coefficients"] = coefficients_;
  if (constant_class_ != 0) doc["constant_class"] = constant_class_ == kLabelDamaged ? "D" : "N";
  return doc;
}

SvmModel SvmModel::from_json(const nlohmann::json& doc) {
  try {
    int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      raise(ErrorKind::ParseError, "unsupported model format_version " + std::to_string(version) +
                                       " (expected " + std::to_string(kModelFormatVersion) + ")");
    SvmModel m;
    m.theta3_ = doc.at("theta3").get<double>();
    m.bias_ = doc.at("bias").get<double>();
    m.standardization_.means = doc.at("standardization").at("means").get<std::vector<double>>();
    m.standardization_.scales = doc.at("standardization").at("scales").get<std::vector<double>>();
    m.support_vectors_ = doc.at("support_vectors").get<std::vector<std::vector<double>>>();
    m.coefficients_ = doc.at("coefficients").get<std::vector<double>>();
    if (doc.contains("constant_class")) {
      std::string c = doc.at("constant_class").get<std::string>();
      if (c != "D" && c != "N") raise(ErrorKind::ParseError, "constant_class must be D or N");
      m.constant_class_ = c == "D" ? kLabelDamaged : kLabelNominal;
    }
    if (m.support_vectors_.size() != m.coefficients_.size())
      raise(ErrorKind::ParseError, "support vector and coefficient counts differ");
    for (const auto& sv : m.support_vectors_)
      if (sv.size() != m.standardization_.means.size())
        raise(ErrorKind::ParseError, "support vector length does not match standardization");
    if (m.standardization_.means.size() != m.standardization_.scales.size())
      raise(ErrorKind::ParseError, "standardization means/scales length mismatch");
    return m;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorKind::ParseError, std::string("malformed model document: ") + e.what());
  }
}

std::string SvmModel::serialize() const { return to_json().dump(2); }

SvmModel SvmModel::deserialize(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) raise(ErrorKind::ParseError, "model document is not valid JSON");
  return from_json(doc);
}

} // namespace seisdiag
