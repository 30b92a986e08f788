#ifndef SEISDIAG_SIGNALS_HPP
#define SEISDIAG_SIGNALS_HPP

#include <string>
#include <vector>

namespace seisdiag {

// Bounds on the intensity exponent. |a|^eta stays numerically tame inside
// this range for realistic accelerations.
inline constexpr double kEtaMin = 0.25;
inline constexpr double kEtaMax = 3.0;

// Relative threshold below which a denominator intensity is treated as zero.
inline constexpr double kDegenerateRel = 1e-12;

/// Uniformly sampled acceleration time series for one channel.
struct AccelRecord {
  std::string channel_id;
  double dt = 0.0;
  std::vector<double> samples;

  double duration() const { return dt * static_cast<double>(samples.size() - 1); }

  /// Throws InvalidSignal unless dt > 0, at least two samples, all finite.
  void validate() const;
};

/// Ordered (top, bottom) channel pairs over which intensity ratios are taken.
struct ChannelPair {
  std::string top;
  std::string bottom;
};

struct ChannelPairSet {
  std::vector<ChannelPair> pairs;

  std::size_t count() const { return pairs.size(); }
  void validate() const;
};

/// Ordered set of intensity exponents, strictly ascending within bounds.
struct EtaSet {
  std::vector<double> values;

  std::size_t count() const { return values.size(); }
  void validate() const;
};

/// Stacked feature vector: for each eta, [I_g, R_1, ..., R_j].
struct FeatureVector {
  std::vector<double> values;
  std::size_t eta_count = 0;
  std::size_t pair_count = 0;

  std::size_t size() const { return values.size(); }
};

/// Trapezoidal approximation of the integral of |a(t)|^eta over the record.
double cumulative_intensity(const AccelRecord& record, double eta);

/// Ratio of cumulative intensities top/bottom at the same eta. Throws
/// DegenerateDenominator when the bottom channel is effectively silent, and
/// ChannelMismatch when the records are not aligned.
double intensity_ratio(const AccelRecord& top, const AccelRecord& bottom, double eta);

/// Assembles the full feature vector from a ground channel and floor
/// channels. Pair channels are resolved by channel_id (the ground record is
/// also resolvable). Layout and ordering follow FeatureVector.
FeatureVector assemble_features(const AccelRecord& ground,
                                const std::vector<AccelRecord>& floors,
                                const ChannelPairSet& pairs,
                                const EtaSet& etas);

} // namespace seisdiag

#endif
