#include "seisdiag/signals.hpp"
#include "seisdiag/errors.hpp"

#include <cmath>
#include <set>

namespace seisdiag {

void AccelRecord::validate() const {
  if (!(dt > 0.0)) raise(ErrorKind::InvalidSignal, "dt must be > 0 for channel '" + channel_id + "'");
  if (samples.size() < 2)
    raise(ErrorKind::InvalidSignal, "channel '" + channel_id + "' needs at least 2 samples");
  for (double a : samples) {
    if (!std::isfinite(a))
      raise(ErrorKind::InvalidSignal, "non-finite sample in channel '" + channel_id + "'");
  }
}

void ChannelPairSet::validate() const {
  for (const auto& p : pairs) {
    if (p.top == p.bottom)
      raise(ErrorKind::InvalidInput, "channel pair has identical top and bottom '" + p.top + "'");
  }
}

void EtaSet::validate() const {
  if (values.empty()) raise(ErrorKind::InvalidInput, "eta set must not be empty");
  double prev = -1.0;
  for (double eta : values) {
    if (!(eta >= kEtaMin && eta <= kEtaMax))
      raise(ErrorKind::InvalidInput,
            "eta " + std::to_string(eta) + " outside [" + std::to_string(kEtaMin) + ", " +
                std::to_string(kEtaMax) + "]");
    if (eta <= prev) raise(ErrorKind::InvalidInput, "eta values must be strictly ascending");
    prev = eta;
  }
}

namespace {

// |a|^eta with 0^eta defined as 0 for every eta in bounds.
inline double abs_pow(double a, double eta) {
  double m = std::fabs(a);
  if (m == 0.0) return 0.0;
  return std::pow(m, eta);
}

void check_eta(double eta) {
  if (!(eta >= kEtaMin && eta <= kEtaMax))
    raise(ErrorKind::InvalidInput, "eta " + std::to_string(eta) + " outside bounds");
}

} // namespace

double cumulative_intensity(const AccelRecord& record, double eta) {
  record.validate();
  check_eta(eta);
  const auto& a = record.samples;
  double sum = 0.5 * (abs_pow(a.front(), eta) + abs_pow(a.back(), eta));
  for (std::size_t i = 1; i + 1 < a.size(); ++i) sum += abs_pow(a[i], eta);
  return sum * record.dt;
}

double intensity_ratio(const AccelRecord& top, const AccelRecord& bottom, double eta) {
  if (top.dt != bottom.dt || top.samples.size() != bottom.samples.size())
    raise(ErrorKind::ChannelMismatch,
          "records '" + top.channel_id + "' and '" + bottom.channel_id +
              "' differ in dt or length");
  double denom = cumulative_intensity(bottom, eta);
  double peak = 0.0;
  for (double a : bottom.samples) peak = std::max(peak, std::fabs(a));
  double floor = kDegenerateRel * abs_pow(peak, eta) * bottom.duration();
  if (denom <= floor || denom == 0.0)
    raise(ErrorKind::DegenerateDenominator,
          "intensity of bottom channel '" + bottom.channel_id + "' is effectively zero");
  return cumulative_intensity(top, eta) / denom;
}

FeatureVector assemble_features(const AccelRecord& ground,
                                const std::vector<AccelRecord>& floors,
                                const ChannelPairSet& pairs,
                                const EtaSet& etas) {
  etas.validate();
  pairs.validate();
  ground.validate();

  auto resolve = [&](const std::string& id) -> const AccelRecord& {
    if (ground.channel_id == id) return ground;
    for (const auto& rec : floors)
      if (rec.channel_id == id) return rec;
    raise(ErrorKind::InvalidInput, "channel '" + id + "' not found in record set");
  };

  for (const auto& rec : floors) {
    if (rec.dt != ground.dt || rec.samples.size() != ground.samples.size())
      raise(ErrorKind::ChannelMismatch,
            "channel '" + rec.channel_id + "' not aligned with ground record");
  }

  FeatureVector fv;
  fv.eta_count = etas.count();
  fv.pair_count = pairs.count();
  fv.values.reserve(etas.count() * (1 + pairs.count()));
  for (double eta : etas.values) {
    fv.values.push_back(cumulative_intensity(ground, eta));
    for (const auto& p : pairs.pairs) {
      const AccelRecord& top = resolve(p.top);
      const AccelRecord& bottom = resolve(p.bottom);
      try {
        fv.values.push_back(intensity_ratio(top, bottom, eta));
      } catch (const Error& e) {
        raise(e.kind(), e.message() + " (pair " + p.top + "/" + p.bottom + ")");
      }
    }
  }
  return fv;
}

} // namespace seisdiag
