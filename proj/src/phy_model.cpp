#include "dara/phy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dara {

namespace {

constexpr double kDataSubcarriers = 52.0;
constexpr double kSymbolDurationS = 4e-6;

struct SpectrumTerm {
  int distance;
  double weight;
};

// Distance spectra of the 802.11a/n convolutional code, (133,171) octal.
// The 1/2 code is the mother code; 2/3, 3/4 and 5/6 are punctured. The
// leading factor is 1/(2k) for a rate k/(k+1) code.
constexpr std::array<SpectrumTerm, 9> kRateHalf{{{10, 36.0},
                                                 {12, 211.0},
                                                 {14, 1404.0},
                                                 {16, 11633.0},
                                                 {18, 77433.0},
                                                 {20, 502690.0},
                                                 {22, 3322763.0},
                                                 {24, 21292910.0},
                                                 {26, 134365911.0}}};
constexpr std::array<SpectrumTerm, 10> kRateTwoThirds{{{6, 3.0},
                                                       {7, 70.0},
                                                       {8, 285.0},
                                                       {9, 1276.0},
                                                       {10, 6160.0},
                                                       {11, 27128.0},
                                                       {12, 117019.0},
                                                       {13, 498860.0},
                                                       {14, 2103891.0},
                                                       {15, 8784123.0}}};
constexpr std::array<SpectrumTerm, 10> kRateThreeQuarters{{{5, 42.0},
                                                           {6, 201.0},
                                                           {7, 1492.0},
                                                           {8, 10469.0},
                                                           {9, 62935.0},
                                                           {10, 379644.0},
                                                           {11, 2253373.0},
                                                           {12, 13073811.0},
                                                           {13, 75152755.0},
                                                           {14, 428005675.0}}};
constexpr std::array<SpectrumTerm, 10> kRateFiveSixths{{{4, 92.0},
                                                        {5, 528.0},
                                                        {6, 8694.0},
                                                        {7, 79453.0},
                                                        {8, 792114.0},
                                                        {9, 7375573.0},
                                                        {10, 67884974.0},
                                                        {11, 610875423.0},
                                                        {12, 5427275376.0},
                                                        {13, 47664215639.0}}};

template <std::size_t N>
double union_bound(const std::array<SpectrumTerm, N>& spectrum, double scale, double d) {
  double sum = 0.0;
  for (const auto& term : spectrum) sum += term.weight * std::pow(d, term.distance);
  return scale * sum;
}

std::array<McsEntry, kNumMcs> build_table() {
  constexpr std::array<std::pair<Modulation, CodingRate>, kNumMcs> layout{{
      {Modulation::Bpsk, {1, 2}},
      {Modulation::Qpsk, {1, 2}},
      {Modulation::Qpsk, {3, 4}},
      {Modulation::Qam16, {1, 2}},
      {Modulation::Qam16, {3, 4}},
      {Modulation::Qam64, {2, 3}},
      {Modulation::Qam64, {3, 4}},
      {Modulation::Qam64, {5, 6}},
  }};
  std::array<McsEntry, kNumMcs> table{};
  for (int i = 0; i < kNumMcs; ++i) {
    const auto& [modulation, rate] = layout[static_cast<std::size_t>(i)];
    table[static_cast<std::size_t>(i)] = McsEntry{i, modulation, rate, ht_phy_rate(modulation, rate)};
  }
  return table;
}

}  // namespace

int bits_per_symbol(Modulation modulation) {
  switch (modulation) {
    case Modulation::Bpsk: return 1;
    case Modulation::Qpsk: return 2;
    case Modulation::Qam16: return 4;
    case Modulation::Qam64: return 6;
  }
  throw std::domain_error("unknown modulation");
}

double ht_phy_rate(Modulation modulation, CodingRate rate) {
  return bits_per_symbol(modulation) * rate.value() * kDataSubcarriers / kSymbolDurationS;
}

const std::array<McsEntry, kNumMcs>& mcs_table() {
  static const std::array<McsEntry, kNumMcs> table = build_table();
  return table;
}

bool is_valid_mcs(int mcs) { return mcs >= 0 && mcs < kNumMcs; }

const McsEntry& mcs_entry(int mcs) {
  if (!is_valid_mcs(mcs)) throw std::domain_error("MCS index out of range: " + std::to_string(mcs));
  return mcs_table()[static_cast<std::size_t>(mcs)];
}

double mcs_phy_rate(int mcs) { return mcs_entry(mcs).phy_rate_bps; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double uncoded_ber(Modulation modulation, double snr_linear) {
  const double snr = std::max(snr_linear, 0.0);
  switch (modulation) {
    case Modulation::Bpsk: return 0.5 * std::erfc(std::sqrt(snr));
    case Modulation::Qpsk: return 0.5 * std::erfc(std::sqrt(snr / 2.0));
    case Modulation::Qam16: return 0.75 * 0.5 * std::erfc(std::sqrt(snr / (5.0 * 2.0)));
    case Modulation::Qam64: return 7.0 / 12.0 * 0.5 * std::erfc(std::sqrt(snr / (21.0 * 2.0)));
  }
  throw std::domain_error("unknown modulation");
}

double coded_ber(double raw_ber, CodingRate rate) {
  const double p = std::clamp(raw_ber, 0.0, 0.5);
  const double d = std::sqrt(4.0 * p * (1.0 - p));
  double bound = 1.0;
  if (rate.numerator == 1 && rate.denominator == 2) {
    bound = union_bound(kRateHalf, 0.5, d);
  } else if (rate.numerator == 2 && rate.denominator == 3) {
    bound = union_bound(kRateTwoThirds, 1.0 / 4.0, d);
  } else if (rate.numerator == 3 && rate.denominator == 4) {
    bound = union_bound(kRateThreeQuarters, 1.0 / 6.0, d);
  } else if (rate.numerator == 5 && rate.denominator == 6) {
    bound = union_bound(kRateFiveSixths, 1.0 / 10.0, d);
  } else {
    throw std::domain_error("unsupported coding rate");
  }
  return std::min(bound, 1.0);
}

ErrorModel::ErrorModel(ErrorModelKind kind, const std::array<double, kNumMcs>& thresholds_db)
    : kind_(kind), thresholds_db_(thresholds_db) {}

ErrorModel ErrorModel::nist() { return ErrorModel(ErrorModelKind::NistLike, {}); }

ErrorModel ErrorModel::threshold_step(const std::array<double, kNumMcs>& thresholds_db) {
  for (double t : thresholds_db) {
    if (!std::isfinite(t)) throw std::invalid_argument("step thresholds must be finite");
  }
  for (int m = 1; m < kNumMcs; ++m) {
    if (thresholds_db[static_cast<std::size_t>(m)] < thresholds_db[static_cast<std::size_t>(m - 1)]) {
      throw std::invalid_argument("step thresholds must be non-decreasing in MCS");
    }
  }
  return ErrorModel(ErrorModelKind::ThresholdStep, thresholds_db);
}

double ErrorModel::bit_error(double snr_db, int mcs) const {
  const McsEntry& entry = mcs_entry(mcs);
  if (kind_ == ErrorModelKind::ThresholdStep) {
    return snr_db >= thresholds_db_[static_cast<std::size_t>(mcs)] ? 0.0 : 0.5;
  }
  return coded_ber(uncoded_ber(entry.modulation, db_to_linear(snr_db)), entry.coding_rate);
}

double ErrorModel::frame_success(double snr_db, int mcs, std::size_t frame_bytes) const {
  if (frame_bytes == 0) throw std::invalid_argument("frame_bytes must be positive");
  if (kind_ == ErrorModelKind::ThresholdStep) {
    mcs_entry(mcs);
    return snr_db >= thresholds_db_[static_cast<std::size_t>(mcs)] ? 1.0 : 0.0;
  }
  const double pe = bit_error(snr_db, mcs);
  if (pe <= 0.0) return 1.0;
  if (pe >= 1.0) return 0.0;
  const double bits = 8.0 * static_cast<double>(frame_bytes);
  return std::clamp(std::exp(bits * std::log1p(-pe)), 0.0, 1.0);
}

double frame_success_ratio(double snr_db, int mcs, std::size_t frame_bytes, const ErrorModel& model) {
  return model.frame_success(snr_db, mcs, frame_bytes);
}

void RadioConstants::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth_hz must be positive");
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("frequency_hz must be positive");
}

double friis_rx_power(const RadioConstants& radio, double distance_m) {
  if (!(distance_m > 0.0)) throw std::domain_error("distance must be positive");
  radio.validate();
  const double path_loss_db =
      20.0 * std::log10(4.0 * std::numbers::pi * distance_m * radio.frequency_hz / kSpeedOfLight);
  return radio.tx_power_dbm + radio.tx_gain_dbi + radio.rx_gain_dbi - path_loss_db;
}

double noise_floor(const RadioConstants& radio) {
  radio.validate();
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(radio.bandwidth_hz) + radio.noise_figure_db;
}

double snr_from_distance(const RadioConstants& radio, double distance_m) {
  return friis_rx_power(radio, distance_m) - noise_floor(radio);
}

}  // namespace dara
