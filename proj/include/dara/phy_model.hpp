#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace dara {

// 802.11n SISO, 20 MHz, long guard interval. Only MCS 0-7 exist here.
inline constexpr int kNumMcs = 8;

enum class Modulation { Bpsk, Qpsk, Qam16, Qam64 };

struct CodingRate {
  int numerator;
  int denominator;
  constexpr double value() const { return static_cast<double>(numerator) / denominator; }
};

struct McsEntry {
  int index;
  Modulation modulation;
  CodingRate coding_rate;
  double phy_rate_bps;
};

int bits_per_symbol(Modulation modulation);

/// 52 data subcarriers, 4 us OFDM symbol (3.2 us + 800 ns GI).
double ht_phy_rate(Modulation modulation, CodingRate rate);

const std::array<McsEntry, kNumMcs>& mcs_table();

/// Throws std::domain_error for indices outside 0-7.
const McsEntry& mcs_entry(int mcs);
double mcs_phy_rate(int mcs);

bool is_valid_mcs(int mcs);

double db_to_linear(double db);
double linear_to_db(double linear);

/// Uncoded bit error probability of an AWGN symbol at linear SNR.
double uncoded_ber(Modulation modulation, double snr_linear);

/// Decoded bit error bound for the 802.11 K=7 convolutional code (and its
/// punctured variants) given the raw channel bit error probability.
double coded_ber(double raw_ber, CodingRate rate);

enum class ErrorModelKind { NistLike, ThresholdStep };

/// Maps (SNR, MCS, frame size) to a frame success probability.
///
/// NistLike follows the erfc BER family with a union bound over the code's
/// distance spectrum; a frame of n bits survives with (1 - coded_ber)^n.
/// ThresholdStep is a deterministic cliff used for exact test oracles.
class ErrorModel {
 public:
  static ErrorModel nist();
  static ErrorModel threshold_step(const std::array<double, kNumMcs>& thresholds_db);

  ErrorModelKind kind() const { return kind_; }
  const std::array<double, kNumMcs>& step_thresholds() const { return thresholds_db_; }

  double frame_success(double snr_db, int mcs, std::size_t frame_bytes) const;

  /// Post-decoding bit error probability. ThresholdStep reports 0 at or
  /// above the step and 0.5 below it.
  double bit_error(double snr_db, int mcs) const;

 private:
  ErrorModel(ErrorModelKind kind, const std::array<double, kNumMcs>& thresholds_db);

  ErrorModelKind kind_;
  std::array<double, kNumMcs> thresholds_db_;
};

double frame_success_ratio(double snr_db, int mcs, std::size_t frame_bytes, const ErrorModel& model);

struct RadioConstants {
  double tx_power_dbm = 20.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double frequency_hz = 5180e6;
  double bandwidth_hz = 20e6;
  double noise_figure_db = 7.0;

  void validate() const;
};

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

/// Throws std::domain_error for distance_m <= 0.
double friis_rx_power(const RadioConstants& radio, double distance_m);
double noise_floor(const RadioConstants& radio);
double snr_from_distance(const RadioConstants& radio, double distance_m);

}  // namespace dara
