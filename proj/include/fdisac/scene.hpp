#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fdisac/types.hpp"

namespace fdisac {

using Rng = std::mt19937_64;

/// Physical and budget parameters of one full-duplex ISAC cell.
///
/// Every field ending in `_db` / `_dbi` is logarithmic; `-inf` encodes a
/// linear zero (Rayleigh fading for `rician_k_db`, a zero budget for the
/// power fields).
struct ScenarioConfig {
  int n_tx = 12;
  int n_rx = 6;
  int n_dl = 1;
  int n_ul = 2;
  int n_eve = 1;

  double carrier_freq = 28e9;
  double element_spacing = 0.5;  // fraction of a wavelength

  double r_dl = 20.0;
  double r_ul = 15.0;
  double r_eve = 17.0;

  double rician_k_db = 15.0;
  double residual_si_db = -110.0;
  double noise_dfrc_db = -70.0;
  double noise_dl_db = -70.0;
  double noise_eve_db = -65.0;
  double p_dl_v_db = 0.0;
  double p_dl_w_db = 0.0;
  double p_ul_db = 0.0;
  double ismr_max_db = 20.0;

  double dfrc_tx_gain_dbi = 25.0;
  double dfrc_rx_gain_dbi = 25.0;
  double dl_gain_dbi = 12.0;
  double ul_gain_dbi = 17.0;
  double eve_gain_dbi = 12.0;

  double shadowing_db = 20.0;  // log-normal standard deviation
  double pathloss_exponent = 2.0;
  double clutter_power_db = -60.0;
  double target_rcs = 1.0;  // m^2, sets the two-way echo amplitude

  double mainlobe_halfwidth_deg = 5.0;
  double grid_resolution_deg = 0.1;
  double sector_halfwidth_deg = 60.0;  // users and targets are placed in +-sector

  int n_clusters = 4;
  int n_paths = 5;
  double si_separation_wavelengths = 2.0;

  std::uint64_t seed = 1;

  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  double rician_k() const { return db_to_linear(rician_k_db); }

  /// Throws InvalidArgument when an invariant does not hold.
  void validate() const;
};

void to_json(nlohmann::json& j, const ScenarioConfig& cfg);
void from_json(const nlohmann::json& j, ScenarioConfig& cfg);

/// Overwrites one field by its serialized name; used by sweeps.
void set_config_field(ScenarioConfig& cfg, const std::string& name, double value);

ScenarioConfig load_config(const std::string& path);

/// Receiver-side constants that every SINR expression needs.
struct NoiseLevels {
  double dfrc = 0.0;  // sigma_n^2
  double dl = 0.0;    // sigma_l^2 (common to all DL users)
  double eve = 0.0;   // sigma_p^2
  double beta = 0.0;  // residual SI power
};

/// One realization of every channel object seen by the cell.
struct ChannelSet {
  std::vector<CVec> h_dl;  // L vectors of length N_T
  std::vector<CVec> h_ul;  // K vectors of length N_R
  CMat q_ul_dl;            // K x L
  CMat g_ul_eve;           // K x P
  CVec alpha;              // P
  CVec gamma;              // P
  RVec theta;              // P, radians
  CMat h_si;               // N_R x N_T, unit modulus
  CMat r_clutter;          // N_R x N_R
  NoiseLevels noise;

  // Derived, cached at construction.
  std::vector<CVec> a_tx_eve;  // a_{N_T}(theta_p)
  std::vector<CVec> a_rx_eve;  // a_{N_R}(theta_p)
  CMat coupling;               // sum_p gamma_p a_R a_T^H + sqrt(beta) H_SI

  int n_tx() const { return static_cast<int>(h_si.cols()); }
  int n_rx() const { return static_cast<int>(h_si.rows()); }
  int n_dl() const { return static_cast<int>(h_dl.size()); }
  int n_ul() const { return static_cast<int>(h_ul.size()); }
  int n_eve() const { return static_cast<int>(theta.size()); }

  /// Recomputes the cached steering vectors and the coupling matrix.
  void refresh_derived(double element_spacing);
};

bool operator==(const ChannelSet& a, const ChannelSet& b);

/// Entry m is exp(j 2 pi spacing m sin(theta)), m = 0..n-1.
CVec steering_vector(int n, double theta, double spacing = 0.5);

enum class Role { Downlink, Uplink, Eavesdropper };

/// Independent stream for one (role, index) object so that changing a count
/// or a distance never shifts the draws of any other object.
Rng make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0,
                std::uint64_t sub = 0);

/// Azimuth of the given node, uniform over the configured sector.
double node_angle(const ScenarioConfig& cfg, Role role, int index);

/// Power gain (lambda / 4 pi)^2 r^-eta.
double pathloss_gain(const ScenarioConfig& cfg, double distance);

CVec make_dl_channel(const ScenarioConfig& cfg, int user, Rng& rng);
CVec make_ul_channel(const ScenarioConfig& cfg, int user, Rng& rng);

/// Direct-coupling SI model for two parallel ULAs `separation` meters apart.
CMat make_si_channel(const ScenarioConfig& cfg, double separation);
/// Same entry law for explicitly supplied receive/transmit distances.
CMat si_channel_from_distances(const RMat& distances, double wavelength);

ChannelSet make_channel_set(const ScenarioConfig& cfg);
NoiseLevels noise_levels(const ScenarioConfig& cfg);

}  // namespace fdisac
