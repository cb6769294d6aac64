#include "fdisac/scene.hpp"

#include <cmath>
#include <fstream>
#include <variant>

namespace fdisac {
namespace {

using Field = std::variant<double ScenarioConfig::*, int ScenarioConfig::*>;

struct NamedField {
  const char* name;
  Field member;
};

// Serialized names; the order here is the order written to JSON.
const NamedField kFields[] = {
    {"n_tx", &ScenarioConfig::n_tx},
    {"n_rx", &ScenarioConfig::n_rx},
    {"n_dl", &ScenarioConfig::n_dl},
    {"n_ul", &ScenarioConfig::n_ul},
    {"n_eve", &ScenarioConfig::n_eve},
    {"carrier_freq", &ScenarioConfig::carrier_freq},
    {"element_spacing", &ScenarioConfig::element_spacing},
    {"r_dl", &ScenarioConfig::r_dl},
    {"r_ul", &ScenarioConfig::r_ul},
    {"r_eve", &ScenarioConfig::r_eve},
    {"rician_k_db", &ScenarioConfig::rician_k_db},
    {"residual_si_db", &ScenarioConfig::residual_si_db},
    {"noise_dfrc_db", &ScenarioConfig::noise_dfrc_db},
    {"noise_dl_db", &ScenarioConfig::noise_dl_db},
    {"noise_eve_db", &ScenarioConfig::noise_eve_db},
    {"p_dl_v_db", &ScenarioConfig::p_dl_v_db},
    {"p_dl_w_db", &ScenarioConfig::p_dl_w_db},
    {"p_ul_db", &ScenarioConfig::p_ul_db},
    {"ismr_max_db", &ScenarioConfig::ismr_max_db},
    {"dfrc_tx_gain_dbi", &ScenarioConfig::dfrc_tx_gain_dbi},
    {"dfrc_rx_gain_dbi", &ScenarioConfig::dfrc_rx_gain_dbi},
    {"dl_gain_dbi", &ScenarioConfig::dl_gain_dbi},
    {"ul_gain_dbi", &ScenarioConfig::ul_gain_dbi},
    {"eve_gain_dbi", &ScenarioConfig::eve_gain_dbi},
    {"shadowing_db", &ScenarioConfig::shadowing_db},
    {"pathloss_exponent", &ScenarioConfig::pathloss_exponent},
    {"clutter_power_db", &ScenarioConfig::clutter_power_db},
    {"target_rcs", &ScenarioConfig::target_rcs},
    {"mainlobe_halfwidth_deg", &ScenarioConfig::mainlobe_halfwidth_deg},
    {"grid_resolution_deg", &ScenarioConfig::grid_resolution_deg},
    {"sector_halfwidth_deg", &ScenarioConfig::sector_halfwidth_deg},
    {"n_clusters", &ScenarioConfig::n_clusters},
    {"n_paths", &ScenarioConfig::n_paths},
    {"si_separation_wavelengths", &ScenarioConfig::si_separation_wavelengths},
};

nlohmann::json number_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const nlohmann::json& j, const std::string& name) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  }
  throw InvalidArgument("config field '" + name + "' must be a number or \"-inf\"");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream tags.
enum : std::uint64_t {
  kTagAngle = 1,
  kTagDl = 2,
  kTagUl = 3,
  kTagCrossDl = 4,
  kTagCrossEve = 5,
  kTagEvePhase = 6,
};

std::uint64_t role_tag(Role role) {
  switch (role) {
    case Role::Downlink: return 11;
    case Role::Uplink: return 12;
    case Role::Eavesdropper: return 13;
  }
  return 0;
}

cdouble circular_gaussian(Rng& rng, double variance) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double s = std::sqrt(variance / 2.0);
  const double re = n01(rng);
  const double im = n01(rng);
  return {s * re, s * im};
}

double uniform_phase(Rng& rng) {
  return std::uniform_real_distribution<double>(-kPi, kPi)(rng);
}

// Shared Rician/cluster model for the DL and UL vectors.
CVec rician_vector(const ScenarioConfig& cfg, int n, double angle,
                   double large_scale_gain, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double shadow_db = cfg.shadowing_db * n01(rng);
  const double amplitude = std::sqrt(large_scale_gain * db_to_linear(shadow_db));

  const int paths_total = cfg.n_clusters * cfg.n_paths;
  std::uniform_real_distribution<double> aod(-kPi / 2, kPi / 2);
  CVec nlos = CVec::Zero(n);
  for (int q = 0; q < cfg.n_clusters; ++q) {
    for (int r = 0; r < cfg.n_paths; ++r) {
      const cdouble gain = circular_gaussian(rng, 1.0);
      const double phi = aod(rng);
      nlos += gain * steering_vector(n, phi, cfg.element_spacing);
    }
  }
  if (paths_total > 0) nlos /= std::sqrt(static_cast<double>(paths_total));

  const double kappa = cfg.rician_k();
  const double w_los = std::isinf(kappa) ? 1.0 : std::sqrt(kappa / (kappa + 1.0));
  const double w_nlos = std::isinf(kappa) ? 0.0 : std::sqrt(1.0 / (kappa + 1.0));
  CVec h = w_los * steering_vector(n, angle, cfg.element_spacing);
  if (w_nlos > 0.0) h += w_nlos * nlos;
  return amplitude * h;
}

Eigen::Vector2d position(const ScenarioConfig& cfg, Role role, int index) {
  const double r = role == Role::Downlink ? cfg.r_dl
                   : role == Role::Uplink ? cfg.r_ul
                                          : cfg.r_eve;
  const double angle = node_angle(cfg, role, index);
  return {r * std::sin(angle), r * std::cos(angle)};
}

double link_distance(const ScenarioConfig& cfg, Role a, int ia, Role b, int ib) {
  // Floor at one meter keeps the far-field law finite for co-located nodes.
  return std::max(1.0, (position(cfg, a, ia) - position(cfg, b, ib)).norm());
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n_tx < 1 || n_rx < 1) throw InvalidArgument("antenna counts must be >= 1");
  if (n_dl < 0 || n_ul < 0 || n_eve < 0) throw InvalidArgument("user counts must be >= 0");
  if (n_dl + n_ul < 1) throw InvalidArgument("need at least one DL or UL user");
  if (!(element_spacing > 0.0)) throw InvalidArgument("element_spacing must be > 0");
  if (!(grid_resolution_deg > 0.0)) throw InvalidArgument("grid resolution must be > 0");
  if (!(mainlobe_halfwidth_deg > 0.0)) throw InvalidArgument("mainlobe halfwidth must be > 0");
  if (!(carrier_freq > 0.0)) throw InvalidArgument("carrier_freq must be > 0");
  if (!(r_dl > 0.0) || !(r_ul > 0.0) || !(r_eve > 0.0))
    throw InvalidArgument("radial distances must be > 0");
  if (n_clusters < 0 || n_paths < 0) throw InvalidArgument("cluster counts must be >= 0");
  if (!(si_separation_wavelengths > 0.0)) throw InvalidArgument("SI separation must be > 0");
  for (double v : {noise_dfrc_db, noise_dl_db, noise_eve_db}) {
    if (!std::isfinite(v)) throw InvalidArgument("noise variances must be finite");
  }
  for (double v : {p_dl_v_db, p_dl_w_db, p_ul_db, residual_si_db, clutter_power_db}) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw InvalidArgument("budgets and powers must be finite or -inf");
  }
  if (!std::isfinite(ismr_max_db)) throw InvalidArgument("ismr_max_db must be finite");
  if (std::isnan(rician_k_db)) throw InvalidArgument("rician_k_db is NaN");
}

void to_json(nlohmann::json& j, const ScenarioConfig& cfg) {
  j = nlohmann::json::object();
  for (const auto& f : kFields) {
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, const double>) {
            j[f.name] = number_to_json(cfg.*member);
          } else {
            j[f.name] = cfg.*member;
          }
        },
        f.member);
  }
  j["seed"] = cfg.seed;
}

void from_json(const nlohmann::json& j, ScenarioConfig& cfg) {
  if (!j.is_object()) throw InvalidArgument("scenario config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
      continue;
    }
    if (key.rfind('_', 0) == 0) continue;  // comment
    bool known = false;
    for (const auto& f : kFields) {
      if (key != f.name) continue;
      known = true;
      std::visit(
          [&](auto member) {
            using T = std::remove_reference_t<decltype(cfg.*member)>;
            if constexpr (std::is_same_v<T, double>) {
              cfg.*member = number_from_json(value, key);
            } else {
              cfg.*member = value.get<int>();
            }
          },
          f.member);
    }
    if (!known) throw InvalidArgument("unknown config field '" + key + "'");
  }
}

void set_config_field(ScenarioConfig& cfg, const std::string& name, double value) {
  if (name == "seed") {
    cfg.seed = static_cast<std::uint64_t>(value);
    return;
  }
  for (const auto& f : kFields) {
    if (name != f.name) continue;
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, double>) {
            cfg.*member = value;
          } else {
            if (value != std::round(value)) throw InvalidArgument("field '" + name + "' is integral");
            cfg.*member = static_cast<int>(value);
          }
        },
        f.member);
    return;
  }
  throw InvalidArgument("unknown config field '" + name + "'");
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  ScenarioConfig cfg = nlohmann::json::parse(in, nullptr, true, true).get<ScenarioConfig>();
  cfg.validate();
  return cfg;
}

CVec steering_vector(int n, double theta, double spacing) {
  CVec a(n);
  const double phase = 2.0 * kPi * spacing * std::sin(theta);
  for (int m = 0; m < n; ++m) a[m] = std::polar(1.0, phase * m);
  return a;
}

Rng make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index, std::uint64_t sub) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ (tag * 0x100000001b3ULL));
  s = splitmix64(s ^ (index + 0x632be59bd9b4e019ULL));
  s = splitmix64(s ^ (sub * 0x9e3779b97f4a7c15ULL));
  return Rng(s);
}

double node_angle(const ScenarioConfig& cfg, Role role, int index) {
  Rng rng = make_stream(cfg.seed, kTagAngle, role_tag(role), static_cast<std::uint64_t>(index));
  const double half = deg_to_rad(cfg.sector_halfwidth_deg);
  return std::uniform_real_distribution<double>(-half, half)(rng);
}

double pathloss_gain(const ScenarioConfig& cfg, double distance) {
  const double lw = cfg.wavelength() / (4.0 * kPi);
  return lw * lw * std::pow(distance, -cfg.pathloss_exponent);
}

CVec make_dl_channel(const ScenarioConfig& cfg, int user, Rng& rng) {
  const double gain = db_to_linear(cfg.dfrc_tx_gain_dbi + cfg.dl_gain_dbi) * pathloss_gain(cfg, cfg.r_dl);
  return rician_vector(cfg, cfg.n_tx, node_angle(cfg, Role::Downlink, user), gain, rng);
}

CVec make_ul_channel(const ScenarioConfig& cfg, int user, Rng& rng) {
  const double gain = db_to_linear(cfg.dfrc_rx_gain_dbi + cfg.ul_gain_dbi) * pathloss_gain(cfg, cfg.r_ul);
  return rician_vector(cfg, cfg.n_rx, node_angle(cfg, Role::Uplink, user), gain, rng);
}

CMat si_channel_from_distances(const RMat& distances, double wavelength) {
  CMat h(distances.rows(), distances.cols());
  for (Eigen::Index i = 0; i < distances.rows(); ++i) {
    for (Eigen::Index j = 0; j < distances.cols(); ++j) {
      h(i, j) = std::polar(1.0, 2.0 * kPi * distances(i, j) / wavelength);
    }
  }
  return h;
}

CMat make_si_channel(const ScenarioConfig& cfg, double separation) {
  if (!(separation > 0.0)) throw InvalidArgument("array separation must be > 0");
  const double lambda = cfg.wavelength();
  const double pitch = cfg.element_spacing * lambda;
  RMat d(cfg.n_rx, cfg.n_tx);
  for (int i = 0; i < cfg.n_rx; ++i) {
    for (int j = 0; j < cfg.n_tx; ++j) {
      const double along = (i - j) * pitch;
      d(i, j) = std::hypot(along, separation);
    }
  }
  return si_channel_from_distances(d, lambda);
}

NoiseLevels noise_levels(const ScenarioConfig& cfg) {
  return {db_to_linear(cfg.noise_dfrc_db), db_to_linear(cfg.noise_dl_db),
          db_to_linear(cfg.noise_eve_db), db_to_linear(cfg.residual_si_db)};
}

void ChannelSet::refresh_derived(double element_spacing) {
  const int nt = n_tx();
  const int nr = n_rx();
  a_tx_eve.clear();
  a_rx_eve.clear();
  coupling = std::sqrt(noise.beta) * h_si;
  for (int p = 0; p < n_eve(); ++p) {
    a_tx_eve.push_back(steering_vector(nt, theta[p], element_spacing));
    a_rx_eve.push_back(steering_vector(nr, theta[p], element_spacing));
    coupling += gamma[p] * a_rx_eve.back() * a_tx_eve.back().adjoint();
  }
}

ChannelSet make_channel_set(const ScenarioConfig& cfg) {
  cfg.validate();
  ChannelSet ch;
  ch.noise = noise_levels(cfg);
  const int L = cfg.n_dl, K = cfg.n_ul, P = cfg.n_eve;

  for (int l = 0; l < L; ++l) {
    Rng rng = make_stream(cfg.seed, kTagDl, static_cast<std::uint64_t>(l));
    ch.h_dl.push_back(make_dl_channel(cfg, l, rng));
  }
  for (int k = 0; k < K; ++k) {
    Rng rng = make_stream(cfg.seed, kTagUl, static_cast<std::uint64_t>(k));
    ch.h_ul.push_back(make_ul_channel(cfg, k, rng));
  }

  const double g_ul_dl = db_to_linear(cfg.ul_gain_dbi + cfg.dl_gain_dbi);
  const double g_ul_eve = db_to_linear(cfg.ul_gain_dbi + cfg.eve_gain_dbi);
  ch.q_ul_dl = CMat::Zero(K, L);
  ch.g_ul_eve = CMat::Zero(K, P);
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) {
      Rng rng = make_stream(cfg.seed, kTagCrossDl, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(l));
      const double d = link_distance(cfg, Role::Uplink, k, Role::Downlink, l);
      ch.q_ul_dl(k, l) = circular_gaussian(rng, g_ul_dl * pathloss_gain(cfg, d));
    }
    for (int p = 0; p < P; ++p) {
      Rng rng = make_stream(cfg.seed, kTagCrossEve, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(p));
      const double d = link_distance(cfg, Role::Uplink, k, Role::Eavesdropper, p);
      ch.g_ul_eve(k, p) = circular_gaussian(rng, g_ul_eve * pathloss_gain(cfg, d));
    }
  }

  ch.alpha = CVec::Zero(P);
  ch.gamma = CVec::Zero(P);
  ch.theta = RVec::Zero(P);
  const double lambda = cfg.wavelength();
  const double four_pi = 4.0 * kPi;
  for (int p = 0; p < P; ++p) {
    Rng rng = make_stream(cfg.seed, kTagEvePhase, static_cast<std::uint64_t>(p));
    ch.theta[p] = node_angle(cfg, Role::Eavesdropper, p);
    const double one_way = db_to_linear(cfg.dfrc_tx_gain_dbi + cfg.eve_gain_dbi) * pathloss_gain(cfg, cfg.r_eve);
    const double two_way = db_to_linear(cfg.dfrc_tx_gain_dbi + cfg.dfrc_rx_gain_dbi) * lambda * lambda *
                           cfg.target_rcs /
                           (four_pi * four_pi * four_pi * std::pow(cfg.r_eve, 2.0 * cfg.pathloss_exponent));
    ch.alpha[p] = std::polar(std::sqrt(one_way), uniform_phase(rng));
    ch.gamma[p] = std::polar(std::sqrt(two_way), uniform_phase(rng));
  }

  ch.h_si = make_si_channel(cfg, cfg.si_separation_wavelengths * lambda);
  ch.r_clutter = db_to_linear(cfg.clutter_power_db) * CMat::Identity(cfg.n_rx, cfg.n_rx);
  ch.refresh_derived(cfg.element_spacing);
  return ch;
}

bool operator==(const ChannelSet& a, const ChannelSet& b) {
  if (a.h_dl.size() != b.h_dl.size() || a.h_ul.size() != b.h_ul.size()) return false;
  for (std::size_t i = 0; i < a.h_dl.size(); ++i)
    if (a.h_dl[i] != b.h_dl[i]) return false;
  for (std::size_t i = 0; i < a.h_ul.size(); ++i)
    if (a.h_ul[i] != b.h_ul[i]) return false;
  return a.q_ul_dl == b.q_ul_dl && a.g_ul_eve == b.g_ul_eve && a.alpha == b.alpha &&
         a.gamma == b.gamma && a.theta == b.theta && a.h_si == b.h_si &&
         a.r_clutter == b.r_clutter && a.noise.dfrc == b.noise.dfrc && a.noise.dl == b.noise.dl &&
         a.noise.eve == b.noise.eve && a.noise.beta == b.noise.beta;
}

}  // namespace fdisac
