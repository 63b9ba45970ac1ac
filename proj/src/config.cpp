#include "tripod/config.hpp"

#include <fstream>
#include <set>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) {
    throw validation_error("config: expected an object at " + path);
  }
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw validation_error("config: unknown key at " + path + "/" + key);
    }
  }
}

const json& get_req(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw validation_error("config: missing key " + path + "/" + key);
  }
  return *it;
}

double get_num(const json& obj, const std::string& path, const char* key) {
  const json& v = get_req(obj, path, key);
  if (!v.is_number()) {
    throw validation_error("config: " + path + "/" + key + " must be a number");
  }
  return v.get<double>();
}

double get_num_or(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) {
    throw validation_error("config: " + path + "/" + key + " must be a number");
  }
  return it->get<double>();
}

int get_int_or(const json& obj, const std::string& path, const char* key, int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) {
    throw validation_error("config: " + path + "/" + key + " must be an integer");
  }
  return it->get<int>();
}

PulseSpec parse_pulse(const json& obj, const std::string& path) {
  check_keys(obj, path, {"shape", "peak_rabi_rad_per_s", "duration_s", "center_s"});
  PulseSpec p;
  const std::string shape = get_req(obj, path, "shape").get<std::string>();
  if (shape == "gaussian") {
    p.shape = PulseSpec::Shape::gaussian;
  } else if (shape == "sech") {
    p.shape = PulseSpec::Shape::sech;
  } else if (shape == "flat_top") {
    p.shape = PulseSpec::Shape::flat_top;
  } else {
    throw validation_error("config: " + path + "/shape must be gaussian, sech or flat_top");
  }
  p.peak_rabi = get_num(obj, path, "peak_rabi_rad_per_s");
  p.duration = get_num(obj, path, "duration_s");
  p.center = get_num(obj, path, "center_s");
  return p;
}

}  // namespace

DriveZeemanConfig ProjectConfig::drive_config() const {
  if (geometry == "collinear") {
    return DriveZeemanConfig::collinear(omega_rabi, b_field, medium, m_f_prime);
  }
  return DriveZeemanConfig::perpendicular(omega_rabi, b_field, medium);
}

nlohmann::json ProjectConfig::resolved() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["medium"] = {{"gamma_rad_per_s", medium.gamma},
                 {"gamma_c_rad_per_s", medium.gamma_c},
                 {"density_per_cm3", medium.density},
                 {"length_cm", medium.length},
                 {"area_cm2", medium.area},
                 {"omega_p_rad_per_s", medium.omega_p},
                 {"omega_d_rad_per_s", medium.omega_d},
                 {"omega_31_rad_per_s", medium.omega_31},
                 {"omega_34_rad_per_s", medium.omega_34},
                 {"g_f", medium.g_f},
                 {"g_f_prime", medium.g_fp}};
  if (dipole) j["medium"]["dipole_13_esu_cm"] = *dipole;
  if (a0) j["medium"]["a0_per_cm"] = *a0;
  j["drive"] = {{"omega_rabi_rad_per_s", {omega_rabi.real(), omega_rabi.imag()}},
                {"b_field_gauss", b_field},
                {"geometry", geometry}};
  if (geometry == "collinear") j["drive"]["m_f_prime"] = m_f_prime;
  const DriveZeemanConfig z = drive_config();
  j["derived_zeeman"] = {{"delta_rad_per_s", z.delta},
                         {"delta_prime_rad_per_s", z.delta_prime},
                         {"delta_d_rad_per_s", z.delta_d}};
  return j;
}

ProjectConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error("config: cannot open '" + path.string() + "'");
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw validation_error("config: JSON parse error in '" + path.string() +
                           "': " + e.what());
  }

  check_keys(root, "",
             {"seed", "medium", "drive", "spectra", "mb", "magnetometer", "quantum"});

  ProjectConfig cfg;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) {
      throw validation_error("config: /seed must be a non-negative integer");
    }
    cfg.seed = root["seed"].get<std::uint64_t>();
  }

  const json& med = get_req(root, "", "medium");
  check_keys(med, "/medium",
             {"gamma_rad_per_s", "gamma_c_rad_per_s", "density_per_cm3", "length_cm",
              "area_cm2", "omega_p_rad_per_s", "omega_d_rad_per_s", "omega_31_rad_per_s",
              "omega_34_rad_per_s", "g_f", "g_f_prime", "dipole_13_esu_cm", "a0_per_cm"});
  cfg.medium.gamma = get_num(med, "/medium", "gamma_rad_per_s");
  cfg.medium.gamma_c = get_num(med, "/medium", "gamma_c_rad_per_s");
  cfg.medium.density = get_num(med, "/medium", "density_per_cm3");
  cfg.medium.length = get_num(med, "/medium", "length_cm");
  cfg.medium.area = get_num(med, "/medium", "area_cm2");
  cfg.medium.omega_p = get_num(med, "/medium", "omega_p_rad_per_s");
  cfg.medium.omega_d = get_num(med, "/medium", "omega_d_rad_per_s");
  cfg.medium.omega_31 = get_num(med, "/medium", "omega_31_rad_per_s");
  cfg.medium.omega_34 = get_num(med, "/medium", "omega_34_rad_per_s");
  cfg.medium.g_f = get_num(med, "/medium", "g_f");
  cfg.medium.g_fp = get_num(med, "/medium", "g_f_prime");
  if (med.contains("dipole_13_esu_cm")) cfg.dipole = med["dipole_13_esu_cm"].get<double>();
  if (med.contains("a0_per_cm")) cfg.a0 = med["a0_per_cm"].get<double>();
  if (!cfg.dipole && !cfg.a0) {
    throw validation_error(
        "config: /medium needs dipole_13_esu_cm or a0_per_cm (or both)");
  }

  const json& drv = get_req(root, "", "drive");
  check_keys(drv, "/drive",
             {"omega_rabi_rad_per_s", "b_field_gauss", "geometry", "m_f_prime"});
  {
    const json& rabi = get_req(drv, "/drive", "omega_rabi_rad_per_s");
    if (rabi.is_number()) {
      cfg.omega_rabi = rabi.get<double>();
    } else if (rabi.is_array() && rabi.size() == 2 && rabi[0].is_number() &&
               rabi[1].is_number()) {
      cfg.omega_rabi = {rabi[0].get<double>(), rabi[1].get<double>()};
    } else {
      throw validation_error(
          "config: /drive/omega_rabi_rad_per_s must be a number or [re, im]");
    }
  }
  cfg.b_field = get_num(drv, "/drive", "b_field_gauss");
  cfg.geometry = get_req(drv, "/drive", "geometry").get<std::string>();
  if (cfg.geometry != "collinear" && cfg.geometry != "perpendicular") {
    throw validation_error("config: /drive/geometry must be collinear or perpendicular");
  }
  if (cfg.geometry == "collinear") {
    cfg.m_f_prime = get_int_or(drv, "/drive", "m_f_prime", 0);
    if (cfg.m_f_prime != 1 && cfg.m_f_prime != -1) {
      throw validation_error("config: /drive/m_f_prime must be +1 or -1 (collinear)");
    }
  } else if (drv.contains("m_f_prime")) {
    throw validation_error("config: /drive/m_f_prime only applies to collinear geometry");
  }

  if (root.contains("spectra")) {
    const json& s = root["spectra"];
    check_keys(s, "/spectra", {"delta_min_rad_per_s", "delta_max_rad_per_s", "points"});
    SpectraSection sec;
    sec.delta_min = get_num_or(s, "/spectra", "delta_min_rad_per_s", -2.0 * cfg.medium.gamma);
    sec.delta_max = get_num_or(s, "/spectra", "delta_max_rad_per_s", 2.0 * cfg.medium.gamma);
    sec.points = get_int_or(s, "/spectra", "points", 2001);
    if (sec.points < 2 || !(sec.delta_max > sec.delta_min)) {
      throw validation_error("config: /spectra grid is degenerate");
    }
    cfg.spectra = sec;
  }

  if (root.contains("mb")) {
    const json& m = root["mb"];
    check_keys(m, "/mb",
               {"vacuum", "pulse1", "pulse2", "nz", "nt", "t_window_s", "record",
                "z_stride", "t_stride", "memory_cap_samples"});
    MbSection sec;
    if (m.contains("vacuum")) sec.vacuum = m["vacuum"].get<bool>();
    sec.pulse1 = parse_pulse(get_req(m, "/mb", "pulse1"), "/mb/pulse1");
    sec.pulse2 = parse_pulse(get_req(m, "/mb", "pulse2"), "/mb/pulse2");
    sec.nz = static_cast<int>(get_num(m, "/mb", "nz"));
    sec.nt = static_cast<int>(get_num(m, "/mb", "nt"));
    sec.t_window = get_num(m, "/mb", "t_window_s");
    const std::string rec =
        m.contains("record") ? m["record"].get<std::string>() : "boundaries";
    if (rec == "boundaries") {
      sec.record.mode = RecordPolicy::Mode::boundaries;
    } else if (rec == "full") {
      sec.record.mode = RecordPolicy::Mode::full;
    } else if (rec == "strided") {
      sec.record.mode = RecordPolicy::Mode::strided;
    } else {
      throw validation_error("config: /mb/record must be boundaries, full or strided");
    }
    sec.record.z_stride = get_int_or(m, "/mb", "z_stride", 1);
    sec.record.t_stride = get_int_or(m, "/mb", "t_stride", 1);
    if (m.contains("memory_cap_samples")) {
      sec.record.memory_cap = m["memory_cap_samples"].get<std::size_t>();
    }
    cfg.mb = sec;
  }

  if (root.contains("magnetometer")) {
    const json& m = root["magnetometer"];
    check_keys(m, "/magnetometer",
               {"power_erg_per_s", "t_m_s", "detector_efficiency", "sweep"});
    MagSection sec;
    sec.power = get_num(m, "/magnetometer", "power_erg_per_s");
    sec.t_m = get_num(m, "/magnetometer", "t_m_s");
    sec.detector_efficiency = get_num_or(m, "/magnetometer", "detector_efficiency", 1.0);
    if (m.contains("sweep")) {
      const json& sw = m["sweep"];
      check_keys(sw, "/magnetometer/sweep", {"axis", "min", "max", "points", "log"});
      MagSection::Sweep s;
      s.axis = get_req(sw, "/magnetometer/sweep", "axis").get<std::string>();
      s.min = get_num(sw, "/magnetometer/sweep", "min");
      s.max = get_num(sw, "/magnetometer/sweep", "max");
      s.points = get_int_or(sw, "/magnetometer/sweep", "points", 11);
      if (sw.contains("log")) s.log = sw["log"].get<bool>();
      if (s.points < 2 || !(s.max > s.min) || (s.log && !(s.min > 0.0))) {
        throw validation_error("config: /magnetometer/sweep range is degenerate");
      }
      sec.sweep = s;
    }
    cfg.magnetometer = sec;
  }

  if (root.contains("quantum")) {
    const json& q = root["quantum"];
    check_keys(q, "/quantum",
               {"modes", "nz", "sigma_q_over_dq", "coherent_alpha_sq", "revival_points",
                "separations_dq_units", "thetas_rad"});
    QuantumSection sec;
    sec.modes = get_int_or(q, "/quantum", "modes", 401);
    sec.nz = get_int_or(q, "/quantum", "nz", 1024);
    sec.sigma_q_over_dq = get_num_or(q, "/quantum", "sigma_q_over_dq", 5e-4);
    sec.coherent_alpha_sq = get_num_or(q, "/quantum", "coherent_alpha_sq", 2.0);
    sec.revival_points = get_int_or(q, "/quantum", "revival_points", 41);
    if (q.contains("separations_dq_units")) {
      sec.separations_dq_units = q["separations_dq_units"].get<std::vector<double>>();
    } else {
      sec.separations_dq_units = {0.0, 20.0, 60.0};
    }
    if (q.contains("thetas_rad")) {
      sec.thetas_rad = q["thetas_rad"].get<std::vector<double>>();
    } else {
      sec.thetas_rad = {3.141592653589793};
    }
    cfg.quantum = sec;
  }

  return cfg;
}

}  // namespace tripod
