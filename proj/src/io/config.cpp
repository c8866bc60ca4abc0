#include "hydro/io/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hydro/errors.hpp"
#include "hydro/io/sha256.hpp"

namespace hydro::io {

using nlohmann::json;

namespace {

/// Applies the keys of a JSON object onto named double/int/bool slots,
/// rejecting unknown keys so typos surface as errors.
class SectionReader {
 public:
  SectionReader(const json& j, std::string prefix)
      : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) throw ParameterError(prefix_ + ": must be a JSON object");
  }

  void number(const char* key, double& slot) {
    if (auto it = j_.find(key); it != j_.end()) {
      if (!it->is_number()) throw ParameterError(prefix_ + "." + key + ": must be a number");
      slot = it->get<double>();
      seen_.push_back(key);
    }
  }

  void integer(const char* key, int& slot) {
    if (auto it = j_.find(key); it != j_.end()) {
      if (!it->is_number_integer()) {
        throw ParameterError(prefix_ + "." + key + ": must be an integer");
      }
      slot = it->get<int>();
      seen_.push_back(key);
    }
  }

  void boolean(const char* key, bool& slot) {
    if (auto it = j_.find(key); it != j_.end()) {
      if (!it->is_boolean()) throw ParameterError(prefix_ + "." + key + ": must be a boolean");
      slot = it->get<bool>();
      seen_.push_back(key);
    }
  }

  void allow(const char* key) { seen_.push_back(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      const std::string& key = it.key();
      if (!key.empty() && key[0] == '_') continue;  // annotation
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw ParameterError(prefix_ + "." + key + ": unknown key");
      }
    }
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string> seen_;
};

void read_gen(const json& j, GeneratorRatings& g) {
  SectionReader r(j, "gen");
  r.number("omega0", g.omega0);
  r.number("r", g.r);
  r.number("x_s", g.x_s);
  r.number("x_d", g.x_d);
  r.number("x_q", g.x_q);
  r.number("x_d_prime", g.x_d_prime);
  r.number("x_d_dprime", g.x_d_dprime);
  r.number("x_q_dprime", g.x_q_dprime);
  r.number("T_r", g.T_r);
  r.number("T_d_dprime", g.T_d_dprime);
  r.number("J", g.J);
  r.number("E_r", g.E_r);
  r.number("U_nom", g.U_nom);
  r.number("theta0", g.theta0);
  r.number("S_b", g.S_b);
  r.number("r_rd", g.r_rd);
  r.number("r_rq", g.r_rq);
  r.finish();
}

void read_tur(const json& j, TurbineParams& t) {
  SectionReader r(j, "tur");
  r.number("S_area", t.S_area);
  r.number("l", t.l);
  r.number("rho_w", t.rho_w);
  r.number("p_u", t.p_u);
  r.number("p_l", t.p_l);
  r.number("C", t.C);
  r.number("k", t.k);
  r.number("Q_max", t.Q_max);
  r.finish();
}

void read_gov(const json& j, GovernorParams& g) {
  SectionReader r(j, "gov");
  r.number("z", g.z);
  r.number("sigma", g.sigma);
  r.number("T_c", g.T_c);
  r.number("rho_o", g.rho_o);
  r.number("rho_c", g.rho_c);
  r.number("mu_min", g.mu_min);
  r.number("mu_max", g.mu_max);
  r.finish();
}

void read_tol(const json& j, Tolerances& t) {
  SectionReader r(j, "tolerances");
  r.number("eq_residual", t.eq_residual);
  r.number("cond_threshold", t.cond_threshold);
  r.integer("theta_grid", t.theta_grid);
  r.integer("newton_max_iter", t.newton_max_iter);
  r.number("routh_tol_rel", t.routh_tol_rel);
  r.number("marginal_band", t.marginal_band);
  r.finish();
}

void read_integration(const json& j, IntegrationConfig& c) {
  SectionReader r(j, "integration");
  r.number("dt", c.dt);
  r.number("T_end", c.T_end);
  r.number("T_discard", c.T_discard);
  r.integer("record_stride", c.record_stride);
  r.boolean("clamp_mu", c.clamp_mu);
  if (auto it = j.find("x0"); it != j.end()) {
    r.allow("x0");
    if (!it->is_array() || it->size() != kStateDim) {
      throw ParameterError("integration.x0: must be an array of 9 numbers");
    }
    State x;
    for (int i = 0; i < kStateDim; ++i) x[i] = (*it)[i].get<double>();
    c.x0_override = x;
  }
  r.finish();
}

void read_regime(const json& j, RegimeTolerances& t) {
  SectionReader r(j, "regime");
  r.number("eq_tol", t.eq_tol);
  r.number("cycle_tol", t.cycle_tol);
  r.number("peak_jitter", t.peak_jitter);
  r.finish();
}

}  // namespace

AppConfig default_config() {
  AppConfig cfg;
  cfg.params = sayano_defaults();
  return cfg;
}

AppConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ParameterError("config: top level must be an object");

  AppConfig cfg = default_config();
  GeneratorRatings gen = cfg.params.gen;
  TurbineParams tur = cfg.params.tur;
  GovernorParams gov = cfg.params.gov;
  Tolerances tol = cfg.params.tol;
  double gamma = cfg.params.gamma;

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (!key.empty() && key[0] == '_') continue;
    if (key == "gen") {
      read_gen(*it, gen);
    } else if (key == "tur") {
      read_tur(*it, tur);
    } else if (key == "gov") {
      read_gov(*it, gov);
    } else if (key == "tolerances") {
      read_tol(*it, tol);
    } else if (key == "integration") {
      read_integration(*it, cfg.integration);
    } else if (key == "regime") {
      read_regime(*it, cfg.regime);
    } else if (key == "gamma") {
      if (!it->is_number()) throw ParameterError("gamma: must be a number");
      gamma = it->get<double>();
    } else if (key == "provenance") {
      // documentation block, carried in the file only
    } else {
      throw ParameterError(key + ": unknown key");
    }
  }

  cfg.params = make_unit_params(gen, tur, gov, gamma);
  cfg.params.tol = tol;

  if (!(cfg.integration.dt > 0.0 && cfg.integration.dt <= 1e-3)) {
    throw ParameterError("integration.dt: must lie in (0, 1e-3]");
  }
  if (!(cfg.integration.T_discard < cfg.integration.T_end)) {
    throw ParameterError("integration.T_discard: must be below T_end");
  }
  if (cfg.integration.record_stride < 1) {
    throw ParameterError("integration.record_stride: must be >= 1");
  }
  if (!(cfg.regime.eq_tol > 0.0)) throw ParameterError("regime.eq_tol: must be positive");
  if (!(cfg.regime.cycle_tol > 0.0)) {
    throw ParameterError("regime.cycle_tol: must be positive");
  }
  if (!(cfg.regime.peak_jitter > 0.0 && cfg.regime.peak_jitter < 1.0)) {
    throw ParameterError("regime.peak_jitter: must lie in (0, 1)");
  }
  return cfg;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const AppConfig& cfg) {
  const auto& g = cfg.params.gen;
  const auto& t = cfg.params.tur;
  const auto& v = cfg.params.gov;
  const auto& tl = cfg.params.tol;
  json doc;
  doc["gen"] = {{"omega0", g.omega0},
                {"r", g.r},
                {"x_s", g.x_s},
                {"x_d", g.x_d},
                {"x_q", g.x_q},
                {"x_d_prime", g.x_d_prime},
                {"x_d_dprime", g.x_d_dprime},
                {"x_q_dprime", g.x_q_dprime},
                {"T_r", g.T_r},
                {"T_d_dprime", g.T_d_dprime},
                {"J", g.J},
                {"E_r", g.E_r},
                {"U_nom", g.U_nom},
                {"theta0", g.theta0},
                {"S_b", g.S_b},
                {"r_rd", g.r_rd},
                {"r_rq", g.r_rq}};
  doc["tur"] = {{"S_area", t.S_area}, {"l", t.l},   {"rho_w", t.rho_w},
                {"p_u", t.p_u},       {"p_l", t.p_l}, {"C", t.C},
                {"k", t.k},           {"Q_max", t.Q_max}};
  doc["gov"] = {{"z", v.z},         {"sigma", v.sigma},   {"T_c", v.T_c},
                {"rho_o", v.rho_o}, {"rho_c", v.rho_c},   {"mu_min", v.mu_min},
                {"mu_max", v.mu_max}};
  doc["gamma"] = cfg.params.gamma;
  doc["tolerances"] = {{"eq_residual", tl.eq_residual},
                       {"cond_threshold", tl.cond_threshold},
                       {"theta_grid", tl.theta_grid},
                       {"newton_max_iter", tl.newton_max_iter},
                       {"routh_tol_rel", tl.routh_tol_rel},
                       {"marginal_band", tl.marginal_band}};
  doc["integration"] = {{"dt", cfg.integration.dt},
                        {"T_end", cfg.integration.T_end},
                        {"T_discard", cfg.integration.T_discard},
                        {"record_stride", cfg.integration.record_stride},
                        {"clamp_mu", cfg.integration.clamp_mu}};
  if (cfg.integration.x0_override) {
    json arr = json::array();
    for (int i = 0; i < kStateDim; ++i) arr.push_back((*cfg.integration.x0_override)[i]);
    doc["integration"]["x0"] = arr;
  }
  doc["regime"] = {{"eq_tol", cfg.regime.eq_tol},
                   {"cycle_tol", cfg.regime.cycle_tol},
                   {"peak_jitter", cfg.regime.peak_jitter}};
  return doc.dump(2) + "\n";
}

std::string config_hash(const AppConfig& cfg) {
  return sha256_hex(serialize_config(cfg));
}

}  // namespace hydro::io
