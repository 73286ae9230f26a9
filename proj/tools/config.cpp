#include "config.hpp"

#include <fstream>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "entbuffer/errors.hpp"

namespace entbuffer::cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& section,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw domain_error("unknown key \"" + section + "." + key + "\" in config");
    }
  }
}

double require_number(const json& obj, const std::string& section, const std::string& key) {
  if (!obj.contains(key)) {
    throw domain_error("config is missing required field \"" + section + "." + key + "\"");
  }
  if (!obj[key].is_number()) {
    throw domain_error("config field \"" + section + "." + key + "\" must be a number");
  }
  return obj[key].get<double>();
}

ProtocolSpec parse_protocol(const json& obj) {
  reject_unknown_keys(obj, "protocol", {"f_new", "jump", "rho_new", "id", "dejmps"});
  ProtocolSpec spec{};
  const bool has_jump = obj.contains("jump");
  const bool has_rho = obj.contains("rho_new");
  if (has_jump == has_rho) {
    throw domain_error("protocol section needs exactly one of \"jump\" or \"rho_new\"");
  }
  if (has_jump) {
    if (obj.contains("id") || obj.contains("dejmps")) {
      throw domain_error("an affine \"jump\" protocol takes no \"id\" or \"dejmps\"");
    }
    const json& j = obj["jump"];
    if (!j.is_object()) throw domain_error("\"protocol.jump\" must be an object");
    reject_unknown_keys(j, "protocol.jump", {"a", "b"});
    spec.kind = ProtocolSpec::Kind::linear;
    spec.linear = LinearJump(require_number(j, "protocol.jump", "a"),
                             require_number(j, "protocol.jump", "b"));
    spec.f_new = require_number(obj, "protocol", "f_new");
    if (!(spec.f_new >= 0.25 && spec.f_new <= 1.0)) {
      throw domain_error("\"protocol.f_new\" must lie in [1/4, 1]");
    }
    return spec;
  }
  const json& rho = obj["rho_new"];
  if (!rho.is_array() || rho.size() != 4 || !rho[0].is_number() || !rho[1].is_number() ||
      !rho[2].is_number() || !rho[3].is_number()) {
    throw domain_error("\"protocol.rho_new\" must be an array of four numbers");
  }
  if (obj.contains("f_new")) {
    throw domain_error("\"protocol.f_new\" is implied by \"rho_new\"; remove it");
  }
  spec.rho_new = BellDiagonalState(rho[0].get<double>(), rho[1].get<double>(),
                                   rho[2].get<double>(), rho[3].get<double>());
  spec.f_new = spec.rho_new->f;
  const bool has_id = obj.contains("id");
  const bool has_dejmps = obj.contains("dejmps") && obj["dejmps"].is_boolean() &&
                          obj["dejmps"].get<bool>();
  if (obj.contains("dejmps") && !obj["dejmps"].is_boolean()) {
    throw domain_error("\"protocol.dejmps\" must be a boolean");
  }
  if (has_id == has_dejmps) {
    throw domain_error("a \"rho_new\" protocol needs exactly one of \"id\" or \"dejmps\": true");
  }
  if (has_id) {
    if (!obj["id"].is_number_integer()) throw domain_error("\"protocol.id\" must be an integer");
    spec.id = obj["id"].get<int>();
    if (spec.id < 1 || spec.id > 7) throw domain_error("\"protocol.id\" must lie in 1..7");
    spec.kind = ProtocolSpec::Kind::catalogue;
  } else {
    spec.kind = ProtocolSpec::Kind::dejmps;
  }
  return spec;
}

}  // namespace

RationalJump ProtocolSpec::resolve() const {
  switch (kind) {
    case Kind::linear:
      return RationalJump(linear->a, linear->b, 0.0, 1.0);
    case Kind::catalogue:
      return protocol_jump(static_cast<ProtocolId>(id), *rho_new);
    case Kind::dejmps:
      return apply_bilocal_clifford(CliffordCircuit2Pair::dejmps(), WernerState(f_new), *rho_new)
          .jump;
  }
  throw domain_error("unresolvable protocol spec");
}

LinearJump ProtocolSpec::resolve_linear() const {
  if (kind == Kind::linear) return *linear;
  return resolve().to_linear();
}

FileConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw domain_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw domain_error("config root must be a JSON object");
  reject_unknown_keys(root, "<root>", {"system", "protocol", "simulation"});

  FileConfig cfg{};
  if (!root.contains("system") || !root["system"].is_object()) {
    throw domain_error("config is missing the \"system\" section");
  }
  const json& sys = root["system"];
  reject_unknown_keys(sys, "system", {"lambda", "mu", "gamma", "q", "p"});
  cfg.lambda = require_number(sys, "system", "lambda");
  cfg.mu = require_number(sys, "system", "mu");
  cfg.gamma = require_number(sys, "system", "gamma");
  if (sys.contains("q")) cfg.q = require_number(sys, "system", "q");
  if (sys.contains("p")) cfg.p = require_number(sys, "system", "p");

  if (!root.contains("protocol") || !root["protocol"].is_object()) {
    throw domain_error("config is missing the \"protocol\" section");
  }
  cfg.protocol = parse_protocol(root["protocol"]);

  if (root.contains("simulation")) {
    const json& sim = root["simulation"];
    if (!sim.is_object()) throw domain_error("\"simulation\" must be an object");
    reject_unknown_keys(sim, "simulation", {"t_sim", "n_samples", "seed", "mode"});
    if (sim.contains("t_sim")) cfg.t_sim = require_number(sim, "simulation", "t_sim");
    if (sim.contains("n_samples")) {
      if (!sim["n_samples"].is_number_integer()) {
        throw domain_error("\"simulation.n_samples\" must be an integer");
      }
      cfg.n_samples = sim["n_samples"].get<std::int64_t>();
    }
    if (sim.contains("seed")) {
      if (!sim["seed"].is_number_integer()) {
        throw domain_error("\"simulation.seed\" must be an integer");
      }
      cfg.seed = sim["seed"].get<std::uint64_t>();
    }
    if (sim.contains("mode")) {
      if (!sim["mode"].is_string()) throw domain_error("\"simulation.mode\" must be a string");
      const std::string mode = sim["mode"].get<std::string>();
      if (mode == "constant") {
        cfg.mode = SuccessMode::constant_p;
      } else if (mode == "linear") {
        cfg.mode = SuccessMode::linear_p;
      } else {
        throw domain_error("\"simulation.mode\" must be \"constant\" or \"linear\"");
      }
    }
  }
  return cfg;
}

}  // namespace entbuffer::cli
