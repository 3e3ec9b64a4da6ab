#include "hystreal/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hystreal/errors.hpp"

namespace hystreal {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw DomainError("config: " + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.contains(it.key())) throw DomainError("config: unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json sweep_json(const SweepConfig& s) {
  return {{"grad_tol", s.grad_tol},           {"sn_curvature", s.sn_curvature},
          {"bracket_width", s.bracket_width}, {"transit_offset", s.transit_offset},
          {"atol", s.atol},                   {"rtol", s.rtol},
          {"settle_tol", s.settle_tol},       {"max_steps", s.max_steps},
          {"steps_blend", s.steps_blend},     {"steps_rotation", s.steps_rotation},
          {"steps_fold", s.steps_fold},       {"du", s.du},
          {"max_jump", s.max_jump},           {"check_lyapunov", s.check_lyapunov}};
}

void sweep_of(const json& j, SweepConfig& s) {
  reject_unknown(j, {"grad_tol", "sn_curvature", "bracket_width", "transit_offset", "atol", "rtol", "settle_tol",
                     "max_steps", "steps_blend", "steps_rotation", "steps_fold", "du", "max_jump", "check_lyapunov"},
                 "sweep");
  read(j, "grad_tol", s.grad_tol);
  read(j, "sn_curvature", s.sn_curvature);
  read(j, "bracket_width", s.bracket_width);
  read(j, "transit_offset", s.transit_offset);
  read(j, "atol", s.atol);
  read(j, "rtol", s.rtol);
  read(j, "settle_tol", s.settle_tol);
  read(j, "max_steps", s.max_steps);
  read(j, "steps_blend", s.steps_blend);
  read(j, "steps_rotation", s.steps_rotation);
  read(j, "steps_fold", s.steps_fold);
  read(j, "du", s.du);
  read(j, "max_jump", s.max_jump);
  read(j, "check_lyapunov", s.check_lyapunov);
}

}  // namespace

void sync_config(Config& c) {
  c.verify.sweep = c.sweep;
  c.lemma1.sweep = c.sweep;
}

void validate_config(const Config& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0)) throw DomainError(std::string("config: ") + name + " must be positive");
  };
  const auto& s = c.sweep;
  positive(s.grad_tol, "sweep.grad_tol");
  positive(s.sn_curvature, "sweep.sn_curvature");
  positive(s.bracket_width, "sweep.bracket_width");
  positive(s.transit_offset, "sweep.transit_offset");
  positive(s.atol, "sweep.atol");
  positive(s.rtol, "sweep.rtol");
  positive(s.settle_tol, "sweep.settle_tol");
  positive(static_cast<double>(s.max_steps), "sweep.max_steps");
  positive(s.steps_blend, "sweep.steps_blend");
  positive(s.steps_rotation, "sweep.steps_rotation");
  positive(s.steps_fold, "sweep.steps_fold");
  positive(s.max_jump, "sweep.max_jump");
  if (s.du < 0) throw DomainError("config: sweep.du must not be negative");
  positive(c.verify.tolerance, "verify.tolerance");
  positive(c.verify.far_tolerance, "verify.far_tolerance");
  positive(c.verify.ring_samples, "verify.ring_samples");
  positive(c.verify.rays, "verify.rays");
  positive(c.verify.ray_samples, "verify.ray_samples");
  positive(c.verify.axis_step, "verify.axis_step");
  positive(c.lemma1.u_points - 1, "lemma1.u_points - 1");
  positive(c.lemma1.endpoint_samples, "lemma1.endpoint_samples");
  positive(c.lemma1.endpoint_tolerance, "lemma1.endpoint_tolerance");
  positive(c.lemma1.terminal_tolerance, "lemma1.terminal_tolerance");
  positive(c.lemma1.grid_spacing, "lemma1.grid_spacing");
  positive(c.lemma1.box_x2, "lemma1.box_x2");
  positive(c.second_order.gamma, "second_order.gamma");
  positive(c.second_order.nu, "second_order.nu");
  positive(c.second_order.atol, "second_order.atol");
  positive(c.second_order.rtol, "second_order.rtol");
  if (!(c.second_order.dwell > 0 && c.second_order.dwell < 1))
    throw DomainError("config: second_order.dwell must lie in (0, 1)");
  positive(c.build.geometry.rho, "build.geometry.rho");
  positive(c.build.mollify.circle_order, "build.mollify.circle_order");
  positive(c.build.mollify.disc_order, "build.mollify.disc_order");
  positive(c.build.mollify.tolerance, "build.mollify.tolerance");
  positive(c.random_graphs, "random_graphs");
  positive(c.random_max_top, "random_max_top");
  positive(c.random_max_size, "random_max_size");
  positive(c.oracle_max_N, "oracle_max_N");
  positive(c.preisach_max_N, "preisach_max_N");
}

std::string config_to_json(const Config& c) {
  json j;
  j["build"] = json::parse(options_to_json(c.build));
  j["sweep"] = sweep_json(c.sweep);
  j["verify"] = {{"tolerance", c.verify.tolerance},       {"far_tolerance", c.verify.far_tolerance},
                 {"ring_samples", c.verify.ring_samples}, {"rays", c.verify.rays},
                 {"ray_samples", c.verify.ray_samples},   {"axis_step", c.verify.axis_step}};
  j["lemma1"] = {{"u_points", c.lemma1.u_points},
                 {"endpoint_samples", c.lemma1.endpoint_samples},
                 {"endpoint_tolerance", c.lemma1.endpoint_tolerance},
                 {"terminal_tolerance", c.lemma1.terminal_tolerance},
                 {"grid_spacing", c.lemma1.grid_spacing},
                 {"box_x2", c.lemma1.box_x2},
                 {"seed", c.lemma1.seed}};
  j["second_order"] = {{"gamma", c.second_order.gamma},
                       {"nu", c.second_order.nu},
                       {"dwell", c.second_order.dwell},
                       {"atol", c.second_order.atol},
                       {"rtol", c.second_order.rtol}};
  j["seed"] = c.seed;
  j["random_graphs"] = c.random_graphs;
  j["random_max_top"] = c.random_max_top;
  j["random_max_size"] = c.random_max_size;
  j["oracle_max_N"] = c.oracle_max_N;
  j["preisach_max_N"] = c.preisach_max_N;
  return j.dump(2);
}

Config config_from_json(const std::string& text) {
  Config c;
  try {
    const json j = json::parse(text);
    reject_unknown(j,
                   {"build", "sweep", "verify", "lemma1", "second_order", "seed", "random_graphs", "random_max_top",
                    "random_max_size", "oracle_max_N", "preisach_max_N"},
                   "config");
    if (j.contains("build")) {
      reject_unknown(j.at("build"), {"geometry", "mollify", "fast_path"}, "build");
      c.build = options_from_json(j.at("build").dump());
    }
    if (j.contains("sweep")) sweep_of(j.at("sweep"), c.sweep);
    if (j.contains("verify")) {
      const auto& v = j.at("verify");
      reject_unknown(v, {"tolerance", "far_tolerance", "ring_samples", "rays", "ray_samples", "axis_step"}, "verify");
      read(v, "tolerance", c.verify.tolerance);
      read(v, "far_tolerance", c.verify.far_tolerance);
      read(v, "ring_samples", c.verify.ring_samples);
      read(v, "rays", c.verify.rays);
      read(v, "ray_samples", c.verify.ray_samples);
      read(v, "axis_step", c.verify.axis_step);
    }
    if (j.contains("lemma1")) {
      const auto& l = j.at("lemma1");
      reject_unknown(l,
                     {"u_points", "endpoint_samples", "endpoint_tolerance", "terminal_tolerance", "grid_spacing",
                      "box_x2", "seed"},
                     "lemma1");
      read(l, "u_points", c.lemma1.u_points);
      read(l, "endpoint_samples", c.lemma1.endpoint_samples);
      read(l, "endpoint_tolerance", c.lemma1.endpoint_tolerance);
      read(l, "terminal_tolerance", c.lemma1.terminal_tolerance);
      read(l, "grid_spacing", c.lemma1.grid_spacing);
      read(l, "box_x2", c.lemma1.box_x2);
      read(l, "seed", c.lemma1.seed);
    }
    if (j.contains("second_order")) {
      const auto& s = j.at("second_order");
      reject_unknown(s, {"gamma", "nu", "dwell", "atol", "rtol"}, "second_order");
      read(s, "gamma", c.second_order.gamma);
      read(s, "nu", c.second_order.nu);
      read(s, "dwell", c.second_order.dwell);
      read(s, "atol", c.second_order.atol);
      read(s, "rtol", c.second_order.rtol);
    }
    read(j, "seed", c.seed);
    read(j, "random_graphs", c.random_graphs);
    read(j, "random_max_top", c.random_max_top);
    read(j, "random_max_size", c.random_max_size);
    read(j, "oracle_max_N", c.oracle_max_N);
    read(j, "preisach_max_N", c.preisach_max_N);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  sync_config(c);
  validate_config(c);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

}  // namespace hystreal
