#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "fibermetric/config.hpp"

namespace fm {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("config error at '" + path + "': " + what);
}

const Json& member(const Json& j, const std::string& path, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required key");
  return *it;
}

std::string get_string(const Json& j, const std::string& path,
                       const std::string& key) {
  const Json& v = member(j, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

cplx parse_complex(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(path, "expected a complex number as [re, im]");
  return cplx(v[0].get<double>(), v[1].get<double>());
}

std::uint64_t get_uint_or(const Json& j, const std::string& path,
                          const std::string& key, std::uint64_t fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_unsigned() && !(it->is_number_integer() &&
                                     it->get<std::int64_t>() >= 0))
    fail(path + "." + key, "expected a non-negative integer");
  return it->get<std::uint64_t>();
}

int get_int(const Json& j, const std::string& path, const std::string& key) {
  const Json& v = member(j, path, key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

int get_int_or(const Json& j, const std::string& path, const std::string& key,
               int fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) fail(path + "." + key, "expected an integer");
  return it->get<int>();
}

MarkedPoint point_from_json(const Json& j, const std::string& path) {
  require_keys(j, path, {"x", "y", "w"}, {});
  MarkedPoint p;
  p.x = get_number(j, path, "x");
  p.y = get_number(j, path, "y");
  p.w = get_number(j, path, "w");
  return p;
}

Json point_to_json(const MarkedPoint& p) {
  return Json{{"x", p.x}, {"y", p.y}, {"w", p.w}};
}

ChiPart chi_part_from_json(const Json& j, const std::string& path) {
  require_keys(j, path, {"kind"},
               {"amp", "ax", "ay", "kx", "ky", "coef1", "coef2", "amp2"});
  ChiPart p;
  const std::string kind = get_string(j, path, "kind");
  if (kind == "theta") p.kind = ChiPart::Kind::theta;
  else if (kind == "mode") p.kind = ChiPart::Kind::mode;
  else if (kind == "t_only") p.kind = ChiPart::Kind::t_only;
  else fail(path + ".kind", "unknown chi part kind '" + kind + "'");
  p.amp = get_number_or(j, path, "amp", 0.0);
  p.ax = get_number_or(j, path, "ax", 0.5);
  p.ay = get_number_or(j, path, "ay", 0.5);
  p.kx = get_int_or(j, path, "kx", 1);
  p.ky = get_int_or(j, path, "ky", 0);
  p.coef1 = get_complex_or(j, path, "coef1", cplx(0.0, 0.0));
  p.coef2 = get_complex_or(j, path, "coef2", cplx(0.0, 0.0));
  p.amp2 = get_number_or(j, path, "amp2", 0.0);
  return p;
}

Json chi_part_to_json(const ChiPart& p) {
  const char* kind = p.kind == ChiPart::Kind::theta  ? "theta"
                     : p.kind == ChiPart::Kind::mode ? "mode"
                                                     : "t_only";
  return Json{{"kind", kind},
              {"amp", p.amp},
              {"ax", p.ax},
              {"ay", p.ay},
              {"kx", p.kx},
              {"ky", p.ky},
              {"coef1", complex_to_json(p.coef1)},
              {"coef2", complex_to_json(p.coef2)},
              {"amp2", p.amp2}};
}

}  // namespace

void require_keys(const Json& j, const std::string& path,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& k : required)
    if (!j.contains(k)) fail(path + "." + k, "missing required key");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (std::find(required.begin(), required.end(), k) == required.end() &&
        std::find(optional.begin(), optional.end(), k) == optional.end())
      fail(path + "." + k, "unknown key");
  }
}

double get_number(const Json& j, const std::string& path, const std::string& key) {
  const Json& v = member(j, path, key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double get_number_or(const Json& j, const std::string& path,
                     const std::string& key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(path + "." + key, "expected a number");
  return it->get<double>();
}

cplx get_complex_or(const Json& j, const std::string& path,
                    const std::string& key, cplx fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return parse_complex(*it, path + "." + key);
}

Json complex_to_json(cplx v) { return Json::array({v.real(), v.imag()}); }

const std::vector<std::string>& experiment_registry() {
  static const std::vector<std::string> names = {
      "solve-fiber", "solve-family", "identity-129", "identity-248",
      "lemma14",     "smoothing",    "centering",    "sobolev",
      "poincare",    "sequences",    "transverse",   "gradient",
      "counterexample", "degeneration"};
  return names;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  return j;
}

ExperimentConfig parse_experiment_config(const Json& j) {
  require_keys(j, "$", {"experiment", "parameters"}, {"seed", "output_dir"});
  ExperimentConfig c;
  c.experiment = get_string(j, "$", "experiment");
  const auto& reg = experiment_registry();
  if (std::find(reg.begin(), reg.end(), c.experiment) == reg.end())
    fail("$.experiment", "unknown experiment '" + c.experiment + "'");
  c.seed = get_uint_or(j, "$", "seed", 0);
  c.output_dir = j.contains("output_dir")
                     ? get_string(j, "$", "output_dir")
                     : "runs/" + c.experiment;
  const Json& p = member(j, "$", "parameters");
  if (!p.is_object()) fail("$.parameters", "expected an object");
  c.parameters = p;
  return c;
}

Json experiment_config_to_json(const ExperimentConfig& c) {
  return Json{{"experiment", c.experiment},
              {"seed", c.seed},
              {"output_dir", c.output_dir},
              {"parameters", c.parameters}};
}

MarkedDivisor divisor_from_json(const Json& j, const std::string& path) {
  require_keys(j, path, {}, {"points_E", "points_B"});
  MarkedDivisor d;
  for (const char* name : {"points_E", "points_B"}) {
    auto it = j.find(name);
    if (it == j.end()) continue;
    if (!it->is_array()) fail(path + "." + name, "expected an array");
    auto& dst = std::string(name) == "points_E" ? d.points_E : d.points_B;
    for (std::size_t k = 0; k < it->size(); ++k)
      dst.push_back(point_from_json(
          (*it)[k], path + "." + name + "[" + std::to_string(k) + "]"));
  }
  d.validate();
  return d;
}

Json divisor_to_json(const MarkedDivisor& d) {
  Json e = Json::array(), b = Json::array();
  for (const auto& p : d.points_E) e.push_back(point_to_json(p));
  for (const auto& p : d.points_B) b.push_back(point_to_json(p));
  return Json{{"points_E", e}, {"points_B", b}};
}

Schedule schedule_from_json(const Json& j, const std::string& path) {
  require_keys(j, path, {"parameter", "values"}, {});
  Schedule s;
  const std::string name = get_string(j, path, "parameter");
  if (name == "epsilon") s.parameter = ScheduleParam::epsilon;
  else if (name == "delta") s.parameter = ScheduleParam::delta;
  else if (name == "lambda_eff") s.parameter = ScheduleParam::lambda_eff;
  else if (name == "base_degeneration")
    s.parameter = ScheduleParam::base_degeneration;
  else fail(path + ".parameter", "unknown schedule parameter '" + name + "'");
  const Json& v = member(j, path, "values");
  if (!v.is_array() || v.empty()) fail(path + ".values", "expected a non-empty array");
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number())
      fail(path + ".values[" + std::to_string(k) + "]", "expected a number");
    s.values.push_back(v[k].get<double>());
  }
  s.validate();
  return s;
}

Json schedule_to_json(const Schedule& s) {
  return Json{{"parameter", schedule_param_name(s.parameter)},
              {"values", s.values}};
}

FamilyConfig family_from_json(const Json& j, const std::string& path) {
  require_keys(j, path, {"base", "n_side", "tau"},
               {"omega", "density", "lambda", "normalization"});
  FamilyConfig cfg;

  const Json& base = member(j, path, "base");
  const std::string bpath = path + ".base";
  require_keys(base, bpath, {"m_side", "half_x", "half_y"}, {"center"});
  const int m = get_int(base, bpath, "m_side");
  if (m < 3) fail(bpath + ".m_side", "m_side must be >= 3");
  cfg.base = BaseGrid(std::size_t(m),
                      get_complex_or(base, bpath, "center", cplx(0.0, 0.0)),
                      get_number(base, bpath, "half_x"),
                      get_number(base, bpath, "half_y"));

  const int n = get_int(j, path, "n_side");
  if (n < 16) fail(path + ".n_side", "n_side must be a power of two >= 16");
  cfg.n_side = std::size_t(n);

  const Json& tau = member(j, path, "tau");
  const std::string tpath = path + ".tau";
  require_keys(tau, tpath, {"kind", "tau0"}, {"kappa"});
  const std::string tkind = get_string(tau, tpath, "kind");
  if (tkind == "constant") cfg.tau.kind = TauRecipe::Kind::constant;
  else if (tkind == "affine") cfg.tau.kind = TauRecipe::Kind::affine;
  else if (tkind == "log_degenerate")
    cfg.tau.kind = TauRecipe::Kind::log_degenerate;
  else fail(tpath + ".kind", "unknown tau kind '" + tkind + "'");
  cfg.tau.tau0 = get_complex_or(tau, tpath, "tau0", cplx(0.0, 1.0));
  cfg.tau.kappa = get_complex_or(tau, tpath, "kappa", cplx(0.0, 0.0));

  if (j.contains("omega")) {
    const Json& om = j["omega"];
    const std::string opath = path + ".omega";
    require_keys(om, opath, {}, {"kind", "M", "shear", "chi_parts"});
    const std::string okind =
        om.contains("kind") ? get_string(om, opath, "kind") : "product";
    if (okind == "product") cfg.omega.kind = OmegaRecipe::Kind::product;
    else if (okind == "sheared") cfg.omega.kind = OmegaRecipe::Kind::sheared;
    else fail(opath + ".kind", "unknown omega kind '" + okind + "'");
    cfg.omega.M = get_number_or(om, opath, "M", 1.0);
    cfg.omega.shear = get_complex_or(om, opath, "shear", cplx(0.0, 0.0));
    if (om.contains("chi_parts")) {
      const Json& parts = om["chi_parts"];
      if (!parts.is_array()) fail(opath + ".chi_parts", "expected an array");
      for (std::size_t k = 0; k < parts.size(); ++k)
        cfg.omega.chi_parts.push_back(chi_part_from_json(
            parts[k], opath + ".chi_parts[" + std::to_string(k) + "]"));
    }
  }

  if (j.contains("density")) {
    const Json& de = j["density"];
    const std::string dpath = path + ".density";
    require_keys(de, dpath, {},
                 {"kind", "divisor", "epsilon", "drift", "mod_amp", "mod_gamma"});
    const std::string dkind =
        de.contains("kind") ? get_string(de, dpath, "kind") : "matched";
    if (dkind == "matched") cfg.density.kind = DensityRecipe::Kind::matched;
    else if (dkind == "conic") cfg.density.kind = DensityRecipe::Kind::conic;
    else if (dkind == "modulated")
      cfg.density.kind = DensityRecipe::Kind::modulated;
    else fail(dpath + ".kind", "unknown density kind '" + dkind + "'");
    if (de.contains("divisor"))
      cfg.density.divisor = divisor_from_json(de["divisor"], dpath + ".divisor");
    cfg.density.epsilon = get_number_or(de, dpath, "epsilon", 0.1);
    cfg.density.drift = get_complex_or(de, dpath, "drift", cplx(0.0, 0.0));
    cfg.density.mod_amp = get_number_or(de, dpath, "mod_amp", 0.0);
    cfg.density.mod_gamma = get_complex_or(de, dpath, "mod_gamma", cplx(0.0, 0.0));
  }

  cfg.lambda = get_number_or(j, path, "lambda", 0.0);
  if (j.contains("normalization")) {
    const std::string norm = get_string(j, path, "normalization");
    if (norm == "omega_mean_zero")
      cfg.normalization = Normalization::omega_mean_zero;
    else if (norm == "density_mean_zero")
      cfg.normalization = Normalization::density_mean_zero;
    else fail(path + ".normalization", "unknown normalization '" + norm + "'");
  }

  cfg.validate();
  return cfg;
}

Json family_to_json(const FamilyConfig& cfg) {
  Json parts = Json::array();
  for (const auto& p : cfg.omega.chi_parts) parts.push_back(chi_part_to_json(p));
  const char* okind =
      cfg.omega.kind == OmegaRecipe::Kind::product ? "product" : "sheared";
  const char* dkind = cfg.density.kind == DensityRecipe::Kind::matched ? "matched"
                      : cfg.density.kind == DensityRecipe::Kind::conic ? "conic"
                                                                       : "modulated";
  const char* tkind = cfg.tau.kind == TauRecipe::Kind::constant ? "constant"
                      : cfg.tau.kind == TauRecipe::Kind::affine ? "affine"
                                                                : "log_degenerate";
  return Json{
      {"base",
       {{"m_side", cfg.base.m_side},
        {"center", complex_to_json(cfg.base.center)},
        {"half_x", cfg.base.half_x},
        {"half_y", cfg.base.half_y}}},
      {"n_side", cfg.n_side},
      {"tau",
       {{"kind", tkind},
        {"tau0", complex_to_json(cfg.tau.tau0)},
        {"kappa", complex_to_json(cfg.tau.kappa)}}},
      {"omega",
       {{"kind", okind},
        {"M", cfg.omega.M},
        {"shear", complex_to_json(cfg.omega.shear)},
        {"chi_parts", parts}}},
      {"density",
       {{"kind", dkind},
        {"divisor", divisor_to_json(cfg.density.divisor)},
        {"epsilon", cfg.density.epsilon},
        {"drift", complex_to_json(cfg.density.drift)},
        {"mod_amp", cfg.density.mod_amp},
        {"mod_gamma", complex_to_json(cfg.density.mod_gamma)}}},
      {"lambda", cfg.lambda},
      {"normalization", cfg.normalization == Normalization::omega_mean_zero
                            ? "omega_mean_zero"
                            : "density_mean_zero"}};
}

}  // namespace fm
