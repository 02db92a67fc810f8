#include "opvol/config.hpp"

#include "opvol/errors.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace opvol {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ConfigError(field + ": " + what); }

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(prefix.empty() ? "config" : prefix, "must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(prefix.empty() ? key : prefix + "." + key, "unknown key");
  }
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "must be a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) fail(field, "integer out of range");
    return static_cast<std::int64_t>(u);
  }
  if (v.is_number_integer()) return v.get<std::int64_t>();
  fail(field, "must be an integer");
}

int get_int(const json& v, const std::string& field) {
  const std::int64_t x = get_integer(v, field);
  if (x < INT32_MIN || x > INT32_MAX) fail(field, "integer out of range");
  return static_cast<int>(x);
}

bool get_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) fail(field, "must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "must be a string");
  return v.get<std::string>();
}

Vector get_vector(const json& v, const std::string& field) {
  if (!v.is_array()) fail(field, "must be an array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = get_number(v[i], field + "[" + std::to_string(i) + "]");
  return out;
}

Matrix get_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "must be a non-empty array of rows");
  const std::size_t rows = v.size();
  Matrix out;
  for (std::size_t i = 0; i < rows; ++i) {
    const Vector row = get_vector(v[i], field + "[" + std::to_string(i) + "]");
    if (i == 0) out.resize(static_cast<Eigen::Index>(rows), row.size());
    if (row.size() != out.cols()) fail(field, "rows must have equal length");
    out.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return out;
}

std::uint64_t get_seed(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto x = v.get<std::int64_t>();
    if (x < 0) fail(field, "must be >= 0");
    return static_cast<std::uint64_t>(x);
  }
  if (v.is_string()) return parse_seed(v.get<std::string>(), field);
  fail(field, "must be a nonnegative integer");
}

PayoffSpec get_payoff(const json& v, const std::string& field) {
  reject_unknown(v, field, {"kind", "strike", "value"});
  const std::string kind = v.contains("kind") ? get_string(v["kind"], field + ".kind") : "call";
  auto number_or = [&](const char* key, double fallback) {
    return v.contains(key) ? get_number(v[key], field + "." + key) : fallback;
  };
  if (kind == "call") return PayoffSpec::call(number_or("strike", 0.0));
  if (kind == "put") return PayoffSpec::put(number_or("strike", 0.0));
  if (kind == "identity") return PayoffSpec::identity();
  if (kind == "constant") return PayoffSpec::constant(number_or("value", 0.0));
  fail(field + ".kind", "must be one of call, put, identity, constant");
}

}  // namespace

LoadedConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }

  reject_unknown(doc, "",
                 {"d", "levels", "horizon", "steps", "intensity", "jump_gamma", "q", "generator", "forward", "initial",
                  "perturbation", "projection", "payoff", "functional", "vol_payoff", "vol_functional",
                  "exercise_time", "replications", "seed"});

  LoadedConfig out;
  CoupledScenario& s = out.scenario;
  if (doc.contains("d")) s.d = get_int(doc["d"], "d");
  if (doc.contains("levels")) {
    const json& lv = doc["levels"];
    if (!lv.is_array()) fail("levels", "must be an array of integers");
    s.levels.clear();
    for (std::size_t i = 0; i < lv.size(); ++i) s.levels.push_back(get_int(lv[i], "levels[" + std::to_string(i) + "]"));
  }
  if (doc.contains("horizon")) s.horizon = get_number(doc["horizon"], "horizon");
  if (doc.contains("steps")) s.steps = get_int(doc["steps"], "steps");
  if (doc.contains("intensity")) s.intensity = get_number(doc["intensity"], "intensity");
  if (doc.contains("jump_gamma")) s.jump_gamma = get_vector(doc["jump_gamma"], "jump_gamma");
  if (doc.contains("q")) s.q = get_vector(doc["q"], "q");

  if (doc.contains("generator")) {
    const json& g = doc["generator"];
    reject_unknown(g, "generator", {"kind", "spectrum", "scale"});
    if (g.contains("kind")) {
      const std::string kind = get_string(g["kind"], "generator.kind");
      if (kind == "sandwich") s.generator.kind = GeneratorKind::sandwich;
      else if (kind == "sylvester") s.generator.kind = GeneratorKind::sylvester;
      else fail("generator.kind", "must be sandwich or sylvester");
    }
    if (g.contains("spectrum")) {
      if (g["spectrum"].is_string()) {
        if (g["spectrum"].get<std::string>() != "karhunen_loeve")
          fail("generator.spectrum", "must be \"karhunen_loeve\" or an array");
        s.generator.spectrum = Vector();
      } else {
        s.generator.spectrum = get_vector(g["spectrum"], "generator.spectrum");
      }
    }
    if (g.contains("scale")) s.generator.scale = get_number(g["scale"], "generator.scale");
  }

  if (doc.contains("forward")) {
    const json& f = doc["forward"];
    reject_unknown(f, "forward", {"kind", "rates", "strength"});
    if (f.contains("kind")) {
      const std::string kind = get_string(f["kind"], "forward.kind");
      if (kind == "diagonal") s.forward.kind = ForwardKind::diagonal;
      else if (kind == "skew") s.forward.kind = ForwardKind::skew;
      else fail("forward.kind", "must be diagonal or skew");
    }
    if (f.contains("rates")) s.forward.rates = get_vector(f["rates"], "forward.rates");
    if (f.contains("strength")) s.forward.strength = get_number(f["strength"], "forward.strength");
  }

  if (doc.contains("initial")) {
    const json& v = doc["initial"];
    reject_unknown(v, "initial", {"spectrum", "truncate"});
    if (v.contains("spectrum")) s.initial_spectrum = get_vector(v["spectrum"], "initial.spectrum");
    if (v.contains("truncate")) s.truncate_initial = get_bool(v["truncate"], "initial.truncate");
  }

  if (doc.contains("perturbation")) {
    const std::string p = get_string(doc["perturbation"], "perturbation");
    if (p == "jumps") s.perturbation = Perturbation::jumps;
    else if (p == "generator") s.perturbation = Perturbation::generator;
    else fail("perturbation", "must be jumps or generator");
  }
  if (doc.contains("projection")) {
    const std::string p = get_string(doc["projection"], "projection");
    if (p == "anti_diagonal") s.projection = ProjectionFamily::anti_diagonal;
    else if (p == "square") s.projection = ProjectionFamily::square;
    else fail("projection", "must be anti_diagonal or square");
  }

  if (doc.contains("payoff")) s.payoff = get_payoff(doc["payoff"], "payoff");
  if (doc.contains("vol_payoff")) s.vol_payoff = get_payoff(doc["vol_payoff"], "vol_payoff");
  if (doc.contains("functional")) s.functional = get_vector(doc["functional"], "functional");
  if (doc.contains("vol_functional")) {
    const json& v = doc["vol_functional"];
    if (v.is_string()) {
      if (v.get<std::string>() != "trace") fail("vol_functional", "must be \"trace\" or a matrix");
      s.vol_functional = Matrix();
    } else {
      s.vol_functional = get_matrix(v, "vol_functional");
    }
  }
  if (doc.contains("exercise_time")) s.exercise_time = get_number(doc["exercise_time"], "exercise_time");
  if (doc.contains("replications")) s.replications = get_integer(doc["replications"], "replications");
  if (doc.contains("seed")) {
    out.seed = get_seed(doc["seed"], "seed");
    s.seed = *out.seed;
  }

  s = s.with_defaults();
  s.validate();
  return out;
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::uint64_t parse_seed(const std::string& text, const std::string& field) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    fail(field, "must be a nonnegative decimal integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (errno == ERANGE || *end != '\0') fail(field, "out of range for a 64-bit seed");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config,
                           const char* env_value) {
  if (flag) return *flag;
  if (config) return *config;
  if (env_value && *env_value) return parse_seed(env_value, "OPVOL_SEED");
  return kDefaultSeed;
}

}  // namespace opvol
