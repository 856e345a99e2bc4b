#include "qwalk/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qwalk/writers.hpp"

namespace qwalk::config {

using nlohmann::json;

ConfigError::ConfigError(std::string message, std::string field, std::optional<std::size_t> line)
    : ValidationError(field.empty() ? message : field + ": " + message),
      field_(std::move(field)),
      line_(line) {}

std::string_view to_string(InitialKind kind) noexcept {
  switch (kind) {
    case InitialKind::GaussianReal:
      return "gaussian_real";
    case InitialKind::GaussianComplexV:
      return "gaussian_complex_v";
    case InitialKind::GaussianMixed:
      return "gaussian_mixed";
    case InitialKind::Custom:
      break;
  }
  return "custom";
}

namespace {

std::string join(std::string_view section, std::string_view key) {
  return std::string(section) + "." + std::string(key);
}

const json& object_at(const json& doc, std::string_view key, std::string_view field) {
  const json& obj = doc.at(std::string(key));
  if (!obj.is_object()) throw ConfigError("expected an object", std::string(field));
  return obj;
}

void check_keys(const json& obj, std::string_view section, std::initializer_list<std::string_view> allowed) {
  const std::set<std::string_view> ok(allowed);
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) throw ConfigError("unknown key", section.empty() ? key : join(section, key));
  }
}

double number(const json& obj, std::string_view key, std::string_view section) {
  const json& v = obj.at(std::string(key));
  if (!v.is_number()) throw ConfigError("expected a number", join(section, key));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("must be finite", join(section, key));
  return x;
}

long integer(const json& obj, std::string_view key, std::string_view section) {
  const json& v = obj.at(std::string(key));
  if (v.is_number_integer()) return v.get<long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long>(x);
  }
  throw ConfigError("expected an integer", join(section, key));
}

std::size_t count(const json& obj, std::string_view key, std::string_view section, long min) {
  const long n = integer(obj, key, section);
  if (n < min) throw ConfigError("must be >= " + std::to_string(min), join(section, key));
  return static_cast<std::size_t>(n);
}

std::string text(const json& obj, std::string_view key, std::string_view section) {
  const json& v = obj.at(std::string(key));
  if (!v.is_string()) throw ConfigError("expected a string", join(section, key));
  return v.get<std::string>();
}

Vec3 vec3(const json& obj, std::string_view key, std::string_view section) {
  const json& v = obj.at(std::string(key));
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
    throw ConfigError("expected an array of three numbers", join(section, key));
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::vector<std::string> string_list(const json& obj, std::string_view key, std::string_view section,
                                     std::initializer_list<std::string_view> allowed) {
  const json& v = obj.at(std::string(key));
  if (!v.is_array()) throw ConfigError("expected an array of strings", join(section, key));
  const std::set<std::string_view> ok(allowed);
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string() || !ok.contains(item.get<std::string>())) {
      std::string names;
      for (auto a : allowed) names += (names.empty() ? "" : ", ") + std::string(a);
      throw ConfigError("entries must be one of: " + names, join(section, key));
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

struct LatticeResult {
  ProfileSpec profile;
  std::size_t sites;
  json resolved;
};

LatticeResult parse_lattice_impl(const json& doc, std::vector<std::string>& warnings) {
  if (!doc.contains("lattice")) throw ConfigError("missing section", "lattice");
  const json& lat = object_at(doc, "lattice", "lattice");
  check_keys(lat, "lattice", {"L", "lambda", "theta0", "theta"});

  if (lat.contains("theta")) {
    if (lat.contains("lambda") || lat.contains("theta0")) {
      throw ConfigError("give either theta or lambda/theta0, not both", "lattice.theta");
    }
    const json& arr = lat.at("theta");
    if (!arr.is_array()) throw ConfigError("expected an array of numbers", "lattice.theta");
    std::vector<double> theta;
    theta.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) throw ConfigError("expected a number at index " + std::to_string(i), "lattice.theta");
      const double t = arr[i].get<double>();
      if (!std::isfinite(t) || std::abs(t) > std::numbers::pi) {
        throw ConfigError("angle at index " + std::to_string(i) + " outside [-pi, pi]", "lattice.theta");
      }
      theta.push_back(t);
    }
    if (theta.size() < 2 || theta.size() % 2 != 0) {
      throw ConfigError("length must be even and >= 2", "lattice.theta");
    }
    if (lat.contains("L") && count(lat, "L", "lattice", 0) != theta.size()) {
      throw ConfigError("does not match the length of lattice.theta", "lattice.L");
    }
    const std::size_t n = theta.size();
    return {theta, n, json{{"L", n}, {"theta", theta}}};
  }

  for (auto key : {"L", "lambda", "theta0"}) {
    if (!lat.contains(key)) throw ConfigError("missing key", join("lattice", key));
  }
  const std::size_t sites = count(lat, "L", "lattice", 4);
  if (sites % 2 != 0) throw ConfigError("must be even", "lattice.L");
  const double lambda = number(lat, "lambda", "lattice");
  if (!(lambda > 0.0)) throw ConfigError("must be positive", "lattice.lambda");
  const double theta0 = number(lat, "theta0", "lattice");
  if (!(theta0 >= 0.0 && theta0 < std::numbers::pi / 2)) {
    throw ConfigError("must lie in [0, pi/2)", "lattice.theta0");
  }
  const json resolved{{"L", sites}, {"lambda", lambda}, {"theta0", theta0}};
  if (theta0 == 0.0) return {std::vector<double>(sites, 0.0), sites, resolved};
  if (walls_crowded(sites, lambda)) {
    warnings.push_back("lattice: L/lambda < 10, domain walls are not well separated");
  }
  return {TwoWallParams{sites, lambda, theta0}, sites, resolved};
}

constexpr double kDefaultSigmaSq = 50.0;

InitialKind parse_kind(const std::string& name) {
  if (name == "gaussian_real") return InitialKind::GaussianReal;
  if (name == "gaussian_complex_v") return InitialKind::GaussianComplexV;
  if (name == "gaussian_mixed") return InitialKind::GaussianMixed;
  if (name == "custom") return InitialKind::Custom;
  throw ConfigError("unknown kind '" + name +
                        "' (expected gaussian_real, gaussian_complex_v, gaussian_mixed or custom)",
                    "initial.kind");
}

std::pair<InitialStateSpec, json> parse_initial(const json& doc, std::size_t sites,
                                                const std::filesystem::path& base_dir) {
  const json empty = json::object();
  const json& init = doc.contains("initial") ? object_at(doc, "initial", "initial") : empty;
  check_keys(init, "initial", {"kind", "sigma_sq", "sigma", "center", "state_file"});
  InitialStateSpec spec;
  spec.kind = init.contains("kind") ? parse_kind(text(init, "kind", "initial")) : InitialKind::GaussianReal;
  json resolved{{"kind", to_string(spec.kind)}};

  if (spec.kind == InitialKind::Custom) {
    for (auto key : {"sigma_sq", "sigma", "center"}) {
      if (init.contains(key)) throw ConfigError("not used by kind custom", join("initial", key));
    }
    if (!init.contains("state_file")) throw ConfigError("missing key", "initial.state_file");
    std::filesystem::path file = text(init, "state_file", "initial");
    if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
    try {
      spec.custom = io::read_state_csv(file);
    } catch (const Error& e) {
      throw ConfigError(e.what(), "initial.state_file");
    }
    if (spec.custom.size() != sites) {
      throw ConfigError("state has " + std::to_string(spec.custom.size()) + " sites, lattice has " +
                            std::to_string(sites),
                        "initial.state_file");
    }
    resolved["state_file"] = std::filesystem::absolute(file).lexically_normal().string();
    return {spec, resolved};
  }

  if (init.contains("state_file")) throw ConfigError("only used by kind custom", "initial.state_file");
  if (init.contains("sigma_sq") && init.contains("sigma")) {
    throw ConfigError("give either sigma_sq or sigma, not both", "initial.sigma_sq");
  }
  if (!init.contains("sigma_sq") && !init.contains("sigma")) {
    spec.sigma = std::sqrt(kDefaultSigmaSq);
    resolved["sigma_sq"] = kDefaultSigmaSq;
  } else if (init.contains("sigma_sq")) {
    const double s2 = number(init, "sigma_sq", "initial");
    if (!(s2 > 0.0)) throw ConfigError("must be positive", "initial.sigma_sq");
    spec.sigma = std::sqrt(s2);
    resolved["sigma_sq"] = s2;
  } else {
    spec.sigma = number(init, "sigma", "initial");
    if (!(spec.sigma > 0.0)) throw ConfigError("must be positive", "initial.sigma");
    resolved["sigma"] = spec.sigma;
  }
  spec.center = init.contains("center") ? integer(init, "center", "initial") : 0;
  const long half = static_cast<long>(sites / 2);
  if (spec.center < -half || spec.center >= half) {
    throw ConfigError("must lie in [-L/2, L/2)", "initial.center");
  }
  resolved["center"] = spec.center;
  return {spec, resolved};
}

std::pair<NonlinearitySpec, json> parse_nonlinearity(const json& doc) {
  const json empty = json::object();
  const json& nl = doc.contains("nonlinearity") ? object_at(doc, "nonlinearity", "nonlinearity") : empty;
  check_keys(nl, "nonlinearity", {"kappa", "kappa_tilde", "n_hat", "m_hat", "ordering"});
  NonlinearitySpec spec;
  if (nl.contains("ordering")) {
    try {
      spec.ordering = parse_ordering(text(nl, "ordering", "nonlinearity"));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what(), "nonlinearity.ordering");
    }
  }
  json resolved{{"ordering", to_string(spec.ordering)}};
  if (nl.contains("kappa_tilde")) {
    if (nl.contains("kappa")) throw ConfigError("give either kappa or kappa_tilde", "nonlinearity.kappa");
    spec.kappa = number(nl, "kappa_tilde", "nonlinearity");
    if (nl.contains("n_hat")) spec.rotation_axis = vec3(nl, "n_hat", "nonlinearity");
    if (nl.contains("m_hat")) spec.measurement_axis = vec3(nl, "m_hat", "nonlinearity");
    try {
      validate_axis(spec.rotation_axis, "n_hat");
    } catch (const Error& e) {
      throw ConfigError(e.what(), "nonlinearity.n_hat");
    }
    try {
      validate_axis(spec.measurement_axis, "m_hat");
    } catch (const Error& e) {
      throw ConfigError(e.what(), "nonlinearity.m_hat");
    }
    const auto& n = spec.rotation_axis;
    const auto& m = spec.measurement_axis;
    resolved["kappa_tilde"] = spec.kappa;
    resolved["n_hat"] = {n.x, n.y, n.z};
    resolved["m_hat"] = {m.x, m.y, m.z};
  } else {
    if (nl.contains("n_hat") || nl.contains("m_hat")) {
      throw ConfigError("axes require kappa_tilde", nl.contains("n_hat") ? "nonlinearity.n_hat" : "nonlinearity.m_hat");
    }
    spec.kappa = nl.contains("kappa") ? number(nl, "kappa", "nonlinearity") : 0.0;
    resolved["kappa"] = spec.kappa;
  }
  return {spec, resolved};
}

}  // namespace

Document parse_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object", "");
  check_keys(doc, "", {"lattice", "initial", "nonlinearity", "run", "output", "sweep"});
  Document out;

  LatticeResult lattice = parse_lattice_impl(doc, out.warnings);
  out.run.profile = lattice.profile;
  auto [initial, initial_json] = parse_initial(doc, lattice.sites, base_dir);
  out.run.initial = std::move(initial);
  if (out.run.initial.kind == InitialKind::Custom) {
    const double n = norm(out.run.initial.custom);
    if (std::abs(n - 1.0) > 1e-12) {
      out.warnings.push_back("initial: state_file has norm " + io::format_double(n) + ", it will be renormalized");
    }
  }
  auto [nonlinearity, nonlinearity_json] = parse_nonlinearity(doc);
  out.run.nonlinearity = nonlinearity;

  if (!doc.contains("run")) throw ConfigError("missing section", "run");
  const json& run = object_at(doc, "run", "run");
  check_keys(run, "run", {"steps", "record_every", "stride", "observables"});
  if (!run.contains("steps")) throw ConfigError("missing key", "run.steps");
  out.run.steps = count(run, "steps", "run", 0);
  if (run.contains("record_every")) out.run.record_every = count(run, "record_every", "run", 1);
  if (run.contains("stride")) out.run.stride = count(run, "stride", "run", 1);
  std::vector<std::string> observables;
  if (run.contains("observables")) {
    observables = string_list(run, "observables", "run", {"density", "m_z", "final_state"});
    for (const auto& o : observables) {
      if (o == "density") out.run.observables.density = true;
      if (o == "m_z") out.run.observables.m_z = true;
      if (o == "final_state") out.run.observables.final_state = true;
    }
  }

  std::vector<std::string> formats{"csv", "ndjson"};
  if (doc.contains("output")) {
    const json& output = object_at(doc, "output", "output");
    check_keys(output, "output", {"directory", "formats"});
    if (output.contains("directory")) out.output.directory = text(output, "directory", "output");
    if (output.contains("formats")) formats = string_list(output, "formats", "output", {"csv", "ndjson"});
    out.output.csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
    out.output.ndjson = std::find(formats.begin(), formats.end(), "ndjson") != formats.end();
  }

  if (doc.contains("sweep")) {
    const json& sweep = object_at(doc, "sweep", "sweep");
    if (sweep.empty()) throw ConfigError("empty parameter grid", "sweep");
    for (const auto& [path, values] : sweep.items()) {
      const std::string field = "sweep." + path;
      if (!values.is_array() || values.empty()) throw ConfigError("expected a non-empty array", field);
      const auto dot = path.find('.');
      const std::string section = path.substr(0, dot);
      if (dot == std::string::npos || section == "sweep" || section == "output" ||
          !std::set<std::string>{"lattice", "initial", "nonlinearity", "run"}.contains(section)) {
        throw ConfigError("sweep keys are section.key paths into lattice, initial, nonlinearity or run", field);
      }
      out.sweep.push_back({path, std::vector<json>(values.begin(), values.end())});
    }
  }

  try {
    out.run.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what(), "run");
  }

  out.resolved = json{{"lattice", lattice.resolved},
                      {"initial", initial_json},
                      {"nonlinearity", nonlinearity_json},
                      {"run",
                       {{"steps", out.run.steps},
                        {"record_every", out.run.record_every},
                        {"stride", out.run.stride},
                        {"observables", observables}}},
                      {"output", {{"formats", formats}}}};
  if (!out.output.directory.empty()) out.resolved["output"]["directory"] = out.output.directory.string();
  return out;
}

ProfileSpec parse_lattice(const json& doc, std::vector<std::string>& warnings) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object", "");
  return parse_lattice_impl(doc, warnings).profile;
}

json decode(std::string_view text_in) {
  try {
    return json::parse(text_in.begin(), text_in.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text_in.size());
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < byte; ++i) line += text_in[i] == '\n';
    throw ConfigError(std::string("syntax error at line ") + std::to_string(line) + ": " + e.what(), "",
                      line);
  }
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string(), "");
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode(buf.str());
}

Document parse(std::string_view text_in, const std::filesystem::path& base_dir) {
  return parse_json(decode(text_in), base_dir);
}

Document load(const std::filesystem::path& path) {
  return parse_json(read_file(path), path.parent_path());
}

std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& cli,
                                         const OutputSpec& spec, std::string_view fallback_name) {
  if (cli) return *cli;
  if (!spec.directory.empty()) return spec.directory;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return std::filesystem::path(env) / std::string(fallback_name);
  }
  return std::filesystem::path(std::string(fallback_name));
}

std::vector<json> expand_sweep(const json& base, const std::vector<SweepAxis>& axes) {
  std::vector<json> grid{base};
  grid.front().erase("sweep");
  for (const auto& axis : axes) {
    std::string pointer = "/" + axis.path;
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    std::vector<json> next;
    next.reserve(grid.size() * axis.values.size());
    for (const auto& point : grid) {
      for (const auto& value : axis.values) {
        json copy = point;
        copy[json::json_pointer(pointer)] = value;
        next.push_back(std::move(copy));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

}  // namespace qwalk::config
