#include "wue/harness/config.hpp"

#include <fstream>
#include <sstream>

#include "wue/error.hpp"
#include "wue/harness/experiments.hpp"

namespace wue::harness {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string type_name(const Json& v) {
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  return v.type_name();
}

[[noreturn]] void fail(std::string_view origin, const std::string& msg) {
  throw ConfigError(std::string(origin) + ": " + msg);
}

Json merge(const Json& doc, const Json& def, const std::string& path, std::string_view origin);

Json merge_value(const Json& doc, const Json& def, const std::string& path, std::string_view origin) {
  if (def.is_object()) {
    if (!doc.is_object()) fail(origin, "key '" + path + "' must be an object, got " + type_name(doc));
    return merge(doc, def, path, origin);
  }
  if (def.is_array()) {
    if (!doc.is_array()) fail(origin, "key '" + path + "' must be an array, got " + type_name(doc));
    Json out = Json::array();
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      out.push_back(def.empty() ? doc[i] : merge_value(doc[i], def[0], p, origin));
    }
    return out;
  }
  // Integer defaults demand integers; float defaults accept any number.
  const bool ok = def.is_number_integer()  ? doc.is_number_integer()
                  : def.is_number()        ? doc.is_number()
                  : def.is_string()        ? doc.is_string()
                  : def.is_boolean()       ? doc.is_boolean()
                                           : true;
  if (!ok) fail(origin, "key '" + path + "' must be " + (def.is_number_float() ? "a number" : "of type " + type_name(def)) +
                            ", got " + type_name(doc));
  return doc;
}

Json merge(const Json& doc, const Json& def, const std::string& path, std::string_view origin) {
  Json out = def;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string p = join(path, it.key());
    if (!def.contains(it.key())) fail(origin, "unknown key '" + p + "'");
    out[it.key()] = merge_value(it.value(), def[it.key()], p, origin);
  }
  return out;
}

void require_positive(const Json& v, const std::string& path, std::string_view origin) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) require_positive(it.value(), join(path, it.key()), origin);
  } else if (v.is_number() && !(v.get<double>() > 0.0)) {
    fail(origin, "tolerance '" + path + "' must be positive");
  }
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void render(std::ostringstream& os, const Json& v, const ConfigSchema& schema, const std::string& path, int indent) {
  const std::string pad(indent + 2, ' ');
  os << "{\n";
  std::size_t i = 0;
  for (auto it = v.begin(); it != v.end(); ++it, ++i) {
    const std::string p = join(path, it.key());
    if (auto c = schema.comments.find(p); c != schema.comments.end()) os << pad << "// " << c->second << "\n";
    os << pad << Json(it.key()).dump() << ": ";
    if (it.value().is_object())
      render(os, it.value(), schema, p, indent + 2);
    else
      os << it.value().dump();
    os << (i + 1 < v.size() ? ",\n" : "\n");
  }
  os << std::string(indent, ' ') << "}";
}

}  // namespace

const Json& ExperimentConfig::at(std::string_view dotted) const {
  const Json* node = &values_;
  std::string_view rest = dotted;
  while (!rest.empty()) {
    const auto dot = rest.find('.');
    const std::string key(rest.substr(0, dot));
    if (!node->is_object() || !node->contains(key))
      throw ConfigError("configuration has no key '" + std::string(dotted) + "'");
    node = &(*node)[key];
    rest = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
  }
  return *node;
}

double ExperimentConfig::tolerance(std::string_view name) const { return number("tolerances." + std::string(name)); }

void ExperimentConfig::set(std::string_view dotted, Json value) {
  Json* node = &values_;
  std::string_view rest = dotted;
  while (true) {
    const auto dot = rest.find('.');
    const std::string key(rest.substr(0, dot));
    if (dot == std::string_view::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    rest = rest.substr(dot + 1);
  }
}

ConfigSchema common_schema(std::string_view experiment) {
  ConfigSchema s;
  s.defaults["experiment"] = std::string(experiment);
  s.defaults["hbar"] = 1.0;
  s.defaults["seed"] = 20240611;
  s.defaults["output"]["dir"] = "reports";
  s.defaults["output"]["format"] = "json";
  s.comments["experiment"] = "experiment name (see `list`)";
  s.comments["hbar"] = "Planck constant; every symbol and momentum is measured in these units";
  s.comments["seed"] = "seed of every random draw in the experiment";
  s.comments["output"] = "report destination; --out and --format override these";
  s.comments["output.format"] = "json (report + series CSV) or csv (check table + series CSV)";
  return s;
}

Json validate_against(const Json& doc, const ConfigSchema& schema, std::string_view origin) {
  if (!doc.is_object()) fail(origin, "top level must be an object");
  Json merged = merge(doc, schema.defaults, "", origin);
  if (!(merged["hbar"].get<double>() > 0.0)) fail(origin, "key 'hbar' must be positive");
  if (merged["seed"].get<long long>() < 0) fail(origin, "key 'seed' must be non-negative");
  const std::string fmt = merged["output"]["format"].get<std::string>();
  if (fmt != "json" && fmt != "csv") fail(origin, "key 'output.format' must be \"json\" or \"csv\"");
  if (merged.contains("tolerances")) require_positive(merged["tolerances"], "tolerances", origin);
  return merged;
}

ExperimentConfig parse_config(std::string_view text, std::string_view origin) {
  Json doc;
  try {
    doc = Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string what = e.what();
    if (const auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    fail(std::string(origin) + ":" + std::to_string(line) + ":" + std::to_string(col), what);
  }
  if (!doc.is_object()) fail(origin, "top level must be an object");
  if (!doc.contains("experiment")) fail(origin, "missing required key 'experiment'");
  if (!doc["experiment"].is_string()) fail(origin, "key 'experiment' must be a string");
  const auto& info = find_experiment(doc["experiment"].get<std::string>());
  return ExperimentConfig(info.name, validate_against(doc, info.schema, origin));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string render_template(const ConfigSchema& schema) {
  std::ostringstream os;
  render(os, schema.defaults, schema, "", 0);
  os << "\n";
  return os.str();
}

}  // namespace wue::harness
