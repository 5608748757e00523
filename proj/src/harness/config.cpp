#include "dcpower/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "dcpower/errors.hpp"

namespace dcpower::harness {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Grid parse_grid(const json& obj, const Grid& fallback, const char* what) {
  Grid g{get_or(obj, "start", fallback.start), get_or(obj, "stop", fallback.stop),
         get_or(obj, "step", fallback.step)};
  if (!(g.step > 0.0) || !(g.stop >= g.start)) {
    throw ConfigError(std::string(what) + " grid must be nonempty and strictly increasing");
  }
  return g;
}

// Per-class values may be given as an array in class order or as an object
// keyed by class name.
template <typename T>
std::vector<T> per_class(const json& node, const std::vector<ClassDef>& classes, T missing,
                         const char* what) {
  std::vector<T> out(classes.size(), missing);
  if (node.is_null()) return out;
  if (node.is_array()) {
    if (node.size() != classes.size()) {
      throw ConfigError(std::string(what) + " needs one entry per class");
    }
    for (std::size_t i = 0; i < classes.size(); ++i) out[i] = node[i].get<T>();
    return out;
  }
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      bool found = false;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i].name == it.key()) {
          out[i] = it.value().get<T>();
          found = true;
        }
      }
      if (!found) throw ConfigError(std::string(what) + " names unknown class '" + it.key() + "'");
    }
    return out;
  }
  throw ConfigError(std::string(what) + " must be an array or an object");
}

void merge_into(json& base, const json& overlay) {
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    if (it.value().is_object() && base.contains(it.key()) && base[it.key()].is_object()) {
      merge_into(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

}  // namespace

std::vector<double> Grid::points() const {
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::size_t ExperimentConfig::class_index(const std::string& name) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].name == name) return i;
  }
  throw ConfigError("no class named '" + name + "'");
}

std::vector<DelayClass> ExperimentConfig::delay_classes() const {
  const auto model = system.efficiency_model();
  const double gamma_star = solve_gamma_star(model).gamma;
  std::vector<DelayClass> out;
  for (const auto& def : classes) {
    auto cls = target_sir(def.max_transmissions, def.beta, model, gamma_star);
    cls.name = def.name;
    out.push_back(std::move(cls));
  }
  return out;
}

json default_config_json() {
  return json::parse(R"({
    "system": {
      "info_bits": 100,
      "packet_bits": 100,
      "rate": 100000.0,
      "noise_power": 5e-16,
      "processing_gain": 100,
      "p_max": 1.0,
      "gain_model": {"kind": "unit", "kappa": 1.0, "distance": 100.0}
    },
    "classes": [
      {"name": "A", "D": 1, "beta": 0.99},
      {"name": "B", "D": 3, "beta": 0.90}
    ],
    "scenario": {
      "receivers": ["mf", "de", "mmse"],
      "alphas": [0.1, 0.9],
      "fraction_grid": {"start": 0.0, "stop": 1.0, "step": 0.05},
      "swept_class": "A",
      "beta_grid": {"start": 0.5, "stop": 0.995, "step": 0.005},
      "delay_limits": [1, 2, 3],
      "counts": {"A": 0, "B": 10},
      "mix": {"A": 0.5, "B": 0.5},
      "trials": 200,
      "seed": 42,
      "gap_band": 0.05,
      "censor_limit": 0.1,
      "tolerance": 1e-10,
      "max_iterations": 10000,
      "threads": 0
    },
    "output": {"directory": "results", "formats": ["csv"]}
  })");
}

ExperimentConfig parse_config(const json& user_doc) {
  if (!user_doc.is_object()) throw ConfigError("config must be a JSON object");
  json doc = default_config_json();
  // A user class list replaces the default one wholesale, as do per-class maps.
  if (user_doc.contains("classes")) doc.erase("classes");
  if (user_doc.contains("scenario")) {
    for (const char* key : {"counts", "mix"}) {
      if (user_doc["scenario"].contains(key)) doc["scenario"].erase(key);
    }
  }
  merge_into(doc, user_doc);

  ExperimentConfig cfg;
  cfg.source = doc;
  try {
    const auto& sys = doc.at("system");
    auto& p = cfg.system;
    p.info_bits = get_or(sys, "info_bits", p.info_bits);
    p.packet_bits = get_or(sys, "packet_bits", p.packet_bits);
    p.rate = get_or(sys, "rate", p.rate);
    p.noise_power = get_or(sys, "noise_power", p.noise_power);
    p.processing_gain = get_or(sys, "processing_gain", p.processing_gain);
    p.p_max = get_or(sys, "p_max", p.p_max);
    const json gm = sys.value("gain_model", json::object());
    const auto kind = get_or<std::string>(gm, "kind", "unit");
    if (kind == "unit") {
      p.gain_model.kind = GainModel::Kind::Unit;
    } else if (kind == "path_loss") {
      p.gain_model.kind = GainModel::Kind::PathLoss;
    } else {
      throw ConfigError("gain_model.kind must be 'unit' or 'path_loss'");
    }
    p.gain_model.kappa = get_or(gm, "kappa", p.gain_model.kappa);
    p.gain_model.distance = get_or(gm, "distance", p.gain_model.distance);
    p.validate();

    for (const auto& c : doc.at("classes")) {
      ClassDef def{get_or<std::string>(c, "name", ""), get_or(c, "D", 0), get_or(c, "beta", 0.0)};
      if (def.name.empty()) throw ConfigError("every class needs a name");
      eta(def.max_transmissions, def.beta);  // domain check
      cfg.classes.push_back(def);
    }
    if (cfg.classes.empty()) throw ConfigError("at least one class is required");

    const auto& sc = doc.at("scenario");
    auto& s = cfg.scenario;
    s.receivers.clear();
    for (const auto& r : sc.at("receivers")) s.receivers.push_back(parse_receiver(r.get<std::string>()));
    if (s.receivers.empty()) throw ConfigError("scenario.receivers is empty");
    s.alphas = sc.at("alphas").get<std::vector<double>>();
    if (s.alphas.empty()) throw ConfigError("scenario.alphas is empty");
    for (std::size_t i = 1; i < s.alphas.size(); ++i) {
      if (!(s.alphas[i] > s.alphas[i - 1])) throw ConfigError("scenario.alphas must be strictly increasing");
    }
    s.fraction_grid = parse_grid(sc.value("fraction_grid", json::object()), s.fraction_grid, "fraction");
    s.swept_class = get_or(sc, "swept_class", s.swept_class);
    s.beta_grid = parse_grid(sc.value("beta_grid", json::object()), s.beta_grid, "beta");
    s.delay_limits = sc.at("delay_limits").get<std::vector<int>>();
    if (s.delay_limits.empty()) throw ConfigError("scenario.delay_limits is empty");
    s.counts = per_class<std::size_t>(sc.value("counts", json()), cfg.classes, 0, "scenario.counts");
    s.mix = per_class<double>(sc.value("mix", json()), cfg.classes, 0.0, "scenario.mix");
    double mix_sum = 0.0;
    for (double m : s.mix) {
      if (m < 0.0) throw ConfigError("scenario.mix entries must be nonnegative");
      mix_sum += m;
    }
    if (std::abs(mix_sum - 1.0) > 1e-9) throw ConfigError("scenario.mix must sum to 1");
    s.trials = get_or(sc, "trials", s.trials);
    s.seed = get_or(sc, "seed", s.seed);
    s.gap_band = get_or(sc, "gap_band", s.gap_band);
    s.censor_limit = get_or(sc, "censor_limit", s.censor_limit);
    s.tolerance = get_or(sc, "tolerance", s.tolerance);
    s.max_iterations = get_or(sc, "max_iterations", s.max_iterations);
    s.threads = get_or(sc, "threads", s.threads);
    if (!(s.tolerance > 0.0) || s.max_iterations < 1 || s.trials < 1) {
      throw ConfigError("tolerance, max_iterations and trials must be positive");
    }

    const auto& out = doc.at("output");
    cfg.output.directory = get_or(out, "directory", cfg.output.directory);
    cfg.output.formats = get_or(out, "formats", cfg.output.formats);
    for (const auto& f : cfg.output.formats) {
      if (f != "csv" && f != "dat") throw ConfigError("output format must be 'csv' or 'dat'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig default_config() { return parse_config(json::object()); }

std::string canonical_json(const json& doc) { return doc.dump(); }

std::string config_hash(const json& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json(doc)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dcpower::harness
