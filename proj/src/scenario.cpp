#include "bhsim/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <vector>

#include "bhsim/report.hpp"

namespace bh::scenario {

namespace {

using engine::SimConfig;

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += report::fmt(v);
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<void(SimConfig&, const std::string& name, const std::string& text)> set;
  std::function<std::string(const SimConfig&)> get;
};

Field real(std::string section, std::string key, double SimConfig::*member) {
  return {section, key,
          [member](SimConfig& c, const std::string& name, const std::string& t) {
            c.*member = parse_double(name, t);
          },
          [member](const SimConfig& c) { return report::fmt(c.*member); }};
}

template <typename Get>
Field real_at(std::string section, std::string key, Get access) {
  return {section, key,
          [access](SimConfig& c, const std::string& name, const std::string& t) {
            access(c) = parse_double(name, t);
          },
          [access](const SimConfig& c) { return report::fmt(access(c)); }};
}

template <typename Get>
Field integer_at(std::string section, std::string key, std::int64_t lo, std::int64_t hi, Get access) {
  return {section, key,
          [access, lo, hi](SimConfig& c, const std::string& name, const std::string& t) {
            const std::int64_t v = parse_int(name, t);
            if (v < lo || v > hi)
              throw ConfigError(name + ": must lie in [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "], got " + t);
            access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(v);
          },
          [access](const SimConfig& c) {
            return std::to_string(access(c));
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(integer_at("system", "rings", 0, geo::kMaxGridRings,
                           [](auto& c) -> auto& { return c.rings; }));
    f.push_back(integer_at("system", "num_beams", 1, 1'000'000,
                           [](auto& c) -> auto& { return c.num_beams; }));
    f.push_back(real("system", "p_max", &SimConfig::p_max));
    f.push_back(real("system", "sink_density", &SimConfig::sink_density));
    f.push_back(integer_at("system", "iteration_max", 1, 1'000'000,
                           [](auto& c) -> auto& { return c.iteration_max; }));
    f.push_back(integer_at("system", "seed", 0, std::numeric_limits<std::int64_t>::max(),
                           [](auto& c) -> auto& { return c.seed; }));
    f.push_back({"system", "algorithm",
                 [](SimConfig& c, const std::string& name, const std::string& t) {
                   const auto a = engine::parse_algorithm(t);
                   if (!a)
                     throw ConfigError(name + ": unknown algorithm '" + t +
                                       "'; valid names: " + engine::algorithm_names());
                   c.algorithm = *a;
                 },
                 [](const SimConfig& c) { return std::string(engine::to_string(c.algorithm)); }});

    f.push_back(real("timing", "t_b", &SimConfig::t_b));
    f.push_back(real("timing", "t_p", &SimConfig::t_p));
    f.push_back(real("timing", "t_s", &SimConfig::t_s));
    f.push_back(real("timing", "t_max", &SimConfig::t_max));

    f.push_back(real_at("traffic", "lambda", [](auto& c) -> auto& { return c.arrivals.lambda; }));
    f.push_back(real_at("traffic", "packet_bits",
                        [](auto& c) -> auto& { return c.arrivals.packet_bits; }));
    f.push_back({"traffic", "lambda_multiplier",
                 [](SimConfig& c, const std::string& name, const std::string& t) {
                   c.lambda_multiplier.clear();
                   std::stringstream ss(t);
                   std::string item;
                   while (std::getline(ss, item, ',')) {
                     const auto b = item.find_first_not_of(" \t");
                     const auto e = item.find_last_not_of(" \t");
                     if (b == std::string::npos) throw ConfigError(name + ": empty list entry");
                     c.lambda_multiplier.push_back(parse_double(name, item.substr(b, e - b + 1)));
                   }
                 },
                 [](const SimConfig& c) { return join_doubles(c.lambda_multiplier); }});

    f.push_back(real_at("link", "carrier_freq", [](auto& c) -> auto& { return c.budget.carrier_freq; }));
    f.push_back(real_at("link", "bandwidth", [](auto& c) -> auto& { return c.budget.bandwidth; }));
    f.push_back(real_at("link", "noise_power", [](auto& c) -> auto& { return c.budget.noise_power; }));
    f.push_back(real_at("link", "other_loss_db", [](auto& c) -> auto& { return c.budget.other_loss_db; }));

    f.push_back(real_at("antenna", "tx_gain_dbi", [](auto& c) -> auto& { return c.tx.g_max_dbi; }));
    f.push_back(real_at("antenna", "tx_theta_3db", [](auto& c) -> auto& { return c.tx.theta_3db; }));
    f.push_back(real_at("antenna", "rx_gain_dbi", [](auto& c) -> auto& { return c.rx.g_max_dbi; }));
    f.push_back(real_at("antenna", "rx_theta_3db", [](auto& c) -> auto& { return c.rx.theta_3db; }));

    f.push_back(real_at("orbit", "altitude", [](auto& c) -> auto& { return c.orbit.altitude; }));
    f.push_back(real_at("orbit", "subsat_lat", [](auto& c) -> auto& { return c.orbit.initial_subsat.lat; }));
    f.push_back(real_at("orbit", "subsat_lon", [](auto& c) -> auto& { return c.orbit.initial_subsat.lon; }));
    f.push_back(real_at("orbit", "track_azimuth", [](auto& c) -> auto& { return c.orbit.track_azimuth; }));
    f.push_back(real_at("orbit", "ground_speed", [](auto& c) -> auto& { return c.orbit.ground_speed; }));

    f.push_back(real_at("grid", "center_lat", [](auto& c) -> auto& { return c.grid_center.lat; }));
    f.push_back(real_at("grid", "center_lon", [](auto& c) -> auto& { return c.grid_center.lon; }));
    f.push_back(real("grid", "footprint_radius", &SimConfig::footprint_radius));

    f.push_back(integer_at("ga", "generations", 1, 1'000'000,
                           [](auto& c) -> auto& { return c.ga.generations; }));
    f.push_back(integer_at("ga", "population", 1, 1'000'000,
                           [](auto& c) -> auto& { return c.ga.population; }));
    f.push_back(real_at("ga", "p_mut", [](auto& c) -> auto& { return c.ga.p_mut; }));
    f.push_back(real_at("ga", "p_cro", [](auto& c) -> auto& { return c.ga.p_cro; }));
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

}  // namespace

SimConfig parse(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed scenario file: ") + e.what());
  }

  SimConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(section + ": keys must live inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string name = section + "." + key;
      const Field* field = find_field(section, key);
      if (!field) throw ConfigError(name + ": unknown key");
      field->set(cfg, name, value.data());
    }
  }
  cfg.budget.slot = cfg.t_b;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return cfg;
}

SimConfig load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  return parse(in);
}

std::string render(const SimConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    const std::string value = f.get(config);
    if (f.key == "lambda_multiplier" && value.empty()) continue;
    out << f.key << " = " << value << '\n';
  }
  return out.str();
}

}  // namespace bh::scenario
