#pragma once

// Population and fitness-history persistence.
//
// Population files are JSON documents:
//   { "format": "ptx-population", "version": 1, "generation": G, "seed": S,
//     "next_id": N, "config": { <section>: { <key>: "<value>" } },
//     "members": [ { "id": .., "lineage": .. | null, "genes": [..] } ] }
// Genes are written in shortest round-trip decimal form.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptx/config.hpp"
#include "ptx/error.hpp"
#include "ptx/evolution.hpp"
#include "ptx/table.hpp"

namespace ptx {

inline constexpr const char* kPopulationFormat = "ptx-population";
inline constexpr int kPopulationVersion = 1;

struct PopulationFile {
  EvolutionConfig config;
  Population population;
};

inline std::string population_to_json(const Population& pop, const EvolutionConfig& cfg) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["format"] = kPopulationFormat;
  doc["version"] = kPopulationVersion;
  doc["generation"] = pop.generation;
  doc["seed"] = pop.rng_seed;
  doc["next_id"] = pop.next_id;
  ordered_json config = ordered_json::object();
  for (const auto& section : to_document(cfg)) {
    ordered_json s = ordered_json::object();
    for (const auto& e : section.entries) s[e.key] = e.value;
    config[section.name] = std::move(s);
  }
  doc["config"] = std::move(config);
  ordered_json members = ordered_json::array();
  for (const auto& m : pop.members) {
    ordered_json j;
    j["id"] = m.id;
    j["lineage"] = m.lineage ? ordered_json(*m.lineage) : ordered_json(nullptr);
    j["genes"] = m.genes;
    members.push_back(std::move(j));
  }
  doc["members"] = std::move(members);
  return doc.dump(1) + "\n";
}

inline PopulationFile population_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("population file is not valid JSON: ") + err.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kPopulationFormat)
      throw ConfigError("not a ptx population file");
    const int version = doc.at("version").get<int>();
    if (version != kPopulationVersion)
      throw ConfigError("unsupported population file version " + std::to_string(version));

    ConfigDocument config_doc;
    for (const auto& [name, section] : doc.at("config").items()) {
      ConfigSection s{name, {}};
      for (const auto& [key, value] : section.items()) s.entries.push_back({key, value.get<std::string>(), 0});
      config_doc.push_back(std::move(s));
    }
    PopulationFile file;
    apply_config(config_doc, file.config);
    file.config.validate();

    auto& pop = file.population;
    pop.generation = doc.at("generation").get<std::uint64_t>();
    pop.rng_seed = doc.at("seed").get<std::uint64_t>();
    pop.next_id = doc.at("next_id").get<std::uint64_t>();
    for (const auto& m : doc.at("members")) {
      NetworkGenome g;
      g.id = m.at("id").get<std::uint64_t>();
      if (!m.at("lineage").is_null()) g.lineage = m.at("lineage").get<std::uint64_t>();
      g.genes = m.at("genes").get<std::vector<double>>();
      (void)decode(g, file.config.trial.network);
      pop.members.push_back(std::move(g));
    }
    return file;
  } catch (const json::exception& err) {
    throw ConfigError(std::string("malformed population file: ") + err.what());
  }
}

inline std::string history_to_csv(const std::vector<HistoryRow>& history) {
  std::ostringstream os;
  os << "generation,best,mean,light_angle\n";
  for (const auto& r : history)
    os << r.generation << ',' << format_double(r.best) << ',' << format_double(r.mean) << ','
       << format_double(r.light_angle) << '\n';
  return os.str();
}

}  // namespace ptx
