#include <gtest/gtest.h>

#include <random>
#include <string>

#include "ptx/config.hpp"
#include "ptx/population_io.hpp"
#include "ptx/table.hpp"
#include "ptx/trial.hpp"

using namespace ptx;

namespace {

std::string error_of(const std::string& text) {
  try {
    EvolutionConfig cfg;
    apply_config(parse_config(text), cfg);
    cfg.validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesSectionsAndComments) {
  const std::string text =
      "# experiment 3\n"
      "[interference]\n"
      "kind = squared   # unavoidable\n"
      "lambda = 0.5\n"
      "\n"
      "[trial]\n"
      "duration = 20\n"
      "[evolution]\n"
      "seed = 42\n"
      "centre_crossing = false\n";
  EvolutionConfig cfg;
  apply_config(parse_config(text), cfg);
  EXPECT_EQ(cfg.trial.interference.kind, InterferenceKind::Squared);
  EXPECT_EQ(cfg.trial.interference.lambda, 0.5);
  EXPECT_EQ(cfg.trial.duration, 20.0);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_FALSE(cfg.centre_crossing);
  EXPECT_EQ(cfg.population_size, 50u);
}

TEST(Config, ErrorsAreLineAnchored) {
  EXPECT_NE(error_of("[trial]\nduration = ten\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("[trial]\n\nbogus = 1\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("[nonsense]\nx = 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("duration = 1\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("[trial\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("[interference]\nkind = cubic\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("[evolution]\npopulation = -4\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("[trial]\nnovalue\n").find("line 2"), std::string::npos);
  EXPECT_FALSE(error_of("[evolution]\npopulation = 7\n").empty());
}

TEST(Config, DefaultsRoundTrip) {
  EvolutionConfig cfg;
  cfg.trial.interference.kind = InterferenceKind::Sinusoidal;
  cfg.trial.interference.lambda = 0.5;
  cfg.seed = 123456789012345ull;
  cfg.mutation_sigma = 0.0731;
  const std::string text = to_ini(cfg);
  EvolutionConfig back;
  apply_config(parse_config(text), back);
  EXPECT_EQ(to_ini(back), text);
  EXPECT_EQ(back.seed, cfg.seed);
  EXPECT_EQ(back.trial.initial_state.alpha, cfg.trial.initial_state.alpha);
}

TEST(PopulationFile, RoundTrip) {
  EvolutionConfig cfg;
  cfg.population_size = 4;
  cfg.trial.interference.kind = InterferenceKind::Sigmoidal;
  cfg.trial.interference.lambda = 0.5;
  auto pop = initial_population(cfg);
  pop.members[2].lineage = 1;
  pop.generation = 17;
  const auto text = population_to_json(pop, cfg);
  auto file = population_from_json(text);
  EXPECT_EQ(file.population.generation, 17u);
  EXPECT_EQ(file.population.members.size(), 4u);
  EXPECT_EQ(file.population.members[2].lineage, 1u);
  EXPECT_FALSE(file.population.members[0].lineage);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(file.population.members[i].genes, pop.members[i].genes);
  EXPECT_EQ(file.config.trial.interference.kind, InterferenceKind::Sigmoidal);
  EXPECT_EQ(population_to_json(file.population, file.config), text);
}

TEST(PopulationFile, RejectsMalformed) {
  EXPECT_THROW(population_from_json("{not json"), ConfigError);
  EXPECT_THROW(population_from_json(R"({"format":"other","version":1})"), ConfigError);
  EvolutionConfig cfg;
  cfg.population_size = 2;
  auto text = population_to_json(initial_population(cfg), cfg);
  auto bad = text;
  bad.replace(bad.find("\"version\": 1"), 12, "\"version\": 9");
  EXPECT_THROW(population_from_json(bad), ConfigError);
  auto short_genes = nlohmann::json::parse(text);
  short_genes["members"][0]["genes"] = std::vector<double>{0.5, 0.5};
  EXPECT_THROW(population_from_json(short_genes.dump()), ConfigError);
}

TEST(History, Csv) {
  std::vector<HistoryRow> rows{{0, 1.5, 2.25, 0.125}, {1, 1.0, INFINITY, 3.0}};
  EXPECT_EQ(history_to_csv(rows), "generation,best,mean,light_angle\n0,1.5,2.25,0.125\n1,1,inf,3\n");
}

TEST(TimeSeriesText, ParseEmitIsByteStable) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0.0, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    TimeSeries ts({"t", "a", "b"});
    ts.meta().emplace_back("light_x", "1.5");
    for (int k = 0; k < 50; ++k) ts.append(std::vector<double>{0.01 * k, d(rng), d(rng) * 1e-9});
    const auto text = ts.to_string();
    auto back = TimeSeries::from_string(text);
    EXPECT_EQ(back.to_string(), text);
    EXPECT_EQ(back, ts);
  }
}

TEST(TimeSeriesText, TrialLogRoundTrip) {
  TrialConfig cfg;
  cfg.log = true;
  cfg.duration = 1.0;
  Rng rng(1);
  NetworkGenome g;
  g.genes.resize(genome_length(10));
  std::uniform_real_distribution<double> u(0, 1);
  for (auto& v : g.genes) v = u(rng);
  const auto text = run_trial(g, cfg).log->to_string();
  EXPECT_EQ(TimeSeries::from_string(text).to_string(), text);
  EXPECT_EQ(text.substr(text.find("t,")).substr(0, 20), "t,x,y,alpha,s_left,s");
}

TEST(TimeSeriesText, Errors) {
  EXPECT_THROW(TimeSeries::from_string(""), ConfigError);
  EXPECT_THROW(TimeSeries::from_string("a,b\n1,2\n3\n"), ConfigError);
  EXPECT_THROW(TimeSeries::from_string("a,b\n1,x\n"), ConfigError);
}

TEST(Numbers, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(parse_double("0.30000000000000004"), 0.30000000000000004);
  EXPECT_EQ(parse_double(" 2.5 "), 2.5);
  EXPECT_FALSE(parse_double("2.5x"));
  EXPECT_FALSE(parse_double(""));
}
