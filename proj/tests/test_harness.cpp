#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "smoothlm/experiment.hpp"

using namespace smoothlm;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.order = 2;
  c.sizes = {100};
  c.runs = 2;
  c.seed = 3;
  c.dev_words = 600;
  c.test_words = 600;
  c.block_sentences = 10;
  return c;
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& row : r.rows) out << to_csv(row) << '\n';
  return out.str();
}

}  // namespace

TEST_CASE("baseline compared with itself") {
  const auto text = fixtures::zipf_text(800, 120, 1);
  auto config = small_config();
  config.methods = {Method::InterpBaseline};
  const auto r = run_experiment(config, text);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(row.error.empty());
    REQUIRE(row.delta_bits.has_value());
    CHECK(*row.delta_bits == 0.0);
    CHECK(row.params.count("lambda1") == 1);
  }
  CHECK(r.rows[0].seed == 3);
  CHECK(r.rows[1].seed == 4);
  CHECK(r.rows[0].entropy_bits != r.rows[1].entropy_bits);
}

TEST_CASE("runs are reproducible to the byte") {
  const auto text = fixtures::zipf_text(800, 120, 2);
  auto config = small_config();
  config.methods = {Method::PlusDelta, Method::Katz, Method::NewAvgCount};
  const auto a = csv_of(run_experiment(config, text));
  const auto b = csv_of(run_experiment(config, text));
  CHECK(a == b);
  CHECK(a.rfind("method,order,train_sentences,run,seed,entropy_bits,delta_bits,params,error\n", 0) == 0);
}

TEST_CASE("baseline runs first and failures stay in their row") {
  const auto text = fixtures::zipf_text(800, 120, 4);
  auto config = small_config();
  config.runs = 1;
  config.methods = {Method::PlusOne, Method::ChurchGale};
  config.optimize = false;
  config.params = {{"cmin", 0}};  // invalid for church-gale only
  const auto r = run_experiment(config, text);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].method == Method::InterpBaseline);
  CHECK(r.rows[1].error.empty());
  CHECK(r.rows[1].delta_bits.has_value());
  CHECK(r.rows[2].method == Method::ChurchGale);
  CHECK_FALSE(r.rows[2].error.empty());
  CHECK_FALSE(r.rows[2].entropy_bits.has_value());
  const std::string line = to_csv(r.rows[2]);
  CHECK(line.rfind("church-gale,2,100,0,3,,,", 0) == 0);
}

TEST_CASE("every method sees the same split") {
  const auto text = fixtures::zipf_text(900, 100, 6);
  auto config = small_config();
  config.runs = 1;
  config.sizes = {50, 200};
  config.methods = smoothing_methods();
  config.optimize = false;
  std::vector<ResultRow> streamed;
  const auto r = run_experiment(config, text, [&](const ResultRow& row) { streamed.push_back(row); });
  CHECK(streamed.size() == r.rows.size());
  CHECK(r.rows.size() == 2 * smoothing_methods().size());
  for (const auto& row : r.rows) {
    CAPTURE(method_name(row.method));
    CHECK(row.error.empty());
    CHECK(row.entropy_bits.has_value());
  }
}

TEST_CASE("aggregation") {
  CHECK(mean_and_sd({1.0, 1.0, 1.0}).mean == 1.0);
  CHECK(*mean_and_sd({1.0, 1.0, 1.0}).sd == 0.0);
  const auto two = mean_and_sd({1.0, 2.0});
  CHECK(two.mean == 1.5);
  CHECK(*two.sd == doctest::Approx(0.70710678).epsilon(1e-8));
  const auto one = mean_and_sd({4.0});
  CHECK(one.mean == 4.0);
  CHECK_FALSE(one.sd.has_value());

  std::vector<ResultRow> rows(3);
  rows[0].entropy_bits = 1.0;
  rows[1].entropy_bits = 2.0;
  rows[2].error = "boom";
  const auto agg = aggregate(rows);
  REQUIRE(agg.size() == 1);
  CHECK(agg[0].runs == 2);
  CHECK(agg[0].mean_entropy == 1.5);
  std::ostringstream out;
  write_aggregates(out, agg);
  CHECK(out.str().find("interp-baseline,0,2,1.5,0.707106781,,") != std::string::npos);
}

TEST_CASE("parameter sweeps") {
  const auto text = fixtures::zipf_text(1200, 120, 8);
  auto config = small_config();
  config.runs = 1;
  config.sizes = {100, 300};
  const auto r = sweep_parameter(config, text, Method::Katz, "delta", {0.001, 0.01, 0.1, 1, 10});
  CHECK(r.rows.size() == 10);
  for (const auto& row : r.rows) {
    CHECK(row.error.empty());
    CHECK(row.delta_bits.has_value());
  }
  CHECK(r.rows[3].params.at("delta") == 1.0);
  CHECK_THROWS_WITH_AS(sweep_parameter(config, text, Method::Katz, "cmin", {1}),
                       "unknown parameter 'cmin' for katz (valid: delta, k2)", ParameterError);
}

TEST_CASE("a grid through the optimum never beats the optimizer") {
  const auto all = fixtures::zipf_text(900, 60, 10);
  const auto corpus = fixtures::encode_all(all);
  EncodedCorpus dev = corpus;
  dev.sentences.assign(corpus.sentences.begin() + 600, corpus.sentences.end());
  dev.word_count = 0;
  for (const auto& s : dev.sentences) dev.word_count += static_cast<Count>(s.size());
  TrainingData data{fixtures::table_of(truncate_corpus(corpus, 600), 2), &dev, &dev};
  const auto fitted = fit_model(Method::PlusDelta, data);
  const double opt = fitted.params.at("delta");
  double grid_min = std::numeric_limits<double>::infinity();
  for (double f : {0.5, 0.8, 1.0, 1.25, 2.0}) {
    grid_min = std::min(grid_min, dev_objective(Method::PlusDelta, data, {{"delta", opt * f}}));
  }
  CHECK(grid_min >= fitted.objective - 1e-9);
}

TEST_CASE("configuration validation") {
  auto c = small_config();
  c.sizes = {200, 100};
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = small_config();
  c.runs = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = small_config();
  c.order = 4;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = small_config();
  c.params = {{"lambda2", 0.4}, {"dleta", 1.0}};
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c.params = {{"lambda2", 0.4}};
  CHECK_NOTHROW(c.validate());
  c = small_config();
  c.sizes = {100000};
  CHECK_THROWS_AS(run_experiment(c, fixtures::zipf_text(300, 30, 1)), DataError);
}
