#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ksgen/planner.hpp"
#include "test_util.hpp"

using namespace ksgen;

namespace {

std::vector<SkillRecord> tea_db() {
  return {
      {"make matcha", {{{"boil water", "whisk powder"}}}, std::nullopt},
      {"replace battery", {{{"open case", "swap cell"}}}, std::nullopt},
  };
}

}  // namespace

TEST_CASE("retrieval ranks an exact name match first") {
  const auto db = tea_db();
  const auto top = retrieve_top_k("replace battery", db, 1);
  REQUIRE(top.size() == 1);
  CHECK(top[0].record.skill_name == "replace battery");
}

TEST_CASE("retrieval clamps k to db size") {
  const auto top = retrieve_top_k("anything really", tea_db(), 3);
  CHECK(top.size() == 2);
}

TEST_CASE("trigram similarity prefers make matcha for make tea") {
  const auto top = retrieve_top_k("make tea", tea_db(), 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].record.skill_name == "make matcha");
  CHECK(top[0].score > top[1].score);
}

TEST_CASE("retrieval with k = db size is a total ordering") {
  std::vector<SkillRecord> db;
  for (int i = 0; i < 8; ++i)
    db.push_back({"skill number " + std::to_string(i), {{{"step"}}}, std::nullopt});
  const auto all = retrieve_top_k("skill number 3", db, db.size());
  REQUIRE(all.size() == db.size());
  CHECK(all[0].record.skill_name == "skill number 3");
  for (size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].score >= all[i].score);
}

TEST_CASE("retrieval rejects empty query") {
  CHECK_THROWS_AS(retrieve_top_k("", tea_db(), 3), QueryError);
}

TEST_CASE("embedding retrieval overrides the lexical path") {
  std::vector<SkillRecord> db = {
      {"aaa", {{{"s"}}}, std::vector<float>{1.0f, 0.0f}},
      {"make tea", {{{"s"}}}, std::vector<float>{0.0f, 1.0f}},
  };
  const auto top = retrieve_top_k("make tea", db, 1, std::vector<float>{1.0f, 0.1f});
  REQUIRE(top.size() == 1);
  CHECK(top[0].record.skill_name == "aaa");
}

TEST_CASE("success rate hand cases") {
  StepSequence abc{{"a", "b", "c"}};
  StepSequence axc{{"a", "x", "c"}};
  CHECK(success_rate({abc, abc}, {abc, abc}) == 100.0);
  CHECK(success_rate({abc}, {axc}) == 0.0);
  CHECK(success_rate({abc, axc}, {abc, abc}) == 50.0);
  CHECK_THROWS_AS(success_rate({abc}, {abc, abc}), PairingError);
}

TEST_CASE("step accuracy hand cases") {
  StepSequence abc{{"a", "b", "c"}};
  StepSequence axc{{"a", "x", "c"}};
  StepSequence ab{{"a", "b"}};
  StepSequence abcd{{"a", "b", "c", "d"}};
  CHECK(step_accuracy({abc}, {abc}) == 100.0);
  CHECK(step_accuracy({abc}, {axc}) == Catch::Approx(66.67).margin(0.01));
  CHECK(step_accuracy({ab}, {abcd}) == Catch::Approx(50.0));
}

TEST_CASE("per-position aggregation weights sequences by length") {
  StepSequence long_right{{"a", "a", "a", "a", "a", "a"}};
  StepSequence short_wrong{{"x"}};
  StepSequence long_gt{{"a", "a", "a", "a", "a", "a"}};
  StepSequence short_gt{{"a"}};
  // per-sequence: (100 + 0) / 2 = 50; per-position: 6/7
  CHECK(step_accuracy({long_right, short_wrong}, {long_gt, short_gt},
                      AccAggregation::PerSequence) == Catch::Approx(50.0));
  CHECK(step_accuracy({long_right, short_wrong}, {long_gt, short_gt},
                      AccAggregation::PerPosition) == Catch::Approx(100.0 * 6.0 / 7.0));
}

TEST_CASE("SR never exceeds Acc") {
  std::mt19937 rng(113);
  std::uniform_int_distribution<int> len(1, 5), label(0, 2), count(1, 10);
  for (int it = 0; it < 300; ++it) {
    std::vector<StepSequence> preds, gts;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      StepSequence p, g;
      const int lp = len(rng), lg = len(rng);
      for (int j = 0; j < lp; ++j) p.steps.push_back(std::to_string(label(rng)));
      for (int j = 0; j < lg; ++j) g.steps.push_back(std::to_string(label(rng)));
      preds.push_back(p);
      gts.push_back(g);
    }
    CHECK(success_rate(preds, gts) <= step_accuracy(preds, gts) + 1e-9);
  }
}

TEST_CASE("metrics invariant under label bijection") {
  std::mt19937 rng(127);
  std::uniform_int_distribution<int> len(1, 4), label(0, 3);
  std::vector<StepSequence> preds, gts;
  for (int i = 0; i < 12; ++i) {
    StepSequence p, g;
    for (int j = 0, lp = len(rng); j < lp; ++j) p.steps.push_back(std::to_string(label(rng)));
    for (int j = 0, lg = len(rng); j < lg; ++j) g.steps.push_back(std::to_string(label(rng)));
    preds.push_back(p);
    gts.push_back(g);
  }
  auto relabel = [](std::vector<StepSequence> seqs) {
    for (auto& s : seqs)
      for (auto& step : s.steps) step = "renamed_" + step;
    return seqs;
  };
  CHECK(success_rate(preds, gts) == success_rate(relabel(preds), relabel(gts)));
  CHECK(step_accuracy(preds, gts) == step_accuracy(relabel(preds), relabel(gts)));
}

TEST_CASE("skill db and prediction files parse") {
  testutil::TempDir dir("planner");
  {
    std::ofstream f(dir.file("db.jsonl"));
    f << R"({"skill_name":"make tea","reference_sequences":[["boil","steep"]]})" << "\n";
    f << R"({"skill_name":"fix bike","reference_sequences":[["flip","patch"]],"text_embedding":[0.1,0.9]})"
      << "\n";
  }
  const auto db = read_skill_db(dir.file("db.jsonl"));
  REQUIRE(db.size() == 2);
  CHECK(db[0].reference_sequences[0].steps == std::vector<std::string>{"boil", "steep"});
  CHECK(db[1].text_embedding.has_value());

  {
    std::ofstream f(dir.file("preds.jsonl"));
    f << R"({"video_id":"v1","steps":["a","b"]})" << "\n";
  }
  const auto preds = read_predictions(dir.file("preds.jsonl"));
  REQUIRE(preds.size() == 1);
  CHECK(preds[0].video_id == "v1");

  {
    std::ofstream f(dir.file("bad.jsonl"));
    f << R"({"reference_sequences":[["x"]]})" << "\n";
  }
  CHECK_THROWS_AS(read_skill_db(dir.file("bad.jsonl")), SchemaError);
}
