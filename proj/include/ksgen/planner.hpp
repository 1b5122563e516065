#pragma once

// Skill-database retrieval and procedure-planning evaluation (SR / Acc)
// over externally produced step sequences.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksgen/errors.hpp"

namespace ksgen {

struct StepSequence {
  std::vector<std::string> steps;

  bool operator==(const StepSequence&) const = default;
};

struct SkillRecord {
  std::string skill_name;
  std::vector<StepSequence> reference_sequences;
  std::optional<std::vector<float>> text_embedding;
};

struct RankedSkill {
  SkillRecord record;
  double score = 0.0;
};

namespace detail {

inline std::map<std::string, double> trigram_tf(const std::string& s) {
  std::string lower;
  lower.reserve(s.size());
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  std::map<std::string, double> tf;
  if (lower.size() < 3) {
    if (!lower.empty()) tf[lower] += 1.0;
    return tf;
  }
  for (size_t i = 0; i + 3 <= lower.size(); ++i) tf[lower.substr(i, 3)] += 1.0;
  return tf;
}

inline double tf_cosine(const std::map<std::string, double>& a,
                        const std::map<std::string, double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : a) {
    na += v * v;
    auto it = b.find(k);
    if (it != b.end()) dot += v * it->second;
  }
  for (const auto& [k, v] : b) nb += v * v;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double embedding_cosine(const std::vector<float>& a, const std::vector<float>& b) {
  if (a.size() != b.size()) throw ShapeError("embedding dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw NormError("zero-norm embedding");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace detail

// Ranks by cosine over ingested text embeddings when both sides carry them,
// otherwise by character-trigram term-frequency cosine over lowercased
// names. Ties break lexicographically by skill name.
inline std::vector<RankedSkill> retrieve_top_k(
    const std::string& query, const std::vector<SkillRecord>& db, size_t k = 3,
    const std::optional<std::vector<float>>& query_embedding = std::nullopt) {
  if (query.empty()) throw QueryError("empty query");
  if (db.empty()) throw QueryError("empty skill database");
  if (k < 1) throw QueryError("k must be >= 1");
  const auto query_tf = detail::trigram_tf(query);
  std::vector<RankedSkill> ranked;
  ranked.reserve(db.size());
  for (const auto& rec : db) {
    double score;
    if (query_embedding && rec.text_embedding)
      score = detail::embedding_cosine(*query_embedding, *rec.text_embedding);
    else
      score = detail::tf_cosine(query_tf, detail::trigram_tf(rec.skill_name));
    ranked.push_back({rec, score});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedSkill& a, const RankedSkill& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.record.skill_name < b.record.skill_name;
  });
  ranked.resize(std::min(k, ranked.size()));
  return ranked;
}

// Percent of pairs matching the ground truth exactly (length and every label).
inline double success_rate(const std::vector<StepSequence>& preds,
                           const std::vector<StepSequence>& gts) {
  if (preds.size() != gts.size()) throw PairingError("prediction/ground-truth count mismatch");
  if (preds.empty()) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < preds.size(); ++i)
    if (preds[i] == gts[i]) ++hits;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(preds.size());
}

enum class AccAggregation { PerSequence, PerPosition };

// Positionwise matches over max(len(pred), len(gt)); the shorter sequence
// pads with mismatches.
inline double step_accuracy(const std::vector<StepSequence>& preds,
                            const std::vector<StepSequence>& gts,
                            AccAggregation agg = AccAggregation::PerSequence) {
  if (preds.size() != gts.size()) throw PairingError("prediction/ground-truth count mismatch");
  if (preds.empty()) return 0.0;
  double per_seq_sum = 0.0;
  size_t total_positions = 0, total_matches = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    const auto& p = preds[i].steps;
    const auto& g = gts[i].steps;
    const size_t n = std::max(p.size(), g.size());
    size_t matches = 0;
    for (size_t j = 0; j < std::min(p.size(), g.size()); ++j)
      if (p[j] == g[j]) ++matches;
    per_seq_sum += n == 0 ? 1.0 : static_cast<double>(matches) / static_cast<double>(n);
    total_positions += n;
    total_matches += matches;
  }
  if (agg == AccAggregation::PerSequence)
    return 100.0 * per_seq_sum / static_cast<double>(preds.size());
  return total_positions == 0
             ? 100.0
             : 100.0 * static_cast<double>(total_matches) / static_cast<double>(total_positions);
}

// --- file formats ---
// Skill database: JSONL of {skill_name, reference_sequences: [[label,...]],
// text_embedding?: [f32...]}. Predictions / ground truth: JSONL of
// {video_id, steps: [label,...]}.

inline std::vector<SkillRecord> read_skill_db(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  std::vector<SkillRecord> db;
  std::string line;
  while (std::getline(f, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (!j.contains("skill_name")) throw SchemaError("skill_name");
    if (!j.contains("reference_sequences")) throw SchemaError("reference_sequences");
    SkillRecord rec;
    rec.skill_name = j.at("skill_name").get<std::string>();
    for (const auto& seq : j.at("reference_sequences"))
      rec.reference_sequences.push_back({seq.get<std::vector<std::string>>()});
    if (rec.skill_name.empty()) throw SchemaError("skill_name");
    if (rec.reference_sequences.empty()) throw SchemaError("reference_sequences");
    if (j.contains("text_embedding"))
      rec.text_embedding = j.at("text_embedding").get<std::vector<float>>();
    db.push_back(std::move(rec));
  }
  return db;
}

struct PredictionRecord {
  std::string video_id;
  StepSequence steps;
};

inline std::vector<PredictionRecord> read_predictions(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  std::vector<PredictionRecord> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (!j.contains("video_id")) throw SchemaError("video_id");
    if (!j.contains("steps")) throw SchemaError("steps");
    out.push_back({j.at("video_id").get<std::string>(),
                   {j.at("steps").get<std::vector<std::string>>()}});
  }
  return out;
}

}  // namespace ksgen
