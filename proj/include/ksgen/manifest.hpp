#pragma once

// Clip manifests are JSON Lines: one object per clip, unknown fields kept.

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksgen/errors.hpp"

namespace ksgen {

struct ClipManifest {
  std::string video_id;
  std::string skill_name;
  std::string step_label;
  std::string step_description;
  double start_sec = 0.0;
  double end_sec = 0.0;
  std::string frames_path;
  std::map<std::string, std::string> sidecar_paths;
  nlohmann::json extra = nlohmann::json::object();  // unknown fields, preserved

  std::string clip_id() const { return video_id + "/" + step_label; }
};

inline void validate_manifest(const ClipManifest& m) {
  if (m.video_id.empty()) throw SchemaError("video_id");
  if (!(m.end_sec > m.start_sec)) throw SchemaError("end_sec");
  if (m.start_sec < 0.0) throw SchemaError("start_sec");
}

inline ClipManifest manifest_from_json(const nlohmann::json& j) {
  static const char* required[] = {"video_id",  "skill_name", "step_label",
                                   "step_description", "start_sec", "end_sec",
                                   "frames_path"};
  for (const char* f : required)
    if (!j.contains(f)) throw SchemaError(f);
  ClipManifest m;
  m.video_id = j.at("video_id").get<std::string>();
  m.skill_name = j.at("skill_name").get<std::string>();
  m.step_label = j.at("step_label").get<std::string>();
  m.step_description = j.at("step_description").get<std::string>();
  m.start_sec = j.at("start_sec").get<double>();
  m.end_sec = j.at("end_sec").get<double>();
  m.frames_path = j.at("frames_path").get<std::string>();
  if (j.contains("sidecar_paths"))
    m.sidecar_paths = j.at("sidecar_paths").get<std::map<std::string, std::string>>();
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const std::set<std::string> known = {
        "video_id",  "skill_name",  "step_label", "step_description",
        "start_sec", "end_sec",     "frames_path", "sidecar_paths"};
    if (!known.count(it.key())) m.extra[it.key()] = it.value();
  }
  validate_manifest(m);
  return m;
}

inline nlohmann::json manifest_to_json(const ClipManifest& m) {
  nlohmann::json j = m.extra;
  j["video_id"] = m.video_id;
  j["skill_name"] = m.skill_name;
  j["step_label"] = m.step_label;
  j["step_description"] = m.step_description;
  j["start_sec"] = m.start_sec;
  j["end_sec"] = m.end_sec;
  j["frames_path"] = m.frames_path;
  j["sidecar_paths"] = m.sidecar_paths;
  return j;
}

inline std::vector<ClipManifest> parse_manifests(std::istream& in) {
  std::vector<ClipManifest> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError("manifest line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(manifest_from_json(j));
  }
  return out;
}

inline std::vector<ClipManifest> read_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  return parse_manifests(f);
}

inline void write_manifest(const std::vector<ClipManifest>& ms, std::ostream& out) {
  for (const auto& m : ms) out << manifest_to_json(m).dump() << "\n";
}

inline void write_manifest(const std::vector<ClipManifest>& ms, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for write: " + path);
  write_manifest(ms, f);
}

struct StatsReport {
  uint64_t skills = 0;
  uint64_t videos = 0;
  uint64_t clips = 0;
  double total_duration_sec = 0.0;

  double total_duration_hours() const { return total_duration_sec / 3600.0; }
};

inline StatsReport dataset_stats(const std::vector<ClipManifest>& ms) {
  StatsReport r;
  std::set<std::string> skills, videos;
  for (const auto& m : ms) {
    skills.insert(m.skill_name);
    videos.insert(m.video_id);
    r.total_duration_sec += m.end_sec - m.start_sec;
  }
  r.skills = skills.size();
  r.videos = videos.size();
  r.clips = ms.size();
  return r;
}

}  // namespace ksgen
