#pragma once

// Batch orchestration: configuration, stage wiring
// (scene -> motion -> semantic -> text), parallel execution, reports.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ksgen/errors.hpp"
#include "ksgen/flow.hpp"
#include "ksgen/manifest.hpp"
#include "ksgen/metrics.hpp"
#include "ksgen/planner.hpp"
#include "ksgen/scene.hpp"
#include "ksgen/select.hpp"

namespace ksgen {

struct StageToggles {
  bool scene = true;
  bool motion = true;
  bool semantic = true;
  bool text = true;
};

struct PipelineConfig {
  StageToggles stages;

  // scene
  std::array<double, 3> scene_thresholds{0.35, 0.45, 0.55};
  GapMode gap_mode = GapMode::Between;

  // subclip cap
  double cap_max_sec = 2.0;

  // motion
  FlowTemplateParams template_params;
  int flow_block = 16;
  int flow_radius = 8;
  double motion_window_sec = 2.0;
  double window_stride_fraction = 0.25;  // stride = fraction * window
  double motion_threshold = 1.0;
  KlDirection kl_direction = KlDirection::ClipToTemplate;
  WindowPooling window_pooling = WindowPooling::Mean;

  // semantic
  double semantic_window_sec = 2.0;
  double semantic_threshold = 0.2;

  // text
  double text_threshold = 0.2;

  // metrics
  std::vector<std::string> metrics{"action", "clip", "dino", "motion", "fid", "fvd"};
  bool unbiased_covariance = true;
  MotionPooling motion_pooling = MotionPooling::PoolHistogram;
  FusionParams fusion;

  unsigned worker_count = 1;
};

inline nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json j;
  j["stages"] = {{"scene", c.stages.scene},
                 {"motion", c.stages.motion},
                 {"semantic", c.stages.semantic},
                 {"text", c.stages.text}};
  j["scene_thresholds"] = c.scene_thresholds;
  j["gap_mode"] = c.gap_mode == GapMode::Between ? "between" : "span";
  j["cap_max_sec"] = c.cap_max_sec;
  j["template"] = {{"static_mean_log2", c.template_params.static_mean_log2},
                   {"static_sigma", c.template_params.static_sigma},
                   {"static_weight", c.template_params.static_weight},
                   {"motion_mean_log2", c.template_params.motion_mean_log2},
                   {"motion_sigma", c.template_params.motion_sigma}};
  j["flow_block"] = c.flow_block;
  j["flow_radius"] = c.flow_radius;
  j["motion_window_sec"] = c.motion_window_sec;
  j["window_stride_fraction"] = c.window_stride_fraction;
  j["motion_threshold"] = c.motion_threshold;
  j["kl_direction"] =
      c.kl_direction == KlDirection::ClipToTemplate ? "clip_to_template" : "template_to_clip";
  j["window_pooling"] = c.window_pooling == WindowPooling::Mean ? "mean" : "max";
  j["semantic_window_sec"] = c.semantic_window_sec;
  j["semantic_threshold"] = c.semantic_threshold;
  j["text_threshold"] = c.text_threshold;
  j["metrics"] = c.metrics;
  j["unbiased_covariance"] = c.unbiased_covariance;
  j["motion_pooling"] =
      c.motion_pooling == MotionPooling::PoolHistogram ? "pool_histogram" : "mean_per_frame_kl";
  j["fusion_weight"] = c.fusion.fusion_weight;
  j["consistency_weight"] = c.fusion.consistency_weight;
  j["worker_count"] = c.worker_count;
  return j;
}

inline PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  if (j.contains("stages")) {
    const auto& s = j.at("stages");
    if (s.contains("scene")) c.stages.scene = s.at("scene").get<bool>();
    if (s.contains("motion")) c.stages.motion = s.at("motion").get<bool>();
    if (s.contains("semantic")) c.stages.semantic = s.at("semantic").get<bool>();
    if (s.contains("text")) c.stages.text = s.at("text").get<bool>();
  }
  if (j.contains("scene_thresholds")) {
    auto v = j.at("scene_thresholds").get<std::vector<double>>();
    if (v.size() != 3) throw SchemaError("scene_thresholds");
    std::copy(v.begin(), v.end(), c.scene_thresholds.begin());
  }
  if (j.contains("gap_mode"))
    c.gap_mode = j.at("gap_mode").get<std::string>() == "span" ? GapMode::Span : GapMode::Between;
  if (j.contains("cap_max_sec")) c.cap_max_sec = j.at("cap_max_sec").get<double>();
  if (j.contains("template")) {
    const auto& t = j.at("template");
    if (t.contains("static_mean_log2"))
      c.template_params.static_mean_log2 = t.at("static_mean_log2").get<double>();
    if (t.contains("static_sigma"))
      c.template_params.static_sigma = t.at("static_sigma").get<double>();
    if (t.contains("static_weight"))
      c.template_params.static_weight = t.at("static_weight").get<double>();
    if (t.contains("motion_mean_log2"))
      c.template_params.motion_mean_log2 = t.at("motion_mean_log2").get<double>();
    if (t.contains("motion_sigma"))
      c.template_params.motion_sigma = t.at("motion_sigma").get<double>();
  }
  if (j.contains("flow_block")) c.flow_block = j.at("flow_block").get<int>();
  if (j.contains("flow_radius")) c.flow_radius = j.at("flow_radius").get<int>();
  if (j.contains("motion_window_sec"))
    c.motion_window_sec = j.at("motion_window_sec").get<double>();
  if (j.contains("window_stride_fraction"))
    c.window_stride_fraction = j.at("window_stride_fraction").get<double>();
  if (j.contains("motion_threshold")) c.motion_threshold = j.at("motion_threshold").get<double>();
  if (j.contains("kl_direction"))
    c.kl_direction = j.at("kl_direction").get<std::string>() == "template_to_clip"
                         ? KlDirection::TemplateToClip
                         : KlDirection::ClipToTemplate;
  if (j.contains("window_pooling"))
    c.window_pooling =
        j.at("window_pooling").get<std::string>() == "max" ? WindowPooling::Max : WindowPooling::Mean;
  if (j.contains("semantic_window_sec"))
    c.semantic_window_sec = j.at("semantic_window_sec").get<double>();
  if (j.contains("semantic_threshold"))
    c.semantic_threshold = j.at("semantic_threshold").get<double>();
  if (j.contains("text_threshold")) c.text_threshold = j.at("text_threshold").get<double>();
  if (j.contains("metrics")) c.metrics = j.at("metrics").get<std::vector<std::string>>();
  if (j.contains("unbiased_covariance"))
    c.unbiased_covariance = j.at("unbiased_covariance").get<bool>();
  if (j.contains("motion_pooling"))
    c.motion_pooling = j.at("motion_pooling").get<std::string>() == "mean_per_frame_kl"
                           ? MotionPooling::MeanPerFrameKl
                           : MotionPooling::PoolHistogram;
  if (j.contains("fusion_weight")) c.fusion.fusion_weight = j.at("fusion_weight").get<double>();
  if (j.contains("consistency_weight"))
    c.fusion.consistency_weight = j.at("consistency_weight").get<double>();
  if (j.contains("worker_count")) c.worker_count = j.at("worker_count").get<unsigned>();
  if (c.worker_count < 1) throw SchemaError("worker_count");
  return c;
}

namespace detail {

// Index-addressed task loop; results keyed by index keep the merge order
// independent of scheduling.
template <typename Fn>
void parallel_for(size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  if (workers == 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<size_t>(workers, n); ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline size_t window_frames(double sec, double fps, size_t available) {
  const size_t w = std::max<size_t>(1, static_cast<size_t>(std::llround(sec * fps)));
  return std::min(w, available);
}

inline size_t window_stride(size_t window_len, double fraction) {
  return std::max<size_t>(1, static_cast<size_t>(std::floor(window_len * fraction)));
}

}  // namespace detail

// --- curation ---

struct StageAudit {
  std::string stage;
  uint64_t in = 0;
  uint64_t out = 0;
};

struct CurationReport {
  std::vector<StageAudit> stages;
  std::vector<ClipManifest> output;  // surviving subclips as derived manifests
  nlohmann::json decisions = nlohmann::json::array();
};

namespace detail {

struct ClipCurationResult {
  // Per-stage subclip counts for this clip, aligned with the stage order.
  uint64_t scene_in = 0, scene_out = 0;
  uint64_t cap_in = 0, cap_out = 0;
  uint64_t motion_in = 0, motion_out = 0;
  uint64_t semantic_in = 0, semantic_out = 0;
  uint64_t text_in = 0, text_out = 0;
  std::vector<ClipManifest> output;
  nlohmann::json decisions = nlohmann::json::array();
};

inline const std::string& require_sidecar(const ClipManifest& m, const std::string& role) {
  auto it = m.sidecar_paths.find(role);
  if (it == m.sidecar_paths.end())
    throw MissingInputError("clip " + m.clip_id() + " missing sidecar role " + role);
  return it->second;
}

inline ClipCurationResult curate_clip(const PipelineConfig& cfg, const ClipManifest& clip) {
  ClipCurationResult r;
  const FrameSequence seq = load_frames(clip.frames_path);
  const double fps = seq.fps;
  const std::string clip_id = clip.clip_id();

  // scene
  std::vector<Subclip> subclips;
  r.scene_in = 1;
  if (cfg.stages.scene) {
    const auto cuts = detect_transitions(seq, cfg.scene_thresholds, cfg.gap_mode);
    subclips = split_on_transitions(seq.size(), cuts, clip_id);
    nlohmann::json d;
    d["clip_id"] = clip_id;
    d["stage"] = "scene";
    d["cuts"] = cuts;
    r.decisions.push_back(d);
  } else {
    subclips = {{0, seq.size(), clip_id}};
  }
  r.scene_out = subclips.size();

  // duration cap, always applied
  r.cap_in = subclips.size();
  subclips = cap_duration(subclips, fps, cfg.cap_max_sec);
  r.cap_out = subclips.size();

  // motion
  r.motion_in = subclips.size();
  if (cfg.stages.motion) {
    std::vector<FlowField> flows;
    auto it = clip.sidecar_paths.find("flow");
    if (it != clip.sidecar_paths.end())
      flows = load_flow(read_sidecar(SidecarRole::Flow, it->second));
    else
      flows = flow_for_sequence(seq, cfg.flow_block, cfg.flow_radius);
    if (flows.size() + 1 != seq.size())
      throw SidecarError("clip " + clip_id + ": flow count does not match frame count");
    std::vector<Histogram256> pair_hists;
    pair_hists.reserve(flows.size());
    for (const auto& f : flows) pair_hists.push_back(flow_mag_histogram(f));
    const Histogram256 tmpl = gaussian_mixture_template(cfg.template_params);

    std::vector<Subclip> kept;
    for (const auto& s : subclips) {
      // pairs inside [start, end) are pair indices start .. end-2
      const size_t n_pairs = s.length() >= 2 ? static_cast<size_t>(s.length() - 1) : 0;
      nlohmann::json d;
      d["clip_id"] = clip_id;
      d["stage"] = "motion";
      d["start_frame"] = s.start_frame;
      d["end_frame"] = s.end_frame;
      if (n_pairs == 0) {
        kept.push_back(s);  // no motion evidence for single-frame subclips
        d["rule"] = "no_pairs";
      } else {
        std::vector<Histogram256> window(pair_hists.begin() + s.start_frame,
                                         pair_hists.begin() + s.start_frame + n_pairs);
        const size_t wl = window_frames(cfg.motion_window_sec, fps, n_pairs);
        const auto sel = select_by_flow_kl(window, tmpl, wl,
                                           window_stride(wl, cfg.window_stride_fraction),
                                           cfg.motion_threshold, cfg.kl_direction,
                                           cfg.window_pooling);
        const bool keep = !sel.accepted.empty();
        if (keep) kept.push_back(s);
        d["rule"] = keep ? "kl_within_threshold" : "kl_above_threshold";
        d["score"] = sel.best ? sel.best->score : 0.0;
      }
      r.decisions.push_back(d);
    }
    subclips = std::move(kept);
  }
  r.motion_out = subclips.size();

  // semantic
  r.semantic_in = subclips.size();
  if (cfg.stages.semantic) {
    const auto frame_emb =
        read_sidecar(SidecarRole::FrameEmbedding, require_sidecar(clip, "frame_embedding"));
    const auto text_emb =
        read_sidecar(SidecarRole::TextEmbedding, require_sidecar(clip, "text_embedding"));
    if (frame_emb.tensor.shape[0] != seq.size())
      throw SidecarError("clip " + clip_id + ": frame embedding count does not match frames");
    const size_t D = frame_emb.tensor.shape[1];
    std::vector<Subclip> kept;
    for (const auto& s : subclips) {
      TensorFile slice;
      slice.shape = {s.length(), D};
      slice.data.assign(frame_emb.tensor.data.begin() + s.start_frame * D,
                        frame_emb.tensor.data.begin() + s.end_frame * D);
      const size_t wl = window_frames(cfg.semantic_window_sec, fps, s.length());
      const auto sel = select_by_semantic(slice, text_emb.tensor, wl,
                                          window_stride(wl, cfg.window_stride_fraction),
                                          cfg.semantic_threshold, cfg.window_pooling);
      const bool keep = !sel.accepted.empty();
      if (keep) kept.push_back(s);
      nlohmann::json d;
      d["clip_id"] = clip_id;
      d["stage"] = "semantic";
      d["start_frame"] = s.start_frame;
      d["end_frame"] = s.end_frame;
      d["rule"] = keep ? "alignment_above_threshold" : "alignment_below_threshold";
      d["score"] = sel.best ? sel.best->score : 0.0;
      r.decisions.push_back(d);
    }
    subclips = std::move(kept);
  }
  r.semantic_out = subclips.size();

  // text
  r.text_in = subclips.size();
  if (cfg.stages.text) {
    const auto cov =
        read_sidecar(SidecarRole::TextCoverage, require_sidecar(clip, "text_coverage"));
    if (cov.tensor.shape[0] != seq.size())
      throw SidecarError("clip " + clip_id + ": coverage length does not match frames");
    std::vector<Subclip> kept;
    for (const auto& s : subclips) {
      const auto res = filter_text_heavy(
          {cov.tensor.data.data() + s.start_frame, static_cast<size_t>(s.length())},
          cfg.text_threshold);
      if (res.keep) kept.push_back(s);
      nlohmann::json d;
      d["clip_id"] = clip_id;
      d["stage"] = "text";
      d["start_frame"] = s.start_frame;
      d["end_frame"] = s.end_frame;
      d["rule"] = res.keep ? "coverage_within_threshold" : "coverage_above_threshold";
      d["score"] = res.mean_coverage;
      r.decisions.push_back(d);
    }
    subclips = std::move(kept);
  }
  r.text_out = subclips.size();

  for (const auto& s : subclips) {
    ClipManifest m = clip;
    m.start_sec = clip.start_sec + static_cast<double>(s.start_frame) / fps;
    m.end_sec = clip.start_sec + static_cast<double>(s.end_frame) / fps;
    m.extra["source_clip_id"] = clip_id;
    m.extra["start_frame"] = s.start_frame;
    m.extra["end_frame"] = s.end_frame;
    r.output.push_back(std::move(m));
  }
  return r;
}

}  // namespace detail

inline CurationReport run_curate(const PipelineConfig& cfg,
                                 const std::vector<ClipManifest>& manifests) {
  std::vector<detail::ClipCurationResult> results(manifests.size());
  detail::parallel_for(manifests.size(), cfg.worker_count,
                       [&](size_t i) { results[i] = detail::curate_clip(cfg, manifests[i]); });

  CurationReport report;
  StageAudit scene{"scene", 0, 0}, cap{"cap", 0, 0}, motion{"motion", 0, 0},
      semantic{"semantic", 0, 0}, text{"text", 0, 0};
  for (const auto& r : results) {
    scene.in += r.scene_in;
    scene.out += r.scene_out;
    cap.in += r.cap_in;
    cap.out += r.cap_out;
    motion.in += r.motion_in;
    motion.out += r.motion_out;
    semantic.in += r.semantic_in;
    semantic.out += r.semantic_out;
    text.in += r.text_in;
    text.out += r.text_out;
    for (const auto& m : r.output) report.output.push_back(m);
    for (const auto& d : r.decisions) report.decisions.push_back(d);
  }
  report.stages = {scene, cap, motion, semantic, text};
  return report;
}

inline nlohmann::json curation_report_to_json(const CurationReport& r,
                                              const PipelineConfig& cfg) {
  nlohmann::json j;
  j["config"] = config_to_json(cfg);
  j["stages"] = nlohmann::json::array();
  for (const auto& s : r.stages)
    j["stages"].push_back({{"stage", s.stage}, {"in", s.in}, {"out", s.out}});
  j["decisions"] = r.decisions;
  j["output"] = nlohmann::json::array();
  for (const auto& m : r.output) j["output"].push_back(manifest_to_json(m));
  return j;
}

// --- metrics ---

struct ClipMetricsRow {
  std::string clip_id;
  std::map<std::string, double> values;
};

struct MetricsReport {
  std::vector<ClipMetricsRow> per_clip;
  std::map<std::string, double> corpus;
};

namespace detail {

inline bool wants(const PipelineConfig& cfg, const std::string& name) {
  return std::find(cfg.metrics.begin(), cfg.metrics.end(), name) != cfg.metrics.end();
}

inline std::vector<FlowField> metric_flows(const PipelineConfig& cfg, const ClipManifest& m) {
  auto it = m.sidecar_paths.find("flow");
  if (it != m.sidecar_paths.end()) return load_flow(read_sidecar(SidecarRole::Flow, it->second));
  FrameSequence seq = load_frames(m.frames_path);
  seq = resample_clip(seq, 8.0, 16);
  for (auto& f : seq.frames) f = resize_shorter_side(f, 256);
  return flow_for_sequence(seq, cfg.flow_block, cfg.flow_radius);
}

inline TensorFile sidecar_tensor(const ClipManifest& m, const std::string& key,
                                 SidecarRole role) {
  return read_sidecar(role, require_sidecar(m, key)).tensor;
}

}  // namespace detail

// gen/real manifests pair by clip id. Per-clip metrics (action, clip, dino,
// motion) average over the corpus; fid and fvd are corpus-level Gaussian fits.
inline MetricsReport run_metrics(const PipelineConfig& cfg,
                                 const std::vector<ClipManifest>& gen,
                                 const std::vector<ClipManifest>& real) {
  std::map<std::string, const ClipManifest*> real_by_id;
  for (const auto& m : real) real_by_id[m.clip_id()] = &m;
  if (real_by_id.size() != real.size()) throw PairingError("duplicate clip ids in real corpus");
  std::vector<std::pair<const ClipManifest*, const ClipManifest*>> pairs;
  for (const auto& m : gen) {
    auto it = real_by_id.find(m.clip_id());
    if (it == real_by_id.end()) throw PairingError("unpaired clip " + m.clip_id());
    pairs.emplace_back(&m, it->second);
  }
  if (pairs.size() != real.size()) throw PairingError("real corpus has unpaired clips");

  std::vector<ClipMetricsRow> rows(pairs.size());
  // fid frame features and fvd clip features gathered per pair, pooled after
  std::vector<TensorFile> fid_gen(pairs.size()), fid_real(pairs.size());
  std::vector<TensorFile> fvd_gen(pairs.size()), fvd_real(pairs.size());

  detail::parallel_for(pairs.size(), cfg.worker_count, [&](size_t i) {
    const ClipManifest& g = *pairs[i].first;
    const ClipManifest& r = *pairs[i].second;
    ClipMetricsRow row;
    row.clip_id = g.clip_id();
    if (detail::wants(cfg, "action")) {
      const auto a = detail::sidecar_tensor(g, "action_logits", SidecarRole::ActionLogits);
      const auto b = detail::sidecar_tensor(r, "action_logits", SidecarRole::ActionLogits);
      row.values["Action"] = action_score(a.data, b.data);
    }
    if (detail::wants(cfg, "clip")) {
      row.values["CLIP"] = framewise_score(
          detail::sidecar_tensor(g, "clip_frames", SidecarRole::FrameEmbedding),
          detail::sidecar_tensor(r, "clip_frames", SidecarRole::FrameEmbedding));
    }
    if (detail::wants(cfg, "dino")) {
      row.values["DINO"] = framewise_score(
          detail::sidecar_tensor(g, "dino_frames", SidecarRole::FrameEmbedding),
          detail::sidecar_tensor(r, "dino_frames", SidecarRole::FrameEmbedding));
    }
    if (detail::wants(cfg, "motion")) {
      row.values["Motion"] = motion_distance(detail::metric_flows(cfg, g),
                                             detail::metric_flows(cfg, r), cfg.motion_pooling);
    }
    if (detail::wants(cfg, "fid")) {
      fid_gen[i] = detail::sidecar_tensor(g, "fid_frames", SidecarRole::FrameEmbedding);
      fid_real[i] = detail::sidecar_tensor(r, "fid_frames", SidecarRole::FrameEmbedding);
    }
    if (detail::wants(cfg, "fvd")) {
      fvd_gen[i] = detail::sidecar_tensor(g, "video_feature", SidecarRole::VideoFeature);
      fvd_real[i] = detail::sidecar_tensor(r, "video_feature", SidecarRole::VideoFeature);
    }
    rows[i] = std::move(row);
  });

  MetricsReport report;
  report.per_clip = std::move(rows);
  for (const char* name : {"Action", "CLIP", "DINO", "Motion"}) {
    double acc = 0.0;
    size_t n = 0;
    for (const auto& row : report.per_clip) {
      auto it = row.values.find(name);
      if (it != row.values.end()) {
        acc += it->second;
        ++n;
      }
    }
    if (n > 0) report.corpus[name] = acc / static_cast<double>(n);
  }

  auto stack_rows = [](const std::vector<TensorFile>& ts) {
    size_t total = 0, d = 0;
    for (const auto& t : ts) {
      const size_t rows_t = t.shape.size() == 2 ? t.shape[0] : 1;
      const size_t dim = t.shape.back();
      if (d == 0) d = dim;
      if (dim != d) throw ShapeError("feature dimension mismatch across clips");
      total += rows_t;
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(d));
    Eigen::Index r = 0;
    for (const auto& t : ts) {
      const size_t rows_t = t.shape.size() == 2 ? t.shape[0] : 1;
      for (size_t i = 0; i < rows_t; ++i, ++r)
        for (size_t j = 0; j < d; ++j)
          m(r, static_cast<Eigen::Index>(j)) = t.data[i * d + j];
    }
    return m;
  };
  if (detail::wants(cfg, "fid") && !pairs.empty()) {
    report.corpus["FID"] =
        frechet_distance(fit_gaussian(stack_rows(fid_gen), cfg.unbiased_covariance),
                         fit_gaussian(stack_rows(fid_real), cfg.unbiased_covariance));
  }
  if (detail::wants(cfg, "fvd") && !pairs.empty()) {
    report.corpus["FVD"] =
        frechet_distance(fit_gaussian(stack_rows(fvd_gen), cfg.unbiased_covariance),
                         fit_gaussian(stack_rows(fvd_real), cfg.unbiased_covariance));
  }
  return report;
}

inline nlohmann::json metrics_report_to_json(const MetricsReport& r,
                                             const PipelineConfig& cfg) {
  nlohmann::json j;
  j["config"] = config_to_json(cfg);
  j["per_clip"] = nlohmann::json::array();
  for (const auto& row : r.per_clip) {
    nlohmann::json o;
    o["clip_id"] = row.clip_id;
    for (const auto& [k, v] : row.values) o[k] = v;
    j["per_clip"].push_back(o);
  }
  j["corpus"] = r.corpus;
  return j;
}

// --- planner evaluation ---

struct PlannerReport {
  double success_rate = 0.0;
  double step_accuracy = 0.0;
  std::string acc_aggregation;  // which Acc variant was used
  uint64_t pairs = 0;
};

inline PlannerReport run_planner_eval(const std::string& predictions_path,
                                      const std::string& gt_path,
                                      AccAggregation agg = AccAggregation::PerSequence) {
  const auto preds = read_predictions(predictions_path);
  const auto gts = read_predictions(gt_path);
  std::map<std::string, const PredictionRecord*> gt_by_id;
  for (const auto& g : gts) gt_by_id[g.video_id] = &g;
  if (gt_by_id.size() != gts.size()) throw PairingError("duplicate video ids in ground truth");
  std::vector<StepSequence> p, g;
  for (const auto& pr : preds) {
    auto it = gt_by_id.find(pr.video_id);
    if (it == gt_by_id.end()) throw PairingError("unpaired prediction " + pr.video_id);
    p.push_back(pr.steps);
    g.push_back(it->second->steps);
  }
  if (p.size() != gts.size()) throw PairingError("ground truth has unpaired records");
  PlannerReport r;
  r.success_rate = success_rate(p, g);
  r.step_accuracy = step_accuracy(p, g, agg);
  r.acc_aggregation = agg == AccAggregation::PerSequence ? "per_sequence" : "per_position";
  r.pairs = p.size();
  return r;
}

inline nlohmann::json planner_report_to_json(const PlannerReport& r) {
  nlohmann::json j;
  j["SR"] = r.success_rate;
  j["Acc"] = r.step_accuracy;
  j["acc_aggregation"] = r.acc_aggregation;
  j["pairs"] = r.pairs;
  return j;
}

}  // namespace ksgen
