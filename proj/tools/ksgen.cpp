// ksgen: batch CLI over the curation pipeline, evaluation metrics, and
// planner scoring.
//
// Subcommands: template, curate, metrics, planner-eval, retrieve, stats,
// inspect.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ksgen/ksgen.hpp"

namespace {

ksgen::PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream f(path);
  if (!f) throw ksgen::IoError("cannot open config: " + path);
  return ksgen::config_from_json(nlohmann::json::parse(f));
}

void emit(const nlohmann::json& j, const std::string& out_path, bool with_timestamp) {
  nlohmann::json doc = j;
  if (with_timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    doc["generated_at"] = buf;
  }
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw ksgen::IoError("cannot open for write: " + out_path);
    f << doc.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ksgen: instructional-video curation and evaluation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path;
  bool no_timestamp = false;
  unsigned workers = 0;
  app.add_option("--config", config_path, "pipeline config (json)");
  app.add_option("-o,--out", out_path, "write report here instead of stdout");
  app.add_flag("--no-timestamp", no_timestamp, "suppress the report timestamp");
  app.add_option("--workers", workers, "override worker count");

  // template: emit the discretized two-Gaussian flow template as a tensor
  auto* tmpl_cmd = app.add_subcommand("template", "emit the flow-magnitude template");
  std::string tmpl_out;
  ksgen::FlowTemplateParams tp;
  tmpl_cmd->add_option("output", tmpl_out, "output KSTN1 path")->required();
  tmpl_cmd->add_option("--static-mean", tp.static_mean_log2, "static peak mean (log2)");
  tmpl_cmd->add_option("--static-sigma", tp.static_sigma, "static peak sigma");
  tmpl_cmd->add_option("--static-weight", tp.static_weight, "static mixture weight");
  tmpl_cmd->add_option("--motion-mean", tp.motion_mean_log2, "motion peak mean (log2)");
  tmpl_cmd->add_option("--motion-sigma", tp.motion_sigma, "motion peak sigma");

  auto* curate_cmd = app.add_subcommand("curate", "run the data curation pipeline");
  std::string curate_in, curate_out_manifest;
  curate_cmd->add_option("manifest", curate_in, "input manifest (jsonl)")->required();
  curate_cmd->add_option("--out-manifest", curate_out_manifest, "surviving subclips (jsonl)");

  auto* metrics_cmd = app.add_subcommand("metrics", "evaluate generated vs real clips");
  std::string gen_path, real_path;
  metrics_cmd->add_option("generated", gen_path, "generated manifest (jsonl)")->required();
  metrics_cmd->add_option("real", real_path, "real manifest (jsonl)")->required();

  auto* plan_cmd = app.add_subcommand("planner-eval", "score predicted step sequences");
  std::string preds_path, gt_path;
  bool per_position = false;
  plan_cmd->add_option("predictions", preds_path, "predictions (jsonl)")->required();
  plan_cmd->add_option("ground_truth", gt_path, "ground truth (jsonl)")->required();
  plan_cmd->add_flag("--per-position", per_position, "aggregate Acc per position");

  auto* retrieve_cmd = app.add_subcommand("retrieve", "top-k skill retrieval");
  std::string db_path, query;
  size_t top_k = 3;
  retrieve_cmd->add_option("database", db_path, "skill database (jsonl)")->required();
  retrieve_cmd->add_option("query", query, "skill query text")->required();
  retrieve_cmd->add_option("-k", top_k, "number of results");

  auto* stats_cmd = app.add_subcommand("stats", "dataset statistics from a manifest");
  std::string stats_in;
  stats_cmd->add_option("manifest", stats_in, "manifest (jsonl)")->required();

  auto* inspect_cmd = app.add_subcommand("inspect", "describe a KSTN1 tensor file");
  std::string inspect_path;
  inspect_cmd->add_option("tensor", inspect_path, "KSTN1 path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*tmpl_cmd) {
      const auto hist = ksgen::gaussian_mixture_template(tp);
      ksgen::TensorFile t;
      t.shape = {ksgen::kHistBins};
      for (double b : hist.bins) t.data.push_back(static_cast<float>(b));
      ksgen::write_tensor(t, tmpl_out);
      std::cout << "wrote " << tmpl_out << "\n";
    } else if (*curate_cmd) {
      auto cfg = load_config(config_path);
      if (workers > 0) cfg.worker_count = workers;
      const auto manifests = ksgen::read_manifest(curate_in);
      const auto rep = ksgen::run_curate(cfg, manifests);
      if (!curate_out_manifest.empty()) ksgen::write_manifest(rep.output, curate_out_manifest);
      emit(ksgen::curation_report_to_json(rep, cfg), out_path, !no_timestamp);
    } else if (*metrics_cmd) {
      auto cfg = load_config(config_path);
      if (workers > 0) cfg.worker_count = workers;
      const auto rep = ksgen::run_metrics(cfg, ksgen::read_manifest(gen_path),
                                          ksgen::read_manifest(real_path));
      emit(ksgen::metrics_report_to_json(rep, cfg), out_path, !no_timestamp);
    } else if (*plan_cmd) {
      const auto rep = ksgen::run_planner_eval(
          preds_path, gt_path,
          per_position ? ksgen::AccAggregation::PerPosition
                       : ksgen::AccAggregation::PerSequence);
      emit(ksgen::planner_report_to_json(rep), out_path, !no_timestamp);
    } else if (*retrieve_cmd) {
      const auto db = ksgen::read_skill_db(db_path);
      nlohmann::json results = nlohmann::json::array();
      for (const auto& r : ksgen::retrieve_top_k(query, db, top_k)) {
        nlohmann::json o;
        o["skill_name"] = r.record.skill_name;
        o["score"] = r.score;
        results.push_back(o);
      }
      emit({{"query", query}, {"results", results}}, out_path, !no_timestamp);
    } else if (*stats_cmd) {
      const auto s = ksgen::dataset_stats(ksgen::read_manifest(stats_in));
      nlohmann::json j;
      j["skills"] = s.skills;
      j["videos"] = s.videos;
      j["clips"] = s.clips;
      j["total_duration_sec"] = s.total_duration_sec;
      j["total_duration_hours"] = s.total_duration_hours();
      emit(j, out_path, !no_timestamp);
    } else if (*inspect_cmd) {
      const auto t = ksgen::read_tensor(inspect_path);
      nlohmann::json j;
      j["dtype"] = "f32";
      j["shape"] = t.shape;
      j["numel"] = t.numel();
      double lo = 0, hi = 0, sum = 0;
      if (!t.data.empty()) {
        lo = hi = t.data[0];
        for (float v : t.data) {
          lo = std::min<double>(lo, v);
          hi = std::max<double>(hi, v);
          sum += v;
        }
      }
      j["min"] = lo;
      j["max"] = hi;
      j["mean"] = t.data.empty() ? 0.0 : sum / static_cast<double>(t.data.size());
      emit(j, out_path, !no_timestamp);
    }
  } catch (const ksgen::Error& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << R"({"error":")" << e.what() << "\"}\n";
    return 1;
  }
  return 0;
}
