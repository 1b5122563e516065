#pragma once

// Frame sequences and the spatial/temporal preprocessing the metrics use.
// Frames live on disk as binary PPM (P6) files, lexicographically ordered,
// next to a frames.json giving fps and frame count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksgen/errors.hpp"

namespace ksgen {

struct Frame {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> rgb;  // row-major, 3 bytes per pixel

  uint8_t* px(int y, int x) { return rgb.data() + 3 * (static_cast<size_t>(y) * width + x); }
  const uint8_t* px(int y, int x) const {
    return rgb.data() + 3 * (static_cast<size_t>(y) * width + x);
  }

  bool operator==(const Frame&) const = default;
};

struct FrameSequence {
  std::vector<Frame> frames;
  double fps = 0.0;

  size_t size() const { return frames.size(); }
};

inline Frame make_frame(int h, int w, uint8_t r = 0, uint8_t g = 0, uint8_t b = 0) {
  Frame f;
  f.height = h;
  f.width = w;
  f.rgb.resize(static_cast<size_t>(h) * w * 3);
  for (size_t i = 0; i < f.rgb.size(); i += 3) {
    f.rgb[i] = r;
    f.rgb[i + 1] = g;
    f.rgb[i + 2] = b;
  }
  return f;
}

// --- PPM (P6) ---

inline void write_ppm(const Frame& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for write: " + path);
  out << "P6\n" << f.width << " " << f.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(f.rgb.data()),
            static_cast<std::streamsize>(f.rgb.size()));
}

inline Frame read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P6") throw FormatError("not a P6 PPM: " + path);
  int w = 0, h = 0, maxval = 0;
  in >> w >> h >> maxval;
  if (!in || w <= 0 || h <= 0 || maxval != 255)
    throw FormatError("bad PPM header: " + path);
  in.get();  // single whitespace after maxval
  Frame f;
  f.width = w;
  f.height = h;
  f.rgb.resize(static_cast<size_t>(w) * h * 3);
  in.read(reinterpret_cast<char*>(f.rgb.data()),
          static_cast<std::streamsize>(f.rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(f.rgb.size()))
    throw TruncatedError("truncated PPM payload: " + path);
  return f;
}

inline FrameSequence load_frames(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path meta_path = fs::path(dir) / "frames.json";
  std::ifstream meta(meta_path);
  if (!meta) throw IoError("missing frames.json in " + dir);
  nlohmann::json j = nlohmann::json::parse(meta);
  FrameSequence seq;
  seq.fps = j.at("fps").get<double>();
  if (!(seq.fps > 0.0)) throw SchemaError("fps");

  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".ppm") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw EmptyError("no frames in " + dir);
  for (const auto& p : files) {
    Frame f = read_ppm(p);
    if (!seq.frames.empty() &&
        (f.width != seq.frames.front().width || f.height != seq.frames.front().height))
      throw ResolutionError("mixed resolutions in " + dir);
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

inline void save_frames(const FrameSequence& seq, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json j;
  j["fps"] = seq.fps;
  j["frame_count"] = seq.frames.size();
  std::ofstream meta(fs::path(dir) / "frames.json");
  meta << j.dump() << "\n";
  char name[32];
  for (size_t i = 0; i < seq.frames.size(); ++i) {
    std::snprintf(name, sizeof(name), "%06zu.ppm", i);
    write_ppm(seq.frames[i], (fs::path(dir) / name).string());
  }
}

// --- temporal resampling ---

// Picks indices round(k * fps/target) for k = 0..n-1, clamped to the last frame.
inline FrameSequence resample_clip(const FrameSequence& seq, double target_fps = 8.0,
                                   size_t n_frames = 16) {
  FrameSequence out;
  out.fps = target_fps;
  const long long last = static_cast<long long>(seq.frames.size()) - 1;
  for (size_t k = 0; k < n_frames; ++k) {
    long long idx = std::llround(static_cast<double>(k) * seq.fps / target_fps);
    idx = std::clamp<long long>(idx, 0, last);
    out.frames.push_back(seq.frames[static_cast<size_t>(idx)]);
  }
  return out;
}

inline std::vector<size_t> resample_indices(size_t len, double fps, double target_fps,
                                            size_t n_frames) {
  std::vector<size_t> idx;
  const long long last = static_cast<long long>(len) - 1;
  for (size_t k = 0; k < n_frames; ++k) {
    long long i = std::llround(static_cast<double>(k) * fps / target_fps);
    idx.push_back(static_cast<size_t>(std::clamp<long long>(i, 0, last)));
  }
  return idx;
}

// --- spatial ops ---

// Bilinear resize so the shorter side equals s; long side rounded to the
// nearest integer, ties away from zero.
inline Frame resize_shorter_side(const Frame& f, int s) {
  if (s < 1) throw SizeError("target side must be >= 1");
  const int short_side = std::min(f.height, f.width);
  const double scale = static_cast<double>(s) / short_side;
  int oh, ow;
  if (f.height <= f.width) {
    oh = s;
    ow = static_cast<int>(std::round(f.width * scale));
  } else {
    ow = s;
    oh = static_cast<int>(std::round(f.height * scale));
  }
  if (oh == f.height && ow == f.width) return f;

  Frame out;
  out.height = oh;
  out.width = ow;
  out.rgb.resize(static_cast<size_t>(oh) * ow * 3);
  const double sy = static_cast<double>(f.height) / oh;
  const double sx = static_cast<double>(f.width) / ow;
  for (int y = 0; y < oh; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(f.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, f.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < ow; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(f.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, f.width - 1);
      const double wx = fx - x0;
      for (int c = 0; c < 3; ++c) {
        const double v = (1 - wy) * ((1 - wx) * f.px(y0, x0)[c] + wx * f.px(y0, x1)[c]) +
                         wy * ((1 - wx) * f.px(y1, x0)[c] + wx * f.px(y1, x1)[c]);
        out.px(y, x)[c] = static_cast<uint8_t>(std::clamp(std::lround(v), 0l, 255l));
      }
    }
  }
  return out;
}

// Crop offsets are floor((dim - target) / 2).
inline Frame center_crop(const Frame& f, int w, int h) {
  if (w > f.width || h > f.height) throw CropError("crop larger than frame");
  const int x0 = (f.width - w) / 2;
  const int y0 = (f.height - h) / 2;
  Frame out;
  out.width = w;
  out.height = h;
  out.rgb.resize(static_cast<size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y)
    std::copy_n(f.px(y0 + y, x0), static_cast<size_t>(w) * 3, out.px(y, 0));
  return out;
}

inline double luma(const uint8_t* rgb) {
  return 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
}

}  // namespace ksgen
