#pragma once

// KSTN1 binary tensor format.
//
// Layout (little endian):
//   magic   "KSTN1"        5 bytes
//   dtype   u8             0 = f32
//   ndim    u32
//   dims    ndim x u64
//   payload prod(dims) f32 scalars, row-major

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "ksgen/errors.hpp"

namespace ksgen {

enum class Dtype : uint8_t { F32 = 0 };

struct TensorFile {
  Dtype dtype = Dtype::F32;
  std::vector<uint64_t> shape;
  std::vector<float> data;

  uint64_t numel() const {
    uint64_t n = 1;
    for (uint64_t d : shape) n *= d;
    return n;
  }

  bool operator==(const TensorFile& o) const {
    return dtype == o.dtype && shape == o.shape && data == o.data;
  }
};

inline constexpr char kTensorMagic[5] = {'K', 'S', 'T', 'N', '1'};

namespace detail {

template <typename T>
void put_le(std::string& out, T v) {
  for (size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(const char* p) {
  uint64_t v = 0;
  for (size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace detail

inline void validate_shape(const std::vector<uint64_t>& shape) {
  if (shape.empty()) throw ShapeError("tensor shape must have ndim >= 1");
  for (uint64_t d : shape)
    if (d == 0) throw ShapeError("tensor shape entries must be > 0");
}

inline std::string serialize_tensor(const TensorFile& t) {
  validate_shape(t.shape);
  if (t.data.size() != t.numel())
    throw ShapeError("payload length does not match shape product");
  std::string out;
  out.append(kTensorMagic, 5);
  out.push_back(static_cast<char>(t.dtype));
  detail::put_le<uint32_t>(out, static_cast<uint32_t>(t.shape.size()));
  for (uint64_t d : t.shape) detail::put_le<uint64_t>(out, d);
  for (float f : t.data) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    detail::put_le<uint32_t>(out, bits);
  }
  return out;
}

inline TensorFile deserialize_tensor(const std::string& bytes) {
  if (bytes.size() < 5 || std::memcmp(bytes.data(), kTensorMagic, 5) != 0)
    throw FormatError("bad magic, expected KSTN1");
  if (bytes.size() < 10) throw TruncatedError("truncated tensor header");
  TensorFile t;
  uint8_t dcode = static_cast<uint8_t>(bytes[5]);
  if (dcode != 0) throw FormatError("unknown dtype code " + std::to_string(dcode));
  t.dtype = Dtype::F32;
  uint32_t ndim = detail::get_le<uint32_t>(bytes.data() + 6);
  if (ndim == 0) throw ShapeError("tensor ndim must be >= 1");
  size_t off = 10;
  if (bytes.size() < off + 8ull * ndim) throw TruncatedError("truncated dims");
  t.shape.resize(ndim);
  for (uint32_t i = 0; i < ndim; ++i, off += 8) {
    t.shape[i] = detail::get_le<uint64_t>(bytes.data() + off);
    if (t.shape[i] == 0) throw ShapeError("tensor shape entries must be > 0");
  }
  uint64_t n = t.numel();
  if (bytes.size() < off + 4 * n) throw TruncatedError("truncated payload");
  t.data.resize(n);
  for (uint64_t i = 0; i < n; ++i, off += 4) {
    uint32_t bits = detail::get_le<uint32_t>(bytes.data() + off);
    std::memcpy(&t.data[i], &bits, 4);
  }
  return t;
}

inline void write_tensor(const TensorFile& t, const std::string& path) {
  std::string bytes = serialize_tensor(t);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for write: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path);
}

inline TensorFile read_tensor(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  return deserialize_tensor(bytes);
}

// Sidecar roles form a closed set so pipelines fail fast on typos.
enum class SidecarRole {
  FrameEmbedding,
  TextEmbedding,
  ActionLogits,
  VideoFeature,
  Flow,
  TextCoverage,
};

inline const char* to_string(SidecarRole r) {
  switch (r) {
    case SidecarRole::FrameEmbedding: return "frame_embedding";
    case SidecarRole::TextEmbedding: return "text_embedding";
    case SidecarRole::ActionLogits: return "action_logits";
    case SidecarRole::VideoFeature: return "video_feature";
    case SidecarRole::Flow: return "flow";
    case SidecarRole::TextCoverage: return "text_coverage";
  }
  return "?";
}

inline SidecarRole sidecar_role_from_string(const std::string& s) {
  if (s == "frame_embedding") return SidecarRole::FrameEmbedding;
  if (s == "text_embedding") return SidecarRole::TextEmbedding;
  if (s == "action_logits") return SidecarRole::ActionLogits;
  if (s == "video_feature") return SidecarRole::VideoFeature;
  if (s == "flow") return SidecarRole::Flow;
  if (s == "text_coverage") return SidecarRole::TextCoverage;
  throw SidecarError("unknown sidecar role: " + s);
}

struct FeatureSidecar {
  SidecarRole role;
  TensorFile tensor;
};

inline constexpr uint64_t kActionLogitDim = 174;

// Role-specific shape rules.
inline void validate_sidecar(const FeatureSidecar& s) {
  const auto& sh = s.tensor.shape;
  switch (s.role) {
    case SidecarRole::ActionLogits:
      if (sh.empty() || sh.back() != kActionLogitDim)
        throw SidecarError("action_logits last dim must be 174");
      break;
    case SidecarRole::Flow:
      if (sh.size() != 4 || sh[3] != 2)
        throw SidecarError("flow tensor must have shape (T-1, H, W, 2)");
      break;
    case SidecarRole::TextCoverage: {
      if (sh.size() != 1)
        throw SidecarError("text_coverage tensor must have shape (T,)");
      for (float v : s.tensor.data)
        if (v < 0.0f || v > 1.0f)
          throw SidecarError("text_coverage values must lie in [0,1]");
      break;
    }
    case SidecarRole::FrameEmbedding:
      if (sh.size() != 2)
        throw SidecarError("frame_embedding tensor must have shape (T, D)");
      break;
    case SidecarRole::TextEmbedding:
      if (sh.size() != 1)
        throw SidecarError("text_embedding tensor must have shape (D,)");
      break;
    case SidecarRole::VideoFeature:
      if (sh.size() != 1)
        throw SidecarError("video_feature tensor must have shape (D,)");
      break;
  }
}

inline FeatureSidecar read_sidecar(SidecarRole role, const std::string& path) {
  FeatureSidecar s{role, read_tensor(path)};
  validate_sidecar(s);
  return s;
}

}  // namespace ksgen
