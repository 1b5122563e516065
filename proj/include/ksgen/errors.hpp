#pragma once

#include <stdexcept>
#include <string>

namespace ksgen {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define KSGEN_DEFINE_ERROR(Name)                                   \
  struct Name : Error {                                            \
    explicit Name(const std::string& msg) : Error(msg) {}          \
  }

KSGEN_DEFINE_ERROR(FormatError);
KSGEN_DEFINE_ERROR(TruncatedError);
KSGEN_DEFINE_ERROR(ShapeError);
KSGEN_DEFINE_ERROR(SchemaError);
KSGEN_DEFINE_ERROR(ResolutionError);
KSGEN_DEFINE_ERROR(EmptyError);
KSGEN_DEFINE_ERROR(CropError);
KSGEN_DEFINE_ERROR(NormalizationError);
KSGEN_DEFINE_ERROR(SizeError);
KSGEN_DEFINE_ERROR(SidecarError);
KSGEN_DEFINE_ERROR(RangeError);
KSGEN_DEFINE_ERROR(WindowError);
KSGEN_DEFINE_ERROR(NormError);
KSGEN_DEFINE_ERROR(SampleError);
KSGEN_DEFINE_ERROR(SymmetryError);
KSGEN_DEFINE_ERROR(NotPSDError);
KSGEN_DEFINE_ERROR(PairingError);
KSGEN_DEFINE_ERROR(QueryError);
KSGEN_DEFINE_ERROR(MissingInputError);
KSGEN_DEFINE_ERROR(IoError);

#undef KSGEN_DEFINE_ERROR

}  // namespace ksgen
