#pragma once

#include "ksgen/errors.hpp"
#include "ksgen/flow.hpp"
#include "ksgen/flow_field.hpp"
#include "ksgen/histogram.hpp"
#include "ksgen/image.hpp"
#include "ksgen/manifest.hpp"
#include "ksgen/metrics.hpp"
#include "ksgen/pipeline.hpp"
#include "ksgen/planner.hpp"
#include "ksgen/scene.hpp"
#include "ksgen/select.hpp"
#include "ksgen/tensor.hpp"
