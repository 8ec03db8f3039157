#pragma once

#include "distkit/arith.hpp"
#include "distkit/bench.hpp"
#include "distkit/conv.hpp"
#include "distkit/distribution.hpp"
#include "distkit/error.hpp"
#include "distkit/exact.hpp"
#include "distkit/expr.hpp"
#include "distkit/fft.hpp"
#include "distkit/metrics.hpp"
#include "distkit/options.hpp"
#include "distkit/serialize.hpp"
#include "distkit/transform.hpp"
