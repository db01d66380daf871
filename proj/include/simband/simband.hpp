#pragma once

// simband — lag-feature ridge forecasting with distance-based prediction
// bands. Umbrella header.

#include "simband/dataset.hpp"
#include "simband/distance.hpp"
#include "simband/errors.hpp"
#include "simband/interval.hpp"
#include "simband/matrix.hpp"
#include "simband/pipeline.hpp"
#include "simband/random.hpp"
#include "simband/ridge.hpp"
#include "simband/series.hpp"
#include "simband/standardize.hpp"
#include "simband/stats.hpp"
#include "simband/synth.hpp"
