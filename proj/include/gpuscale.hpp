// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gpuscale/cluster.hpp"
#include "gpuscale/config.hpp"
#include "gpuscale/curve_io.hpp"
#include "gpuscale/error.hpp"
#include "gpuscale/plot.hpp"
#include "gpuscale/presets.hpp"
#include "gpuscale/run.hpp"
#include "gpuscale/scaling.hpp"
#include "gpuscale/simulator.hpp"
#include "gpuscale/workload.hpp"
