#pragma once

#include "uavslice/baselines.hpp"
#include "uavslice/channel.hpp"
#include "uavslice/compute_alloc.hpp"
#include "uavslice/config.hpp"
#include "uavslice/demo.hpp"
#include "uavslice/energy.hpp"
#include "uavslice/geometry.hpp"
#include "uavslice/harness.hpp"
#include "uavslice/io.hpp"
#include "uavslice/params.hpp"
#include "uavslice/power_alloc.hpp"
#include "uavslice/rng.hpp"
#include "uavslice/scenario.hpp"
#include "uavslice/sensing.hpp"
#include "uavslice/slicer.hpp"
#include "uavslice/solution.hpp"
