#pragma once

#include "rswp/boundaries.hpp"
#include "rswp/checks.hpp"
#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/excitation.hpp"
#include "rswp/fdtd2d.hpp"
#include "rswp/fdtd3d.hpp"
#include "rswp/grid.hpp"
#include "rswp/harness.hpp"
#include "rswp/instrumentation.hpp"
#include "rswp/oracles.hpp"
#include "rswp/parallel.hpp"
#include "rswp/presets.hpp"
#include "rswp/run.hpp"
#include "rswp/scene.hpp"
#include "rswp/scene_io.hpp"
#include "rswp/vec.hpp"
