#pragma once

#include "beadtsp/bead.hpp"
#include "beadtsp/bounds.hpp"
#include "beadtsp/dubins.hpp"
#include "beadtsp/experiments.hpp"
#include "beadtsp/geometry.hpp"
#include "beadtsp/io.hpp"
#include "beadtsp/planner.hpp"
#include "beadtsp/svg.hpp"
#include "beadtsp/tiling.hpp"
