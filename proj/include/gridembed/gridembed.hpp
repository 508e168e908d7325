#pragma once

#include "gridembed/axis_grid.hpp"
#include "gridembed/bench.hpp"
#include "gridembed/channel.hpp"
#include "gridembed/coloring.hpp"
#include "gridembed/core.hpp"
#include "gridembed/decompose.hpp"
#include "gridembed/embedding.hpp"
#include "gridembed/euler.hpp"
#include "gridembed/generators.hpp"
#include "gridembed/graph.hpp"
#include "gridembed/grid.hpp"
#include "gridembed/oracles.hpp"
#include "gridembed/route.hpp"
#include "gridembed/routing.hpp"
#include "gridembed/sbe.hpp"
#include "gridembed/verify.hpp"
