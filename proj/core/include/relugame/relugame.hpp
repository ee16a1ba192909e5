#pragma once

#include "relugame/bounds.hpp"
#include "relugame/certify.hpp"
#include "relugame/entropic.hpp"
#include "relugame/game.hpp"
#include "relugame/network.hpp"
#include "relugame/network_io.hpp"
#include "relugame/paths.hpp"
#include "relugame/rng.hpp"
#include "relugame/value.hpp"
