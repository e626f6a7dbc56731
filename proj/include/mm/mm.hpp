#pragma once

#include "mm/axioms.hpp"
#include "mm/enumerate.hpp"
#include "mm/io.hpp"
#include "mm/market.hpp"
#include "mm/mechanisms.hpp"
#include "mm/replication.hpp"
#include "mm/stability.hpp"
#include "mm/strategy_space.hpp"
#include "mm/sweep.hpp"
