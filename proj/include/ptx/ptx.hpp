#pragma once

#include "ptx/analysis.hpp"
#include "ptx/config.hpp"
#include "ptx/ctrnn.hpp"
#include "ptx/error.hpp"
#include "ptx/evolution.hpp"
#include "ptx/genome.hpp"
#include "ptx/interference.hpp"
#include "ptx/parallel.hpp"
#include "ptx/population_io.hpp"
#include "ptx/table.hpp"
#include "ptx/trial.hpp"
#include "ptx/world.hpp"
