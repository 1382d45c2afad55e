#pragma once

#include "mpcmatch/contracts.hpp"
#include "mpcmatch/edge_io.hpp"
#include "mpcmatch/experiment.hpp"
#include "mpcmatch/generators.hpp"
#include "mpcmatch/global_matcher.hpp"
#include "mpcmatch/global_mpc.hpp"
#include "mpcmatch/graph.hpp"
#include "mpcmatch/matching.hpp"
#include "mpcmatch/mpc_runtime.hpp"
#include "mpcmatch/parallel_matcher.hpp"
#include "mpcmatch/params.hpp"
#include "mpcmatch/phase_emulator.hpp"
#include "mpcmatch/rng.hpp"
#include "mpcmatch/stats.hpp"
#include "mpcmatch/verify.hpp"
