#pragma once

// Umbrella header: the full moment-relaxation toolkit.

#include "sosgap/subsets.hpp"
#include "sosgap/polynomial.hpp"
#include "sosgap/linalg.hpp"
#include "sosgap/moments.hpp"
#include "sosgap/local.hpp"
#include "sosgap/checks.hpp"
#include "sosgap/sdp.hpp"
#include "sosgap/knapsack.hpp"
#include "sosgap/gap.hpp"
#include "sosgap/generate.hpp"
#include "sosgap/io.hpp"
#include "sosgap/batch.hpp"
#include "sosgap/cli.hpp"
