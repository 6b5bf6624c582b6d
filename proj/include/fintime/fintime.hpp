#pragma once

// Umbrella header for the finite-/fixed-time convergence toolkit.

#include "fintime/bench.hpp"
#include "fintime/errors.hpp"
#include "fintime/estimate.hpp"
#include "fintime/laws.hpp"
#include "fintime/linalg.hpp"
#include "fintime/reference_table.hpp"
#include "fintime/report.hpp"
#include "fintime/signal.hpp"
#include "fintime/sim.hpp"
#include "fintime/simulate.hpp"
#include "fintime/svg.hpp"
#include "fintime/version.hpp"
