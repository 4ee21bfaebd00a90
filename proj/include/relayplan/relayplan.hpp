#pragma once

// Umbrella header: the whole antenna-placement toolkit.

#include "relayplan/demand.hpp"
#include "relayplan/formulation.hpp"
#include "relayplan/netgraph.hpp"
#include "relayplan/plan.hpp"
#include "relayplan/radio.hpp"
#include "relayplan/rng.hpp"
#include "relayplan/scenario.hpp"
#include "relayplan/simplex.hpp"
#include "relayplan/solver_exact.hpp"
#include "relayplan/solver_greedy.hpp"
#include "relayplan/sweep.hpp"
#include "relayplan/validator.hpp"
#include "relayplan/variant.hpp"
