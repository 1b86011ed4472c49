#pragma once

// Umbrella header: exact analysis, closed forms, simulation, and mean-field
// models for probabilistic zero forcing with reversion.

#include "rpzf/analysis.hpp"
#include "rpzf/chain.hpp"
#include "rpzf/closed_form.hpp"
#include "rpzf/errors.hpp"
#include "rpzf/graph.hpp"
#include "rpzf/linalg.hpp"
#include "rpzf/mean_field.hpp"
#include "rpzf/numeric.hpp"
#include "rpzf/sim.hpp"
#include "rpzf/state_space.hpp"
