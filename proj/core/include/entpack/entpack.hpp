#pragma once

#include "entpack/actions.hpp"
#include "entpack/dp.hpp"
#include "entpack/error.hpp"
#include "entpack/experiment.hpp"
#include "entpack/heatmap.hpp"
#include "entpack/model.hpp"
#include "entpack/montecarlo.hpp"
#include "entpack/parallel.hpp"
#include "entpack/policies.hpp"
#include "entpack/policy_io.hpp"
#include "entpack/presets.hpp"
#include "entpack/statespace.hpp"
#include "entpack/transitions.hpp"
