#pragma once

// Umbrella header: submodular maximization over exact oracles and anytime
// confidence bounds, conditional-entropy bound constructions, and the
// synthetic tracking benchmark.

#include "submax/belief.hpp"
#include "submax/entropy_bounds.hpp"
#include "submax/entropy_provider.hpp"
#include "submax/ground_set.hpp"
#include "submax/hoeffding.hpp"
#include "submax/instances.hpp"
#include "submax/maximizers.hpp"
#include "submax/noisy_bounds.hpp"
#include "submax/oracle.hpp"
#include "submax/pac.hpp"
#include "submax/random.hpp"
#include "submax/sampled_entropy.hpp"
#include "submax/sensor_model.hpp"
#include "submax/set_functions.hpp"
#include "submax/tracking.hpp"
#include "submax/verification.hpp"
