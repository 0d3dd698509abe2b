#pragma once

#include "stirap/config.hpp"
#include "stirap/dressed.hpp"
#include "stirap/errors.hpp"
#include "stirap/hamiltonian.hpp"
#include "stirap/integrator.hpp"
#include "stirap/io.hpp"
#include "stirap/linalg.hpp"
#include "stirap/presets.hpp"
#include "stirap/propagator.hpp"
#include "stirap/pulses.hpp"
#include "stirap/scenario.hpp"
#include "stirap/sweep.hpp"
#include "stirap/version.hpp"
