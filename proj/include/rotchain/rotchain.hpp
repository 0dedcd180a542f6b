#pragma once

// Umbrella header: the whole rotating-chain toolkit.

#include "rotchain/types.hpp"
#include "rotchain/dimensionless.hpp"
#include "rotchain/modes.hpp"
#include "rotchain/shape.hpp"
#include "rotchain/shoot.hpp"
#include "rotchain/lumped.hpp"
#include "rotchain/jacobian.hpp"
#include "rotchain/equilibrium.hpp"
#include "rotchain/stability.hpp"
#include "rotchain/trajectory.hpp"
#include "rotchain/planner.hpp"
#include "rotchain/simulator.hpp"
#include "rotchain/io.hpp"
