#pragma once

// Umbrella header: composite z-rotation pulses under off-resonance error,
// their error-trajectory geometry, and second-order promotion.

#include "dcgate/analysis.hpp"
#include "dcgate/geometry.hpp"
#include "dcgate/perturbation.hpp"
#include "dcgate/pulse.hpp"
#include "dcgate/sequence_io.hpp"
#include "dcgate/sequences.hpp"
#include "dcgate/unitary.hpp"
