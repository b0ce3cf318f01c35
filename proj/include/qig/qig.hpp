#pragma once

// Umbrella header: quantum information-geometry toolkit for layered
// parameterized circuits acting on thermal states.

#include "qig/errors.hpp"
#include "qig/rng.hpp"
#include "qig/pauli.hpp"
#include "qig/linalg.hpp"
#include "qig/thermal.hpp"
#include "qig/circuit.hpp"
#include "qig/quadrature.hpp"
#include "qig/sampling.hpp"
#include "qig/info_matrix.hpp"
#include "qig/estimators.hpp"
#include "qig/optimizer.hpp"
#include "qig/serialization.hpp"
