#pragma once

// Umbrella header for the multiplex Kuramoto toolkit.

#include "kuraplex/composition.hpp"
#include "kuraplex/dynamics.hpp"
#include "kuraplex/eigen.hpp"
#include "kuraplex/graphs.hpp"
#include "kuraplex/io.hpp"
#include "kuraplex/kronecker.hpp"
#include "kuraplex/matrix.hpp"
#include "kuraplex/rng.hpp"
#include "kuraplex/scenario.hpp"
#include "kuraplex/stability.hpp"
