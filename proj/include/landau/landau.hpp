#pragma once

// Umbrella header.
#include "landau/boundary.hpp"
#include "landau/capacity.hpp"
#include "landau/core.hpp"
#include "landau/curve.hpp"
#include "landau/error.hpp"
#include "landau/green.hpp"
#include "landau/polynomial_gaussian.hpp"
#include "landau/precision.hpp"
#include "landau/quadrature.hpp"
#include "landau/toeplitz.hpp"
