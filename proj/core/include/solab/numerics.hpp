#pragma once

#include "solab/finite_difference.hpp"
#include "solab/ivp.hpp"
#include "solab/quadrature.hpp"
#include "solab/roots.hpp"
