#pragma once

#include "fvinf/dilaton.hpp"
#include "fvinf/dynamics.hpp"
#include "fvinf/errors.hpp"
#include "fvinf/nucleation.hpp"
#include "fvinf/ode.hpp"
#include "fvinf/potentials.hpp"
#include "fvinf/roots.hpp"
#include "fvinf/topology.hpp"
#include "fvinf/vacuum.hpp"
