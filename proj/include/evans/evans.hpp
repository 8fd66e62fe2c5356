#pragma once

#include "evans/analysis.hpp"
#include "evans/continuation.hpp"
#include "evans/errors.hpp"
#include "evans/linalg.hpp"
#include "evans/ode.hpp"
#include "evans/parallel.hpp"
#include "evans/shooting.hpp"
#include "evans/systems.hpp"
#include "evans/wedge.hpp"
