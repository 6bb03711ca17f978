#pragma once

#include "evt/dist.hpp"
#include "evt/domain.hpp"
#include "evt/error.hpp"
#include "evt/gaussian.hpp"
#include "evt/gev.hpp"
#include "evt/limits.hpp"
#include "evt/norming.hpp"
#include "evt/quadrature.hpp"
#include "evt/regvar.hpp"
#include "evt/rng.hpp"
#include "evt/simlab.hpp"
