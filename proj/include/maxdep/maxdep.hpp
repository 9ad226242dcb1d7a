#pragma once

#include "maxdep/core.hpp"
#include "maxdep/estimators.hpp"
#include "maxdep/io.hpp"
#include "maxdep/models.hpp"
#include "maxdep/rng.hpp"
#include "maxdep/simulate.hpp"
