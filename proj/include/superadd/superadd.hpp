#pragma once

#include "superadd/capacities.hpp"
#include "superadd/coherent.hpp"
#include "superadd/errors.hpp"
#include "superadd/mcsim.hpp"
#include "superadd/optimize.hpp"
#include "superadd/parallel.hpp"
#include "superadd/statespace.hpp"
#include "superadd/sweep_table.hpp"
#include "superadd/twoshot.hpp"
#include "superadd/version.hpp"
