#pragma once

#include "memcost/config.hpp"
#include "memcost/cost.hpp"
#include "memcost/error.hpp"
#include "memcost/model.hpp"
#include "memcost/random.hpp"
#include "memcost/retention_exact.hpp"
#include "memcost/retention_mc.hpp"
#include "memcost/sweep.hpp"
#include "memcost/table_io.hpp"
#include "memcost/threshold.hpp"
#include "memcost/version.hpp"
