#pragma once

#include "mlcsim/config.hpp"
#include "mlcsim/election.hpp"
#include "mlcsim/energy.hpp"
#include "mlcsim/engine.hpp"
#include "mlcsim/experiment.hpp"
#include "mlcsim/geometry.hpp"
#include "mlcsim/harness.hpp"
#include "mlcsim/ledger.hpp"
#include "mlcsim/lru_cache.hpp"
#include "mlcsim/node.hpp"
#include "mlcsim/power.hpp"
#include "mlcsim/rng.hpp"
#include "mlcsim/stats.hpp"
#include "mlcsim/topology.hpp"
#include "mlcsim/world.hpp"
