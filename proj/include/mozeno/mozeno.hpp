#pragma once

#include "config.hpp"
#include "domain.hpp"
#include "evaluate.hpp"
#include "front.hpp"
#include "genotype.hpp"
#include "hypervolume.hpp"
#include "io.hpp"
#include "moea.hpp"
#include "oracle.hpp"
#include "plan.hpp"
#include "planner.hpp"
#include "ratio.hpp"
#include "rng.hpp"
#include "runner.hpp"
#include "stats.hpp"
