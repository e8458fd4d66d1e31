#pragma once

#include "centralized.hpp"
#include "consensus.hpp"
#include "env.hpp"
#include "graph.hpp"
#include "harness.hpp"
#include "init.hpp"
#include "jacobi.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "policy.hpp"
#include "rng.hpp"
