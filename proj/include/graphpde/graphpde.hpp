#pragma once

// Spectral solvers for Laplace/Poisson, heat and wave equations on finite
// weighted graphs, plus the edge-based spectrum of a graph's geometric
// realization.

#include "graphpde/graph.hpp"
#include "graphpde/laplacian.hpp"
#include "graphpde/spectral.hpp"
#include "graphpde/dirichlet.hpp"
#include "graphpde/greens.hpp"
#include "graphpde/elliptic.hpp"
#include "graphpde/heat.hpp"
#include "graphpde/wave.hpp"
#include "graphpde/metric.hpp"
#include "graphpde/io.hpp"
#include "graphpde/verify.hpp"
