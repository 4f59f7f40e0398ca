#pragma once

#include "crofton/alphahull.hpp"
#include "crofton/bench.hpp"
#include "crofton/crofton.hpp"
#include "crofton/delaunay.hpp"
#include "crofton/dw.hpp"
#include "crofton/error.hpp"
#include "crofton/estimate.hpp"
#include "crofton/geom.hpp"
#include "crofton/grid.hpp"
#include "crofton/io.hpp"
#include "crofton/point_cloud.hpp"
#include "crofton/rbm.hpp"
#include "crofton/rng.hpp"
#include "crofton/shapes.hpp"
