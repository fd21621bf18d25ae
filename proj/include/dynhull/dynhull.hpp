#pragma once

#include "dynhull/chain.hpp"
#include "dynhull/geometry.hpp"
#include "dynhull/hull_tree.hpp"
#include "dynhull/oracle.hpp"
#include "dynhull/static_hull.hpp"
#include "dynhull/workload.hpp"
