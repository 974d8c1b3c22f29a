#pragma once

#include "fbreg/barrier.hpp"
#include "fbreg/counterexample.hpp"
#include "fbreg/geometry.hpp"
#include "fbreg/grid.hpp"
#include "fbreg/io.hpp"
#include "fbreg/monotonicity.hpp"
#include "fbreg/operators.hpp"
#include "fbreg/projection.hpp"
#include "fbreg/props.hpp"
#include "fbreg/rational.hpp"
#include "fbreg/solver.hpp"
#include "fbreg/symmat.hpp"
